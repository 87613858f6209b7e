#include "rolechron/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace rolechron {

namespace pt = boost::property_tree;

Manifest read_manifest(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw std::runtime_error("manifest not found: " + path.string());
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::runtime_error(fmt::format("manifest {}: {}", path.string(), e.what()));
  }

  Manifest manifest;
  if (auto subs = tree.get_child_optional("subreddits"))
    for (const auto& [name, value] : *subs) manifest.subreddits[name] = parse_class_label(value.data());

  if (auto wins = tree.get_child_optional("windows")) {
    for (const auto& [key, value] : *wins) {
      if (key.size() < 2 || (key[0] != 'T' && key[0] != 't'))
        throw std::runtime_error("manifest: window keys must look like T1, T2, ...; got " + key);
      WindowSpec w;
      w.index = std::stoi(key.substr(1));
      std::istringstream months(value.data());
      for (std::string m; months >> m;) w.months.push_back(m);
      if (w.months.empty()) throw std::runtime_error("manifest: window " + key + " lists no months");
      manifest.windows.push_back(std::move(w));
    }
  }
  std::sort(manifest.windows.begin(), manifest.windows.end(),
            [](const WindowSpec& a, const WindowSpec& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < manifest.windows.size(); ++i)
    if (manifest.windows[i].index == manifest.windows[i - 1].index)
      throw std::runtime_error(fmt::format("manifest: window T{} defined twice", manifest.windows[i].index));
  return manifest;
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "[subreddits]\n";
  for (const auto& [name, label] : manifest.subreddits) out << name << " = " << to_string(label) << '\n';
  out << "\n[windows]\n";
  for (const auto& w : manifest.windows) {
    out << 'T' << w.index << " =";
    for (const auto& m : w.months) out << ' ' << m;
    out << '\n';
  }
}

std::filesystem::path month_path(const std::filesystem::path& root, const std::string& subreddit,
                                 const std::string& month) {
  return root / subreddit / (month + ".edges");
}

TemporalSnapshot load_month(const std::filesystem::path& root, const std::string& subreddit,
                            const std::string& month, ClassLabel label) {
  const auto path = month_path(root, subreddit, month);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing month file " + path.string());
  try {
    return parse_edge_list(in, subreddit, 1, {label, {month}});
  } catch (const ParseError& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

std::vector<TemporalSnapshot> load_windows(const std::filesystem::path& root, const std::string& subreddit,
                                           ClassLabel label, const std::vector<WindowSpec>& windows) {
  std::vector<TemporalSnapshot> out;
  out.reserve(windows.size());
  for (const auto& w : windows) {
    std::vector<TemporalSnapshot> months;
    for (const auto& m : w.months) months.push_back(load_month(root, subreddit, m, label));
    out.push_back(merge_months(months, w.index));
  }
  return out;
}

}  // namespace rolechron
