#include "rolechron/config.hpp"

#include <set>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace rolechron {

namespace pt = boost::property_tree;

unsigned PipelineConfig::effective_threads() const {
  if (deterministic) return 1;
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

const std::map<std::string, std::set<std::string>> kKnownKeys = {
    {"data", {"root", "manifest"}},
    {"selection", {"k_top", "activity", "include_self_loops"}},
    {"embedding",
     {"dim", "walks", "walk_length", "stay_prob", "kmax", "kmax_limit", "window", "negatives", "epochs",
      "learning_rate", "pair_mode", "top_m", "exact_pair_limit"}},
    {"alignment", {"center", "scale", "duplicate_eval"}},
    {"analysis", {"k_min", "k_max", "n_init"}},
    {"run", {"seed", "deterministic", "threads", "output"}},
};

template <typename T>
void read(const pt::ptree& tree, const char* key, T& value) {
  if (auto v = tree.get_optional<T>(key)) value = *v;
}

}  // namespace

PipelineConfig load_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw std::runtime_error("config not found: " + path.string());
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw std::runtime_error(fmt::format("config {}: {}", path.string(), e.what()));
  }
  for (const auto& [section, body] : tree) {
    auto known = kKnownKeys.find(section);
    if (known == kKnownKeys.end()) throw std::runtime_error("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body)
      if (!known->second.contains(key)) throw std::runtime_error(fmt::format("config: unknown key {}.{}", section, key));
  }

  PipelineConfig c;
  std::string root = c.data_root.string(), manifest = c.manifest.string(), output = c.output.string();
  read(tree, "data.root", root);
  read(tree, "data.manifest", manifest);
  read(tree, "run.output", output);
  const auto base = path.parent_path();
  c.data_root = base / root;
  c.manifest = base / manifest;
  c.output = base / output;

  read(tree, "selection.k_top", c.k_top);
  if (auto a = tree.get_optional<std::string>("selection.activity")) c.activity.measure = parse_activity_measure(*a);
  read(tree, "selection.include_self_loops", c.activity.include_self_loops);

  auto& e = c.embedding;
  read(tree, "embedding.dim", e.dim);
  read(tree, "embedding.walks", e.walks_per_node);
  read(tree, "embedding.walk_length", e.walk_length);
  read(tree, "embedding.stay_prob", e.stay_probability);
  read(tree, "embedding.kmax", e.k_max);
  read(tree, "embedding.kmax_limit", e.k_max_limit);
  read(tree, "embedding.window", e.window);
  read(tree, "embedding.negatives", e.negatives);
  read(tree, "embedding.epochs", e.epochs);
  read(tree, "embedding.learning_rate", e.learning_rate);
  if (auto m = tree.get_optional<std::string>("embedding.pair_mode")) e.pair_mode = parse_pair_mode(*m);
  read(tree, "embedding.top_m", e.top_m);
  read(tree, "embedding.exact_pair_limit", e.exact_pair_limit);
  e.include_self_loops = c.activity.include_self_loops;

  read(tree, "alignment.center", c.alignment.center);
  read(tree, "alignment.scale", c.alignment.scale);
  read(tree, "alignment.duplicate_eval", c.duplicate_eval);
  read(tree, "analysis.k_min", c.k_min);
  read(tree, "analysis.k_max", c.k_max);
  read(tree, "analysis.n_init", c.n_init);
  read(tree, "run.seed", c.seed);
  read(tree, "run.deterministic", c.deterministic);
  read(tree, "run.threads", c.threads);
  validate(c);
  return c;
}

void validate(const PipelineConfig& c) {
  if (c.k_top < 2) throw std::invalid_argument("config: k_top must be >= 2");
  if (c.embedding.dim < 2) throw std::invalid_argument("config: embedding.dim must be >= 2");
  if (c.embedding.walks_per_node == 0 || c.embedding.walk_length == 0)
    throw std::invalid_argument("config: walks and walk_length must be positive");
  if (!(c.embedding.stay_probability > 0.0 && c.embedding.stay_probability <= 1.0))
    throw std::invalid_argument("config: stay_prob must be in (0, 1]");
  if (c.embedding.window == 0 || c.embedding.epochs == 0)
    throw std::invalid_argument("config: window and epochs must be positive");
  if (c.k_min < 2 || c.k_max < c.k_min) throw std::invalid_argument("config: need 2 <= k_min <= k_max");
  if (c.n_init == 0) throw std::invalid_argument("config: n_init must be positive");
}

std::vector<std::pair<std::string, std::string>> describe(const PipelineConfig& c) {
  std::vector<std::pair<std::string, std::string>> out = {
      {"data.root", c.data_root.string()},
      {"data.manifest", c.manifest.string()},
      {"selection.k_top", std::to_string(c.k_top)},
      {"selection.activity", c.activity.measure == ActivityMeasure::strength ? "strength" : "degree"},
      {"selection.include_self_loops", c.activity.include_self_loops ? "true" : "false"},
  };
  for (const auto& [k, v] : describe(c.embedding)) out.emplace_back("embedding." + k, v);
  out.emplace_back("alignment.center", c.alignment.center ? "true" : "false");
  out.emplace_back("alignment.scale", c.alignment.scale ? "true" : "false");
  out.emplace_back("alignment.duplicate_eval", c.duplicate_eval ? "true" : "false");
  out.emplace_back("analysis.k_min", std::to_string(c.k_min));
  out.emplace_back("analysis.k_max", std::to_string(c.k_max));
  out.emplace_back("analysis.n_init", std::to_string(c.n_init));
  out.emplace_back("run.seed", std::to_string(c.seed));
  out.emplace_back("run.deterministic", c.deterministic ? "true" : "false");
  out.emplace_back("run.threads", std::to_string(c.effective_threads()));
  out.emplace_back("run.output", c.output.string());
  return out;
}

}  // namespace rolechron
