#include "rolechron/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace rolechron {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(fmt::format("line {}: {}", line, what)), line_(line) {}

void InteractionGraph::add_node(const UserId& id) {
  if (id.empty()) throw std::invalid_argument("empty user id");
  nodes_.insert(id);
}

void InteractionGraph::add_edge(const UserId& source, const UserId& target, double weight) {
  if (source.empty() || target.empty()) throw std::invalid_argument("empty user id");
  if (!(weight > 0.0) || !std::isfinite(weight))
    throw std::invalid_argument(fmt::format("edge weight must be positive, got {}", weight));
  nodes_.insert(source);
  nodes_.insert(target);
  auto [it, inserted] = edges_.try_emplace({source, target}, 0.0);
  it->second += weight;
  if (inserted && source == target) ++self_loops_;
}

double InteractionGraph::weight(const UserId& source, const UserId& target) const {
  auto it = edges_.find({source, target});
  return it == edges_.end() ? 0.0 : it->second;
}

std::vector<Edge> InteractionGraph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [key, w] : edges_) out.push_back({key.first, key.second, w});
  return out;
}

std::string to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::loyal: return "loyal";
    case ClassLabel::vagrant: return "vagrant";
    case ClassLabel::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

ClassLabel parse_class_label(const std::string& text) {
  if (text == "loyal") return ClassLabel::loyal;
  if (text == "vagrant") return ClassLabel::vagrant;
  if (text == "unlabeled" || text.empty()) return ClassLabel::unlabeled;
  throw std::invalid_argument("unknown class label '" + text + "'");
}

std::string TemporalSnapshot::id() const { return fmt::format("{}/T{}", subreddit, window_index); }

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

}  // namespace

TemporalSnapshot parse_edge_list(std::istream& in, const std::string& subreddit, int window_index,
                                 const SnapshotMetadata& metadata) {
  TemporalSnapshot snap;
  snap.subreddit = subreddit;
  snap.class_label = metadata.class_label;
  snap.window_index = window_index;
  snap.months_covered = metadata.months;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_fields(line);
    if (fields.size() < 2 || fields.size() > 3)
      throw ParseError(line_no, fmt::format("expected 2 or 3 fields, got {}", fields.size()));
    if (fields[0].empty() || fields[1].empty()) throw ParseError(line_no, "empty user id");
    double weight = 1.0;
    if (fields.size() == 3) {
      const auto w = fields[2];
      auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), weight);
      if (ec != std::errc{} || ptr != w.data() + w.size() || !std::isfinite(weight))
        throw ParseError(line_no, fmt::format("non-numeric weight '{}'", w));
      if (weight <= 0.0) throw ParseError(line_no, fmt::format("weight must be positive, got {}", w));
    }
    snap.graph.add_edge(std::string(fields[0]), std::string(fields[1]), weight);
  }
  snap.empty_warning = snap.graph.empty();
  return snap;
}

void write_edge_list(std::ostream& out, const InteractionGraph& graph) {
  for (const auto& [key, w] : graph.edges()) out << fmt::format("{},{},{}\n", key.first, key.second, w);
}

TemporalSnapshot merge_months(std::span<const TemporalSnapshot> months, int window_index) {
  if (months.empty()) throw std::invalid_argument("merge_months: no month snapshots");
  TemporalSnapshot merged;
  merged.subreddit = months.front().subreddit;
  merged.class_label = months.front().class_label;
  merged.window_index = window_index;

  std::set<std::string> seen;
  for (const auto& month : months) {
    if (month.subreddit != merged.subreddit)
      throw std::invalid_argument(
          fmt::format("merge_months: subreddit mismatch '{}' vs '{}'", month.subreddit, merged.subreddit));
    for (const auto& m : month.months_covered)
      if (!seen.insert(m).second) throw std::invalid_argument("merge_months: month " + m + " covered twice");
    for (const auto& id : month.graph.nodes()) merged.graph.add_node(id);
    for (const auto& [key, w] : month.graph.edges()) merged.graph.add_edge(key.first, key.second, w);
  }
  merged.months_covered.assign(seen.begin(), seen.end());
  merged.empty_warning = merged.graph.empty();
  return merged;
}

ActivityMeasure parse_activity_measure(const std::string& text) {
  if (text == "strength") return ActivityMeasure::strength;
  if (text == "degree") return ActivityMeasure::degree;
  throw std::invalid_argument("unknown activity measure '" + text + "'");
}

std::map<UserId, double> activity_scores(const InteractionGraph& graph, const ActivityOptions& options) {
  std::map<UserId, double> score;
  for (const auto& id : graph.nodes()) score[id] = 0.0;
  for (const auto& [key, w] : graph.edges()) {
    const auto& [s, t] = key;
    if (s == t && !options.include_self_loops) continue;
    const double inc = options.measure == ActivityMeasure::strength ? w : 1.0;
    score[s] += inc;
    score[t] += inc;
  }
  return score;
}

TopKResult top_k_users(const TemporalSnapshot& snapshot, std::size_t k, const ActivityOptions& options) {
  if (k == 0) throw std::invalid_argument("top_k_users: k must be >= 1");
  const auto scores = activity_scores(snapshot.graph, options);
  std::vector<std::pair<UserId, double>> ranked(scores.begin(), scores.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  TopKResult result;
  result.shortfall = ranked.size() < k;
  const auto n = std::min(k, ranked.size());
  result.users.reserve(n);
  for (std::size_t i = 0; i < n; ++i) result.users.push_back(ranked[i].first);
  return result;
}

AnchorSet anchor_overlap(std::span<const std::vector<UserId>> sets) {
  if (sets.size() < 2) throw std::invalid_argument("anchor_overlap: need at least 2 sets");
  std::vector<UserId> acc(sets.front().begin(), sets.front().end());
  std::sort(acc.begin(), acc.end());
  acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
  for (const auto& s : sets.subspan(1)) {
    std::vector<UserId> other(s.begin(), s.end());
    std::sort(other.begin(), other.end());
    std::vector<UserId> next;
    std::set_intersection(acc.begin(), acc.end(), other.begin(), other.end(), std::back_inserter(next));
    acc = std::move(next);
  }
  return {acc, acc.empty()};
}

SummaryCounts DatasetSummary::at(ClassLabel label, int window) const {
  auto it = cells.find({label, window});
  return it == cells.end() ? SummaryCounts{} : it->second;
}

DatasetSummary summarize(std::span<const TemporalSnapshot> snapshots) {
  DatasetSummary summary;
  for (const auto& snap : snapshots) {
    auto& cell = summary.cells[{snap.class_label, snap.window_index}];
    ++cell.subreddits;
    cell.nodes += snap.graph.node_count();
    cell.edges += snap.graph.edge_count();
  }
  return summary;
}

void write_summary_csv(std::ostream& out, const DatasetSummary& summary) {
  out << "class,window,subreddits,nodes,edges\n";
  for (const auto& [key, c] : summary.cells)
    out << fmt::format("{},T{},{},{},{}\n", to_string(key.first), key.second, c.subreddits, c.nodes, c.edges);
}

}  // namespace rolechron
