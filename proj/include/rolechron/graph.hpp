#ifndef ROLECHRON_GRAPH_HPP
#define ROLECHRON_GRAPH_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rolechron {

using UserId = std::string;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  UserId source;
  UserId target;
  double weight = 1.0;
};

/// Directed weighted interaction graph. Parallel edges are merged by summing
/// their weights; self-loops are kept.
class InteractionGraph {
 public:
  void add_node(const UserId& id);
  /// Adds weight to the ordered pair (source, target). Throws on weight <= 0
  /// or empty ids.
  void add_edge(const UserId& source, const UserId& target, double weight = 1.0);

  const std::set<UserId>& nodes() const { return nodes_; }
  const std::map<std::pair<UserId, UserId>, double>& edges() const { return edges_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return nodes_.empty(); }
  bool contains(const UserId& id) const { return nodes_.contains(id); }
  double weight(const UserId& source, const UserId& target) const;
  bool has_self_loops() const { return self_loops_ > 0; }
  std::size_t self_loop_count() const { return self_loops_; }

  std::vector<Edge> edge_list() const;

  friend bool operator==(const InteractionGraph&, const InteractionGraph&) = default;

 private:
  std::set<UserId> nodes_;
  std::map<std::pair<UserId, UserId>, double> edges_;
  std::size_t self_loops_ = 0;
};

enum class ClassLabel { loyal, vagrant, unlabeled };

std::string to_string(ClassLabel label);
ClassLabel parse_class_label(const std::string& text);

/// Metadata that travels with a snapshot; never inferred from the graph.
struct SnapshotMetadata {
  ClassLabel class_label = ClassLabel::unlabeled;
  std::vector<std::string> months;
};

struct TemporalSnapshot {
  std::string subreddit;
  ClassLabel class_label = ClassLabel::unlabeled;
  int window_index = 1;
  std::vector<std::string> months_covered;
  InteractionGraph graph;
  bool empty_warning = false;

  std::string id() const;
};

/// Reads `source<sep>target[<sep>weight]` lines; sep is a tab or a comma,
/// detected per line. Blank lines and lines starting with '#' are skipped.
TemporalSnapshot parse_edge_list(std::istream& in, const std::string& subreddit, int window_index,
                                 const SnapshotMetadata& metadata);

/// Writes the graph in the comma-separated format accepted by parse_edge_list.
/// Weights round-trip exactly.
void write_edge_list(std::ostream& out, const InteractionGraph& graph);

/// Additive union of month snapshots of one subreddit into a window.
TemporalSnapshot merge_months(std::span<const TemporalSnapshot> months, int window_index);

enum class ActivityMeasure { strength, degree };

ActivityMeasure parse_activity_measure(const std::string& text);

struct ActivityOptions {
  ActivityMeasure measure = ActivityMeasure::strength;
  bool include_self_loops = false;
};

/// Per-node activity score (weighted or unweighted in+out degree).
std::map<UserId, double> activity_scores(const InteractionGraph& graph, const ActivityOptions& options = {});

struct TopKResult {
  std::vector<UserId> users;  // descending activity, ties lexicographic
  bool shortfall = false;
};

TopKResult top_k_users(const TemporalSnapshot& snapshot, std::size_t k, const ActivityOptions& options = {});

struct AnchorSet {
  std::vector<UserId> users;  // sorted
  bool empty_warning = false;
  std::size_t size() const { return users.size(); }
};

AnchorSet anchor_overlap(std::span<const std::vector<UserId>> sets);

struct SummaryCounts {
  std::size_t subreddits = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  friend bool operator==(const SummaryCounts&, const SummaryCounts&) = default;
};

struct DatasetSummary {
  std::map<std::pair<ClassLabel, int>, SummaryCounts> cells;

  SummaryCounts at(ClassLabel label, int window) const;
};

DatasetSummary summarize(std::span<const TemporalSnapshot> snapshots);

/// CSV: class,window,subreddits,nodes,edges
void write_summary_csv(std::ostream& out, const DatasetSummary& summary);

}  // namespace rolechron

#endif
