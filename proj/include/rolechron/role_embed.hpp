#ifndef ROLECHRON_ROLE_EMBED_HPP
#define ROLECHRON_ROLE_EMBED_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "rolechron/embedding_space.hpp"
#include "rolechron/graph.hpp"

namespace rolechron {

using NodeIndex = std::uint32_t;

/// Index-based view of an InteractionGraph. Node i is `ids[i]`; every
/// computation downstream consumes RNG in index order, so the supplied order
/// fully determines the result for a given seed.
struct IndexedGraph {
  std::vector<UserId> ids;
  std::vector<double> in_strength;
  std::vector<double> out_strength;
  std::vector<std::vector<NodeIndex>> skeleton;  // undirected, no self, ascending

  std::size_t size() const { return ids.size(); }
};

/// Lexicographic order when `order` is empty; otherwise `order` must be a
/// permutation of the node set.
IndexedGraph index_graph(const InteractionGraph& graph, std::span<const UserId> order = {},
                         bool include_self_loops = false);

/// Longest finite shortest-path length on the undirected skeleton.
std::size_t skeleton_diameter(const IndexedGraph& graph);

struct RingSequences {
  std::vector<double> in;   // ascending
  std::vector<double> out;  // ascending
};

/// rings[u][k] holds the sorted strengths of the nodes at hop k from u. Rings
/// stop at the first empty shell, so rings[u].size() <= k_max + 1.
struct DegreeSequenceProfile {
  std::vector<std::vector<RingSequences>> rings;
  std::size_t k_max = 0;
};

DegreeSequenceProfile degree_profiles(const IndexedGraph& graph, std::size_t k_max);

struct DtwResult {
  double cost = 0.0;
  bool neutral_padded = false;  // one side was empty
};

/// Dynamic time warping with element cost max(a,b)/min(a,b) - 1. An empty
/// side is costed by pairing every element of the other side with 1. Throws
/// on non-positive entries.
DtwResult dtw(std::span<const double> a, std::span<const double> b);
double dtw_distance(std::span<const double> a, std::span<const double> b);

struct NodePair {
  NodeIndex u;
  NodeIndex v;  // u < v
  friend bool operator==(const NodePair&, const NodePair&) = default;
};

enum class PairMode { exact, top_m, automatic };

PairMode parse_pair_mode(const std::string& text);

/// All unordered pairs, ascending.
std::vector<NodePair> all_pairs(std::size_t n);

/// For every node, its `m` nearest nodes by total strength (ties by index);
/// the union of those pairs, ascending. m = 0 selects ceil(2 ln n).
std::vector<NodePair> candidate_pairs(const IndexedGraph& graph, std::size_t m = 0);

/// Cumulative structural distances f_k(u, v), one vector per pair.
class StructuralDistanceTable {
 public:
  StructuralDistanceTable() = default;
  StructuralDistanceTable(std::size_t node_count, std::vector<NodePair> pairs,
                          std::vector<std::vector<double>> layers);

  std::size_t node_count() const { return node_count_; }
  std::size_t layer_count() const { return layer_count_; }
  const std::vector<NodePair>& pairs() const { return pairs_; }
  /// f_0 .. f_K for pair i.
  const std::vector<double>& distances(std::size_t pair) const { return layers_[pair]; }
  /// f_k(u, v); nullopt when the pair is not in the table or stops before k.
  /// f_k(u, u) is 0.
  std::optional<double> at(NodeIndex u, NodeIndex v, std::size_t k) const;
  bool empty() const { return pairs_.empty(); }

 private:
  static std::uint64_t key(NodeIndex u, NodeIndex v) { return (std::uint64_t{u} << 32) | v; }

  std::size_t node_count_ = 0;
  std::size_t layer_count_ = 0;
  std::vector<NodePair> pairs_;
  std::vector<std::vector<double>> layers_;
  std::unordered_map<std::uint64_t, std::size_t> lookup_;
};

StructuralDistanceTable structural_distances(const DegreeSequenceProfile& profiles,
                                             std::span<const NodePair> pairs, std::size_t k_max,
                                             unsigned threads = 1);

struct WeightedNeighbor {
  NodeIndex node;
  double weight;
};

struct ContextLayer {
  std::vector<std::vector<WeightedNeighbor>> neighbors;  // per node, ascending node
  std::vector<double> up_weight;                         // log(Gamma_k(u) + e)
  std::vector<std::size_t> gamma;
  double average_weight = 0.0;
};

/// Layers 0..K of the struc2vec context graph. Moving down always has weight 1.
struct MultilayerContextGraph {
  std::vector<ContextLayer> layers;
  std::size_t node_count = 0;
  bool degenerate = false;  // fewer than two nodes, or no intra-layer edges

  std::size_t layer_count() const { return layers.size(); }
};

MultilayerContextGraph build_context_graph(const StructuralDistanceTable& table);

struct WalkParams {
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 80;
  double stay_probability = 0.7;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct WalkCorpus {
  std::vector<std::vector<NodeIndex>> walks;
  WalkParams params;
  std::size_t self_step_walks = 0;  // walks that had to repeat a node copy with no neighbors
  std::size_t layer_changes = 0;
};

/// Walk w = round * n + start is seeded from (seed, w); the corpus is the
/// same for any thread count.
WalkCorpus generate_walks(const MultilayerContextGraph& graph, const WalkParams& params);

struct SkipGramParams {
  std::size_t dim = 128;
  std::size_t window = 10;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
  unsigned threads = 1;  // > 1 uses lock-free parallel updates (non-deterministic)
};

struct SkipGramModel {
  std::vector<NodeIndex> vocabulary;  // ascending node index
  Eigen::MatrixXd input_vectors;      // one row per vocabulary entry
  Eigen::MatrixXd output_vectors;     // context vectors, same rows
  std::vector<NodeIndex> absent;      // node indices < node_count never seen in the corpus
};

/// Skip-gram with negative sampling over the walk corpus.
SkipGramModel train_skipgram(const WalkCorpus& corpus, std::size_t node_count, const SkipGramParams& params);

struct EmbedParams {
  std::size_t dim = 128;
  std::size_t walks_per_node = 10;
  std::size_t walk_length = 80;
  double stay_probability = 0.7;
  int k_max = -1;  // < 0: min(diameter, k_max_limit)
  std::size_t k_max_limit = 5;
  std::size_t window = 10;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  PairMode pair_mode = PairMode::automatic;
  std::size_t top_m = 0;                // 0: ceil(2 ln n)
  std::size_t exact_pair_limit = 400;   // automatic mode switches to top-m above this
  bool include_self_loops = false;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool deterministic = true;  // single-threaded training
};

struct EmbedDiagnostics {
  std::size_t k_max = 0;
  std::size_t pair_count = 0;
  bool degenerate_context = false;
  std::size_t self_step_walks = 0;
  std::vector<UserId> absent_nodes;
};

struct EmbedResult {
  EmbeddingSpace space;
  EmbedDiagnostics diagnostics;
};

/// degree_profiles -> structural_distances -> build_context_graph ->
/// generate_walks -> train_skipgram. Throws on an empty graph.
/// `node_order` fixes the canonical node order (lexicographic when empty).
EmbedResult embed(const TemporalSnapshot& snapshot, const EmbedParams& params,
                  std::span<const UserId> node_order = {});

std::map<std::string, std::string> describe(const EmbedParams& params);

}  // namespace rolechron

#endif
