#ifndef ROLECHRON_SYNTH_HPP
#define ROLECHRON_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rolechron/embedding_space.hpp"
#include "rolechron/graph.hpp"

namespace rolechron {

/// One building block of a component: "cycle n", "star n" (hub + n leaves),
/// "path n" or "clique n". Blocks are joined in order by a bridge between
/// their first nodes. Every edge has weight 1 in both directions.
struct Primitive {
  enum class Kind { cycle, star, path, clique } kind;
  std::size_t size;
};

/// Parses e.g. "star 9, cycle 10".
std::vector<Primitive> parse_component_spec(const std::string& spec);

struct Component {
  std::size_t node_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // undirected, local ids
};

Component build_component(const std::vector<Primitive>& spec);

struct PlantedRoleGraph {
  InteractionGraph graph;
  std::map<UserId, int> role_of;  // nodes with identical degree profiles at every hop share a role
  std::vector<std::pair<UserId, UserId>> automorphic_pairs;
};

/// `copies` disjoint relabelled copies of the component. Node names are a
/// seeded shuffle so they carry no role information.
PlantedRoleGraph make_mirrored_graph(const std::vector<Primitive>& spec, std::size_t copies, std::uint64_t seed);
PlantedRoleGraph make_mirrored_graph(const std::string& spec, std::size_t copies, std::uint64_t seed);

struct SyntheticSpacePair {
  EmbeddingSpace base;
  EmbeddingSpace transformed;  // base * Q* + noise
  Eigen::MatrixXd rotation;    // Q*
};

/// Seeded orthogonal matrix: QR of a Gaussian matrix with a sign-fixed R diagonal.
Eigen::MatrixXd random_orthogonal(Eigen::Index d, std::uint64_t seed);

SyntheticSpacePair make_rotated_pair(Eigen::Index n, Eigen::Index d, double noise, std::uint64_t seed);
SyntheticSpacePair make_rotated_pair(Eigen::Index n, const Eigen::MatrixXd& rotation, double noise,
                                     std::uint64_t seed);

/// Month-file fixture for the pipeline: `<root>/data/<sub>/<YYYY-MM>.edges`,
/// `<root>/manifest.ini` and `<root>/rolechron.ini`.
struct TemporalFixtureSpec {
  std::size_t windows = 3;
  std::size_t months_per_window = 3;
  bool identical_windows = false;  // every window repeats window 1's months
  std::size_t k_top = 30;
  std::size_t dim = 32;  // written to the fixture config
  std::uint64_t seed = 7;
};

void write_temporal_fixture(const std::filesystem::path& root, const TemporalFixtureSpec& spec);

void write_graph_fixture(const std::filesystem::path& path, const InteractionGraph& graph);

}  // namespace rolechron

#endif
