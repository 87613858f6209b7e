#ifndef ROLECHRON_TEST_SUPPORT_HPP
#define ROLECHRON_TEST_SUPPORT_HPP

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Dense>

#include "rolechron/graph.hpp"
#include "rolechron/rng.hpp"
#include "rolechron/role_embed.hpp"
#include "rolechron/synth.hpp"

namespace testing {

// Fresh directory under the system temp dir, removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("rolechron_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline rolechron::TemporalSnapshot parse(const std::string& text, int window = 1) {
  std::istringstream in(text);
  return rolechron::parse_edge_list(in, "sub", window, {});
}

// Undirected input duplicated in both directions, weight 1.
inline rolechron::InteractionGraph undirected(std::initializer_list<std::pair<const char*, const char*>> edges) {
  rolechron::InteractionGraph g;
  for (const auto& [a, b] : edges) {
    g.add_edge(a, b, 1.0);
    g.add_edge(b, a, 1.0);
  }
  return g;
}

inline rolechron::InteractionGraph random_graph(rolechron::Engine& rng, std::size_t nodes, std::size_t edges) {
  rolechron::InteractionGraph g;
  for (std::size_t e = 0; e < edges; ++e) {
    const auto a = rolechron::uniform_index(rng, nodes), b = rolechron::uniform_index(rng, nodes);
    g.add_edge("v" + std::to_string(a), "v" + std::to_string(b), 1.0 + static_cast<double>(rolechron::uniform_index(rng, 4)));
  }
  return g;
}

inline Eigen::MatrixXd gaussian(rolechron::Engine& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rolechron::standard_normal(rng);
  return m;
}

// Largest f_k over the planted automorphic pairs, across every layer up to the
// skeleton diameter. Zero when the structural distance sees the symmetry.
inline double max_automorphic_distance(const rolechron::PlantedRoleGraph& planted) {
  const auto g = rolechron::index_graph(planted.graph);
  const auto k_max = rolechron::skeleton_diameter(g);
  std::vector<rolechron::NodePair> pairs;
  auto index_of = [&](const rolechron::UserId& id) {
    return static_cast<rolechron::NodeIndex>(std::lower_bound(g.ids.begin(), g.ids.end(), id) - g.ids.begin());
  };
  for (const auto& [a, b] : planted.automorphic_pairs) {
    const auto u = index_of(a), v = index_of(b);
    pairs.push_back({std::min(u, v), std::max(u, v)});
  }
  std::sort(pairs.begin(), pairs.end(), [](auto x, auto y) { return std::pair{x.u, x.v} < std::pair{y.u, y.v}; });
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  const auto table = rolechron::structural_distances(rolechron::degree_profiles(g, k_max), pairs, k_max);
  double worst = 0.0;
  for (std::size_t i = 0; i < table.pairs().size(); ++i)
    for (double f : table.distances(i)) worst = std::max(worst, f);
  return worst;
}

}  // namespace testing

#endif
