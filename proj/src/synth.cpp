#include "rolechron/synth.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "rolechron/dataset.hpp"
#include "rolechron/rng.hpp"
#include "rolechron/role_embed.hpp"

namespace rolechron {

std::vector<Primitive> parse_component_spec(const std::string& spec) {
  std::vector<Primitive> out;
  std::stringstream all(spec);
  for (std::string part; std::getline(all, part, ',');) {
    std::istringstream ps(part);
    std::string name;
    long long size = 0;
    if (!(ps >> name)) continue;
    if (!(ps >> size) || size < 1) throw std::invalid_argument("component spec: '" + part + "' needs a positive size");
    Primitive p{Primitive::Kind::cycle, static_cast<std::size_t>(size)};
    if (name == "cycle") p.kind = Primitive::Kind::cycle;
    else if (name == "star") p.kind = Primitive::Kind::star;
    else if (name == "path") p.kind = Primitive::Kind::path;
    else if (name == "clique") p.kind = Primitive::Kind::clique;
    else throw std::invalid_argument("component spec: unknown primitive '" + name + "'");
    if (p.kind == Primitive::Kind::cycle && p.size < 3) throw std::invalid_argument("component spec: cycle needs >= 3 nodes");
    out.push_back(p);
  }
  if (out.empty()) throw std::invalid_argument("component spec is empty");
  return out;
}

Component build_component(const std::vector<Primitive>& spec) {
  if (spec.empty()) throw std::invalid_argument("component spec is empty");
  Component c;
  std::size_t previous_root = 0;
  for (std::size_t b = 0; b < spec.size(); ++b) {
    const auto root = c.node_count;
    const auto& p = spec[b];
    switch (p.kind) {
      case Primitive::Kind::cycle:
        for (std::size_t i = 0; i < p.size; ++i) c.edges.emplace_back(root + i, root + (i + 1) % p.size);
        c.node_count += p.size;
        break;
      case Primitive::Kind::star:
        for (std::size_t i = 1; i <= p.size; ++i) c.edges.emplace_back(root, root + i);
        c.node_count += p.size + 1;
        break;
      case Primitive::Kind::path:
        for (std::size_t i = 0; i + 1 < p.size; ++i) c.edges.emplace_back(root + i, root + i + 1);
        c.node_count += p.size;
        break;
      case Primitive::Kind::clique:
        for (std::size_t i = 0; i < p.size; ++i)
          for (std::size_t j = i + 1; j < p.size; ++j) c.edges.emplace_back(root + i, root + j);
        c.node_count += p.size;
        break;
    }
    if (b > 0) c.edges.emplace_back(previous_root, root);
    previous_root = root;
  }
  return c;
}

namespace {

using ProfileKey = std::vector<std::vector<double>>;

ProfileKey profile_key(const std::vector<RingSequences>& rings) {
  ProfileKey key;
  for (const auto& r : rings) {
    key.push_back(r.in);
    key.push_back(r.out);
  }
  return key;
}

}  // namespace

PlantedRoleGraph make_mirrored_graph(const std::vector<Primitive>& spec, std::size_t copies, std::uint64_t seed) {
  if (copies == 0) throw std::invalid_argument("make_mirrored_graph: copies must be >= 1");
  const auto component = build_component(spec);
  const auto n = component.node_count;

  std::vector<std::size_t> perm(n * copies);
  std::iota(perm.begin(), perm.end(), 0);
  auto rng = make_engine(derive_seed(seed, "mirror-names"));
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
  const auto width = std::to_string(perm.size()).size();
  auto name = [&](std::size_t copy, std::size_t local) {
    return fmt::format("n{:0{}}", perm[copy * n + local], width);
  };

  PlantedRoleGraph out;
  for (std::size_t c = 0; c < copies; ++c) {
    for (std::size_t i = 0; i < n; ++i) out.graph.add_node(name(c, i));
    for (const auto& [u, v] : component.edges) {
      out.graph.add_edge(name(c, u), name(c, v), 1.0);
      out.graph.add_edge(name(c, v), name(c, u), 1.0);
    }
  }
  for (std::size_t c = 1; c < copies; ++c)
    for (std::size_t i = 0; i < n; ++i) out.automorphic_pairs.emplace_back(name(0, i), name(c, i));

  const auto indexed = index_graph(out.graph);
  const auto profiles = degree_profiles(indexed, indexed.size());
  std::map<UserId, ProfileKey> key_of;
  for (std::size_t i = 0; i < indexed.size(); ++i) key_of[indexed.ids[i]] = profile_key(profiles.rings[i]);
  for (const auto& [a, b] : out.automorphic_pairs)
    if (key_of.at(a) != key_of.at(b))
      throw std::logic_error("make_mirrored_graph: mirrored nodes " + a + ", " + b + " have different profiles");

  std::map<ProfileKey, int> role_ids;
  for (const auto& [id, key] : key_of) {
    auto [it, inserted] = role_ids.try_emplace(key, static_cast<int>(role_ids.size()));
    out.role_of[id] = it->second;
  }
  return out;
}

PlantedRoleGraph make_mirrored_graph(const std::string& spec, std::size_t copies, std::uint64_t seed) {
  return make_mirrored_graph(parse_component_spec(spec), copies, seed);
}

Eigen::MatrixXd random_orthogonal(Eigen::Index d, std::uint64_t seed) {
  auto rng = make_engine(derive_seed(seed, "orthogonal"));
  Eigen::MatrixXd g(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = standard_normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

SyntheticSpacePair make_rotated_pair(Eigen::Index n, const Eigen::MatrixXd& rotation, double noise,
                                     std::uint64_t seed) {
  const auto d = rotation.rows();
  if (rotation.cols() != d) throw std::invalid_argument("make_rotated_pair: rotation must be square");
  if (d < 2 || n < d) throw std::invalid_argument(fmt::format("make_rotated_pair: need n >= d >= 2, got n={} d={}", n, d));
  auto rng = make_engine(derive_seed(seed, "rows"));
  Eigen::MatrixXd base(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < d; ++j) base(i, j) = standard_normal(rng);
  Eigen::MatrixXd moved = base * rotation;
  if (noise > 0.0)
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < d; ++j) moved(i, j) += noise * standard_normal(rng);

  std::vector<UserId> ids;
  const auto width = std::to_string(n).size();
  for (Eigen::Index i = 0; i < n; ++i) ids.push_back(fmt::format("u{:0{}}", i, width));
  Provenance pb{seed, "synthetic/base", {}};
  Provenance pt{seed, "synthetic/rotated", {}};
  return {EmbeddingSpace(ids, std::move(base), pb), EmbeddingSpace(ids, std::move(moved), pt), rotation};
}

SyntheticSpacePair make_rotated_pair(Eigen::Index n, Eigen::Index d, double noise, std::uint64_t seed) {
  if (d < 2 || n < d) throw std::invalid_argument(fmt::format("make_rotated_pair: need n >= d >= 2, got n={} d={}", n, d));
  return make_rotated_pair(n, random_orthogonal(d, seed), noise, seed);
}

void write_graph_fixture(const std::filesystem::path& path, const InteractionGraph& graph) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_edge_list(out, graph);
}

namespace {

std::string month_name(std::size_t offset) {
  // Months counted from 2014-02.
  const auto m = 1 + offset;
  return fmt::format("{}-{:02}", 2014 + m / 12, m % 12 + 1);
}

// One month of activity: the planted structure with jittered weights plus a
// few random extra replies.
InteractionGraph month_graph(const PlantedRoleGraph& base, double churn, std::uint64_t seed) {
  auto rng = make_engine(seed);
  InteractionGraph g;
  for (const auto& [key, w] : base.graph.edges()) {
    if (uniform01(rng) < churn * 0.5) continue;
    g.add_edge(key.first, key.second, w + static_cast<double>(uniform_index(rng, 3)));
  }
  const std::vector<UserId> ids(base.graph.nodes().begin(), base.graph.nodes().end());
  const auto extra = static_cast<std::size_t>(churn * static_cast<double>(ids.size()));
  for (std::size_t e = 0; e < extra; ++e) {
    const auto& s = ids[uniform_index(rng, ids.size())];
    const auto& t = ids[uniform_index(rng, ids.size())];
    if (s != t) g.add_edge(s, t, 1.0);
  }
  return g;
}

}  // namespace

void write_temporal_fixture(const std::filesystem::path& root, const TemporalFixtureSpec& spec) {
  if (spec.windows < 2 || spec.months_per_window < 1)
    throw std::invalid_argument("temporal fixture: need >= 2 windows and >= 1 month per window");
  struct Community {
    std::string name;
    ClassLabel label;
    std::string component;
    double churn;
  };
  const std::vector<Community> communities = {
      {"synth_loyal", ClassLabel::loyal, "star 6, cycle 8, path 4", 0.1},
      {"synth_vagrant", ClassLabel::vagrant, "star 9, clique 4, path 5", 0.3},
  };

  Manifest manifest;
  for (std::size_t w = 0; w < spec.windows; ++w) {
    WindowSpec ws;
    ws.index = static_cast<int>(w + 1);
    for (std::size_t m = 0; m < spec.months_per_window; ++m) ws.months.push_back(month_name(w * spec.months_per_window + m));
    manifest.windows.push_back(std::move(ws));
  }

  const auto data = root / "data";
  for (std::size_t ci = 0; ci < communities.size(); ++ci) {
    const auto& c = communities[ci];
    manifest.subreddits[c.name] = c.label;
    auto planted = make_mirrored_graph(c.component, 2, derive_seed(spec.seed, c.name));
    for (std::size_t w = 0; w < spec.windows; ++w) {
      for (std::size_t m = 0; m < spec.months_per_window; ++m) {
        const auto source_slot = spec.identical_windows ? m : w * spec.months_per_window + m;
        const auto g = month_graph(planted, c.churn, derive_seed(derive_seed(spec.seed, c.name), source_slot));
        write_graph_fixture(month_path(data, c.name, manifest.windows[w].months[m]), g);
      }
    }
  }
  std::filesystem::create_directories(root);
  write_manifest(root / "manifest.ini", manifest);

  std::ofstream cfg(root / "rolechron.ini");
  cfg << "[data]\nroot = data\nmanifest = manifest.ini\n\n"
      << "[selection]\nk_top = " << spec.k_top << "\n\n"
      << "[embedding]\ndim = " << spec.dim << "\n\n"
      << "[run]\nseed = " << spec.seed << "\noutput = out\n";
}

}  // namespace rolechron
