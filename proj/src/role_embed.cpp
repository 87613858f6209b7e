#include "rolechron/role_embed.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <thread>

#include <fmt/format.h>

#include "rolechron/rng.hpp"

namespace rolechron {

IndexedGraph index_graph(const InteractionGraph& graph, std::span<const UserId> order, bool include_self_loops) {
  IndexedGraph g;
  if (order.empty()) {
    g.ids.assign(graph.nodes().begin(), graph.nodes().end());
  } else {
    if (order.size() != graph.node_count())
      throw std::invalid_argument(
          fmt::format("node order has {} ids, graph has {} nodes", order.size(), graph.node_count()));
    g.ids.assign(order.begin(), order.end());
  }
  std::unordered_map<UserId, NodeIndex> index;
  index.reserve(g.ids.size());
  for (std::size_t i = 0; i < g.ids.size(); ++i) {
    if (!graph.contains(g.ids[i])) throw std::invalid_argument("node order names unknown id " + g.ids[i]);
    if (!index.emplace(g.ids[i], static_cast<NodeIndex>(i)).second)
      throw std::invalid_argument("node order repeats id " + g.ids[i]);
  }

  const auto n = g.ids.size();
  g.in_strength.assign(n, 0.0);
  g.out_strength.assign(n, 0.0);
  g.skeleton.assign(n, {});
  for (const auto& [key, w] : graph.edges()) {
    const auto s = index.at(key.first);
    const auto t = index.at(key.second);
    if (s == t) {
      if (include_self_loops) {
        g.out_strength[s] += w;
        g.in_strength[t] += w;
      }
      continue;
    }
    g.out_strength[s] += w;
    g.in_strength[t] += w;
    g.skeleton[s].push_back(t);
    g.skeleton[t].push_back(s);
  }
  for (auto& adj : g.skeleton) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
  return g;
}

namespace {

// Breadth-first shells around `source`, at most `limit` + 1 of them.
std::vector<std::vector<NodeIndex>> bfs_shells(const IndexedGraph& g, NodeIndex source, std::size_t limit,
                                               std::vector<int>& dist) {
  std::vector<std::vector<NodeIndex>> shells{{source}};
  dist[source] = 0;
  std::vector<NodeIndex> touched{source};
  while (shells.size() <= limit) {
    std::vector<NodeIndex> next;
    for (auto u : shells.back())
      for (auto v : g.skeleton[u])
        if (dist[v] < 0) {
          dist[v] = static_cast<int>(shells.size());
          next.push_back(v);
          touched.push_back(v);
        }
    if (next.empty()) break;
    shells.push_back(std::move(next));
  }
  for (auto u : touched) dist[u] = -1;
  return shells;
}

}  // namespace

std::size_t skeleton_diameter(const IndexedGraph& graph) {
  std::size_t diameter = 0;
  std::vector<int> dist(graph.size(), -1);
  for (NodeIndex u = 0; u < graph.size(); ++u) {
    const auto shells = bfs_shells(graph, u, graph.size(), dist);
    diameter = std::max(diameter, shells.size() - 1);
  }
  return diameter;
}

DegreeSequenceProfile degree_profiles(const IndexedGraph& graph, std::size_t k_max) {
  DegreeSequenceProfile profile;
  profile.k_max = k_max;
  profile.rings.resize(graph.size());
  std::vector<int> dist(graph.size(), -1);
  for (NodeIndex u = 0; u < graph.size(); ++u) {
    const auto shells = bfs_shells(graph, u, k_max, dist);
    auto& rings = profile.rings[u];
    rings.reserve(shells.size());
    for (const auto& shell : shells) {
      RingSequences ring;
      ring.in.reserve(shell.size());
      ring.out.reserve(shell.size());
      for (auto v : shell) {
        ring.in.push_back(graph.in_strength[v]);
        ring.out.push_back(graph.out_strength[v]);
      }
      std::sort(ring.in.begin(), ring.in.end());
      std::sort(ring.out.begin(), ring.out.end());
      rings.push_back(std::move(ring));
    }
  }
  return profile;
}

namespace {

inline double ratio_cost(double a, double b) { return std::max(a, b) / std::min(a, b) - 1.0; }

void require_positive(std::span<const double> s) {
  for (double x : s)
    if (!(x > 0.0)) throw std::invalid_argument(fmt::format("dtw: non-positive entry {}", x));
}

}  // namespace

DtwResult dtw(std::span<const double> a, std::span<const double> b) {
  require_positive(a);
  require_positive(b);
  if (a.empty() || b.empty()) {
    DtwResult r{0.0, !(a.empty() && b.empty())};
    for (double x : a.empty() ? b : a) r.cost += ratio_cost(x, 1.0);
    return r;
  }
  const auto m = b.size();
  std::vector<double> prev(m), cur(m);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double c = ratio_cost(a[i], b[j]);
      double best;
      if (i == 0 && j == 0) best = 0.0;
      else if (i == 0) best = cur[j - 1];
      else if (j == 0) best = prev[j];
      else best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = c + best;
    }
    std::swap(prev, cur);
  }
  return {prev[m - 1], false};
}

double dtw_distance(std::span<const double> a, std::span<const double> b) { return dtw(a, b).cost; }

PairMode parse_pair_mode(const std::string& text) {
  if (text == "exact") return PairMode::exact;
  if (text == "top_m" || text == "top-m") return PairMode::top_m;
  if (text == "auto" || text == "automatic") return PairMode::automatic;
  throw std::invalid_argument("unknown pair mode '" + text + "'");
}

std::vector<NodePair> all_pairs(std::size_t n) {
  std::vector<NodePair> pairs;
  pairs.reserve(n * (n - (n > 0)) / 2);
  for (NodeIndex u = 0; u < n; ++u)
    for (NodeIndex v = u + 1; v < n; ++v) pairs.push_back({u, v});
  return pairs;
}

std::vector<NodePair> candidate_pairs(const IndexedGraph& graph, std::size_t m) {
  const auto n = graph.size();
  if (n < 2) return {};
  if (m == 0) m = static_cast<std::size_t>(std::ceil(2.0 * std::log(static_cast<double>(n))));
  m = std::clamp<std::size_t>(m, 1, n - 1);

  std::vector<double> strength(n);
  for (std::size_t i = 0; i < n; ++i) strength[i] = graph.in_strength[i] + graph.out_strength[i];
  std::vector<NodeIndex> sorted(n);
  for (NodeIndex i = 0; i < n; ++i) sorted[i] = i;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](NodeIndex a, NodeIndex b) { return strength[a] < strength[b]; });

  std::vector<NodePair> pairs;
  pairs.reserve(n * m);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto u = sorted[pos];
    std::size_t lo = pos, hi = pos + 1;  // next candidates are sorted[lo-1] and sorted[hi]
    for (std::size_t taken = 0; taken < m; ++taken) {
      const bool has_lo = lo > 0, has_hi = hi < n;
      bool take_lo;
      if (has_lo && has_hi) {
        const double dl = strength[u] - strength[sorted[lo - 1]];
        const double dh = strength[sorted[hi]] - strength[u];
        take_lo = dl <= dh;
      } else {
        take_lo = has_lo;
      }
      const auto v = take_lo ? sorted[--lo] : sorted[hi++];
      pairs.push_back({std::min(u, v), std::max(u, v)});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const NodePair& a, const NodePair& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

StructuralDistanceTable::StructuralDistanceTable(std::size_t node_count, std::vector<NodePair> pairs,
                                                 std::vector<std::vector<double>> layers)
    : node_count_(node_count), pairs_(std::move(pairs)), layers_(std::move(layers)) {
  if (pairs_.size() != layers_.size()) throw std::invalid_argument("distance table: pairs/layers size mismatch");
  lookup_.reserve(pairs_.size());
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const auto& p = pairs_[i];
    if (p.u >= p.v || p.v >= node_count_) throw std::invalid_argument("distance table: bad pair");
    lookup_.emplace(key(p.u, p.v), i);
    layer_count_ = std::max(layer_count_, layers_[i].size());
  }
}

std::optional<double> StructuralDistanceTable::at(NodeIndex u, NodeIndex v, std::size_t k) const {
  if (u == v) return 0.0;
  if (u > v) std::swap(u, v);
  auto it = lookup_.find(key(u, v));
  if (it == lookup_.end()) return std::nullopt;
  const auto& f = layers_[it->second];
  if (k >= f.size()) return std::nullopt;
  return f[k];
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
}

std::vector<double> positive_only(const std::vector<double>& s) {
  std::vector<double> out;
  out.reserve(s.size());
  for (double x : s)
    if (x > 0.0) out.push_back(x);
  return out;
}

}  // namespace

StructuralDistanceTable structural_distances(const DegreeSequenceProfile& profiles,
                                             std::span<const NodePair> pairs, std::size_t k_max,
                                             unsigned threads) {
  if (k_max > profiles.k_max)
    throw std::invalid_argument(fmt::format("profiles computed to k={}, requested {}", profiles.k_max, k_max));
  const auto n = profiles.rings.size();

  // Zero strengths (no in- or out-edges) carry no ratio information; they are
  // dropped and the empty-side rule of dtw() costs them against 1.
  std::vector<std::vector<RingSequences>> usable(n);
  for (std::size_t u = 0; u < n; ++u)
    for (const auto& ring : profiles.rings[u]) usable[u].push_back({positive_only(ring.in), positive_only(ring.out)});

  std::vector<std::vector<double>> layers(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    const auto& ru = usable[pairs[i].u];
    const auto& rv = usable[pairs[i].v];
    const auto depth = std::min({ru.size(), rv.size(), k_max + 1});
    auto& f = layers[i];
    f.reserve(depth);
    double acc = 0.0;
    for (std::size_t k = 0; k < depth; ++k) {
      acc += dtw_distance(ru[k].in, rv[k].in) + dtw_distance(ru[k].out, rv[k].out);
      f.push_back(acc);
    }
  });
  return StructuralDistanceTable(n, std::vector<NodePair>(pairs.begin(), pairs.end()), std::move(layers));
}

MultilayerContextGraph build_context_graph(const StructuralDistanceTable& table) {
  MultilayerContextGraph g;
  g.node_count = table.node_count();
  const auto n = g.node_count;
  g.layers.resize(std::max<std::size_t>(table.layer_count(), 1));
  for (auto& layer : g.layers) {
    layer.neighbors.assign(n, {});
    layer.gamma.assign(n, 0);
    layer.up_weight.assign(n, 1.0);
  }

  std::vector<double> weight_sum(g.layers.size(), 0.0);
  std::vector<std::size_t> weight_count(g.layers.size(), 0);
  for (std::size_t i = 0; i < table.pairs().size(); ++i) {
    const auto [u, v] = table.pairs()[i];
    const auto& f = table.distances(i);
    for (std::size_t k = 0; k < f.size(); ++k) {
      const double w = std::exp(-f[k]);
      g.layers[k].neighbors[u].push_back({v, w});
      g.layers[k].neighbors[v].push_back({u, w});
      weight_sum[k] += w;
      ++weight_count[k];
    }
  }

  for (std::size_t k = 0; k < g.layers.size(); ++k) {
    auto& layer = g.layers[k];
    layer.average_weight = weight_count[k] ? weight_sum[k] / static_cast<double>(weight_count[k]) : 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      auto& adj = layer.neighbors[u];
      std::sort(adj.begin(), adj.end(), [](const auto& a, const auto& b) { return a.node < b.node; });
      layer.gamma[u] = static_cast<std::size_t>(std::count_if(
          adj.begin(), adj.end(), [&](const auto& nb) { return nb.weight > layer.average_weight; }));
      layer.up_weight[u] = std::log(static_cast<double>(layer.gamma[u]) + std::numbers::e);
    }
  }
  g.degenerate = n < 2 || table.empty();
  return g;
}

namespace {

NodeIndex sample_cumulative(const std::vector<WeightedNeighbor>& adj, const std::vector<double>& cumulative,
                            Engine& rng) {
  const double r = uniform01(rng) * cumulative.back();
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
  if (it == cumulative.end()) --it;
  return adj[static_cast<std::size_t>(it - cumulative.begin())].node;
}

}  // namespace

WalkCorpus generate_walks(const MultilayerContextGraph& graph, const WalkParams& params) {
  if (params.walks_per_node == 0 || params.walk_length == 0)
    throw std::invalid_argument("generate_walks: walks_per_node and walk_length must be positive");
  if (!(params.stay_probability > 0.0 && params.stay_probability <= 1.0))
    throw std::invalid_argument("generate_walks: stay probability must be in (0, 1]");

  const auto n = graph.node_count;
  const auto layers = graph.layer_count();
  std::vector<std::vector<std::vector<double>>> cumulative(layers);
  for (std::size_t k = 0; k < layers; ++k) {
    cumulative[k].resize(n);
    for (std::size_t u = 0; u < n; ++u) {
      double acc = 0.0;
      for (const auto& nb : graph.layers[k].neighbors[u]) cumulative[k][u].push_back(acc += nb.weight);
    }
  }

  WalkCorpus corpus;
  corpus.params = params;
  const auto total = params.walks_per_node * n;
  corpus.walks.resize(total);
  std::vector<char> self_stepped(total, 0);
  std::vector<std::size_t> changes(total, 0);

  parallel_for(total, params.threads, [&](std::size_t w) {
    auto rng = make_engine(derive_seed(params.seed, w));
    NodeIndex node = static_cast<NodeIndex>(w % n);
    std::size_t layer = 0;
    auto& walk = corpus.walks[w];
    walk.reserve(params.walk_length);
    walk.push_back(node);
    while (walk.size() < params.walk_length) {
      const auto& adj = graph.layers[layer].neighbors[node];
      const bool can_up = layer + 1 < layers && !graph.layers[layer + 1].neighbors[node].empty();
      const bool can_down = layer > 0;
      if (uniform01(rng) < params.stay_probability || (!can_up && !can_down)) {
        if (adj.empty()) {
          self_stepped[w] = 1;
        } else {
          node = sample_cumulative(adj, cumulative[layer][node], rng);
        }
        walk.push_back(node);
        continue;
      }
      ++changes[w];
      if (can_up && can_down) {
        const double up = graph.layers[layer].up_weight[node];
        layer = uniform01(rng) * (up + 1.0) < up ? layer + 1 : layer - 1;
      } else {
        layer = can_up ? layer + 1 : layer - 1;
      }
    }
  });

  corpus.self_step_walks = static_cast<std::size_t>(std::count(self_stepped.begin(), self_stepped.end(), 1));
  for (auto c : changes) corpus.layer_changes += c;
  return corpus;
}

EmbedResult embed(const TemporalSnapshot& snapshot, const EmbedParams& params, std::span<const UserId> node_order) {
  if (snapshot.graph.empty()) throw std::invalid_argument("embed: snapshot " + snapshot.id() + " has an empty graph");
  if (params.dim < 2) throw std::invalid_argument("embed: dim must be >= 2");

  const auto graph = index_graph(snapshot.graph, node_order, params.include_self_loops);
  const auto n = graph.size();
  const auto threads = std::max(1u, params.threads);

  EmbedDiagnostics diag;
  diag.k_max = params.k_max >= 0 ? static_cast<std::size_t>(params.k_max)
                                 : std::min(skeleton_diameter(graph), params.k_max_limit);
  const auto profiles = degree_profiles(graph, diag.k_max);

  bool exact = params.pair_mode == PairMode::exact ||
               (params.pair_mode == PairMode::automatic && n <= params.exact_pair_limit);
  const auto pairs = exact ? all_pairs(n) : candidate_pairs(graph, params.top_m);
  diag.pair_count = pairs.size();
  const auto table = structural_distances(profiles, pairs, diag.k_max, threads);
  const auto context = build_context_graph(table);
  diag.degenerate_context = context.degenerate;

  WalkParams wp;
  wp.walks_per_node = params.walks_per_node;
  wp.walk_length = params.walk_length;
  wp.stay_probability = params.stay_probability;
  wp.seed = derive_seed(params.seed, "walks");
  wp.threads = threads;
  const auto corpus = generate_walks(context, wp);
  diag.self_step_walks = corpus.self_step_walks;

  SkipGramParams sp;
  sp.dim = params.dim;
  sp.window = params.window;
  sp.negatives = params.negatives;
  sp.epochs = params.epochs;
  sp.learning_rate = params.learning_rate;
  sp.seed = derive_seed(params.seed, "skipgram");
  sp.threads = params.deterministic ? 1 : threads;
  auto model = train_skipgram(corpus, n, sp);

  std::vector<UserId> ids;
  ids.reserve(model.vocabulary.size());
  for (auto i : model.vocabulary) ids.push_back(graph.ids[i]);
  for (auto i : model.absent) diag.absent_nodes.push_back(graph.ids[i]);

  Provenance provenance;
  provenance.seed = params.seed;
  provenance.snapshot_id = snapshot.id();
  provenance.hyperparameters = describe(params);
  return {EmbeddingSpace(std::move(ids), std::move(model.input_vectors), std::move(provenance)), std::move(diag)};
}

std::map<std::string, std::string> describe(const EmbedParams& p) {
  const char* mode = p.pair_mode == PairMode::exact ? "exact" : p.pair_mode == PairMode::top_m ? "top_m" : "auto";
  return {
      {"dim", std::to_string(p.dim)},
      {"walks", std::to_string(p.walks_per_node)},
      {"walk_length", std::to_string(p.walk_length)},
      {"stay_prob", fmt::format("{}", p.stay_probability)},
      {"kmax", std::to_string(p.k_max)},
      {"kmax_limit", std::to_string(p.k_max_limit)},
      {"window", std::to_string(p.window)},
      {"negatives", std::to_string(p.negatives)},
      {"epochs", std::to_string(p.epochs)},
      {"learning_rate", fmt::format("{}", p.learning_rate)},
      {"pair_mode", mode},
      {"top_m", std::to_string(p.top_m)},
      {"exact_pair_limit", std::to_string(p.exact_pair_limit)},
      {"include_self_loops", p.include_self_loops ? "true" : "false"},
      {"deterministic", p.deterministic ? "true" : "false"},
  };
}

}  // namespace rolechron
