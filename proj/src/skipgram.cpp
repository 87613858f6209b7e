#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <type_traits>

#include "rolechron/rng.hpp"
#include "rolechron/role_embed.hpp"

namespace rolechron {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vec = Eigen::Map<Eigen::VectorXd>;

inline double sigmoid(double x) {
  if (x > 30.0) return 1.0;
  if (x < -30.0) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

// Element access for the two training modes. Shared mode goes through relaxed
// atomics so concurrent updates are races on values, not undefined behaviour.
struct PlainAccess {
  static double load(const double& x) { return x; }
  static void add(double& x, double v) { x += v; }
};

struct SharedAccess {
  static double load(const double& x) {
    return std::atomic_ref<double>(const_cast<double&>(x)).load(std::memory_order_relaxed);
  }
  static void add(double& x, double v) {
    std::atomic_ref<double> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + v, std::memory_order_relaxed);
  }
};

struct Trainer {
  const WalkCorpus& corpus;
  const SkipGramParams& params;
  const std::vector<std::int64_t>& row_of;  // node -> vocabulary row
  const std::vector<double>& noise_cdf;
  RowMatrix& input;
  RowMatrix& output;
  std::size_t total_tokens;  // over all epochs

  std::size_t sample_noise(Engine& rng) const {
    const double r = uniform01(rng) * noise_cdf.back();
    auto it = std::upper_bound(noise_cdf.begin(), noise_cdf.end(), r);
    if (it == noise_cdf.end()) --it;
    return static_cast<std::size_t>(it - noise_cdf.begin());
  }

  // Trains on walks first, first + stride, first + 2 * stride, ...
  template <typename Access>
  void run(std::size_t first, std::size_t stride, Engine& rng, std::atomic<std::size_t>& progress) const {
    const auto dim = static_cast<std::size_t>(input.cols());
    const auto n = input.cols();
    std::vector<double> grad(dim);
    const double lr0 = params.learning_rate;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
      for (std::size_t w = first; w < corpus.walks.size(); w += stride) {
        const auto& walk = corpus.walks[w];
        for (std::size_t pos = 0; pos < walk.size(); ++pos) {
          const auto done = progress.fetch_add(1, std::memory_order_relaxed);
          const double lr =
              lr0 * std::max(1e-4, 1.0 - static_cast<double>(done) / static_cast<double>(total_tokens + 1));
          const auto center = static_cast<std::size_t>(row_of[walk[pos]]);
          const auto shrink = uniform_index(rng, params.window);
          const auto reach = params.window - shrink;
          const auto lo = pos >= reach ? pos - reach : 0;
          const auto hi = std::min(walk.size() - 1, pos + reach);
          for (std::size_t c = lo; c <= hi; ++c) {
            if (c == pos) continue;
            double* ctx = input.row(row_of[walk[c]]).data();
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t s = 0; s <= params.negatives; ++s) {
              std::size_t target;
              double label;
              if (s == 0) {
                target = center;
                label = 1.0;
              } else {
                target = sample_noise(rng);
                if (target == center) continue;
                label = 0.0;
              }
              double* out = output.row(static_cast<Eigen::Index>(target)).data();
              if constexpr (std::is_same_v<Access, PlainAccess>) {
                Vec o(out, n), x(ctx, n);
                const double g = (label - sigmoid(x.dot(o))) * lr;
                Vec(grad.data(), n) += g * o;
                o += g * x;
              } else {
                double f = 0.0;
                for (std::size_t j = 0; j < dim; ++j) f += Access::load(ctx[j]) * Access::load(out[j]);
                const double g = (label - sigmoid(f)) * lr;
                for (std::size_t j = 0; j < dim; ++j) grad[j] += g * Access::load(out[j]);
                for (std::size_t j = 0; j < dim; ++j) Access::add(out[j], g * Access::load(ctx[j]));
              }
            }
            if constexpr (std::is_same_v<Access, PlainAccess>) {
              Vec(ctx, n) += Vec(grad.data(), n);
            } else {
              for (std::size_t j = 0; j < dim; ++j) Access::add(ctx[j], grad[j]);
            }
          }
        }
      }
    }
  }
};

}  // namespace

SkipGramModel train_skipgram(const WalkCorpus& corpus, std::size_t node_count, const SkipGramParams& params) {
  if (params.dim < 2) throw std::invalid_argument("train_skipgram: dim must be >= 2");
  if (params.window == 0 || params.epochs == 0)
    throw std::invalid_argument("train_skipgram: window and epochs must be positive");

  std::vector<std::size_t> counts(node_count, 0);
  std::size_t tokens = 0;
  for (const auto& walk : corpus.walks) {
    for (auto t : walk) {
      if (t >= node_count) throw std::invalid_argument("train_skipgram: token outside node range");
      ++counts[t];
    }
    tokens += walk.size();
  }
  if (tokens == 0) throw std::invalid_argument("train_skipgram: empty corpus");

  SkipGramModel model;
  std::vector<std::int64_t> row_of(node_count, -1);
  for (NodeIndex i = 0; i < node_count; ++i) {
    if (counts[i] == 0) {
      model.absent.push_back(i);
      continue;
    }
    row_of[i] = static_cast<std::int64_t>(model.vocabulary.size());
    model.vocabulary.push_back(i);
  }

  const auto vocab = static_cast<Eigen::Index>(model.vocabulary.size());
  const auto dim = static_cast<Eigen::Index>(params.dim);
  std::vector<double> noise_cdf;
  noise_cdf.reserve(model.vocabulary.size());
  double acc = 0.0;
  for (auto node : model.vocabulary) noise_cdf.push_back(acc += std::pow(static_cast<double>(counts[node]), 0.75));

  auto init_rng = make_engine(derive_seed(params.seed, "init"));
  RowMatrix input(vocab, dim);
  for (Eigen::Index i = 0; i < vocab; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) input(i, j) = (uniform01(init_rng) - 0.5) / static_cast<double>(dim);
  RowMatrix output = RowMatrix::Zero(vocab, dim);

  Trainer trainer{corpus, params, row_of, noise_cdf, input, output, tokens * params.epochs};
  std::atomic<std::size_t> progress{0};
  const unsigned threads = std::max(1u, std::min<unsigned>(params.threads, static_cast<unsigned>(corpus.walks.size())));
  if (threads == 1) {
    auto rng = make_engine(derive_seed(params.seed, "train"));
    trainer.run<PlainAccess>(0, 1, rng, progress);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        auto rng = make_engine(derive_seed(params.seed, std::uint64_t{t} + 1));
        trainer.run<SharedAccess>(t, threads, rng, progress);
      });
  }

  model.input_vectors = input;
  model.output_vectors = output;
  return model;
}

}  // namespace rolechron
