#ifndef ROLECHRON_CONFIG_HPP
#define ROLECHRON_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "rolechron/align.hpp"
#include "rolechron/graph.hpp"
#include "rolechron/role_embed.hpp"

namespace rolechron {

/// Pipeline settings. Every key has a default; `describe` lists the effective
/// values for the run manifest.
///
///   [data]       root, manifest
///   [selection]  k_top, activity (strength|degree), include_self_loops
///   [embedding]  dim, walks, walk_length, stay_prob, kmax, kmax_limit, window,
///                negatives, epochs, learning_rate, pair_mode (auto|exact|top_m),
///                top_m, exact_pair_limit
///   [alignment]  center, scale, duplicate_eval
///   [analysis]   k_min, k_max, n_init
///   [run]        seed, deterministic, threads, output
struct PipelineConfig {
  std::filesystem::path data_root = "data";
  std::filesystem::path manifest = "manifest.ini";
  std::filesystem::path output = "out";
  std::size_t k_top = 100;
  ActivityOptions activity;
  EmbedParams embedding;
  AlignmentOptions alignment;
  bool duplicate_eval = true;
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::size_t n_init = 10;
  std::uint64_t seed = 42;
  bool deterministic = false;
  unsigned threads = 0;  // 0: hardware concurrency

  unsigned effective_threads() const;
};

/// Relative paths are resolved against the config file's directory. The
/// result is validated.
PipelineConfig load_config(const std::filesystem::path& path);

/// Throws std::invalid_argument on out-of-range settings.
void validate(const PipelineConfig& config);

std::vector<std::pair<std::string, std::string>> describe(const PipelineConfig& config);

}  // namespace rolechron

#endif
