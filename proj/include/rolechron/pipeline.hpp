#ifndef ROLECHRON_PIPELINE_HPP
#define ROLECHRON_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rolechron/config.hpp"
#include "rolechron/dataset.hpp"

namespace rolechron {

enum class Stage { ingest, embed, align, analyze, report };

std::string to_string(Stage stage);
Stage parse_stage(const std::string& text);
inline constexpr Stage kStages[] = {Stage::ingest, Stage::embed, Stage::align, Stage::analyze, Stage::report};

class StageDependencyError : public std::runtime_error {
 public:
  StageDependencyError(Stage stage, Stage required);
  Stage required() const noexcept { return required_; }

 private:
  Stage required_;
};

struct Artifact {
  std::string path;  // relative to the output directory, or absolute for inputs outside it
  std::string digest;
  friend bool operator==(const Artifact&, const Artifact&) = default;
};

struct StageRecord {
  Stage stage = Stage::ingest;
  double seconds = 0.0;
  std::uint64_t seed = 0;
  std::vector<Artifact> inputs;
  std::vector<Artifact> outputs;
  std::vector<std::string> subreddits;                         // processed successfully
  std::vector<std::pair<std::string, std::string>> skipped;    // subreddit, reason
  std::vector<std::string> notes;
};

void write_stage_record(std::ostream& out, const StageRecord& record);
StageRecord read_stage_record(std::istream& in);

struct RunManifest {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<StageRecord> stages;  // in pipeline order, only those that have run
};

void write_run_manifest(std::ostream& out, const RunManifest& manifest);

/// Output layout under config.output:
///   summary.csv, snapshots/<sub>/T<i>.edges, anchors/<sub>.txt
///   embeddings/<sub>/T<i>.emb (+ T<i>.dup.emb)
///   alignment/<sub>/T<j>_to_T<i>.{rot,emb}, alignment_eval.csv
///   analysis/<sub>/rows.csv, analysis/<sub>/T<i>-T<j>.{projection,users}.tsv
///   drift.csv, drift_summary.txt, plots/*.svg
///   stages/<stage>.record, run_manifest
class Pipeline {
 public:
  /// Reads and validates the data manifest; throws if it is missing.
  explicit Pipeline(PipelineConfig config, std::ostream* log = nullptr);

  const PipelineConfig& config() const { return config_; }
  const Manifest& manifest() const { return manifest_; }

  /// Runs one stage from the cached output of the previous one. Rerunning a
  /// stage invalidates the stages after it.
  StageRecord run(Stage stage);
  RunManifest run_all();

  /// Config plus every stage record present on disk.
  RunManifest run_manifest() const;
  std::optional<StageRecord> record(Stage stage) const;

 private:
  StageRecord ingest();
  StageRecord embed();
  StageRecord align();
  StageRecord analyze();
  StageRecord report();

  PipelineConfig config_;
  Manifest manifest_;
  std::ostream* log_;
};

}  // namespace rolechron

#endif
