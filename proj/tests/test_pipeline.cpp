#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "rolechron/config.hpp"
#include "rolechron/drift.hpp"
#include "rolechron/pipeline.hpp"
#include "rolechron/synth.hpp"
#include "support.hpp"

using namespace rolechron;
namespace fs = std::filesystem;

namespace {

// Small fixture with a cheap embedding so a full run takes a few seconds.
PipelineConfig fixture_config(const fs::path& root, std::size_t windows = 3, bool identical = false) {
  write_temporal_fixture(root, {.windows = windows, .months_per_window = 1, .identical_windows = identical,
                                .k_top = 20, .dim = 16});
  auto cfg = load_config(root / "rolechron.ini");
  cfg.embedding.walks_per_node = 4;
  cfg.embedding.walk_length = 30;
  cfg.embedding.epochs = 2;
  cfg.n_init = 3;
  cfg.deterministic = true;
  return cfg;
}

std::vector<DriftRow> drift_rows(const fs::path& output) {
  std::vector<DriftRow> all;
  for (const auto& entry : fs::directory_iterator(output / "analysis")) {
    std::ifstream in(entry.path() / "rows.csv");
    auto rows = read_drift_rows(in);
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

int cli(const std::string& args) {
  const std::string cmd = std::string(ROLECHRON_CLI) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("a missing manifest names the path") {
  testing::TempDir dir("pipe_missing");
  PipelineConfig cfg;
  cfg.manifest = dir.path() / "nowhere.ini";
  cfg.output = dir.path() / "out";
  try {
    Pipeline p(cfg);
    FAIL("expected an error");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("nowhere.ini") != std::string::npos);
  }
}

TEST_CASE("stages refuse to run before their inputs exist") {
  testing::TempDir dir("pipe_order");
  Pipeline p(fixture_config(dir.path()));
  CHECK_THROWS_AS(p.run(Stage::embed), StageDependencyError);
  CHECK_THROWS_AS(p.run(Stage::report), StageDependencyError);
  p.run(Stage::ingest);
  CHECK_THROWS_AS(p.run(Stage::align), StageDependencyError);
  try {
    p.run(Stage::analyze);
  } catch (const StageDependencyError& e) {
    CHECK(e.required() == Stage::align);
    CHECK(std::string(e.what()).find("align") != std::string::npos);
  }
}

TEST_CASE("full run: layout, rows per subreddit, repeatable report, stage isolation") {
  testing::TempDir dir("pipe_full");
  const auto cfg = fixture_config(dir.path());
  Pipeline p(cfg);
  const auto manifest = p.run_all();
  REQUIRE(manifest.stages.size() == 5);
  const auto out = cfg.output;
  for (const char* f : {"summary.csv", "alignment_eval.csv", "drift.csv", "drift_summary.txt", "run_manifest",
                        "plots/user_drift.svg", "plots/centroid_drift.svg"})
    CHECK_MESSAGE(fs::exists(out / f), f);

  // Three windows give two consecutive pairs for every processed subreddit.
  const auto processed = p.record(Stage::analyze)->subreddits;
  REQUIRE_FALSE(processed.empty());
  const auto rows = drift_rows(out);
  CHECK(rows.size() == 2 * processed.size());
  for (const auto& sub : processed) {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.subreddit == sub;
    CHECK(n == 2);
  }
  for (const auto& r : rows) {
    CHECK(r.mean_cos_dist >= 0.0);
    CHECK(r.mean_cos_dist <= 2.0);
  }

  const auto first = p.run(Stage::report).outputs;
  const auto second = p.run(Stage::report).outputs;
  CHECK(first == second);

  const auto drift_before = testing::slurp(out / "drift.csv");
  fs::remove_all(out / "analysis");
  p.run(Stage::analyze);
  CHECK_FALSE(p.record(Stage::report));  // later records are invalidated
  p.run(Stage::report);
  CHECK(testing::slurp(out / "drift.csv") == drift_before);

  std::ifstream rec(out / "stages" / "embed.record");
  const auto embed = read_stage_record(rec);
  CHECK(embed.stage == Stage::embed);
  CHECK(embed.seed == cfg.seed);
  CHECK_FALSE(embed.outputs.empty());
}

TEST_CASE("deterministic runs are byte-identical") {
  testing::TempDir a("pipe_det_a"), b("pipe_det_b");
  Pipeline(fixture_config(a.path(), 2)).run_all();
  Pipeline(fixture_config(b.path(), 2)).run_all();
  const auto da = testing::slurp(a.path() / "out" / "drift.csv");
  CHECK_FALSE(da.empty());
  CHECK(da == testing::slurp(b.path() / "out" / "drift.csv"));
}

TEST_CASE("identical windows drift very little") {
  testing::TempDir dir("pipe_self");
  const auto cfg = fixture_config(dir.path(), 2, true);
  Pipeline(cfg).run_all();
  for (const auto& r : drift_rows(cfg.output)) CHECK(r.mean_cos_dist < 0.05);
}

TEST_CASE("stage records round-trip") {
  StageRecord r;
  r.stage = Stage::align;
  r.seconds = 1.5;
  r.seed = 99;
  r.inputs = {{"embeddings/a/T1.emb", "abc"}};
  r.outputs = {{"alignment/a/T2_to_T1.rot", "def"}, {"alignment_eval.csv", "0123"}};
  r.subreddits = {"a", "b"};
  r.skipped = {{"c", "anchor overlap has 1 user"}};
  r.notes = {"something happened"};
  std::stringstream buf;
  write_stage_record(buf, r);
  const auto back = read_stage_record(buf);
  CHECK(back.stage == r.stage);
  CHECK(back.seed == r.seed);
  CHECK(back.inputs == r.inputs);
  CHECK(back.outputs == r.outputs);
  CHECK(back.subreddits == r.subreddits);
  CHECK(back.skipped == r.skipped);
  CHECK(back.notes == r.notes);
  for (auto s : kStages) CHECK(parse_stage(to_string(s)) == s);
  CHECK_THROWS(parse_stage("plot"));
}

TEST_CASE("config rejects unknown keys and bad values") {
  testing::TempDir dir("cfg");
  auto write = [&](const std::string& text) {
    std::ofstream(dir.path() / "c.ini") << text;
    return dir.path() / "c.ini";
  };
  const auto ok = load_config(write("[data]\nroot = d\nmanifest = m.ini\n[embedding]\ndim = 8\n"));
  CHECK(ok.embedding.dim == 8);
  CHECK(ok.manifest == dir.path() / "m.ini");
  CHECK_THROWS(load_config(write("[embedding]\ndimension = 8\n")));
  CHECK_THROWS(load_config(write("[plotting]\ncolor = red\n")));
  CHECK_THROWS(load_config(write("[embedding]\nstay_prob = 1.5\n")));
  CHECK_THROWS(load_config(write("[analysis]\nk_min = 5\nk_max = 3\n")));
}

TEST_CASE("cli: synth writes fixtures and errors exit non-zero") {
  testing::TempDir dir("cli");
  CHECK(cli("synth --preset mirrored-cycle --out " + (dir.path() / "m").string()) == 0);
  for (const char* f : {"graph.edges", "roles.tsv", "automorphic_pairs.tsv"}) CHECK(fs::exists(dir.path() / "m" / f));
  CHECK(cli("synth --preset rotated --out " + (dir.path() / "r").string()) == 0);
  CHECK(fs::exists(dir.path() / "r" / "rotation.txt"));
  CHECK(cli("synth --preset nonsense --out " + (dir.path() / "x").string()) != 0);
  CHECK(cli("embed --config " + (dir.path() / "missing.ini").string()) != 0);
}
