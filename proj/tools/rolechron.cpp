#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rolechron/config.hpp"
#include "rolechron/pipeline.hpp"
#include "rolechron/synth.hpp"

namespace fs = std::filesystem;
using namespace rolechron;

namespace {

struct RunOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
  std::string out;
};

PipelineConfig resolve(const RunOptions& o) {
  auto c = load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  if (o.deterministic) c.deterministic = true;
  if (!o.out.empty()) c.output = o.out;
  return c;
}

void write_roles(const fs::path& path, const PlantedRoleGraph& g) {
  std::ofstream out(path);
  for (const auto& [id, role] : g.role_of) out << id << '\t' << role << '\n';
}

void synth(const std::string& preset, const fs::path& out, std::uint64_t seed) {
  fs::create_directories(out);
  auto mirrored = [&](const std::string& spec) {
    const auto g = make_mirrored_graph(spec, 2, seed);
    write_graph_fixture(out / "graph.edges", g.graph);
    write_roles(out / "roles.tsv", g);
    std::ofstream pairs(out / "automorphic_pairs.tsv");
    for (const auto& [a, b] : g.automorphic_pairs) pairs << a << '\t' << b << '\n';
  };
  if (preset == "mirrored-cycle") {
    mirrored("cycle 10");
  } else if (preset == "mirrored-star") {
    mirrored("star 9");
  } else if (preset == "mixed") {
    mirrored("star 9, cycle 10");
  } else if (preset == "rotated") {
    const auto p = make_rotated_pair(200, 16, 0.01, seed);
    save_text(out / "base.emb", p.base);
    save_text(out / "rotated.emb", p.transformed);
    std::ofstream rot(out / "rotation.txt");
    rot.precision(17);
    rot << p.rotation << '\n';
  } else if (preset == "temporal" || preset == "self") {
    TemporalFixtureSpec spec;
    spec.seed = seed;
    if (preset == "self") {
      spec.windows = 2;
      spec.identical_windows = true;
    }
    write_temporal_fixture(out, spec);
  } else {
    throw std::invalid_argument("unknown preset '" + preset + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural role embeddings and role drift across temporal windows"};
  app.require_subcommand(1);

  RunOptions opts;
  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config, "config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "master seed");
    sub->add_flag("--deterministic", opts.deterministic, "single-threaded reproducible mode");
    sub->add_option("--out", opts.out, "output directory");
  };

  std::optional<Stage> stage;
  for (Stage s : kStages) {
    auto* sub = app.add_subcommand(to_string(s), fmt::format("run the {} stage", to_string(s)));
    add_run_options(sub);
    sub->callback([&stage, s] { stage = s; });
  }
  bool run_all = false;
  auto* run = app.add_subcommand("run", "run every stage");
  add_run_options(run);
  run->callback([&] { run_all = true; });

  std::string preset, synth_out;
  std::uint64_t synth_seed = 7;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic fixture");
  synth_cmd->add_option("--preset", preset, "mirrored-cycle|mirrored-star|mixed|rotated|temporal|self")->required();
  synth_cmd->add_option("--out", synth_out, "output directory")->required();
  synth_cmd->add_option("--seed", synth_seed, "fixture seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth_cmd->parsed()) {
      synth(preset, synth_out, synth_seed);
      std::cout << "wrote " << preset << " fixture to " << synth_out << '\n';
      return 0;
    }
    Pipeline pipeline(resolve(opts), &std::cerr);
    if (run_all) {
      pipeline.run_all();
    } else {
      const auto r = pipeline.run(*stage);
      std::cout << fmt::format("{}: {} subreddit(s) done, {} skipped, {:.2f}s\n", to_string(r.stage),
                               r.subreddits.size(), r.skipped.size(), r.seconds);
      return 0;
    }
    const auto m = pipeline.run_manifest();
    for (const auto& r : m.stages)
      std::cout << fmt::format("{}: {} subreddit(s) done, {} skipped, {:.2f}s\n", to_string(r.stage),
                               r.subreddits.size(), r.skipped.size(), r.seconds);
    std::cout << "outputs in " << pipeline.config().output.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "rolechron: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
