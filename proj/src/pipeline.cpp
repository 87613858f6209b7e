#include "rolechron/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <functional>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "rolechron/align.hpp"
#include "rolechron/digest.hpp"
#include "rolechron/drift.hpp"
#include "rolechron/embedding_space.hpp"
#include "rolechron/graph.hpp"
#include "rolechron/rng.hpp"
#include "rolechron/role_embed.hpp"
#include "rolechron/svg.hpp"

namespace rolechron {

namespace fs = std::filesystem;

std::string to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::embed: return "embed";
    case Stage::align: return "align";
    case Stage::analyze: return "analyze";
    case Stage::report: return "report";
  }
  return "?";
}

Stage parse_stage(const std::string& text) {
  for (Stage s : kStages)
    if (to_string(s) == text) return s;
  throw std::invalid_argument("unknown stage '" + text + "'");
}

StageDependencyError::StageDependencyError(Stage stage, Stage required)
    : std::runtime_error(fmt::format("stage '{}' needs the '{}' stage to run first", to_string(stage),
                                     to_string(required))),
      required_(required) {}

void write_stage_record(std::ostream& out, const StageRecord& r) {
  out << "stage " << to_string(r.stage) << '\n';
  out << fmt::format("seconds {:.3f}\n", r.seconds);
  out << "seed " << r.seed << '\n';
  for (const auto& a : r.inputs) out << "input " << a.digest << ' ' << a.path << '\n';
  for (const auto& a : r.outputs) out << "output " << a.digest << ' ' << a.path << '\n';
  for (const auto& s : r.subreddits) out << "subreddit " << s << '\n';
  for (const auto& [s, why] : r.skipped) out << "skipped " << s << ' ' << why << '\n';
  for (const auto& n : r.notes) out << "note " << n << '\n';
}

StageRecord read_stage_record(std::istream& in) {
  StageRecord r;
  for (std::string line; std::getline(in, line);) {
    const auto sp = line.find(' ');
    if (sp == std::string::npos) continue;
    const auto key = line.substr(0, sp);
    const auto rest = line.substr(sp + 1);
    const auto sp2 = rest.find(' ');
    auto head = rest.substr(0, sp2);
    auto tail = sp2 == std::string::npos ? std::string() : rest.substr(sp2 + 1);
    if (key == "stage") r.stage = parse_stage(rest);
    else if (key == "seconds") r.seconds = std::stod(rest);
    else if (key == "seed") r.seed = std::stoull(rest);
    else if (key == "input") r.inputs.push_back({tail, head});
    else if (key == "output") r.outputs.push_back({tail, head});
    else if (key == "subreddit") r.subreddits.push_back(rest);
    else if (key == "skipped") r.skipped.emplace_back(head, tail);
    else if (key == "note") r.notes.push_back(rest);
  }
  return r;
}

void write_run_manifest(std::ostream& out, const RunManifest& m) {
  out << "[config]\n";
  for (const auto& [k, v] : m.config) out << k << " = " << v << '\n';
  for (const auto& r : m.stages) {
    out << "\n[" << to_string(r.stage) << "]\n";
    write_stage_record(out, r);
  }
}

namespace {

using Clock = std::chrono::steady_clock;

std::string window_pair(int a, int b) { return window_tag(a) + "-" + window_tag(b); }

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

std::ofstream open_out(const fs::path& p, std::ios::openmode mode = std::ios::out) {
  ensure_parent(p);
  std::ofstream out(p, mode | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return in;
}

std::vector<UserId> read_lines(const fs::path& p) {
  auto in = open_in(p);
  std::vector<UserId> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

// Collects the artifacts a subreddit task produced, relative to the output root.
struct Outcome {
  std::string subreddit;
  bool ok = false;
  std::string reason;
  std::vector<fs::path> outputs;
  std::vector<std::string> notes;
};

class Run {
 public:
  Run(const PipelineConfig& config, Stage stage, std::ostream* log) : config_(config), log_(log) {
    record_.stage = stage;
    record_.seed = config.seed;
  }

  fs::path path(const fs::path& rel) const { return config_.output / rel; }

  void add_output(const fs::path& rel) { record_.outputs.push_back({rel.generic_string(), file_sha256(path(rel))}); }
  void add_input(const fs::path& p, bool inside_output) {
    const auto shown = inside_output ? p.generic_string() : fs::absolute(p).lexically_normal().generic_string();
    record_.inputs.push_back({shown, file_sha256(inside_output ? path(p) : p)});
  }
  void note(const std::string& n) {
    log(n);
    record_.notes.push_back(n);
  }

  void log(const std::string& line) {
    if (!log_) return;
    std::lock_guard lock(log_mutex_);
    *log_ << '[' << to_string(record_.stage) << "] " << line << '\n';
  }

  // Runs `task` for every subreddit, concurrently unless deterministic.
  void for_each(const std::vector<std::string>& subreddits, const std::function<void(Outcome&)>& task) {
    std::vector<Outcome> outcomes(subreddits.size());
    for (std::size_t i = 0; i < subreddits.size(); ++i) outcomes[i].subreddit = subreddits[i];
    auto work = [&](Outcome& o) {
      try {
        task(o);
        o.ok = true;
      } catch (const std::exception& e) {
        o.ok = false;
        o.reason = e.what();
      }
    };
    const auto workers = std::min<std::size_t>(config_.effective_threads(), subreddits.size());
    if (workers <= 1) {
      for (auto& o : outcomes) work(o);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < workers; ++t)
        pool.emplace_back([&] {
          for (std::size_t i; (i = next.fetch_add(1)) < outcomes.size();) work(outcomes[i]);
        });
    }
    for (auto& o : outcomes) {
      for (const auto& n : o.notes) note(o.subreddit + ": " + n);
      if (o.ok) {
        record_.subreddits.push_back(o.subreddit);
        for (const auto& p : o.outputs) add_output(p);
      } else {
        log(fmt::format("skipping {}: {}", o.subreddit, o.reason));
        record_.skipped.emplace_back(o.subreddit, o.reason);
      }
    }
  }

  void done(const std::string& subreddit) { record_.subreddits.push_back(subreddit); }

  StageRecord finish(Clock::time_point start) {
    record_.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return std::move(record_);
  }

  unsigned inner_threads(std::size_t subreddits) const {
    const auto total = config_.effective_threads();
    return std::max(1u, static_cast<unsigned>(total / std::max<std::size_t>(1, subreddits)));
  }

 private:
  const PipelineConfig& config_;
  std::ostream* log_;
  std::mutex log_mutex_;
  StageRecord record_;
};

fs::path snapshot_rel(const std::string& sub, int w) { return fs::path("snapshots") / sub / (window_tag(w) + ".edges"); }
fs::path embedding_rel(const std::string& sub, int w, bool dup = false) {
  return fs::path("embeddings") / sub / (window_tag(w) + (dup ? ".dup.emb" : ".emb"));
}
fs::path aligned_rel(const std::string& sub, int from, int to, const std::string& ext) {
  return fs::path("alignment") / sub / fmt::format("{}_to_{}.{}", window_tag(from), window_tag(to), ext);
}
fs::path anchors_rel(const std::string& sub) { return fs::path("anchors") / (sub + ".txt"); }
fs::path analysis_rel(const std::string& sub, const std::string& name) { return fs::path("analysis") / sub / name; }

void write_projection(std::ostream& out, const PcaProjection& p) {
  out << fmt::format("# explained {} {}\n", p.explained(0), p.explained(1));
  for (std::size_t i = 0; i < p.keys.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out << fmt::format("{}\t{}\t{}\t{}\n", p.keys[i].user, p.keys[i].window, p.coords(r, 0), p.coords(r, 1));
  }
}

PcaProjection read_projection(std::istream& in) {
  PcaProjection p;
  std::vector<std::array<double, 2>> xy;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string tag;
      ls >> tag >> tag >> p.explained(0) >> p.explained(1);
      continue;
    }
    RowKey key;
    double x = 0, y = 0;
    std::getline(ls, key.user, '\t');
    if (!(ls >> key.window >> x >> y)) throw std::runtime_error("bad projection row '" + line + "'");
    p.keys.push_back(key);
    xy.push_back({x, y});
  }
  p.coords.resize(static_cast<Eigen::Index>(xy.size()), 2);
  for (std::size_t i = 0; i < xy.size(); ++i) {
    p.coords(static_cast<Eigen::Index>(i), 0) = xy[i][0];
    p.coords(static_cast<Eigen::Index>(i), 1) = xy[i][1];
  }
  return p;
}

EmbeddingSpace load_space(const fs::path& p) { return load_text(p); }

}  // namespace

Pipeline::Pipeline(PipelineConfig config, std::ostream* log) : config_(std::move(config)), log_(log) {
  validate(config_);
  manifest_ = read_manifest(config_.manifest);
  if (manifest_.windows.size() < 2)
    throw std::invalid_argument(fmt::format("manifest {} defines {} window(s); need >= 2", config_.manifest.string(),
                                            manifest_.windows.size()));
  if (manifest_.subreddits.empty()) throw std::invalid_argument("manifest " + config_.manifest.string() + " lists no subreddits");
}

std::optional<StageRecord> Pipeline::record(Stage stage) const {
  const auto p = config_.output / "stages" / (to_string(stage) + ".record");
  if (!fs::exists(p)) return std::nullopt;
  auto in = open_in(p);
  return read_stage_record(in);
}

RunManifest Pipeline::run_manifest() const {
  RunManifest m;
  m.config = describe(config_);
  for (Stage s : kStages)
    if (auto r = record(s)) m.stages.push_back(std::move(*r));
  return m;
}

StageRecord Pipeline::run(Stage stage) {
  const auto index = static_cast<std::size_t>(stage);
  if (index > 0 && !record(kStages[index - 1])) throw StageDependencyError(stage, kStages[index - 1]);
  for (std::size_t later = index; later < std::size(kStages); ++later)
    fs::remove(config_.output / "stages" / (to_string(kStages[later]) + ".record"));

  StageRecord r;
  switch (stage) {
    case Stage::ingest: r = ingest(); break;
    case Stage::embed: r = embed(); break;
    case Stage::align: r = align(); break;
    case Stage::analyze: r = analyze(); break;
    case Stage::report: r = report(); break;
  }
  {
    auto out = open_out(config_.output / "stages" / (to_string(stage) + ".record"));
    write_stage_record(out, r);
  }
  auto out = open_out(config_.output / "run_manifest");
  write_run_manifest(out, run_manifest());
  return r;
}

RunManifest Pipeline::run_all() {
  for (Stage s : kStages) run(s);
  return run_manifest();
}

StageRecord Pipeline::ingest() {
  const auto start = Clock::now();
  Run run(config_, Stage::ingest, log_);
  run.add_input(config_.manifest, false);

  std::vector<std::string> subs;
  for (const auto& [name, label] : manifest_.subreddits) subs.push_back(name);

  std::mutex snapshots_mutex;
  std::map<std::string, std::vector<TemporalSnapshot>> loaded;
  run.for_each(subs, [&](Outcome& o) {
    const auto label = manifest_.subreddits.at(o.subreddit);
    auto windows = load_windows(config_.data_root, o.subreddit, label, manifest_.windows);
    {
      std::lock_guard lock(snapshots_mutex);
      loaded[o.subreddit] = windows;
    }
    std::vector<std::vector<UserId>> tops;
    for (const auto& w : windows) {
      if (w.empty_warning) o.notes.push_back(fmt::format("{} has no edges", window_tag(w.window_index)));
      const auto rel = snapshot_rel(o.subreddit, w.window_index);
      auto out = open_out(run.path(rel));
      write_edge_list(out, w.graph);
      out.close();
      o.outputs.push_back(rel);
      auto top = top_k_users(w, config_.k_top, config_.activity);
      if (top.shortfall)
        o.notes.push_back(fmt::format("{} has only {} users (k_top {})", window_tag(w.window_index), top.users.size(),
                                      config_.k_top));
      tops.push_back(std::move(top.users));
    }
    const auto anchors = anchor_overlap(tops);
    if (anchors.size() < 2)
      throw std::runtime_error(fmt::format("anchor overlap has {} user(s); alignment needs >= 2", anchors.size()));
    const auto rel = anchors_rel(o.subreddit);
    auto out = open_out(run.path(rel));
    for (const auto& u : anchors.users) out << u << '\n';
    out.close();
    o.outputs.push_back(rel);
  });

  // Month files are inputs; the summary covers every subreddit that loaded,
  // including those later skipped for a thin anchor overlap.
  for (const auto& [sub, windows] : loaded)
    for (const auto& w : manifest_.windows)
      for (const auto& m : w.months) run.add_input(month_path(config_.data_root, sub, m), false);
  std::vector<TemporalSnapshot> all;
  for (auto& [sub, windows] : loaded)
    for (auto& w : windows) all.push_back(std::move(w));
  {
    auto out = open_out(run.path("summary.csv"));
    write_summary_csv(out, summarize(all));
  }
  run.add_output("summary.csv");
  return run.finish(start);
}

StageRecord Pipeline::embed() {
  const auto start = Clock::now();
  Run run(config_, Stage::embed, log_);
  const auto prior = *record(Stage::ingest);
  const auto threads = run.inner_threads(prior.subreddits.size());

  run.for_each(prior.subreddits, [&](Outcome& o) {
    const auto label = manifest_.subreddits.at(o.subreddit);
    for (const auto& w : manifest_.windows) {
      auto in = open_in(run.path(snapshot_rel(o.subreddit, w.index)));
      const auto snapshot = parse_edge_list(in, o.subreddit, w.index, {label, w.months});
      if (snapshot.graph.empty()) throw std::runtime_error(window_tag(w.index) + " is empty");

      auto params = config_.embedding;
      params.seed = config_.seed;
      params.deterministic = config_.deterministic;
      params.threads = threads;
      auto result = rolechron::embed(snapshot, params);
      if (result.diagnostics.degenerate_context) o.notes.push_back(window_tag(w.index) + ": degenerate context graph");
      if (!result.diagnostics.absent_nodes.empty())
        o.notes.push_back(fmt::format("{}: {} node(s) absent from the walk corpus", window_tag(w.index),
                                      result.diagnostics.absent_nodes.size()));
      const auto rel = embedding_rel(o.subreddit, w.index);
      save_text(run.path(rel), result.space);
      o.outputs.push_back(rel);

      if (config_.duplicate_eval) {
        params.seed = derive_seed(config_.seed, "duplicate");
        const auto dup = rolechron::embed(snapshot, params);
        const auto drel = embedding_rel(o.subreddit, w.index, true);
        save_text(run.path(drel), dup.space);
        o.outputs.push_back(drel);
      }
    }
  });
  for (const auto& a : prior.outputs)
    if (a.path.starts_with("snapshots/")) run.add_input(a.path, true);
  return run.finish(start);
}

StageRecord Pipeline::align() {
  const auto start = Clock::now();
  Run run(config_, Stage::align, log_);
  const auto prior = *record(Stage::embed);
  std::mutex eval_mutex;
  std::map<std::string, std::vector<AlignmentEvalRow>> eval_rows;

  run.for_each(prior.subreddits, [&](Outcome& o) {
    const auto anchors = read_lines(run.path(anchors_rel(o.subreddit)));
    std::vector<AlignmentEvalRow> rows;
    auto fit = [&](const EmbeddingSpace& source, const EmbeddingSpace& target, const std::string& pair) {
      auto result = procrustes_align(source, target, anchors, config_.alignment);
      if (result.rank_deficient) o.notes.push_back(pair + ": rank-deficient anchor block");
      rows.push_back({o.subreddit, pair, evaluate_alignment(target, source, result.aligned_source, anchors)});
      return result;
    };

    const auto& windows = manifest_.windows;
    for (std::size_t i = 0; i < windows.size(); ++i) {
      const auto w = windows[i].index;
      const auto space = load_space(run.path(embedding_rel(o.subreddit, w)));
      if (config_.duplicate_eval) {
        const auto dup = load_space(run.path(embedding_rel(o.subreddit, w, true)));
        fit(dup, space, fmt::format("{}~{}dup", window_tag(w), window_tag(w)));
      }
      if (i == 0) continue;
      const auto prev = windows[i - 1].index;
      const auto target = load_space(run.path(embedding_rel(o.subreddit, prev)));
      const auto result = fit(space, target, window_pair(prev, w));
      const auto rot = aligned_rel(o.subreddit, w, prev, "rot");
      {
        auto out = open_out(run.path(rot));
        write_alignment(out, result);
      }
      const auto emb = aligned_rel(o.subreddit, w, prev, "emb");
      save_text(run.path(emb), result.aligned_source);
      o.outputs.push_back(rot);
      o.outputs.push_back(emb);
    }
    std::lock_guard lock(eval_mutex);
    eval_rows[o.subreddit] = std::move(rows);
  });

  std::vector<AlignmentEvalRow> all;
  for (auto& [sub, rows] : eval_rows)
    for (auto& r : rows) all.push_back(std::move(r));
  {
    auto out = open_out(run.path("alignment_eval.csv"));
    write_alignment_eval_csv(out, all);
  }
  run.add_output("alignment_eval.csv");
  for (const auto& a : prior.outputs) run.add_input(a.path, true);
  return run.finish(start);
}

StageRecord Pipeline::analyze() {
  const auto start = Clock::now();
  Run run(config_, Stage::analyze, log_);
  const auto prior = *record(Stage::align);
  KMeansOptions kopts;
  kopts.n_init = config_.n_init;

  run.for_each(prior.subreddits, [&](Outcome& o) {
    const auto label = manifest_.subreddits.at(o.subreddit);
    const auto sub_seed = derive_seed(config_.seed, o.subreddit);
    const auto& windows = manifest_.windows;
    std::vector<DriftRow> rows;
    std::optional<PcaProjection> previous;

    for (std::size_t i = 1; i < windows.size(); ++i) {
      const int wa = windows[i - 1].index, wb = windows[i].index;
      const auto pair = window_pair(wa, wb);
      const auto earlier = load_space(run.path(embedding_rel(o.subreddit, wa)));
      const auto later = load_space(run.path(aligned_rel(o.subreddit, wb, wa, "emb")));

      DriftRow row;
      row.subreddit = o.subreddit;
      row.class_label = label;
      row.window_pair = pair;
      const auto users = shared_ids(earlier, later);
      const auto drift = user_drift(earlier, later, users, wa, wb);
      if (!drift.skipped_zero_vector.empty())
        o.notes.push_back(fmt::format("{}: {} zero vector(s) skipped", pair, drift.skipped_zero_vector.size()));
      std::vector<double> values;
      for (const auto& d : drift.drifts) values.push_back(d.drift);
      const auto stats = subreddit_drift({{o.subreddit, values}});
      if (!stats.groups.empty()) {
        row.n_users = stats.groups[0].n;
        row.mean_cos_dist = stats.groups[0].mean;
        row.std_cos_dist = stats.groups[0].std;
      }
      {
        const auto rel = analysis_rel(o.subreddit, pair + ".users.tsv");
        auto out = open_out(run.path(rel));
        for (const auto& d : drift.drifts) out << fmt::format("{}\t{}\n", d.user, d.drift);
        out.close();
        o.outputs.push_back(rel);
      }

      auto projection = pca_project(amalgamate(earlier, wa, later, wb));
      if (previous) {
        const auto shared = shared_keys(*previous, projection);
        if (!shared.empty()) {
          auto fixed = sign_align(*previous, projection, shared);
          if (fixed.zero_agreement_warning) o.notes.push_back(pair + ": zero sign agreement on a component");
          projection = std::move(fixed.projection);
        }
      }
      {
        const auto rel = analysis_rel(o.subreddit, pair + ".projection.tsv");
        auto out = open_out(run.path(rel));
        write_projection(out, projection);
        out.close();
        o.outputs.push_back(rel);
      }

      // Role clusters of each window inside the shared projection.
      try {
        std::vector<Eigen::Index> ra, rb;
        for (std::size_t k = 0; k < projection.keys.size(); ++k)
          (projection.keys[k].window == wa ? ra : rb).push_back(static_cast<Eigen::Index>(k));
        const Eigen::MatrixXd pa = projection.coords(ra, Eigen::all);
        const Eigen::MatrixXd pb = projection.coords(rb, Eigen::all);
        const auto pair_seed = derive_seed(sub_seed, pair);
        const auto ea = elbow_k(pa, derive_seed(pair_seed, "elbow-a"), config_.k_min, config_.k_max, kopts);
        const auto eb = elbow_k(pb, derive_seed(pair_seed, "elbow-b"), config_.k_min, config_.k_max, kopts);
        if (ea.flat_warning || eb.flat_warning) o.notes.push_back(pair + ": flat inertia curve");
        const auto k = std::min(ea.k_star, eb.k_star);
        const auto ca = cluster_roles(pa, k, derive_seed(pair_seed, "cluster-a"), kopts);
        const auto cb = cluster_roles(pb, k, derive_seed(pair_seed, "cluster-b"), kopts);
        row.k_star = k;
        row.mean_centroid_dist = centroid_drift(ca.centroids, cb.centroids).mean;
        row.silhouette_t = ca.silhouette;
        row.silhouette_t_next = cb.silhouette;
      } catch (const std::invalid_argument& e) {
        o.notes.push_back(pair + ": clustering skipped: " + e.what());
      }

      rows.push_back(std::move(row));
      previous = std::move(projection);
    }
    const auto rel = analysis_rel(o.subreddit, "rows.csv");
    auto out = open_out(run.path(rel));
    write_drift_rows(out, rows);
    out.close();
    o.outputs.push_back(rel);
  });
  for (const auto& a : prior.outputs)
    if (a.path.ends_with(".emb")) run.add_input(a.path, true);
  return run.finish(start);
}

StageRecord Pipeline::report() {
  const auto start = Clock::now();
  Run run(config_, Stage::report, log_);
  const auto prior = *record(Stage::analyze);

  std::vector<DriftRow> rows;
  for (const auto& sub : prior.subreddits) {
    const auto rel = analysis_rel(sub, "rows.csv");
    auto in = open_in(run.path(rel));
    auto part = read_drift_rows(in);
    rows.insert(rows.end(), part.begin(), part.end());
    run.add_input(rel, true);
    run.done(sub);
  }
  const auto report = drift_report(std::move(rows));
  {
    auto out = open_out(run.path("drift.csv"));
    write_drift_csv(out, report);
  }
  {
    auto out = open_out(run.path("drift_summary.txt"));
    write_drift_summary(out, report);
  }
  run.add_output("drift.csv");
  run.add_output("drift_summary.txt");

  std::vector<Bar> user_bars, centroid_bars;
  for (const auto& r : report.rows) {
    const auto label = r.subreddit + " " + r.window_pair;
    user_bars.push_back({label, to_string(r.class_label), r.mean_cos_dist});
    if (r.mean_centroid_dist) centroid_bars.push_back({label, to_string(r.class_label), *r.mean_centroid_dist});
  }
  for (const auto& r : report.aggregates) {
    const auto label = to_string(r.class_label) + " " + r.window_pair;
    user_bars.push_back({label, "mean", r.mean_cos_dist});
    if (r.mean_centroid_dist) centroid_bars.push_back({label, "mean", *r.mean_centroid_dist});
  }
  const fs::path plots = "plots";
  {
    auto out = open_out(run.path(plots / "user_drift.svg"));
    write_bar_chart_svg(out, user_bars, "Mean user role drift", "1 - cos");
  }
  {
    auto out = open_out(run.path(plots / "centroid_drift.svg"));
    write_bar_chart_svg(out, centroid_bars, "Mean centroid drift", "distance");
  }
  run.add_output(plots / "user_drift.svg");
  run.add_output(plots / "centroid_drift.svg");

  for (const auto& r : report.rows) {
    const auto rel = analysis_rel(r.subreddit, r.window_pair + ".projection.tsv");
    if (!fs::exists(run.path(rel))) continue;
    auto in = open_in(run.path(rel));
    const auto projection = read_projection(in);
    const auto svg = plots / fmt::format("{}_{}.svg", r.subreddit, r.window_pair);
    auto out = open_out(run.path(svg));
    write_projection_svg(out, projection, fmt::format("{} {} Aligned", r.subreddit, r.window_pair));
    out.close();
    run.add_input(rel, true);
    run.add_output(svg);
  }
  return run.finish(start);
}

}  // namespace rolechron
