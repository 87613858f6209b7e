#include "rolechron/drift.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <set>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "rolechron/linalg.hpp"

namespace rolechron {

UserDriftResult user_drift(const EmbeddingSpace& earlier, const EmbeddingSpace& later, std::span<const UserId> users,
                           int window_from, int window_to) {
  if (users.empty()) throw std::invalid_argument("user_drift: no shared users");
  UserDriftResult out;
  for (const auto& id : users) {
    const auto a = earlier.row(id);
    const auto b = later.row(id);
    if (a.squaredNorm() == 0.0 || b.squaredNorm() == 0.0) {
      out.skipped_zero_vector.push_back(id);
      continue;
    }
    const double c = std::clamp(cosine_similarity(a, b), -1.0, 1.0);
    out.drifts.push_back({id, window_from, window_to, 1.0 - c});
  }
  return out;
}

SubredditDriftResult subreddit_drift(const std::map<std::string, std::vector<double>>& drifts_by_subreddit) {
  SubredditDriftResult out;
  for (const auto& [name, drifts] : drifts_by_subreddit) {
    if (drifts.empty()) {
      out.excluded_empty.push_back(name);
      continue;
    }
    SubredditDrift g;
    g.subreddit = name;
    g.n = drifts.size();
    for (double d : drifts) g.mean += d;
    g.mean /= static_cast<double>(g.n);
    for (double d : drifts) g.std += (d - g.mean) * (d - g.mean);
    g.std = std::sqrt(g.std / static_cast<double>(g.n));
    out.groups.push_back(std::move(g));
  }
  return out;
}

RoleClustering cluster_roles(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                             const KMeansOptions& options) {
  auto km = kmeans(points, k, seed, options);
  RoleClustering rc;
  rc.points = points;
  rc.k = k;
  rc.labels = std::move(km.labels);
  rc.centroids = std::move(km.centroids);
  rc.inertia = km.inertia;
  rc.seed = km.seed;
  const auto used = std::set<int>(rc.labels.begin(), rc.labels.end()).size();
  if (used >= 2) rc.silhouette = silhouette(points, rc.labels);
  return rc;
}

CentroidDrift centroid_drift(const Eigen::MatrixXd& centroids_a, const Eigen::MatrixXd& centroids_b) {
  if (centroids_a.rows() != centroids_b.rows())
    throw std::invalid_argument(fmt::format(
        "centroid_drift: cluster counts differ ({} vs {}); recluster both spaces at the shared k*",
        centroids_a.rows(), centroids_b.rows()));
  if (centroids_a.cols() != centroids_b.cols()) throw std::invalid_argument("centroid_drift: dimension mismatch");
  if (centroids_a.rows() == 0) throw std::invalid_argument("centroid_drift: no centroids");
  CentroidDrift out;
  for (Eigen::Index i = 0; i < centroids_a.rows(); ++i) {
    Eigen::Index nearest;
    const double d2 = (centroids_b.rowwise() - centroids_a.row(i)).rowwise().squaredNorm().minCoeff(&nearest);
    out.matches.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(nearest));
    out.distances.push_back(std::sqrt(d2));
    out.mean += out.distances.back();
  }
  out.mean /= static_cast<double>(out.distances.size());
  return out;
}

namespace {

bool row_less(const DriftRow& a, const DriftRow& b) {
  if (a.subreddit != b.subreddit) return a.subreddit < b.subreddit;
  return a.window_pair < b.window_pair;
}

std::optional<double> mean_of(std::span<const std::optional<double>> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& v : values)
    if (v) {
      sum += *v;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

}  // namespace

DriftReport drift_report(std::vector<DriftRow> rows) {
  DriftReport report;
  std::sort(rows.begin(), rows.end(), row_less);
  report.rows = std::move(rows);

  std::map<std::pair<ClassLabel, std::string>, std::vector<const DriftRow*>> groups;
  for (const auto& r : report.rows) groups[{r.class_label, r.window_pair}].push_back(&r);
  for (const auto& [key, members] : groups) {
    DriftRow agg;
    agg.subreddit = "*";
    agg.class_label = key.first;
    agg.window_pair = key.second;
    std::vector<std::optional<double>> centroid, sil_t, sil_next;
    for (const auto* r : members) {
      agg.n_users += r->n_users;
      agg.mean_cos_dist += r->mean_cos_dist;
      agg.std_cos_dist += r->std_cos_dist;
      centroid.push_back(r->mean_centroid_dist);
      sil_t.push_back(r->silhouette_t);
      sil_next.push_back(r->silhouette_t_next);
    }
    agg.mean_cos_dist /= static_cast<double>(members.size());
    agg.std_cos_dist /= static_cast<double>(members.size());
    agg.mean_centroid_dist = mean_of(centroid);
    agg.silhouette_t = mean_of(sil_t);
    agg.silhouette_t_next = mean_of(sil_next);
    report.aggregates.push_back(std::move(agg));
  }
  return report;
}

namespace {

constexpr const char* kHeader =
    "subreddit,class,window_pair,n_users,mean_cos_dist,std_cos_dist,k_star,mean_centroid_dist,silhouette_t,"
    "silhouette_t_next\n";

std::string num(double v, bool exact) { return exact ? fmt::format("{}", v) : fmt::format("{:.6f}", v); }

std::string opt(const std::optional<double>& v, bool exact) { return v ? num(*v, exact) : std::string(); }

void write_row(std::ostream& out, const DriftRow& r, bool exact) {
  out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.subreddit, to_string(r.class_label), r.window_pair,
                     r.n_users, num(r.mean_cos_dist, exact), num(r.std_cos_dist, exact),
                     r.k_star ? std::to_string(*r.k_star) : std::string(), opt(r.mean_centroid_dist, exact),
                     opt(r.silhouette_t, exact), opt(r.silhouette_t_next, exact));
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

}  // namespace

void write_drift_csv(std::ostream& out, const DriftReport& report) {
  out << kHeader;
  for (const auto& r : report.rows) write_row(out, r, false);
  for (const auto& r : report.aggregates) write_row(out, r, false);
}

void write_drift_rows(std::ostream& out, std::span<const DriftRow> rows) {
  out << kHeader;
  for (const auto& r : rows) write_row(out, r, true);
}

std::vector<DriftRow> read_drift_rows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  std::vector<DriftRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != 10) throw std::runtime_error("drift rows: expected 10 fields in '" + line + "'");
    DriftRow r;
    r.subreddit = f[0];
    r.class_label = parse_class_label(f[1]);
    r.window_pair = f[2];
    r.n_users = std::stoul(f[3]);
    r.mean_cos_dist = std::stod(f[4]);
    r.std_cos_dist = std::stod(f[5]);
    if (!f[6].empty()) r.k_star = std::stoul(f[6]);
    r.mean_centroid_dist = parse_opt(f[7]);
    r.silhouette_t = parse_opt(f[8]);
    r.silhouette_t_next = parse_opt(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_drift_summary(std::ostream& out, const DriftReport& report) {
  out << fmt::format("{} subreddit window pairs\n", report.rows.size());
  for (const auto& a : report.aggregates) {
    out << fmt::format("{:<9} {:<6} mean cosine distance {:.4f}", to_string(a.class_label), a.window_pair,
                       a.mean_cos_dist);
    if (a.mean_centroid_dist) out << fmt::format(", mean centroid distance {:.4f}", *a.mean_centroid_dist);
    if (a.silhouette_t && a.silhouette_t_next)
      out << fmt::format(", silhouette {:.4f} -> {:.4f}", *a.silhouette_t, *a.silhouette_t_next);
    out << '\n';
  }
}

}  // namespace rolechron
