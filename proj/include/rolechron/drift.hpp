#ifndef ROLECHRON_DRIFT_HPP
#define ROLECHRON_DRIFT_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rolechron/cluster.hpp"
#include "rolechron/embedding_space.hpp"
#include "rolechron/graph.hpp"

namespace rolechron {

struct UserDrift {
  UserId user;
  int window_from = 0;
  int window_to = 0;
  double drift = 0.0;  // 1 - cos
};

struct UserDriftResult {
  std::vector<UserDrift> drifts;
  std::vector<UserId> skipped_zero_vector;
};

/// 1 - cos(v_t, v_{t+d}) per user. `later` must already be aligned to `earlier`.
UserDriftResult user_drift(const EmbeddingSpace& earlier, const EmbeddingSpace& later, std::span<const UserId> users,
                           int window_from = 0, int window_to = 0);

struct SubredditDrift {
  std::string subreddit;
  double mean = 0.0;
  double std = 0.0;  // population
  std::size_t n = 0;
};

struct SubredditDriftResult {
  std::vector<SubredditDrift> groups;
  std::vector<std::string> excluded_empty;
};

SubredditDriftResult subreddit_drift(const std::map<std::string, std::vector<double>>& drifts_by_subreddit);

struct RoleClustering {
  Eigen::MatrixXd points;
  std::size_t k = 0;
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double inertia = 0.0;
  std::map<std::size_t, double> inertia_curve;
  std::optional<double> silhouette;
  std::uint64_t seed = 0;
};

/// k-means at a fixed k, with silhouette when it is defined.
RoleClustering cluster_roles(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed,
                             const KMeansOptions& options = {});

struct CentroidDrift {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // a index -> nearest b index
  std::vector<double> distances;
  double mean = 0.0;
};

/// 1-NN match of every centroid of `a` to the centroids of `b`; several a
/// centroids may share one b centroid. Throws when the counts differ.
CentroidDrift centroid_drift(const Eigen::MatrixXd& centroids_a, const Eigen::MatrixXd& centroids_b);

struct DriftRow {
  std::string subreddit;
  ClassLabel class_label = ClassLabel::unlabeled;
  std::string window_pair;  // "T1-T2"
  std::size_t n_users = 0;
  double mean_cos_dist = 0.0;
  double std_cos_dist = 0.0;
  std::optional<std::size_t> k_star;
  std::optional<double> mean_centroid_dist;
  std::optional<double> silhouette_t;
  std::optional<double> silhouette_t_next;
};

struct DriftReport {
  std::vector<DriftRow> rows;       // sorted by subreddit then window pair
  std::vector<DriftRow> aggregates; // per class and window pair, subreddit "*"
};

DriftReport drift_report(std::vector<DriftRow> rows);

/// drift.csv: subreddit,class,window_pair,n_users,mean_cos_dist,std_cos_dist,
/// k_star,mean_centroid_dist,silhouette_t,silhouette_t_next. Missing values
/// are empty fields; aggregate rows follow the per-subreddit rows.
void write_drift_csv(std::ostream& out, const DriftReport& report);

/// Same columns at round-trip precision; the cache format read back by
/// read_drift_rows.
void write_drift_rows(std::ostream& out, std::span<const DriftRow> rows);
std::vector<DriftRow> read_drift_rows(std::istream& in);
void write_drift_summary(std::ostream& out, const DriftReport& report);

}  // namespace rolechron

#endif
