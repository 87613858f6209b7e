#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rolechron/drift.hpp"
#include "rolechron/synth.hpp"
#include "support.hpp"

using namespace rolechron;

namespace {

EmbeddingSpace space(std::vector<UserId> ids, Eigen::MatrixXd m) { return EmbeddingSpace(std::move(ids), std::move(m)); }

DriftRow row(std::string sub, ClassLabel label, std::string pair, std::size_t n, double mean, double sd) {
  DriftRow r;
  r.subreddit = std::move(sub);
  r.class_label = label;
  r.window_pair = std::move(pair);
  r.n_users = n;
  r.mean_cos_dist = mean;
  r.std_cos_dist = sd;
  return r;
}

}  // namespace

TEST_CASE("user drift examples") {
  Eigen::MatrixXd a(3, 2), b(3, 2);
  a << 1, 0, 0, 1, 1, 0;
  b << 2, 0, 1, 0, 1, 1;  // same direction, orthogonal, 45 degrees
  const auto r = user_drift(space({"x", "y", "z"}, a), space({"x", "y", "z"}, b), std::vector<UserId>{"x", "y", "z"}, 1, 2);
  REQUIRE(r.drifts.size() == 3);
  CHECK(r.drifts[0].drift == doctest::Approx(0.0));
  CHECK(r.drifts[1].drift == doctest::Approx(1.0));
  CHECK(r.drifts[2].drift == doctest::Approx(1.0 - 1.0 / std::sqrt(2.0)));
  CHECK(r.drifts[2].window_from == 1);
  CHECK(r.drifts[2].window_to == 2);
}

TEST_CASE("user drift skips zero vectors") {
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1, 0, 0, 0;
  b << 1, 1, 1, 0;
  const auto r = user_drift(space({"x", "y"}, a), space({"x", "y"}, b), std::vector<UserId>{"x", "y"});
  CHECK(r.drifts.size() == 1);
  CHECK(r.skipped_zero_vector == std::vector<UserId>{"y"});
}

TEST_CASE("user drift is bounded and invariant to a common rotation") {
  auto rng = make_engine(17);
  std::vector<UserId> ids;
  for (int i = 0; i < 25; ++i) ids.push_back("u" + std::to_string(i));
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd a = testing::gaussian(rng, 25, 6), b = testing::gaussian(rng, 25, 6);
    const auto q = random_orthogonal(6, 40 + static_cast<std::uint64_t>(trial));
    const auto base = user_drift(space(ids, a), space(ids, b), ids);
    const auto turned = user_drift(space(ids, a * q), space(ids, b * q), ids);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      CHECK(base.drifts[i].drift >= -1e-12);
      CHECK(base.drifts[i].drift <= 2.0 + 1e-12);
      CHECK(std::abs(base.drifts[i].drift - turned.drifts[i].drift) < 1e-12);
    }
  }
}

TEST_CASE("subreddit drift statistics") {
  std::map<std::string, std::vector<double>> d{{"a", {0, 1, 1, 0}}, {"b", {0.25}}, {"c", {}}};
  const auto r = subreddit_drift(d);
  REQUIRE(r.groups.size() == 2);
  CHECK(r.groups[0].subreddit == "a");
  CHECK(r.groups[0].mean == doctest::Approx(0.5));
  CHECK(r.groups[0].std == doctest::Approx(0.5));
  CHECK(r.groups[0].n == 4);
  CHECK(r.groups[1].std == 0.0);
  CHECK(r.excluded_empty == std::vector<std::string>{"c"});
}

TEST_CASE("centroid drift examples") {
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 0, 0, 10, 0;
  b << 10, 1, 0, 3;
  const auto r = centroid_drift(a, b);
  CHECK(r.matches[0] == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(r.matches[1] == std::pair<std::size_t, std::size_t>{1, 0});
  CHECK(r.mean == doctest::Approx(2.0));
  CHECK(centroid_drift(a, a).mean == 0.0);

  // Both centroids of `a` nearest the same centroid of `b`.
  Eigen::MatrixXd c(2, 2), far(2, 2);
  c << 0, 0, 0, 1;
  far << 0, 0.5, 100, 100;
  const auto collide = centroid_drift(c, far);
  CHECK(collide.matches[0].second == 0);
  CHECK(collide.matches[1].second == 0);
  CHECK(collide.mean == doctest::Approx(0.5));

  CHECK_THROWS(centroid_drift(a, Eigen::MatrixXd(3, 2)));
}

TEST_CASE("centroid drift is bounded by the directed Hausdorff distance") {
  auto rng = make_engine(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto k = 1 + static_cast<Eigen::Index>(uniform_index(rng, 6));
    const Eigen::MatrixXd a = testing::gaussian(rng, k, 3), b = testing::gaussian(rng, k, 3);
    double hausdorff = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < k; ++j) nearest = std::min(nearest, (a.row(i) - b.row(j)).norm());
      hausdorff = std::max(hausdorff, nearest);
    }
    const auto r = centroid_drift(a, b);
    CHECK(r.mean <= hausdorff + 1e-12);
    // Permuting b changes nothing.
    Eigen::MatrixXd shuffled = b.colwise().reverse();
    CHECK(std::abs(centroid_drift(a, shuffled).mean - r.mean) < 1e-12);
  }
}

TEST_CASE("cluster_roles reports silhouette only when defined") {
  Eigen::MatrixXd x(6, 2);
  x << 0, 0, 0, 1, 1, 0, 10, 10, 10, 11, 11, 10;
  const auto r = cluster_roles(x, 2, 3);
  CHECK(r.k == 2);
  REQUIRE(r.silhouette);
  CHECK(*r.silhouette > 0.8);
  Eigen::MatrixXd same(4, 2);
  same.setZero();
  CHECK_FALSE(cluster_roles(same, 1, 3).silhouette);
}

TEST_CASE("drift report sorts rows and averages per class") {
  std::vector<DriftRow> rows{row("zz", ClassLabel::loyal, "T1-T2", 10, 0.2, 0.1),
                             row("aa", ClassLabel::loyal, "T1-T2", 20, 0.4, 0.3),
                             row("mm", ClassLabel::vagrant, "T1-T2", 5, 0.6, 0.0)};
  rows[0].silhouette_t = 0.5;
  rows[0].mean_centroid_dist = 1.0;
  rows[1].mean_centroid_dist = 3.0;
  const auto rep = drift_report(rows);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].subreddit == "aa");
  CHECK(rep.rows[2].subreddit == "zz");
  REQUIRE(rep.aggregates.size() == 2);
  const auto& loyal = rep.aggregates[0].class_label == ClassLabel::loyal ? rep.aggregates[0] : rep.aggregates[1];
  CHECK(loyal.subreddit == "*");
  CHECK(loyal.n_users == 30);
  CHECK(loyal.mean_cos_dist == doctest::Approx(0.3));
  CHECK(*loyal.mean_centroid_dist == doctest::Approx(2.0));
  CHECK(*loyal.silhouette_t == doctest::Approx(0.5));  // only the defined value counts
  CHECK_FALSE(loyal.silhouette_t_next);
}

TEST_CASE("drift csv layout and cache round-trip") {
  std::vector<DriftRow> rows{row("aa", ClassLabel::loyal, "T1-T2", 20, 1.0 / 3.0, 0.125),
                             row("bb", ClassLabel::vagrant, "T2-T3", 7, 0.1, 0.2)};
  rows[0].k_star = 4;
  rows[0].silhouette_t = 0.7;
  rows[0].silhouette_t_next = -0.05;
  rows[0].mean_centroid_dist = 2.0 / 7.0;

  std::ostringstream csv;
  write_drift_csv(csv, drift_report(rows));
  std::istringstream lines(csv.str());
  std::string header, first, second;
  std::getline(lines, header);
  std::getline(lines, first);
  std::getline(lines, second);
  CHECK(header ==
        "subreddit,class,window_pair,n_users,mean_cos_dist,std_cos_dist,k_star,mean_centroid_dist,silhouette_t,"
        "silhouette_t_next");
  CHECK(first.rfind("aa,loyal,T1-T2,20,", 0) == 0);
  CHECK(second.substr(second.size() - 4) == ",,,,");  // missing values stay empty

  std::stringstream cache;
  write_drift_rows(cache, rows);
  const auto back = read_drift_rows(cache);
  REQUIRE(back.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back[i].subreddit == rows[i].subreddit);
    CHECK(back[i].class_label == rows[i].class_label);
    CHECK(back[i].n_users == rows[i].n_users);
    CHECK(back[i].mean_cos_dist == rows[i].mean_cos_dist);
    CHECK(back[i].k_star == rows[i].k_star);
    CHECK(back[i].mean_centroid_dist == rows[i].mean_centroid_dist);
    CHECK(back[i].silhouette_t == rows[i].silhouette_t);
    CHECK(back[i].silhouette_t_next == rows[i].silhouette_t_next);
  }
}
