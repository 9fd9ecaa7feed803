#include <random>

#include "doctest.h"
#include "isotropy/validation.hpp"
#include "support/oracles.hpp"

using namespace isotropy;
using oracle::from_rows;

namespace {

double mdc(const Matrix& d) {
  const PointCloud c(d);
  const auto v = ClusterView::whole(c);
  return mean_dist_to_centroid(std::span<const ClusterView>(&v, 1));
}

double mpd(const Matrix& d) {
  const PointCloud c(d);
  const auto v = ClusterView::whole(c);
  return mean_pairwise_dist(std::span<const ClusterView>(&v, 1));
}

const Matrix kToy = from_rows({{0, 0}, {0, 2}, {10, 0}, {10, 2}});

}  // namespace

TEST_CASE("mean distance to centroid") {
  CHECK(mdc(from_rows({{0, 0}, {2, 0}})) == doctest::Approx(1.0));
  CHECK(mdc(from_rows({{0, 0}, {1, 0}, {2, 0}})) == doctest::Approx(2.0 / 3.0));
  const PointCloud singles(from_rows({{0, 0}, {5, 5}}));
  CHECK(mean_dist_to_centroid(split_clusters(singles, ClusterAssignment({0, 1}))) == 0.0);
}

TEST_CASE("mean pairwise distance") {
  CHECK(mpd(from_rows({{0, 0}, {2, 0}})) == doctest::Approx(2.0));
  CHECK(mpd(from_rows({{0, 0}, {1, 0}, {0.5, std::sqrt(0.75)}})) == doctest::Approx(1.0));
  CHECK(mpd(from_rows({{0, 0}, {1, 0}, {3, 0}})) == doctest::Approx(2.0));
  // Point weighting: cluster sizes 2 and 1 -> (2*2 + 1*0) / 3.
  const PointCloud c(from_rows({{0, 0}, {2, 0}, {9, 9}}));
  CHECK(mean_pairwise_dist(split_clusters(c, ClusterAssignment({0, 0, 1}))) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("silhouette examples") {
  const PointCloud c(from_rows({{0, 0}, {0, 1}, {10, 0}, {10, 1}}));
  const ClusterAssignment a({0, 0, 1, 1});
  CHECK(silhouette(c, a) == doctest::Approx(0.9002487577582194).epsilon(1e-12));
  CHECK(silhouette(c, a) == doctest::Approx(oracle::silhouette(c.data(), {0, 0, 1, 1})));

  // Two interleaved copies of the same points score poorly.
  const PointCloud twin(from_rows({{0, 0}, {0, 0}, {1, 0}, {1, 0}, {2, 0}, {2, 0}}));
  const std::vector<int> twin_labels{0, 1, 0, 1, 0, 1};
  const double ts = silhouette(twin, ClusterAssignment(twin_labels));
  CHECK(ts == doctest::Approx(oracle::silhouette(twin.data(), twin_labels)).epsilon(1e-12));
  CHECK(ts < 0.5);

  // Middle point equidistant: a = b for it.
  const PointCloud eq(from_rows({{0, 0}, {1, 0}, {2, 0}}));
  const double s = silhouette(eq, ClusterAssignment({0, 0, 1}));
  // point 0: a=1, b=2 -> 0.5; point 1: a=1, b=1 -> 0; point 2: singleton -> 0.
  CHECK(s == doctest::Approx(0.5 / 3.0));

  CHECK_THROWS_AS(silhouette(eq, ClusterAssignment({0, 0, 0})), DataError);
}

TEST_CASE("silhouette matches brute force on random data and with threads") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> lab(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix d(30, 3);
    std::vector<int> labels(30);
    for (Index i = 0; i < 30; ++i) {
      labels[static_cast<std::size_t>(i)] = i < 4 ? static_cast<int>(i) : lab(rng);
      for (Index j = 0; j < 3; ++j) d(i, j) = g(rng) + 3.0 * labels[static_cast<std::size_t>(i)];
    }
    const PointCloud c(d);
    const ClusterAssignment a(labels);
    const double s = silhouette(c, a);
    CHECK(s == doctest::Approx(oracle::silhouette(d, labels)).epsilon(1e-12));
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
    CHECK(silhouette(c, a, 4) == s);
  }
}

TEST_CASE("davies bouldin") {
  const PointCloud toy(kToy);
  CHECK(std::abs(davies_bouldin(toy, ClusterAssignment({0, 0, 1, 1})) - 0.2) <= 1e-10);

  const PointCloud far(from_rows({{0, 0}, {0, 0.001}, {1000, 0}, {1000, 0.001}}));
  CHECK(davies_bouldin(far, ClusterAssignment({0, 0, 1, 1})) < 1e-5);

  const PointCloud dup(from_rows({{-1, 0}, {1, 0}, {0, -1}, {0, 1}}));
  CHECK_THROWS_WITH_AS(davies_bouldin(dup, ClusterAssignment({0, 0, 1, 1})), "identical centroids", DataError);
}

TEST_CASE("calinski harabasz") {
  const PointCloud toy(kToy);
  CHECK(std::abs(calinski_harabasz(toy, ClusterAssignment({0, 0, 1, 1})) - 50.0) <= 1e-8);

  const PointCloud tight(from_rows({{0, 0}, {0, 0.001}, {1000, 0}, {1000, 0.001}}));
  CHECK(calinski_harabasz(tight, ClusterAssignment({0, 0, 1, 1})) > 1e9);

  const PointCloud same(from_rows({{1, 1}, {1, 1}, {4, 4}, {4, 4}}));
  CHECK_THROWS_WITH_AS(calinski_harabasz(same, ClusterAssignment({0, 0, 1, 1})), "degenerate dispersion", DataError);
}

TEST_CASE("cluster size variance") {
  CHECK(cluster_size_variance(ClusterAssignment({0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2})) == 0.0);
  CHECK(cluster_size_variance(ClusterAssignment({0, 0, 1, 1, 1, 1, 1, 1})) == doctest::Approx(4.0));
  CHECK(cluster_size_variance(ClusterAssignment({0, 0, 0})) == 0.0);
}

TEST_CASE("validation metrics are invariant to relabelling, point order and rigid motion") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Index m = 24;
    Matrix d(m, 3);
    std::vector<int> labels(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
      labels[static_cast<std::size_t>(i)] = static_cast<int>(i % 3);
      for (Index j = 0; j < 3; ++j) d(i, j) = g(rng) + 4.0 * (i % 3) * (j == 0);
    }
    const PointCloud c(d);
    const ClusterAssignment a(labels);
    const double s = silhouette(c, a), db = davies_bouldin(c, a), ch = calinski_harabasz(c, a);
    CHECK(db >= 0.0);
    CHECK(ch >= 0.0);

    // Relabel 0->2, 1->0, 2->1 and reverse point order.
    Matrix rd(m, 3);
    std::vector<int> rl(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
      rd.row(m - 1 - i) = d.row(i);
      rl[static_cast<std::size_t>(m - 1 - i)] = (labels[static_cast<std::size_t>(i)] + 2) % 3;
    }
    const PointCloud rc(rd);
    const ClusterAssignment ra(rl);
    CHECK(silhouette(rc, ra) == doctest::Approx(s).epsilon(1e-12));
    CHECK(davies_bouldin(rc, ra) == doctest::Approx(db).epsilon(1e-12));
    CHECK(calinski_harabasz(rc, ra) == doctest::Approx(ch).epsilon(1e-12));

    const Eigen::MatrixXd q = oracle::random_orthogonal(3, rng);
    Matrix moved = (d * q.transpose()) * 3.5;
    moved.rowwise() += Eigen::RowVector3d(7, -2, 40);
    const PointCloud mc(moved);
    CHECK(silhouette(mc, a) == doctest::Approx(s).epsilon(1e-10));
    CHECK(davies_bouldin(mc, a) == doctest::Approx(db).epsilon(1e-10));
    CHECK(calinski_harabasz(mc, a) == doctest::Approx(ch).epsilon(1e-10));
  }
}
