#include <random>

#include "doctest.h"
#include "isotropy/core.hpp"
#include "support/oracles.hpp"

using namespace isotropy;
using oracle::from_rows;

TEST_CASE("point cloud rejects empty and non-finite data") {
  CHECK_THROWS_AS(PointCloud(Matrix(0, 3)), DataError);
  Matrix m = from_rows({{1, 2}, {3, std::numeric_limits<double>::quiet_NaN()}});
  CHECK_THROWS_WITH_AS(PointCloud{m}, "non-finite value in point 1", DataError);
  CHECK_THROWS_AS(PointCloud(from_rows({{1, 2}}), {"a"}), DataError);
}

TEST_CASE("split_clusters partitions rows") {
  const PointCloud cloud(from_rows({{0, 0}, {1, 0}, {5, 5}, {6, 5}}));
  const auto views = split_clusters(cloud, ClusterAssignment({0, 0, 1, 1}));
  REQUIRE(views.size() == 2);
  CHECK(views[0].size() == 2);
  CHECK(views[1].size() == 2);
  CHECK(views[0].centroid()(0) == doctest::Approx(0.5));
  CHECK(views[1].centroid()(1) == doctest::Approx(5.0));
  CHECK(views[0].mu() == doctest::Approx(0.5));
}

TEST_CASE("single point view is degenerate with mu 0") {
  const PointCloud cloud(from_rows({{3, -2}}));
  const auto views = split_clusters(cloud, ClusterAssignment({0}));
  REQUIRE(views.size() == 1);
  CHECK(views[0].degenerate());
  CHECK(views[0].mu() == 0.0);
  CHECK(views[0].centroid()(0) == 3.0);
  CHECK(views[0].centroid()(1) == -2.0);
}

TEST_CASE("label contract") {
  CHECK_THROWS_WITH_AS(ClusterAssignment({0, 2}), "non-contiguous labels", DataError);
  CHECK_THROWS_AS(ClusterAssignment({0, -1}), DataError);
  CHECK_THROWS_AS(ClusterAssignment(std::vector<int>{}), DataError);
  const PointCloud cloud(from_rows({{0}, {1}, {2}}));
  CHECK_THROWS_AS(split_clusters(cloud, ClusterAssignment({0, 1})), DataError);
}

TEST_CASE("center_and_scale examples") {
  const PointCloud cross(from_rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}));
  const auto v = ClusterView::whole(cross);
  CHECK(v.mu() == doctest::Approx(1.0));
  const Vector out = center_and_scale(v, Vector{{1.0, 0.0}});
  CHECK(out(0) == doctest::Approx(1.0));
  CHECK(out(1) == doctest::Approx(0.0));

  const PointCloud pair(from_rows({{2, 2}, {4, 2}}));
  const Vector p = center_and_scale(ClusterView::whole(pair), Vector{{4.0, 2.0}});
  CHECK(p(0) == doctest::Approx(1.0));
  CHECK(p(1) == doctest::Approx(0.0));

  const PointCloud same(from_rows({{0.1, 0.7}, {0.1, 0.7}, {0.1, 0.7}}));
  const auto deg = ClusterView::whole(same);
  CHECK(deg.degenerate());
  CHECK_THROWS_WITH_AS(center_and_scale(deg, Vector{{0.1, 0.7}}), "degenerate cluster", DataError);
}

TEST_CASE("centred-and-scaled members have zero mean and unit mean norm") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 1 + trial % 7;
    const Index m = 2 + trial % 13;
    Matrix data(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) data(i, j) = 10.0 * g(rng) + 3.0;
    const PointCloud cloud(data);
    const auto view = ClusterView::whole(cloud);
    Vector sum = Vector::Zero(n);
    double norms = 0.0;
    for (Index i = 0; i < m; ++i) {
      const Vector s = center_and_scale(view, cloud.row(i).transpose());
      sum += s;
      norms += s.norm();
    }
    CHECK((sum / static_cast<double>(m)).norm() <= 1e-10);
    CHECK(norms / static_cast<double>(m) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("metric report bounds and json") {
  MetricReport r;
  r.global["fa_g"] = 0.4;
  r.global["var_lambda"] = 0.1;
  r.clusters.push_back({0, 3, false, {{"i_vec", 0.9}}});
  CHECK_NOTHROW(r.check_bounds());
  const auto j = r.to_json();
  CHECK(j["global"]["fa_g"] == 0.4);
  CHECK(j["clusters"][0]["metrics"]["i_vec"] == 0.9);
  CHECK(j.contains("version"));
  r.global["var_lambda"] = 0.3;
  CHECK_THROWS_AS(r.check_bounds(), DataError);
}

TEST_CASE("parallel_for visits every index once and propagates errors") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) { if (i == 7) throw DataError("boom"); }), DataError);
}
