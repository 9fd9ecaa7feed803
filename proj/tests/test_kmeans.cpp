#include <map>
#include <random>

#include "doctest.h"
#include "isotropy/kmeans.hpp"
#include "isotropy/synth.hpp"
#include "support/oracles.hpp"

using namespace isotropy;
using oracle::from_rows;

namespace {

KMeansResult run(const PointCloud& c, int k, std::uint64_t seed = 0) {
  KMeansOptions o;
  o.k = k;
  o.seed = seed;
  return kmeans(c, o);
}

PointCloud blobs(Index per, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  const double centers[4][2] = {{0, 0}, {5, 0}, {0, 5}, {5, 5}};
  Matrix d(4 * per, 2);
  for (Index c = 0; c < 4; ++c)
    for (Index i = 0; i < per; ++i) d.row(c * per + i) << centers[c][0] + g(rng), centers[c][1] + g(rng);
  return PointCloud(d);
}

void check_invariants(const PointCloud& c, const KMeansResult& r) {
  double inertia = 0.0;
  for (Index i = 0; i < c.size(); ++i) {
    const int own = r.assignment.labels()[static_cast<std::size_t>(i)];
    const double d_own = (c.row(i) - r.centroids.row(own)).squaredNorm();
    inertia += d_own;
    for (Index j = 0; j < r.centroids.rows(); ++j) {
      const double dj = (c.row(i) - r.centroids.row(j)).squaredNorm();
      CHECK(dj >= d_own);
      if (dj == d_own) CHECK(j >= own);
    }
  }
  CHECK(r.inertia == doctest::Approx(inertia).epsilon(1e-12));
  for (std::size_t t = 1; t < r.inertia_history.size(); ++t)
    CHECK(r.inertia_history[t] <= r.inertia_history[t - 1] * (1.0 + 1e-12));
}

}  // namespace

TEST_CASE("kmeans examples") {
  const PointCloud line(from_rows({{0}, {0.1}, {10}, {10.1}}));
  const auto r = run(line, 2);
  const auto l = r.assignment.labels();
  CHECK(l[0] == l[1]);
  CHECK(l[2] == l[3]);
  CHECK(l[0] != l[2]);
  CHECK(r.inertia == doctest::Approx(0.01));
  check_invariants(line, r);

  const PointCloud c = gaussian_cluster(3, 50, 2.0, 1.0, 4);
  const auto one = run(c, 1);
  CHECK((one.centroids.row(0) - c.data().colwise().mean()).norm() <= 1e-12);

  const auto all = run(c, 50);
  CHECK(all.inertia == doctest::Approx(0.0).scale(1.0));
  CHECK(all.assignment.cluster_count() == 50);

  CHECK_THROWS_AS(run(c, 51), DataError);
  CHECK_THROWS_AS(run(c, 0), DataError);
}

TEST_CASE("kmeans is deterministic per seed and satisfies its invariants") {
  const PointCloud c = blobs(40, 2);
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    const auto a = run(c, 4, seed);
    const auto b = run(c, 4, seed);
    CHECK(std::vector<int>(a.assignment.labels().begin(), a.assignment.labels().end()) ==
          std::vector<int>(b.assignment.labels().begin(), b.assignment.labels().end()));
    CHECK(a.centroids == b.centroids);
    CHECK(a.seed == seed);
    CHECK(a.converged);
    check_invariants(c, a);
  }
}

TEST_CASE("the best of several seeds recovers well separated blobs") {
  const PointCloud c = blobs(40, 2);
  KMeansResult best = run(c, 4, 0);
  for (std::uint64_t seed = 1; seed < 8; ++seed) {
    auto r = run(c, 4, seed);
    if (r.inertia < best.inertia) best = std::move(r);
  }
  for (Index blob = 0; blob < 4; ++blob) {
    const int first = best.assignment.labels()[static_cast<std::size_t>(blob * 40)];
    for (Index i = 1; i < 40; ++i) CHECK(best.assignment.labels()[static_cast<std::size_t>(blob * 40 + i)] == first);
  }
}

TEST_CASE("kmeans result survives row permutation up to label renaming") {
  const PointCloud c = blobs(25, 7);
  const auto base = run(c, 4, 3);
  std::vector<Index> perm(static_cast<std::size_t>(c.size()));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<Index>(i);
  std::mt19937_64 rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  Matrix pd(c.size(), c.dims());
  for (Index i = 0; i < c.size(); ++i) pd.row(i) = c.row(perm[static_cast<std::size_t>(i)]);
  const auto shuffled = run(PointCloud(pd), 4, 3);
  CHECK(shuffled.inertia == doctest::Approx(base.inertia).epsilon(1e-10));

  std::map<int, int> rename;
  bool consistent = true;
  for (Index i = 0; i < c.size(); ++i) {
    const int from = base.assignment.labels()[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    const int to = shuffled.assignment.labels()[static_cast<std::size_t>(i)];
    auto [it, inserted] = rename.emplace(from, to);
    if (!inserted && it->second != to) consistent = false;
  }
  CHECK(consistent);
}

TEST_CASE("duplicate points force an empty-cluster repair or a valid labelling") {
  Matrix d = Matrix::Zero(10, 2);
  d.row(9) << 1.0, 1.0;
  const PointCloud c(d);
  const auto r = run(c, 3, 5);
  CHECK(r.assignment.cluster_count() == 3);
  for (Index s : r.assignment.cluster_sizes()) CHECK(s >= 1);
}
