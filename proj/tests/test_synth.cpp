#include <cmath>

#include "doctest.h"
#include "isotropy/spectral.hpp"
#include "isotropy/synth.hpp"
#include "isotropy/zmeasure.hpp"

using namespace isotropy;

namespace {

double cov_deviation(Index count) {
  const PointCloud c = gaussian_cluster(10, count, 0.0, 1.0, 123);
  const Matrix centered = c.data().rowwise() - c.data().colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(count);
  return (cov - Eigen::MatrixXd::Identity(10, 10)).norm();
}

}  // namespace

TEST_CASE("gaussian cluster determinism and moments") {
  const PointCloud a = gaussian_cluster(10, 100, 0.0, 1.0, 5);
  const PointCloud b = gaussian_cluster(10, 100, 0.0, 1.0, 5);
  const PointCloud c = gaussian_cluster(10, 100, 0.0, 1.0, 6);
  CHECK(a.data() == b.data());
  CHECK(a.data() != c.data());

  const PointCloud shifted = gaussian_cluster(4, 400, 3.0, 2.0, 8);
  const Eigen::RowVectorXd mean = shifted.data().colwise().mean();
  for (Index j = 0; j < 4; ++j) CHECK(std::abs(mean(j) - 3.0) <= 4.0 * 2.0 / std::sqrt(400.0));

  const PointCloud flat = gaussian_cluster(3, 20, 1.5, 0.0, 1);
  CHECK((flat.data().array() == 1.5).all());

  CHECK(cov_deviation(10000) < cov_deviation(100));
}

TEST_CASE("round 2-D gaussian is close to isotropic") {
  const PointCloud c = gaussian_cluster(2, 300, 0.0, 1.0, 21);
  CHECK(isotropy_vec(ClusterView::whole(c)) > 0.8);
}

TEST_CASE("anisotropic gaussian") {
  const std::vector<double> skew{1.0, 0.1}, even{1.0, 1.0}, flat{1.0, 0.0};
  const PointCloud s = anisotropic_gaussian(skew, 300, 3);
  const PointCloud e = anisotropic_gaussian(even, 300, 3);
  const double fa_skew = fractional_anisotropy(spectral_summary(ClusterView::whole(s)));
  const double fa_even = fractional_anisotropy(spectral_summary(ClusterView::whole(e)));
  CHECK(fa_skew > fa_even + 0.3);
  CHECK(fa_even < 0.2);

  const PointCloud f = anisotropic_gaussian(flat, 50, 3);
  CHECK(fractional_anisotropy(spectral_summary(ClusterView::whole(f)), FaForm::normalized) ==
        doctest::Approx(1.0).epsilon(1e-10));

  CHECK(anisotropic_gaussian(skew, 10, 9).data() == anisotropic_gaussian(skew, 10, 9).data());
  const std::vector<double> bad{1.0, -0.5};
  CHECK_THROWS_AS(anisotropic_gaussian(bad, 10, 1), DataError);
}

TEST_CASE("shape kinds") {
  CHECK(parse_shape_kind("s_curve") == ShapeKind::s_curve);
  CHECK(parse_shape_kind("l_shape") == ShapeKind::l_shape);
  CHECK_THROWS_AS(parse_shape_kind("spiral?"), DataError);
}

TEST_CASE("noise-free s-curve points lie on the curve") {
  const PointCloud c = shape_cluster(ShapeKind::s_curve, 500, 0.0, 4);
  for (Index i = 0; i < c.size(); ++i) {
    const double x = c.data()(i, 0), y = c.data()(i, 1);
    CHECK(x * x + (1.0 - std::abs(y)) * (1.0 - std::abs(y)) == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(c.data() == shape_cluster(ShapeKind::s_curve, 500, 0.0, 4).data());
  CHECK(c.data() != shape_cluster(ShapeKind::s_curve, 500, 0.0, 5).data());
}

TEST_CASE("noise-free l-shape points lie in the arms") {
  const PointCloud c = shape_cluster(ShapeKind::l_shape, 400, 0.0, 2);
  for (Index i = 0; i < c.size(); ++i) {
    const double x = c.data()(i, 0), y = c.data()(i, 1);
    const bool horizontal = x >= -1.0 && x <= 0.0 && y >= 0.0 && y <= 0.1;
    const bool vertical = x >= -0.1 && x <= 0.0 && y >= 0.0 && y <= 1.0;
    CHECK((horizontal || vertical));
  }
}

TEST_CASE("l-shape random-vector isotropy is below the eigenvector form") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const PointCloud c = shape_cluster(ShapeKind::l_shape, 300, 0.01, seed);
    const auto v = ClusterView::whole(c);
    CHECK(isotropy_rnd(v, kDefaultRandomVectors, seed) < isotropy_vec(v));
  }
}
