#include <cmath>
#include <numbers>

#include "doctest.h"
#include "isotropy/randmat.hpp"
#include "support/oracles.hpp"

using namespace isotropy;

namespace {

MpParams params(double t, double n, double sigma2 = 1.0, double mu = 0.0) {
  MpParams p;
  p.points = t;
  p.dims = n;
  p.sigma2 = sigma2;
  p.mu = mu;
  return p;
}

}  // namespace

TEST_CASE("support examples") {
  const auto s = mp_support(params(100, 10000));
  CHECK(s.min == doctest::Approx(0.81).epsilon(1e-12));
  CHECK(s.max == doctest::Approx(1.21).epsilon(1e-12));
  const auto sq = mp_support(params(100, 100));
  CHECK(sq.min == 0.0);
  CHECK(sq.max == doctest::Approx(4.0));
  const auto shifted = mp_support(params(100, 10000, 1.0, 2.0));
  CHECK(shifted.min == doctest::Approx(2.81));
  CHECK(shifted.max == doctest::Approx(3.21));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(mp_support(params(0, 10)), DataError);
  CHECK_THROWS_AS(mp_support(params(10, 0)), DataError);
  CHECK_THROWS_AS(mp_support(params(10, 10, 0.0)), DataError);
}

TEST_CASE("pdf values") {
  const auto p = params(100, 400);
  const auto s = mp_support(p);
  CHECK(mp_pdf(p, s.min) == 0.0);
  CHECK(mp_pdf(p, s.max) == 0.0);
  CHECK(mp_pdf(p, s.max + 0.1) == 0.0);
  CHECK(mp_pdf(p, 0.1) == 0.0);
  CHECK(mp_pdf(p, -1.0) == 0.0);
  // (1/(2 pi)) sqrt(1.25 * 0.75)
  CHECK(mp_pdf(p, 1.0) == doctest::Approx(0.15410111101537496).epsilon(1e-12));
  for (double l = 0.26; l < 2.25; l += 0.1) CHECK(mp_pdf(p, l) > 0.0);
}

TEST_CASE("quadrature matches the closed-form integrals") {
  for (auto [t, n, s2] : {std::tuple{100.0, 400.0, 1.0}, {100.0, 100.0, 1.0}, {100.0, 10000.0, 2.5},
                          {50.0, 20.0, 0.7}, {100.0, 10.0, 1.0}}) {
    const auto p = params(t, n, s2);
    const auto sup = mp_support(p);
    const auto exact = oracle::mp_closed_form(sup.min, sup.max, s2);
    const auto m = mp_moments(p);
    CHECK(m.mass == doctest::Approx(exact.mass).epsilon(1e-9));
    CHECK(m.raw_mean == doctest::Approx(exact.mean).epsilon(1e-9));
    CHECK(m.raw_second == doctest::Approx(exact.second).epsilon(1e-9));
    CHECK(m.conditional_mean == doctest::Approx(exact.mean / exact.mass).epsilon(1e-9));
    CHECK(m.error >= 0.0);
  }
}

TEST_CASE("mass is min(1, T/n) for mu = 0") {
  CHECK(mp_moments(params(100, 400)).mass == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(mp_moments(params(100, 100)).mass == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(mp_moments(params(100, 25)).mass == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("unit-mass moments agree with the sampled mean eigenvalue") {
  const auto p = params(100, 400);
  const auto m = mp_moments(p);
  CHECK(std::isfinite(m.mean));
  CHECK(m.mean > 0.0);
  const auto e = empirical_spectrum(p, 10, 42);
  CHECK(e.mean_eigenvalue == doctest::Approx(m.mean).epsilon(0.05));
}

TEST_CASE("zero-width support is a point mass") {
  MpSupport s{2.0, 2.0};
  const auto m = mp_moments_on_support(s, 1.0, 0.0);
  CHECK(m.mass == 1.0);
  CHECK(m.mean == 2.0);
  CHECK(m.second == 4.0);
  CHECK(expected_fa(m) == 0.0);
  CHECK(expected_var_lambda(m, 10.0) == 0.0);
}

TEST_CASE("expected FA limits and monotonicity") {
  const double wide = expected_fa(params(1e6, 10));
  CHECK(wide >= 0.0);
  CHECK(wide < 0.01);

  double prev = 0.0;
  for (double n : {10.0, 100.0, 1000.0, 10000.0}) {
    const double fa = expected_fa(params(100, n));
    CHECK(fa >= prev);
    CHECK(fa < 1.0);
    prev = fa;
  }
  CHECK(expected_fa(params(100, 1e6)) > 0.99);

  // Unit-mass moments give E(FA) = sqrt(n / (n + T)) at mu = 0.
  for (double n : {10.0, 100.0, 400.0, 5000.0})
    CHECK(expected_fa(params(100, n)) == doctest::Approx(std::sqrt(n / (n + 100.0))).epsilon(1e-8));
}

TEST_CASE("expected FA at T = n agrees with sampled clusters") {
  const auto p = params(100, 100);
  const auto e = empirical_spectrum(p, 10, 7);
  CHECK(e.mean_fa == doctest::Approx(expected_fa(p)).epsilon(0.05));
}

TEST_CASE("expected Var(lambda)") {
  double prev = 1.0;
  for (double n : {10.0, 100.0, 1000.0, 10000.0}) {
    const double v = expected_var_lambda(params(100, n));
    CHECK(v >= 0.0);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(prev < 1e-6);

  const auto p = params(100, 100);
  const auto e = empirical_spectrum(p, 10, 11);
  CHECK(e.mean_var_lambda == doctest::Approx(expected_var_lambda(p)).epsilon(0.10));
}

TEST_CASE("empirical spectrum is deterministic per seed") {
  const auto p = params(30, 12);
  const auto a = empirical_spectrum(p, 4, 3);
  const auto b = empirical_spectrum(p, 4, 3);
  CHECK(a.mean_fa == b.mean_fa);
  CHECK(a.samples == 4);
}
