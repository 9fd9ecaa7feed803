#include "isotropy/randmat.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "isotropy/spectral.hpp"
#include "isotropy/synth.hpp"

namespace isotropy {
namespace {

constexpr double kRelativeTolerance = 1e-8;

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

// Integral over [L_min, L_max] of L^power * pdf(L) using
// L = L_min + w sin^2(theta), which turns the square-root edges into
// w^2 sin^2 cos^2 / (pi sigma2 L) on [0, pi/2].
Integral integrate_moment(const MpSupport& s, double sigma2, int power) {
  const double width = s.max - s.min;
  auto integrand = [&](double theta) {
    const double sn = std::sin(theta);
    const double cs = std::cos(theta);
    const double lambda = s.min + width * sn * sn;
    double value;
    if (lambda > 0.0) {
      value = width * width * sn * sn * cs * cs / (std::numbers::pi * sigma2 * lambda);
    } else {
      // L_min = 0 and theta -> 0: the sin^2 in numerator and L cancel.
      value = width * cs * cs / (std::numbers::pi * sigma2);
    }
    for (int i = 0; i < power; ++i) value *= lambda;
    return value;
  };
  Integral out;
  out.value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, std::numbers::pi / 2.0, 15,
                                                                            kRelativeTolerance * 1e-2, &out.error);
  if (!std::isfinite(out.value) || out.error > kRelativeTolerance * std::abs(out.value) + 1e-300) {
    throw NumericError("Marchenko-Pastur quadrature did not converge (power " + std::to_string(power) + ")");
  }
  return out;
}

}  // namespace

void MpParams::validate() const {
  if (!(points >= 1.0) || !(dims >= 1.0) || !std::isfinite(points) || !std::isfinite(dims)) {
    throw DataError("Marchenko-Pastur model needs T >= 1 and n >= 1");
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2) || !std::isfinite(mu)) {
    throw DataError("Marchenko-Pastur model needs finite sigma2 > 0 and finite mu");
  }
}

MpSupport mp_support(const MpParams& p) {
  p.validate();
  const double root = std::sqrt(p.points / p.dims);
  MpSupport s;
  s.max = p.sigma2 * (1.0 + root) * (1.0 + root) + p.mu;
  s.min = std::max(0.0, p.sigma2 * (1.0 - root) * (1.0 - root) + p.mu);
  return s;
}

double mp_pdf(const MpParams& p, double eigenvalue) {
  const MpSupport s = mp_support(p);
  if (!(eigenvalue > 0.0) || eigenvalue < s.min || eigenvalue > s.max) return 0.0;
  const double spread = (s.max - eigenvalue) * (eigenvalue - s.min);
  return std::sqrt(std::max(0.0, spread)) / (2.0 * std::numbers::pi * p.sigma2 * eigenvalue);
}

MpMoments mp_moments_on_support(const MpSupport& support, double sigma2, double atom_location) {
  if (!(support.max >= support.min) || !(sigma2 > 0.0)) {
    throw DataError("invalid Marchenko-Pastur support");
  }
  MpMoments m;
  const double width = support.max - support.min;
  if (width <= 1e-12 * std::max(1.0, std::abs(support.max))) {
    m.mass = 1.0;
    m.raw_mean = m.conditional_mean = m.mean = support.min;
    m.raw_second = m.conditional_second = m.second = support.min * support.min;
    return m;
  }
  const Integral mass = integrate_moment(support, sigma2, 0);
  const Integral first = integrate_moment(support, sigma2, 1);
  const Integral second = integrate_moment(support, sigma2, 2);
  m.mass = mass.value;
  m.raw_mean = first.value;
  m.raw_second = second.value;
  m.error = std::max({mass.error, first.error, second.error});
  if (!(m.mass > 0.0)) {
    throw NumericError("Marchenko-Pastur density has no mass");
  }
  m.conditional_mean = m.raw_mean / m.mass;
  m.conditional_second = m.raw_second / m.mass;
  if (m.mass < 1.0) {
    const double atom = 1.0 - m.mass;
    m.mean = m.raw_mean + atom * atom_location;
    m.second = m.raw_second + atom * atom_location * atom_location;
  } else {
    m.mean = m.conditional_mean;
    m.second = m.conditional_second;
  }
  return m;
}

MpMoments mp_moments(const MpParams& p) {
  return mp_moments_on_support(mp_support(p), p.sigma2, std::max(0.0, p.mu));
}

double expected_fa(const MpMoments& m) {
  if (!(m.second > 0.0)) return 0.0;
  return std::sqrt(std::max(0.0, (m.second - m.mean * m.mean) / m.second));
}

double expected_fa(const MpParams& p) { return expected_fa(mp_moments(p)); }

double expected_var_lambda(const MpMoments& m, double dims) {
  if (!(m.mean > 0.0)) return 0.0;
  const double spread = std::max(0.0, m.second - m.mean * m.mean);
  return spread / (dims * dims * m.mean * m.mean);
}

double expected_var_lambda(const MpParams& p) { return expected_var_lambda(mp_moments(p), p.dims); }

EmpiricalSpectrum empirical_spectrum(const MpParams& p, Index samples, std::uint64_t seed) {
  p.validate();
  if (samples < 1) throw DataError("need at least one sample");
  const auto points = static_cast<Index>(std::llround(p.points));
  const auto dims = static_cast<Index>(std::llround(p.dims));
  const double std_dev = std::sqrt(p.sigma2);

  EmpiricalSpectrum out;
  out.samples = samples;
  for (Index s = 0; s < samples; ++s) {
    const PointCloud cloud = gaussian_cluster(dims, points, 0.0, std_dev, derive_seed(seed, static_cast<std::uint64_t>(s)));
    const SpectralSummary summary = spectral_summary(ClusterView::whole(cloud), false);
    out.mean_fa += fractional_anisotropy(summary);
    out.mean_var_lambda += var_lambda(summary);
    out.mean_eigenvalue += summary.eigenvalues.mean() / static_cast<double>(dims);
  }
  const auto count = static_cast<double>(samples);
  out.mean_fa /= count;
  out.mean_var_lambda /= count;
  out.mean_eigenvalue /= count;
  return out;
}

}  // namespace isotropy
