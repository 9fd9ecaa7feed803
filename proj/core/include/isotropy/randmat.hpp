#pragma once

#include <cstdint>
#include <utility>

#include "isotropy/core.hpp"

namespace isotropy {

/// Marchenko-Pastur model of the eigenvalues of an n-dimensional Gaussian
/// cluster of T points with coordinate variance sigma2; mu shifts the support.
struct MpParams {
  double points = 100;  ///< T
  double dims = 100;    ///< n
  double sigma2 = 1.0;
  double mu = 0.0;

  void validate() const;
};

struct MpSupport {
  double min = 0.0;
  double max = 0.0;
};

/// sigma2 (1 +- sqrt(T/n))^2 + mu, lower edge clamped at 0.
MpSupport mp_support(const MpParams& p);

/// (1 / (2 pi sigma2 L)) sqrt((L_max - L)(L - L_min)) inside the support,
/// 0 outside (and at L <= 0).
double mp_pdf(const MpParams& p, double eigenvalue);

struct MpMoments {
  /// Integral of the density over the support. Equals min(1, T/n) for mu = 0.
  double mass = 0.0;
  /// Integrals of L pdf and L^2 pdf.
  double raw_mean = 0.0;
  double raw_second = 0.0;
  /// Moments of the continuous part alone (raw / mass).
  double conditional_mean = 0.0;
  double conditional_second = 0.0;
  /// Moments of the unit-mass distribution: the density plus an atom of
  /// weight (1 - mass) at the zero eigenvalue (L = mu). If mass exceeds 1
  /// the raw moments are divided by mass instead.
  double mean = 0.0;
  double second = 0.0;
  /// Quadrature error estimate (absolute, largest of the three integrals).
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod quadrature after substituting
/// L = L_min + (L_max - L_min) sin^2(theta). Relative tolerance 1e-8.
MpMoments mp_moments(const MpParams& p);

/// Same integrals on an explicit support; a zero-width support is a point mass.
MpMoments mp_moments_on_support(const MpSupport& support, double sigma2, double atom_location);

/// sqrt(1 - E(L)^2 / E(L^2)) from the unit-mass moments.
double expected_fa(const MpParams& p);
double expected_fa(const MpMoments& m);

/// Expected population variance of the n normalised eigenvalues,
/// (E(L^2) - E(L)^2) / (n E(L))^2.
double expected_var_lambda(const MpParams& p);
double expected_var_lambda(const MpMoments& m, double dims);

struct EmpiricalSpectrum {
  double mean_fa = 0.0;
  double mean_var_lambda = 0.0;
  double mean_eigenvalue = 0.0;  ///< mean of all n eigenvalues of (C^T C) / n
  Index samples = 0;
};

/// Samples `samples` Gaussian clusters (T points, n dims, std sqrt(sigma2))
/// and averages raw FA, Var(lambda) and the mean covariance eigenvalue.
EmpiricalSpectrum empirical_spectrum(const MpParams& p, Index samples, std::uint64_t seed);

}  // namespace isotropy
