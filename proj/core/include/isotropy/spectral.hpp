#pragma once

#include <span>

#include "isotropy/core.hpp"

namespace isotropy {

/// Eigen-structure of one cluster's centred scatter matrix C^T C.
struct SpectralSummary {
  Vector eigenvalues;  ///< Lambda, nonincreasing, clamped at 0, length n
  Vector normalized;   ///< lambda_i = Lambda_i / sum(Lambda); uniform 1/n when degenerate
  Matrix eigenvectors; ///< n x n, column i pairs with eigenvalues(i)
  bool degenerate = false;

  Index dims() const noexcept { return eigenvalues.size(); }
};

/// The nonzero spectrum is obtained from whichever of C^T C (n x n) or
/// C C^T (|C| x |C|) is smaller; in the latter case the eigenvector basis
/// is completed to n orthonormal vectors. With with_eigenvectors false only
/// the eigenvalues are computed and the eigenvector matrix is left empty.
SpectralSummary spectral_summary(const ClusterView& view, bool with_eigenvectors = true);

/// Population variance of normalised eigenvalues, in [0, 0.25].
double var_lambda(std::span<const double> lambda);
double var_lambda(const SpectralSummary& s);

enum class FaForm {
  /// sqrt(1 - E(lambda)^2 / E(lambda^2)); ranges over [0, sqrt(1 - 1/n)].
  raw,
  /// raw * sqrt(n / (n - 1)); reaches exactly 1 for a rank-1 spectrum.
  normalized,
};

double fractional_anisotropy(std::span<const double> lambda, FaForm form = FaForm::raw);

/// Degenerate summaries give 0.
double fractional_anisotropy(const SpectralSummary& s, FaForm form = FaForm::raw);

/// Cluster-size weighted mean of FA.
double fa_global(std::span<const ClusterView> views, FaForm form = FaForm::raw, unsigned threads = 1);

}  // namespace isotropy
