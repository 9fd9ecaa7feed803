#include "isotropy/spectral.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace isotropy {
namespace {

using ColMatrix = Eigen::MatrixXd;

SpectralSummary degenerate_summary(Index n, bool with_vectors) {
  SpectralSummary s;
  s.eigenvalues = Vector::Zero(n);
  s.normalized = Vector::Constant(n, 1.0 / static_cast<double>(n));
  if (with_vectors) s.eigenvectors = Matrix::Identity(n, n);
  s.degenerate = true;
  return s;
}

// Eigenpairs of C^T C directly; ascending order from the solver is reversed.
void decompose_scatter(const Matrix& centered, Vector& values, Matrix* vectors) {
  const ColMatrix scatter = centered.transpose() * centered;
  Eigen::SelfAdjointEigenSolver<ColMatrix> solver(scatter, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of scatter matrix failed");
  }
  values = solver.eigenvalues().reverse();
  if (vectors) *vectors = solver.eigenvectors().rowwise().reverse();
}

// Eigenpairs of C^T C through the |C| x |C| Gram matrix C C^T. Nonzero
// eigenvectors are lifted as C^T u / sqrt(Lambda); the remaining null space
// is filled from a Householder QR of the lifted block.
void decompose_gram(const Matrix& centered, Vector& values, Matrix* vectors) {
  const Index n = centered.cols();
  const Index m = centered.rows();
  const ColMatrix gram = centered * centered.transpose();
  Eigen::SelfAdjointEigenSolver<ColMatrix> solver(gram, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigendecomposition of Gram matrix failed");
  }
  const Vector gram_values = solver.eigenvalues().reverse();

  const double top = std::max(gram_values(0), 0.0);
  const double cutoff = top * static_cast<double>(m) * 64.0 * std::numeric_limits<double>::epsilon();
  Index rank = 0;
  while (rank < m && gram_values(rank) > cutoff) ++rank;

  values = Vector::Zero(n);
  values.head(rank) = gram_values.head(rank);

  if (!vectors) return;
  if (rank == 0) {
    *vectors = Matrix::Identity(n, n);
    return;
  }
  const ColMatrix gram_vectors = solver.eigenvectors().rowwise().reverse();
  ColMatrix lifted = centered.transpose() * gram_vectors.leftCols(rank);
  for (Index i = 0; i < rank; ++i) lifted.col(i) /= std::sqrt(gram_values(i));

  Eigen::HouseholderQR<ColMatrix> qr(lifted);
  ColMatrix basis = qr.householderQ();
  const auto diag = qr.matrixQR().diagonal();
  for (Index i = 0; i < rank; ++i) {
    if (diag(i) < 0.0) basis.col(i) = -basis.col(i);
  }
  *vectors = basis;
}

}  // namespace

SpectralSummary spectral_summary(const ClusterView& view, bool with_eigenvectors) {
  const Index n = view.dims();
  if (view.degenerate()) {
    return degenerate_summary(n, with_eigenvectors);
  }
  const Matrix centered = view.centered();
  if (!centered.allFinite()) {
    throw DataError("non-finite values in cluster");
  }

  SpectralSummary s;
  Matrix* vectors = with_eigenvectors ? &s.eigenvectors : nullptr;
  if (n <= view.size()) {
    decompose_scatter(centered, s.eigenvalues, vectors);
  } else {
    decompose_gram(centered, s.eigenvalues, vectors);
  }
  s.eigenvalues = s.eigenvalues.cwiseMax(0.0);

  const double total = s.eigenvalues.sum();
  if (!(total > 0.0)) {
    return degenerate_summary(n, with_eigenvectors);
  }
  s.normalized = s.eigenvalues / total;
  return s;
}

double var_lambda(std::span<const double> lambda) {
  if (lambda.empty()) return 0.0;
  const double count = static_cast<double>(lambda.size());
  double mean = 0.0;
  for (double v : lambda) mean += v;
  mean /= count;
  double var = 0.0;
  for (double v : lambda) var += (v - mean) * (v - mean);
  return var / count;
}

double var_lambda(const SpectralSummary& s) {
  return var_lambda(std::span<const double>(s.normalized.data(), static_cast<std::size_t>(s.normalized.size())));
}

double fractional_anisotropy(std::span<const double> lambda, FaForm form) {
  if (lambda.size() < 2) return 0.0;
  const double count = static_cast<double>(lambda.size());
  double second = 0.0;
  for (double v : lambda) second += v * v;
  second /= count;
  if (!(second > 0.0)) return 0.0;

  // Var / E(lambda^2) equals 1 - E(lambda)^2 / E(lambda^2) but avoids cancellation.
  const double raw = std::sqrt(var_lambda(lambda) / second);
  if (form == FaForm::raw) return raw;
  return raw * std::sqrt(count / (count - 1.0));
}

double fractional_anisotropy(const SpectralSummary& s, FaForm form) {
  if (s.degenerate) return 0.0;
  return fractional_anisotropy(
      std::span<const double>(s.normalized.data(), static_cast<std::size_t>(s.normalized.size())), form);
}

double fa_global(std::span<const ClusterView> views, FaForm form, unsigned threads) {
  if (views.empty()) {
    throw DataError("fa_global needs at least one cluster");
  }
  std::vector<double> fa(views.size(), 0.0);
  parallel_for(views.size(), threads, [&](std::size_t i) {
    fa[i] = fractional_anisotropy(spectral_summary(views[i], false), form);
  });
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < views.size(); ++i) {
    weighted += static_cast<double>(views[i].size()) * fa[i];
    total += static_cast<double>(views[i].size());
  }
  return weighted / total;
}

}  // namespace isotropy
