#include "isotropy/zmeasure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace isotropy {
namespace {

using ColMatrix = Eigen::MatrixXd;

struct LogExtremes {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

double log_sum_exp(const Eigen::Ref<const Vector>& x, double sign) {
  const double shift = sign > 0 ? x.maxCoeff() : -x.minCoeff();
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) sum += std::exp(sign * x(i) - shift);
  return shift + std::log(sum);
}

// Extremes of log sum_d exp(+-b.x_d) over the columns b of `directions`
// (n x m), with points as rows of `points` (|C| x n).
LogExtremes log_z_extremes(const Matrix& points, const Eigen::Ref<const ColMatrix>& directions) {
  const ColMatrix projections = points * directions;
  LogExtremes out;
  for (Index j = 0; j < projections.cols(); ++j) {
    for (double sign : {1.0, -1.0}) {
      const double v = log_sum_exp(projections.col(j), sign);
      out.min = std::min(out.min, v);
      out.max = std::max(out.max, v);
    }
  }
  return out;
}

double ratio(const LogExtremes& e) {
  const double r = std::exp(e.min - e.max);
  if (!std::isfinite(r)) {
    throw NumericError("non-finite isotropy ratio");
  }
  return r;
}

Matrix scaled_members(const ClusterView& view) {
  return view.centered() / view.mu();
}

Matrix raw_members(const ClusterView& view) {
  Matrix out(view.size(), view.dims());
  const auto members = view.members();
  for (Index i = 0; i < view.size(); ++i) {
    out.row(i) = view.cloud().row(members[static_cast<std::size_t>(i)]);
  }
  return out;
}

void check_direction(const ClusterView& view, const Eigen::Ref<const Vector>& a) {
  if (a.size() != view.dims()) {
    throw DataError("direction has " + std::to_string(a.size()) + " components, cluster has " +
                    std::to_string(view.dims()) + " dimensions");
  }
}

void check_directions(const ClusterView& view, const DirectionSet& b) {
  if (b.dims() != view.dims()) {
    throw DataError("direction set dimensionality " + std::to_string(b.dims()) + " does not match cluster " +
                    std::to_string(view.dims()));
  }
}

}  // namespace

DirectionSet::DirectionSet(Matrix vectors, Provenance provenance, std::uint64_t seed)
    : vectors_(std::move(vectors)), provenance_(provenance), seed_(seed) {
  if (vectors_.rows() < 1 || vectors_.cols() < 1) {
    throw DataError("direction set must be nonempty");
  }
  for (Index i = 0; i < vectors_.rows(); ++i) {
    const double norm = vectors_.row(i).norm();
    if (!(std::abs(norm - 1.0) <= 1e-10)) {
      throw DataError("direction " + std::to_string(i) + " is not a unit vector (norm " + std::to_string(norm) + ")");
    }
  }
}

DirectionSet DirectionSet::random(Index n, Index count, std::uint64_t seed) {
  if (n < 1) {
    throw DataError("dimension must be positive");
  }
  if (count < 2) {
    throw DataError("random direction count must be at least 2");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix v(count, n);
  for (Index i = 0; i < count; ++i) {
    double norm = 0.0;
    do {
      for (Index j = 0; j < n; ++j) v(i, j) = gauss(rng);
      norm = v.row(i).norm();
    } while (!(norm > 0.0));
    v.row(i) /= norm;
  }
  return DirectionSet(std::move(v), Provenance::random, seed);
}

DirectionSet DirectionSet::eigenvectors(const SpectralSummary& s) {
  return DirectionSet(s.eigenvectors.transpose(), Provenance::eigenvector);
}

DirectionSet DirectionSet::merged(const DirectionSet& other) const {
  if (other.dims() != dims()) {
    throw DataError("cannot merge direction sets of different dimensionality");
  }
  Matrix v(count() + other.count(), dims());
  v.topRows(count()) = vectors_;
  v.bottomRows(other.count()) = other.vectors_;
  return DirectionSet(std::move(v), Provenance::user);
}

DirectionSet DirectionSet::transformed(const Eigen::Ref<const Eigen::MatrixXd>& q) const {
  if (q.rows() != dims() || q.cols() != dims()) {
    throw DataError("transform must be n x n");
  }
  Matrix v = vectors_ * q.transpose();
  for (Index i = 0; i < v.rows(); ++i) v.row(i).normalize();
  return DirectionSet(std::move(v), provenance_, seed_);
}

double z_raw(const ClusterView& view, const Eigen::Ref<const Vector>& a) {
  check_direction(view, a);
  double sum = 0.0;
  for (Index m : view.members()) sum += std::exp(view.cloud().row(m).dot(a));
  return sum;
}

double log_z_prime(const ClusterView& view, const Eigen::Ref<const Vector>& a) {
  check_direction(view, a);
  if (view.degenerate()) {
    throw DataError("degenerate cluster");
  }
  const Vector projections = scaled_members(view) * a;
  return log_sum_exp(projections, 1.0);
}

double z_prime(const ClusterView& view, const Eigen::Ref<const Vector>& a) {
  return std::exp(log_z_prime(view, a));
}

double raw_z_ratio(const ClusterView& view, const DirectionSet& b) {
  check_directions(view, b);
  const ColMatrix directions = b.vectors().transpose();
  return ratio(log_z_extremes(raw_members(view), directions));
}

double isotropy_given_b(const ClusterView& view, const DirectionSet& b) {
  check_directions(view, b);
  if (view.degenerate()) return 1.0;
  const ColMatrix directions = b.vectors().transpose();
  return ratio(log_z_extremes(scaled_members(view), directions));
}

double isotropy_vec(const ClusterView& view, const SpectralSummary& s) {
  if (s.dims() != view.dims()) {
    throw DataError("spectral summary does not match cluster dimensionality");
  }
  if (view.degenerate() || s.degenerate) return 1.0;
  const ColMatrix directions = s.eigenvectors;
  return ratio(log_z_extremes(scaled_members(view), directions));
}

double isotropy_vec(const ClusterView& view) {
  if (view.degenerate()) return 1.0;
  return isotropy_vec(view, spectral_summary(view));
}

double isotropy_rnd(const ClusterView& view, Index count, std::uint64_t seed) {
  const DirectionSet b = DirectionSet::random(view.dims(), count, seed);
  return isotropy_given_b(view, b);
}

std::vector<double> isotropy_per_cluster(std::span<const ClusterView> views, const GlobalMethod& method,
                                         unsigned threads) {
  std::vector<double> values(views.size(), 1.0);
  if (views.empty()) return values;
  if (const auto* rnd = std::get_if<RndMethod>(&method)) {
    const DirectionSet shared = DirectionSet::random(views.front().dims(), rnd->count, rnd->seed);
    parallel_for(views.size(), threads, [&](std::size_t i) { values[i] = isotropy_given_b(views[i], shared); });
  } else {
    parallel_for(views.size(), threads, [&](std::size_t i) { values[i] = isotropy_vec(views[i]); });
  }
  return values;
}

double isotropy_global(std::span<const ClusterView> views, const GlobalMethod& method, unsigned threads) {
  if (views.empty()) {
    throw DataError("isotropy_global needs at least one cluster");
  }
  const auto values = isotropy_per_cluster(views, method, threads);
  double weighted = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < views.size(); ++i) {
    weighted += static_cast<double>(views[i].size()) * values[i];
    total += static_cast<double>(views[i].size());
  }
  return weighted / total;
}

}  // namespace isotropy
