#pragma once

#include <cstdint>
#include <span>
#include <variant>

#include "isotropy/core.hpp"
#include "isotropy/spectral.hpp"

namespace isotropy {

/// A nonempty set of unit vectors at which Z' is evaluated. Each row is one
/// direction. Both +v and -v are evaluated for every stored direction.
class DirectionSet {
 public:
  enum class Provenance { eigenvector, random, user };

  /// Validates every row to unit norm within 1e-10.
  explicit DirectionSet(Matrix vectors, Provenance provenance = Provenance::user, std::uint64_t seed = 0);

  /// Gaussian-normalise sampling, uniform on the (n-1)-sphere. count >= 2.
  static DirectionSet random(Index n, Index count, std::uint64_t seed);

  /// Eigenvectors of a spectral summary, one direction per eigenpair.
  static DirectionSet eigenvectors(const SpectralSummary& s);

  const Matrix& vectors() const noexcept { return vectors_; }
  Index count() const noexcept { return vectors_.rows(); }
  Index dims() const noexcept { return vectors_.cols(); }
  Provenance provenance() const noexcept { return provenance_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Union of both sets (rows of this followed by rows of other).
  DirectionSet merged(const DirectionSet& other) const;

  /// Every direction mapped through an orthogonal matrix q (v -> q v).
  DirectionSet transformed(const Eigen::Ref<const Eigen::MatrixXd>& q) const;

 private:
  Matrix vectors_;
  Provenance provenance_;
  std::uint64_t seed_;
};

inline DirectionSet random_unit_vectors(Index n, Index count, std::uint64_t seed) {
  return DirectionSet::random(n, count, seed);
}

inline constexpr Index kDefaultRandomVectors = 1000;

/// Z(a) = sum_d exp(a.d) over raw member coordinates; not invariant.
double z_raw(const ClusterView& view, const Eigen::Ref<const Vector>& a);

/// Z'(a) = sum_d exp(a.(d - centroid) / mu). Throws on degenerate clusters.
double z_prime(const ClusterView& view, const Eigen::Ref<const Vector>& a);

/// log Z'(a), evaluated with a log-sum-exp shift.
double log_z_prime(const ClusterView& view, const Eigen::Ref<const Vector>& a);

/// min Z / max Z over +-B using raw coordinates (the non-invariant ratio).
double raw_z_ratio(const ClusterView& view, const DirectionSet& b);

/// I_c|B = min Z' / max Z' over +-B, in (0, 1]. Degenerate clusters give 1.
double isotropy_given_b(const ClusterView& view, const DirectionSet& b);

/// I_c|B with B the full eigenvector basis of the cluster's scatter matrix.
double isotropy_vec(const ClusterView& view);
double isotropy_vec(const ClusterView& view, const SpectralSummary& s);

/// I_c|B with B = random_unit_vectors(n, count, seed).
double isotropy_rnd(const ClusterView& view, Index count = kDefaultRandomVectors, std::uint64_t seed = 0);

struct VecMethod {};
struct RndMethod {
  Index count = kDefaultRandomVectors;
  std::uint64_t seed = 0;
};
using GlobalMethod = std::variant<VecMethod, RndMethod>;

/// Per-cluster I_c values under a method; the random direction set is drawn
/// once and shared by every cluster.
std::vector<double> isotropy_per_cluster(std::span<const ClusterView> views, const GlobalMethod& method,
                                         unsigned threads = 1);

/// Cluster-size weighted mean of I_c (I_g,vec or I_g,rnd).
double isotropy_global(std::span<const ClusterView> views, const GlobalMethod& method, unsigned threads = 1);

}  // namespace isotropy
