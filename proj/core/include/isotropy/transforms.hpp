#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "isotropy/core.hpp"

namespace isotropy {

/// Column bounds observed by minmax_scale, reusable on other data.
struct MinMaxRecord {
  Vector column_min;
  Vector column_max;
  double lo = -1.0;
  double hi = 1.0;
  std::vector<bool> constant;  ///< columns with max == min (mapped to the midpoint)
};

struct MinMaxResult {
  PointCloud cloud;
  MinMaxRecord record;
};

/// Affinely maps each column so its observed min -> lo and max -> hi.
MinMaxResult minmax_scale(const PointCloud& cloud, double lo = -1.0, double hi = 1.0);

/// Applies previously recorded column bounds.
PointCloud apply_minmax(const PointCloud& cloud, const MinMaxRecord& record);

/// Random Fourier feature map f(x) = sqrt(2/l) cos(x W + o) approximating
/// the kernel exp(-gamma |x - y|^2). W entries ~ N(0, 2 gamma) (standard
/// deviation sqrt(2 gamma)), o ~ U[0, 2 pi), l = output dimension.
class RbfMap {
 public:
  RbfMap(Matrix weights, Vector offsets, double gamma, std::uint64_t seed);

  Index input_dims() const noexcept { return weights_.rows(); }
  Index output_dims() const noexcept { return weights_.cols(); }
  const Matrix& weights() const noexcept { return weights_; }
  const Vector& offsets() const noexcept { return offsets_; }
  double gamma() const noexcept { return gamma_; }
  std::uint64_t seed() const noexcept { return seed_; }

  nlohmann::json to_json() const;
  static RbfMap from_json(const nlohmann::json& j);

 private:
  Matrix weights_;
  Vector offsets_;
  double gamma_;
  std::uint64_t seed_;
};

/// gamma <= 0 selects the default 1 / n_in.
RbfMap rbf_fit(Index n_in, Index n_out, double gamma, std::uint64_t seed);

PointCloud rbf_transform(const RbfMap& map, const PointCloud& cloud);

/// Coordinates of the centred cloud on its top `dims` principal axes.
/// Axis signs are fixed so the largest-magnitude loading is positive.
PointCloud pca_project(const PointCloud& cloud, Index dims);

}  // namespace isotropy
