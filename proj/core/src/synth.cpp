#include "isotropy/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace isotropy {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

PointCloud gaussian_cluster(Index n, Index count, double mean, double std, std::uint64_t seed) {
  if (n < 1 || count < 1) {
    throw DataError("gaussian_cluster needs n >= 1 and count >= 1");
  }
  if (!(std >= 0.0) || !std::isfinite(mean)) {
    throw DataError("gaussian_cluster needs a finite mean and nonnegative std");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix data(count, n);
  for (Index i = 0; i < count; ++i) {
    for (Index j = 0; j < n; ++j) data(i, j) = mean + std * gauss(rng);
  }
  return PointCloud(std::move(data));
}

PointCloud anisotropic_gaussian(std::span<const double> stds, Index count, std::uint64_t seed) {
  if (stds.empty() || count < 1) {
    throw DataError("anisotropic_gaussian needs at least one axis and one point");
  }
  for (double s : stds) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw DataError("negative std");
  }
  const auto n = static_cast<Index>(stds.size());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix data(count, n);
  for (Index i = 0; i < count; ++i) {
    for (Index j = 0; j < n; ++j) data(i, j) = stds[static_cast<std::size_t>(j)] * gauss(rng);
  }
  return PointCloud(std::move(data));
}

ShapeKind parse_shape_kind(std::string_view name) {
  if (name == "s_curve") return ShapeKind::s_curve;
  if (name == "l_shape") return ShapeKind::l_shape;
  throw DataError("unknown shape kind: " + std::string(name));
}

PointCloud shape_cluster(ShapeKind kind, Index count, double noise, std::uint64_t seed) {
  if (count < 1) throw DataError("shape_cluster needs at least one point");
  if (!(noise >= 0.0)) throw DataError("noise must be nonnegative");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> jitter(0.0, 1.0);
  Matrix data(count, 2);

  constexpr double arm_length = 1.0;
  constexpr double arm_width = 0.1;
  for (Index i = 0; i < count; ++i) {
    double x = 0.0;
    double y = 0.0;
    if (kind == ShapeKind::s_curve) {
      const double t = 3.0 * std::numbers::pi * (unit(rng) - 0.5);
      x = std::sin(t);
      y = (t < 0.0 ? -1.0 : 1.0) * (std::cos(t) - 1.0);
    } else {
      // Horizontal arm [-1, 0] x [0, w]; vertical arm [-w, 0] x [w, 1].
      // Arm areas are l*w and (l-w)*w, so pick the arm proportionally.
      const double horizontal_area = arm_length * arm_width;
      const double vertical_area = (arm_length - arm_width) * arm_width;
      if (unit(rng) * (horizontal_area + vertical_area) < horizontal_area) {
        x = -arm_length * unit(rng);
        y = arm_width * unit(rng);
      } else {
        x = -arm_width * unit(rng);
        y = arm_width + (arm_length - arm_width) * unit(rng);
      }
    }
    data(i, 0) = x + noise * jitter(rng);
    data(i, 1) = y + noise * jitter(rng);
  }
  return PointCloud(std::move(data));
}

}  // namespace isotropy
