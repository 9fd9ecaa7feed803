#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "isotropy/core.hpp"

namespace isotropy {

/// Deterministic per-item seed derived from a base seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

/// `count` points in n dimensions, every coordinate ~ N(mean, std^2).
PointCloud gaussian_cluster(Index n, Index count, double mean, double std, std::uint64_t seed);

/// Axis-aligned Gaussian with one standard deviation per axis (n = stds.size()).
PointCloud anisotropic_gaussian(std::span<const double> stds, Index count, std::uint64_t seed);

enum class ShapeKind { s_curve, l_shape };

/// Parses "s_curve" / "l_shape"; throws DataError otherwise.
ShapeKind parse_shape_kind(std::string_view name);

/// 2-D shapes with additive N(0, noise^2) jitter.
///  s_curve: (sin t, sign(t)(cos t - 1)), t uniform on [-3pi/2, 3pi/2].
///  l_shape: a reverse L of two arms of length 1 and width 0.1 meeting at the
///           origin, points uniform over the arms' area.
PointCloud shape_cluster(ShapeKind kind, Index count, double noise, std::uint64_t seed);

}  // namespace isotropy
