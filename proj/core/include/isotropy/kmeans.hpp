#pragma once

#include <cstdint>
#include <vector>

#include "isotropy/core.hpp"

namespace isotropy {

struct KMeansOptions {
  int k = 5;
  std::uint64_t seed = 0;
  int max_iter = 300;
  /// Stop once ||C_new - C_old||_F <= tol * ||C_old||_F.
  double tol = 1e-6;
};

struct KMeansResult {
  ClusterAssignment assignment;
  Matrix centroids;  ///< k x n
  double inertia = 0.0;
  int iterations = 0;
  std::uint64_t seed = 0;
  bool converged = false;
  /// Number of empty-cluster repairs performed.
  int reseeds = 0;
  /// Inertia after each assignment step; nonincreasing.
  std::vector<double> inertia_history;
};

/// Lloyd iterations from k-means++ seeding. Labels are nearest centroids with
/// ties going to the lowest id; empty clusters are refilled with the point
/// farthest from its centroid. Single-threaded and deterministic per seed.
KMeansResult kmeans(const PointCloud& cloud, const KMeansOptions& options);

}  // namespace isotropy
