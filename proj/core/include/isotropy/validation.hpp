#pragma once

#include <span>

#include "isotropy/core.hpp"

namespace isotropy {

// Internal cluster validation measures (no ground truth needed).

/// Mean over all points of the distance to the point's own centroid.
double mean_dist_to_centroid(std::span<const ClusterView> views);

/// Point-weighted mean over clusters of the mean distance between distinct
/// member pairs. Singleton clusters contribute 0.
double mean_pairwise_dist(std::span<const ClusterView> views);

/// Mean silhouette coefficient in [-1, 1]; a point alone in its cluster
/// scores 0. Requires k >= 2.
double silhouette(const PointCloud& cloud, const ClusterAssignment& assign, unsigned threads = 1);

/// Davies-Bouldin index (lower is better). Requires k >= 2 and distinct centroids.
double davies_bouldin(const PointCloud& cloud, const ClusterAssignment& assign);

/// Calinski-Harabasz index (higher is better). Requires k >= 2, |E| > k and
/// nonzero within-cluster dispersion.
double calinski_harabasz(const PointCloud& cloud, const ClusterAssignment& assign);

/// Population variance of cluster sizes.
double cluster_size_variance(const ClusterAssignment& assign);

}  // namespace isotropy
