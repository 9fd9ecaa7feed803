#include "isotropy/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace isotropy {
namespace {

void require_match(const PointCloud& cloud, const ClusterAssignment& assign) {
  if (assign.size() != cloud.size()) {
    throw DataError("assignment length does not match point count");
  }
}

void require_two_clusters(const ClusterAssignment& assign, const char* metric) {
  if (assign.cluster_count() < 2) {
    throw DataError(std::string(metric) + " needs at least two clusters");
  }
}

Matrix centroids_of(std::span<const ClusterView> views) {
  Matrix c(static_cast<Index>(views.size()), views.front().dims());
  for (std::size_t i = 0; i < views.size(); ++i) c.row(static_cast<Index>(i)) = views[i].centroid().transpose();
  return c;
}

}  // namespace

double mean_dist_to_centroid(std::span<const ClusterView> views) {
  if (views.empty()) throw DataError("no clusters");
  double sum = 0.0;
  Index points = 0;
  for (const auto& v : views) {
    for (Index m : v.members()) sum += (v.cloud().row(m).transpose() - v.centroid()).norm();
    points += v.size();
  }
  return sum / static_cast<double>(points);
}

double mean_pairwise_dist(std::span<const ClusterView> views) {
  if (views.empty()) throw DataError("no clusters");
  double weighted = 0.0;
  Index points = 0;
  for (const auto& v : views) {
    points += v.size();
    if (v.size() < 2) continue;
    const auto members = v.members();
    double sum = 0.0;
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        sum += (v.cloud().row(members[i]) - v.cloud().row(members[j])).norm();
      }
    }
    const double pairs = 0.5 * static_cast<double>(members.size()) * static_cast<double>(members.size() - 1);
    weighted += static_cast<double>(v.size()) * sum / pairs;
  }
  return weighted / static_cast<double>(points);
}

double silhouette(const PointCloud& cloud, const ClusterAssignment& assign, unsigned threads) {
  require_match(cloud, assign);
  require_two_clusters(assign, "silhouette");
  const auto labels = assign.labels();
  const auto sizes = assign.cluster_sizes();
  const auto k = static_cast<std::size_t>(assign.cluster_count());
  const auto count = static_cast<std::size_t>(cloud.size());

  std::vector<double> scores(count, 0.0);
  parallel_for(count, threads, [&](std::size_t i) {
    const auto own = static_cast<std::size_t>(labels[i]);
    if (sizes[own] < 2) return;
    std::vector<double> dist_sum(k, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
      if (j == i) continue;
      dist_sum[static_cast<std::size_t>(labels[j])] +=
          (cloud.row(static_cast<Index>(i)) - cloud.row(static_cast<Index>(j))).norm();
    }
    const double a = dist_sum[own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, dist_sum[c] / static_cast<double>(sizes[c]));
    }
    const double denom = std::max(a, b);
    scores[i] = denom > 0.0 ? (b - a) / denom : 0.0;
  });
  double sum = 0.0;
  for (double s : scores) sum += s;
  return sum / static_cast<double>(count);
}

double davies_bouldin(const PointCloud& cloud, const ClusterAssignment& assign) {
  require_match(cloud, assign);
  require_two_clusters(assign, "davies_bouldin");
  const auto views = split_clusters(cloud, assign);
  const Matrix centroids = centroids_of(views);
  const auto k = static_cast<Index>(views.size());

  std::vector<double> spread(views.size());
  for (std::size_t i = 0; i < views.size(); ++i) {
    spread[i] = mean_dist_to_centroid(std::span<const ClusterView>(&views[i], 1));
  }
  double total = 0.0;
  for (Index i = 0; i < k; ++i) {
    double worst = 0.0;
    for (Index j = 0; j < k; ++j) {
      if (i == j) continue;
      const double separation = (centroids.row(i) - centroids.row(j)).norm();
      if (!(separation > 0.0)) {
        throw DataError("identical centroids");
      }
      worst = std::max(worst, (spread[static_cast<std::size_t>(i)] + spread[static_cast<std::size_t>(j)]) / separation);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

double calinski_harabasz(const PointCloud& cloud, const ClusterAssignment& assign) {
  require_match(cloud, assign);
  require_two_clusters(assign, "calinski_harabasz");
  const Index k = assign.cluster_count();
  if (cloud.size() <= k) {
    throw DataError("calinski_harabasz needs more points than clusters");
  }
  const auto views = split_clusters(cloud, assign);
  const Vector global = cloud.data().colwise().mean().transpose();

  double between = 0.0;
  double within = 0.0;
  for (const auto& v : views) {
    between += static_cast<double>(v.size()) * (v.centroid() - global).squaredNorm();
    for (Index m : v.members()) within += (v.cloud().row(m).transpose() - v.centroid()).squaredNorm();
  }
  const bool all_degenerate =
      std::all_of(views.begin(), views.end(), [](const ClusterView& v) { return v.degenerate(); });
  if (all_degenerate || !(within > 0.0)) {
    throw DataError("degenerate dispersion");
  }
  return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(cloud.size() - k));
}

double cluster_size_variance(const ClusterAssignment& assign) {
  const auto sizes = assign.cluster_sizes();
  double mean = 0.0;
  for (Index s : sizes) mean += static_cast<double>(s);
  mean /= static_cast<double>(sizes.size());
  double var = 0.0;
  for (Index s : sizes) var += (static_cast<double>(s) - mean) * (static_cast<double>(s) - mean);
  return var / static_cast<double>(sizes.size());
}

}  // namespace isotropy
