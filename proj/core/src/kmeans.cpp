#include "isotropy/kmeans.hpp"

#include <limits>
#include <random>

namespace isotropy {
namespace {

struct Nearest {
  int label = 0;
  double dist2 = 0.0;
};

Nearest nearest(const Matrix& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& point) {
  Nearest best{0, std::numeric_limits<double>::infinity()};
  for (Index c = 0; c < centroids.rows(); ++c) {
    const double d = (centroids.row(c) - point).squaredNorm();
    if (d < best.dist2) best = {static_cast<int>(c), d};
  }
  return best;
}

Matrix plus_plus_seed(const Matrix& data, int k, std::mt19937_64& rng) {
  const Index count = data.rows();
  Matrix centroids(k, data.cols());
  std::uniform_int_distribution<Index> pick(0, count - 1);
  std::vector<bool> chosen(static_cast<std::size_t>(count), false);

  Index first = pick(rng);
  chosen[static_cast<std::size_t>(first)] = true;
  centroids.row(0) = data.row(first);

  std::vector<double> d2(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) d2[static_cast<std::size_t>(i)] = (data.row(i) - centroids.row(0)).squaredNorm();

  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    Index next = -1;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double r = u(rng);
      double cum = 0.0;
      for (Index i = 0; i < count; ++i) {
        const double w = d2[static_cast<std::size_t>(i)];
        cum += w;
        if (w > 0.0 && cum > r) {
          next = i;
          break;
        }
      }
      if (next < 0) {
        // r landed on the rounding tail; take the last point with weight.
        for (Index i = count - 1; i >= 0; --i) {
          if (d2[static_cast<std::size_t>(i)] > 0.0) {
            next = i;
            break;
          }
        }
      }
    } else {
      for (Index i = 0; i < count && next < 0; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) next = i;
      }
    }
    chosen[static_cast<std::size_t>(next)] = true;
    centroids.row(c) = data.row(next);
    for (Index i = 0; i < count; ++i) {
      d2[static_cast<std::size_t>(i)] =
          std::min(d2[static_cast<std::size_t>(i)], (data.row(i) - centroids.row(c)).squaredNorm());
    }
  }
  return centroids;
}

// Assigns every point to its nearest centroid, then refills empty clusters
// with the farthest point of a cluster that can spare one. Returns inertia.
double assign_points(const Matrix& data, Matrix& centroids, std::vector<int>& labels, std::vector<double>& dist2,
                     int& reseeds) {
  const Index count = data.rows();
  const auto k = static_cast<std::size_t>(centroids.rows());
  std::vector<Index> sizes(k, 0);
  for (Index i = 0; i < count; ++i) {
    const Nearest n = nearest(centroids, data.row(i));
    labels[static_cast<std::size_t>(i)] = n.label;
    dist2[static_cast<std::size_t>(i)] = n.dist2;
    ++sizes[static_cast<std::size_t>(n.label)];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] > 0) continue;
    Index far = -1;
    for (Index i = 0; i < count; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (sizes[static_cast<std::size_t>(labels[idx])] < 2) continue;
      if (far < 0 || dist2[idx] > dist2[static_cast<std::size_t>(far)]) far = i;
    }
    const auto fi = static_cast<std::size_t>(far);
    --sizes[static_cast<std::size_t>(labels[fi])];
    labels[fi] = static_cast<int>(c);
    dist2[fi] = 0.0;
    ++sizes[c];
    centroids.row(static_cast<Index>(c)) = data.row(far);
    ++reseeds;
  }
  double inertia = 0.0;
  for (double d : dist2) inertia += d;
  return inertia;
}

Matrix cluster_means(const Matrix& data, const std::vector<int>& labels, Index k) {
  Matrix sums = Matrix::Zero(k, data.cols());
  std::vector<Index> sizes(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < data.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    sums.row(l) += data.row(i);
    ++sizes[static_cast<std::size_t>(l)];
  }
  for (Index c = 0; c < k; ++c) sums.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
  return sums;
}

}  // namespace

KMeansResult kmeans(const PointCloud& cloud, const KMeansOptions& options) {
  const Index count = cloud.size();
  if (options.k < 1 || options.k > count) {
    throw DataError("k must be between 1 and the number of points (" + std::to_string(count) + ")");
  }
  if (options.max_iter < 1) {
    throw DataError("max_iter must be positive");
  }
  const Matrix& data = cloud.data();
  std::mt19937_64 rng(options.seed);
  Matrix centroids = plus_plus_seed(data, options.k, rng);

  std::vector<int> labels(static_cast<std::size_t>(count), 0);
  std::vector<int> previous;
  std::vector<double> dist2(static_cast<std::size_t>(count), 0.0);
  std::vector<double> history;
  int reseeds = 0;
  bool converged = false;
  int iter = 0;

  while (iter < options.max_iter) {
    ++iter;
    history.push_back(assign_points(data, centroids, labels, dist2, reseeds));
    if (labels == previous) {
      converged = true;
      break;
    }
    previous = labels;
    Matrix updated = cluster_means(data, labels, options.k);
    const double movement = (updated - centroids).norm();
    const double scale = centroids.norm();
    centroids = std::move(updated);
    if (movement <= options.tol * (scale > 0.0 ? scale : 1.0)) {
      converged = true;
      break;
    }
  }
  // Labels must be nearest to the centroids that are returned.
  const double inertia = assign_points(data, centroids, labels, dist2, reseeds);
  if (history.empty() || inertia != history.back()) history.push_back(inertia);

  KMeansResult result{ClusterAssignment(labels), std::move(centroids), inertia, iter, options.seed, converged, reseeds,
                      std::move(history)};
  return result;
}

}  // namespace isotropy
