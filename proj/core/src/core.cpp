#include "isotropy/core.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace isotropy {

PointCloud::PointCloud(Matrix data, std::vector<std::string> column_names)
    : data_(std::move(data)), names_(std::move(column_names)) {
  if (data_.rows() < 1 || data_.cols() < 1) {
    throw DataError("point cloud needs at least one point and one dimension");
  }
  if (!data_.allFinite()) {
    for (Index r = 0; r < data_.rows(); ++r) {
      if (!data_.row(r).allFinite()) {
        throw DataError("non-finite value in point " + std::to_string(r));
      }
    }
  }
  if (!names_.empty() && static_cast<Index>(names_.size()) != data_.cols()) {
    throw DataError("column name count does not match dimensionality");
  }
}

ClusterAssignment::ClusterAssignment(std::vector<int> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw DataError("empty cluster assignment");
  }
  const auto [lo, hi] = std::minmax_element(labels_.begin(), labels_.end());
  if (*lo < 0) {
    throw DataError("label out of range: " + std::to_string(*lo));
  }
  std::vector<bool> seen(static_cast<std::size_t>(*hi) + 1, false);
  for (int l : labels_) seen[static_cast<std::size_t>(l)] = true;
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw DataError("non-contiguous labels");
  }
  k_ = *hi + 1;
}

ClusterAssignment ClusterAssignment::single(Index points) {
  return ClusterAssignment(std::vector<int>(static_cast<std::size_t>(points), 0));
}

std::vector<Index> ClusterAssignment::cluster_sizes() const {
  std::vector<Index> sizes(static_cast<std::size_t>(k_), 0);
  for (int l : labels_) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

ClusterView::ClusterView(const PointCloud& cloud, std::vector<Index> members)
    : cloud_(&cloud), members_(std::move(members)) {
  if (members_.empty()) {
    throw DataError("empty cluster");
  }
  const Index n = cloud.dims();
  centroid_ = Vector::Zero(n);
  double scale = 0.0;
  for (Index m : members_) {
    if (m < 0 || m >= cloud.size()) {
      throw DataError("member index out of range: " + std::to_string(m));
    }
    centroid_ += cloud.row(m).transpose();
    scale = std::max(scale, cloud.row(m).cwiseAbs().maxCoeff());
  }
  centroid_ /= static_cast<double>(members_.size());

  double spread = 0.0;
  double norm_sum = 0.0;
  for (Index m : members_) {
    const Vector diff = cloud.row(m).transpose() - centroid_;
    spread = std::max(spread, diff.cwiseAbs().maxCoeff());
    norm_sum += diff.norm();
  }
  degenerate_ = spread <= 8.0 * std::numeric_limits<double>::epsilon() * scale;
  mu_ = degenerate_ ? 0.0 : norm_sum / static_cast<double>(members_.size());
}

ClusterView ClusterView::whole(const PointCloud& cloud) {
  std::vector<Index> all(static_cast<std::size_t>(cloud.size()));
  for (Index i = 0; i < cloud.size(); ++i) all[static_cast<std::size_t>(i)] = i;
  return ClusterView(cloud, std::move(all));
}

Matrix ClusterView::centered() const {
  Matrix out(size(), dims());
  for (Index i = 0; i < size(); ++i) {
    out.row(i) = cloud_->row(members_[static_cast<std::size_t>(i)]) - centroid_.transpose();
  }
  return out;
}

std::vector<ClusterView> split_clusters(const PointCloud& cloud, const ClusterAssignment& assign) {
  if (assign.size() != cloud.size()) {
    throw DataError("assignment has " + std::to_string(assign.size()) + " labels for " +
                    std::to_string(cloud.size()) + " points");
  }
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(assign.cluster_count()));
  const auto labels = assign.labels();
  for (Index i = 0; i < assign.size(); ++i) {
    members[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(i);
  }
  std::vector<ClusterView> views;
  views.reserve(members.size());
  for (auto& m : members) views.emplace_back(cloud, std::move(m));
  return views;
}

Vector center_and_scale(const ClusterView& view, const Eigen::Ref<const Vector>& point) {
  if (point.size() != view.dims()) {
    throw DataError("dimension mismatch");
  }
  if (view.degenerate()) {
    throw DataError("degenerate cluster");
  }
  return (point - view.centroid()) / view.mu();
}

std::optional<std::pair<double, double>> documented_bounds(std::string_view metric) {
  if (metric == "var_lambda") return std::pair{0.0, 0.25};
  if (metric == "fa" || metric == "fa_g" || metric == "fa_normalized" || metric == "fa_g_normalized" ||
      metric == "i_vec" || metric == "i_rnd" || metric == "i_g_vec" || metric == "i_g_rnd") {
    return std::pair{0.0, 1.0};
  }
  if (metric == "silhouette") return std::pair{-1.0, 1.0};
  return std::nullopt;
}

void MetricReport::check_bounds(double slack) const {
  auto check = [slack](const std::string& name, double v) {
    if (auto b = documented_bounds(name)) {
      if (!(v >= b->first - slack && v <= b->second + slack)) {
        throw DataError("metric " + name + " = " + std::to_string(v) + " outside documented bounds");
      }
    }
  };
  for (const auto& [name, v] : global) check(name, v);
  for (const auto& c : clusters) {
    for (const auto& [name, v] : c.values) check(name, v);
  }
}

nlohmann::json MetricReport::to_json() const {
  nlohmann::json j;
  j["version"] = std::string(kVersion);
  j["parameters"] = parameters;
  j["global"] = global;
  auto& cl = j["clusters"] = nlohmann::json::array();
  for (const auto& c : clusters) {
    cl.push_back({{"id", c.id}, {"size", c.size}, {"degenerate", c.degenerate}, {"metrics", c.values}});
  }
  j["flags"] = flags;
  j["metadata"] = {{"seed", seed},
                   {"vectors", vectors},
                   {"dims", dims},
                   {"points", points},
                   {"k", cluster_count},
                   {"timings_seconds", timings_seconds}};
  return j;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace isotropy
