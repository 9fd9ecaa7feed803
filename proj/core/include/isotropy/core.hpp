#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

namespace isotropy {

/// Row-major dense storage: one point per row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr std::string_view kVersion = "0.1.0";

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid input data or a violated precondition.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge or produced a non-finite value.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The universe of data: |E| points in n dimensions, all entries finite.
class PointCloud {
 public:
  explicit PointCloud(Matrix data, std::vector<std::string> column_names = {});

  Index size() const noexcept { return data_.rows(); }
  Index dims() const noexcept { return data_.cols(); }
  const Matrix& data() const noexcept { return data_; }
  auto row(Index i) const { return data_.row(i); }
  const std::vector<std::string>& column_names() const noexcept { return names_; }

 private:
  Matrix data_;
  std::vector<std::string> names_;
};

/// Per-point cluster labels; ids are contiguous 0..k-1 and every id is used.
class ClusterAssignment {
 public:
  explicit ClusterAssignment(std::vector<int> labels);

  /// Every point in one cluster.
  static ClusterAssignment single(Index points);

  std::span<const int> labels() const noexcept { return labels_; }
  Index size() const noexcept { return static_cast<Index>(labels_.size()); }
  int cluster_count() const noexcept { return k_; }
  std::vector<Index> cluster_sizes() const;

 private:
  std::vector<int> labels_;
  int k_ = 0;
};

/// A cluster as a set of rows of a parent PointCloud. The parent must outlive
/// the view. Centroid and mean centred magnitude are computed once.
class ClusterView {
 public:
  ClusterView(const PointCloud& cloud, std::vector<Index> members);
  ClusterView(const PointCloud&& cloud, std::vector<Index> members) = delete;

  static ClusterView whole(const PointCloud& cloud);
  static ClusterView whole(const PointCloud&& cloud) = delete;

  const PointCloud& cloud() const noexcept { return *cloud_; }
  std::span<const Index> members() const noexcept { return members_; }
  Index size() const noexcept { return static_cast<Index>(members_.size()); }
  Index dims() const noexcept { return cloud_->dims(); }
  const Vector& centroid() const noexcept { return centroid_; }

  /// Mean Euclidean norm of (d - centroid) over members.
  double mu() const noexcept { return mu_; }

  /// All members coincide (up to rounding of the centroid).
  bool degenerate() const noexcept { return degenerate_; }

  /// |C| x n matrix of member rows minus the centroid.
  Matrix centered() const;

 private:
  const PointCloud* cloud_;
  std::vector<Index> members_;
  Vector centroid_;
  double mu_ = 0.0;
  bool degenerate_ = false;
};

std::vector<ClusterView> split_clusters(const PointCloud& cloud, const ClusterAssignment& assign);

/// (point - centroid) / mu. Throws DataError for a degenerate cluster.
Vector center_and_scale(const ClusterView& view, const Eigen::Ref<const Vector>& point);

/// Documented output range of a named metric, if it has one.
std::optional<std::pair<double, double>> documented_bounds(std::string_view metric);

struct ClusterMetrics {
  int id = 0;
  Index size = 0;
  bool degenerate = false;
  std::map<std::string, double> values;
};

struct MetricReport {
  std::vector<ClusterMetrics> clusters;
  std::map<std::string, double> global;
  std::map<std::string, double> timings_seconds;
  std::vector<std::string> flags;
  nlohmann::json parameters = nlohmann::json::object();

  std::uint64_t seed = 0;
  Index vectors = 0;
  Index dims = 0;
  Index points = 0;
  int cluster_count = 0;

  /// Throws DataError naming the first value outside its documented range.
  void check_bounds(double slack = 1e-12) const;

  nlohmann::json to_json() const;
};

/// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
/// visited exactly once; the first exception thrown is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace isotropy
