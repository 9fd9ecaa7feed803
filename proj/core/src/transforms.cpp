#include "isotropy/transforms.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/SVD>

namespace isotropy {

MinMaxResult minmax_scale(const PointCloud& cloud, double lo, double hi) {
  if (!(hi > lo)) {
    throw DataError("minmax: hi must exceed lo");
  }
  MinMaxRecord record;
  record.column_min = cloud.data().colwise().minCoeff().transpose();
  record.column_max = cloud.data().colwise().maxCoeff().transpose();
  record.lo = lo;
  record.hi = hi;
  record.constant.resize(static_cast<std::size_t>(cloud.dims()));
  for (Index j = 0; j < cloud.dims(); ++j) {
    record.constant[static_cast<std::size_t>(j)] = !(record.column_max(j) > record.column_min(j));
  }
  PointCloud scaled = apply_minmax(cloud, record);
  return {std::move(scaled), std::move(record)};
}

PointCloud apply_minmax(const PointCloud& cloud, const MinMaxRecord& record) {
  if (record.column_min.size() != cloud.dims()) {
    throw DataError("minmax record dimensionality mismatch");
  }
  Matrix out(cloud.size(), cloud.dims());
  const double mid = 0.5 * (record.lo + record.hi);
  for (Index j = 0; j < cloud.dims(); ++j) {
    const double range = record.column_max(j) - record.column_min(j);
    if (!(range > 0.0)) {
      out.col(j).setConstant(mid);
      continue;
    }
    const double scale = (record.hi - record.lo) / range;
    for (Index i = 0; i < cloud.size(); ++i) {
      out(i, j) = record.lo + (cloud.data()(i, j) - record.column_min(j)) * scale;
    }
  }
  return PointCloud(std::move(out), cloud.column_names());
}

RbfMap::RbfMap(Matrix weights, Vector offsets, double gamma, std::uint64_t seed)
    : weights_(std::move(weights)), offsets_(std::move(offsets)), gamma_(gamma), seed_(seed) {
  if (weights_.rows() < 1 || weights_.cols() < 1) {
    throw DataError("rbf map needs at least one input and one output dimension");
  }
  if (offsets_.size() != weights_.cols()) {
    throw DataError("rbf offsets length must equal output dimensionality");
  }
  if (!(gamma_ > 0.0)) {
    throw DataError("rbf gamma must be positive");
  }
  if (!weights_.allFinite() || !offsets_.allFinite()) {
    throw DataError("rbf map has non-finite parameters");
  }
}

nlohmann::json RbfMap::to_json() const {
  nlohmann::json w = nlohmann::json::array();
  for (Index i = 0; i < weights_.rows(); ++i) {
    w.push_back(std::vector<double>(weights_.row(i).begin(), weights_.row(i).end()));
  }
  return {{"kind", "rbf"},
          {"input_dims", weights_.rows()},
          {"output_dims", weights_.cols()},
          {"gamma", gamma_},
          {"seed", seed_},
          {"weights", std::move(w)},
          {"offsets", std::vector<double>(offsets_.begin(), offsets_.end())}};
}

RbfMap RbfMap::from_json(const nlohmann::json& j) {
  try {
    const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
    const auto offsets = j.at("offsets").get<std::vector<double>>();
    if (rows.empty()) throw DataError("rbf map has no weights");
    Matrix w(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (static_cast<Index>(rows[i].size()) != w.cols()) throw DataError("ragged rbf weight matrix");
      for (std::size_t k = 0; k < rows[i].size(); ++k) w(static_cast<Index>(i), static_cast<Index>(k)) = rows[i][k];
    }
    Vector o = Eigen::Map<const Vector>(offsets.data(), static_cast<Index>(offsets.size()));
    return RbfMap(std::move(w), std::move(o), j.at("gamma").get<double>(), j.at("seed").get<std::uint64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed rbf map: ") + e.what());
  }
}

RbfMap rbf_fit(Index n_in, Index n_out, double gamma, std::uint64_t seed) {
  if (n_in < 1 || n_out < 1) {
    throw DataError("rbf_fit needs positive input and output dimensions");
  }
  if (!(gamma > 0.0)) gamma = 1.0 / static_cast<double>(n_in);

  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> weight(0.0, std::sqrt(2.0 * gamma));
  std::uniform_real_distribution<double> phase(0.0, two_pi);

  Matrix w(n_in, n_out);
  for (Index i = 0; i < n_in; ++i) {
    for (Index j = 0; j < n_out; ++j) w(i, j) = weight(rng);
  }
  Vector o(n_out);
  for (Index j = 0; j < n_out; ++j) {
    const double p = phase(rng);
    o(j) = p < two_pi ? p : 0.0;
  }
  return RbfMap(std::move(w), std::move(o), gamma, seed);
}

PointCloud rbf_transform(const RbfMap& map, const PointCloud& cloud) {
  if (cloud.dims() != map.input_dims()) {
    throw DataError("rbf map expects " + std::to_string(map.input_dims()) + " dimensions, got " +
                    std::to_string(cloud.dims()));
  }
  Matrix projected = cloud.data() * map.weights();
  projected.rowwise() += map.offsets().transpose();
  const double scale = std::sqrt(2.0 / static_cast<double>(map.output_dims()));
  Matrix out = (projected.array().cos() * scale).matrix();
  return PointCloud(std::move(out));
}

PointCloud pca_project(const PointCloud& cloud, Index dims) {
  if (dims < 1 || dims > cloud.dims()) {
    throw DataError("projection dimensionality must be between 1 and " + std::to_string(cloud.dims()));
  }
  const Eigen::MatrixXd centered = cloud.data().rowwise() - cloud.data().colwise().mean();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinV);
  Eigen::MatrixXd axes = svd.matrixV().leftCols(std::min<Index>(dims, svd.matrixV().cols()));
  if (axes.cols() < dims) {
    // Fewer points than requested axes: pad with zero coordinates.
    Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(cloud.dims(), dims);
    padded.leftCols(axes.cols()) = axes;
    axes = padded;
  }
  for (Index c = 0; c < axes.cols(); ++c) {
    Index arg = 0;
    axes.col(c).cwiseAbs().maxCoeff(&arg);
    if (axes(arg, c) < 0.0) axes.col(c) = -axes.col(c);
  }
  Matrix out = centered * axes;
  return PointCloud(std::move(out));
}

}  // namespace isotropy
