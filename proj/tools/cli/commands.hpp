#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "isotropy/core.hpp"
#include "isotropy/kmeans.hpp"
#include "isotropy/transforms.hpp"

namespace isotropy::cli {

/// Bad command-line usage (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// measure ------------------------------------------------------------------

/// Metric names accepted by --metrics ("all" expands to every one).
const std::vector<std::string>& known_metrics();
std::vector<std::string> resolve_metrics(const std::vector<std::string>& requested);

struct MeasureOptions {
  std::vector<std::string> metrics = known_metrics();
  Index vectors = 1000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  bool fa_normalized = false;
};

/// Computes the requested metrics for one clustering. Metrics that cannot be
/// evaluated (a single cluster for silhouette, identical centroids for
/// Davies-Bouldin, ...) are omitted and explained in `flags`.
MetricReport measure_clusters(const PointCloud& cloud, const ClusterAssignment& assign, const MeasureOptions& o);

/// Averages the global metrics of several reports (the --kmeans-multi mode).
/// Per-cluster entries are dropped; flags are prefixed with their report tag.
MetricReport average_reports(const std::vector<MetricReport>& reports, const std::vector<std::string>& tags);

// sweep --------------------------------------------------------------------

struct SweepOptions {
  std::vector<Index> dims{10, 100, 1000};
  Index points = 100;
  int repeats = 10;
  std::vector<Index> vectors{10, 100, 1000, 10000};
  std::uint64_t seed = 0;
  int timing_runs = 3;
};

struct SweepRow {
  Index dim = 0;
  std::string method;  ///< "vec" or "rnd"
  Index vectors = 0;   ///< directions per sign (n for vec)
  int repeats = 0;
  double mean_value = 0.0;
  double mean_seconds = 0.0;  ///< mean over repeats of the per-cluster median time
};

/// Gaussian clusters (mean 0, std 1) per dimension; I_c,vec and I_c,rnd for
/// each vector count on the same clusters.
std::vector<SweepRow> run_sweep(const SweepOptions& o);
CsvTable sweep_table(const std::vector<SweepRow>& rows);

// mp -----------------------------------------------------------------------

struct MpOptions {
  double points = 100;
  std::vector<Index> dims{10, 100, 1000, 10000};
  double sigma2 = 1.0;
  double mu = 0.0;
  Index samples = 10;  ///< sampled clusters per n for the empirical columns; 0 disables
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct MpRow {
  Index dims = 0;
  double lambda_min = 0.0, lambda_max = 0.0, mass = 0.0, mean = 0.0, second = 0.0;
  double expected_fa = 0.0, expected_var_lambda = 0.0;
  std::optional<double> empirical_fa, empirical_var_lambda;
};

std::vector<MpRow> run_mp(const MpOptions& o);
CsvTable mp_table(const std::vector<MpRow>& rows);

// transform ----------------------------------------------------------------

struct TransformStep {
  enum class Kind { minmax, rbf } kind = Kind::minmax;
  double lo = -1.0, hi = 1.0;
  Index components = 0;
  double gamma = 0.0;  ///< <= 0 selects 1 / input dims
  std::uint64_t seed = 0;
};

/// "minmax", "minmax(lo,hi)", "rbf", "rbf(L)", "rbf(L,gamma)", "rbf(L,gamma,seed)".
/// Omitted rbf arguments take the supplied defaults.
TransformStep parse_step(const std::string& text, Index default_components, double default_gamma,
                         std::uint64_t default_seed);

struct TransformResult {
  PointCloud cloud;
  nlohmann::json pipeline;  ///< fitted steps; replayable with replay_pipeline
};

TransformResult fit_pipeline(const PointCloud& cloud, const std::vector<TransformStep>& steps);
PointCloud replay_pipeline(const PointCloud& cloud, const nlohmann::json& pipeline);

// generate -----------------------------------------------------------------

struct GenerateOptions {
  std::string kind = "gaussian";  ///< gaussian | anisotropic | s_curve | l_shape
  Index dims = 2;
  Index count = 300;
  double mean = 0.0;
  double std = 1.0;
  std::vector<double> stds;
  double noise = 0.0;
  int clusters = 1;       ///< gaussian only; cluster c is centred at c * spacing
  double spacing = 10.0;
  std::uint64_t seed = 0;
};

/// Generated points; labels are present when more than one cluster is drawn.
Dataset run_generate(const GenerateOptions& o);

// cluster / project --------------------------------------------------------

nlohmann::json centroids_json(const KMeansResult& r);

}  // namespace isotropy::cli
