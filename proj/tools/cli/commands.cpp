#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <regex>
#include <set>

#include "isotropy/spectral.hpp"
#include "isotropy/randmat.hpp"
#include "isotropy/synth.hpp"
#include "isotropy/validation.hpp"
#include "isotropy/zmeasure.hpp"

namespace isotropy::cli {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double weighted_mean(const std::vector<double>& values, const std::vector<ClusterView>& views) {
  double sum = 0.0, total = 0.0;
  for (std::size_t i = 0; i < views.size(); ++i) {
    sum += static_cast<double>(views[i].size()) * values[i];
    total += static_cast<double>(views[i].size());
  }
  return sum / total;
}

bool wants(const std::vector<std::string>& metrics, const std::string& name) {
  return std::find(metrics.begin(), metrics.end(), name) != metrics.end();
}

nlohmann::json record_json(const MinMaxRecord& r) {
  return {{"kind", "minmax"},
          {"lo", r.lo},
          {"hi", r.hi},
          {"column_min", std::vector<double>(r.column_min.begin(), r.column_min.end())},
          {"column_max", std::vector<double>(r.column_max.begin(), r.column_max.end())},
          {"constant", r.constant}};
}

MinMaxRecord record_from_json(const nlohmann::json& j) {
  try {
    MinMaxRecord r;
    r.lo = j.at("lo").get<double>();
    r.hi = j.at("hi").get<double>();
    const auto mins = j.at("column_min").get<std::vector<double>>();
    const auto maxs = j.at("column_max").get<std::vector<double>>();
    r.constant = j.at("constant").get<std::vector<bool>>();
    if (mins.size() != maxs.size() || mins.size() != r.constant.size()) {
      throw DataError("minmax step: column arrays differ in length");
    }
    r.column_min = Eigen::Map<const Vector>(mins.data(), static_cast<Index>(mins.size()));
    r.column_max = Eigen::Map<const Vector>(maxs.data(), static_cast<Index>(maxs.size()));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed minmax step: ") + e.what());
  }
}

std::vector<std::string> feature_names(Index n, const std::string& prefix) {
  std::vector<std::string> names;
  for (Index j = 0; j < n; ++j) names.push_back(prefix + std::to_string(j));
  return names;
}

}  // namespace

// measure ------------------------------------------------------------------

const std::vector<std::string>& known_metrics() {
  static const std::vector<std::string> names{"var_lambda",        "fa",         "i_vec",
                                              "i_rnd",             "silhouette", "davies_bouldin",
                                              "calinski_harabasz", "mean_dist_to_centroid", "mean_pairwise_dist",
                                              "size_variance"};
  return names;
}

std::vector<std::string> resolve_metrics(const std::vector<std::string>& requested) {
  if (requested.empty()) throw UsageError("--metrics needs at least one name");
  std::vector<std::string> out;
  for (const auto& m : requested) {
    if (m == "all") return known_metrics();
    if (!wants(known_metrics(), m)) throw UsageError("unknown metric '" + m + "'");
    if (!wants(out, m)) out.push_back(m);
  }
  return out;
}

MetricReport measure_clusters(const PointCloud& cloud, const ClusterAssignment& assign, const MeasureOptions& o) {
  const auto views = split_clusters(cloud, assign);
  const auto& metrics = o.metrics;
  const FaForm form = o.fa_normalized ? FaForm::normalized : FaForm::raw;
  const std::string fa_key = o.fa_normalized ? "fa_normalized" : "fa";
  const std::string fa_g_key = o.fa_normalized ? "fa_g_normalized" : "fa_g";

  MetricReport report;
  report.seed = o.seed;
  report.vectors = o.vectors;
  report.dims = cloud.dims();
  report.points = cloud.size();
  report.cluster_count = assign.cluster_count();
  report.parameters = {{"metrics", metrics},
                       {"vectors", o.vectors},
                       {"seed", o.seed},
                       {"threads", o.threads},
                       {"fa_form", o.fa_normalized ? "normalized" : "raw"}};

  const auto sizes = assign.cluster_sizes();
  report.clusters.resize(views.size());
  for (std::size_t c = 0; c < views.size(); ++c) {
    report.clusters[c].id = static_cast<int>(c);
    report.clusters[c].size = sizes[c];
    report.clusters[c].degenerate = views[c].degenerate();
    if (views[c].degenerate()) {
      report.flags.push_back("cluster " + std::to_string(c) + " is degenerate (all points coincide)");
    }
  }

  auto per_cluster = [&](const std::string& key, const std::string& global_key, auto&& compute) {
    const auto start = Clock::now();
    const std::vector<double> values = compute();
    report.timings_seconds[key] = seconds_since(start);
    for (std::size_t c = 0; c < views.size(); ++c) report.clusters[c].values[key] = values[c];
    report.global[global_key] = weighted_mean(values, views);
  };

  if (wants(metrics, "var_lambda") || wants(metrics, "fa")) {
    const auto start = Clock::now();
    std::vector<SpectralSummary> summaries(views.size());
    parallel_for(views.size(), o.threads, [&](std::size_t c) { summaries[c] = spectral_summary(views[c], false); });
    const double spectral_time = seconds_since(start);
    if (wants(metrics, "var_lambda")) {
      per_cluster("var_lambda", "var_lambda", [&] {
        std::vector<double> v(views.size());
        for (std::size_t c = 0; c < views.size(); ++c) v[c] = var_lambda(summaries[c]);
        return v;
      });
      report.timings_seconds["var_lambda"] += spectral_time;
    }
    if (wants(metrics, "fa")) {
      per_cluster(fa_key, fa_g_key, [&] {
        std::vector<double> v(views.size());
        for (std::size_t c = 0; c < views.size(); ++c) v[c] = fractional_anisotropy(summaries[c], form);
        return v;
      });
      report.timings_seconds[fa_key] += spectral_time;
    }
  }
  if (wants(metrics, "i_vec")) {
    per_cluster("i_vec", "i_g_vec", [&] { return isotropy_per_cluster(views, VecMethod{}, o.threads); });
  }
  if (wants(metrics, "i_rnd")) {
    per_cluster("i_rnd", "i_g_rnd",
                [&] { return isotropy_per_cluster(views, RndMethod{o.vectors, o.seed}, o.threads); });
  }

  auto global = [&](const std::string& key, auto&& compute) {
    if (!wants(metrics, key)) return;
    const auto start = Clock::now();
    try {
      report.global[key] = compute();
    } catch (const DataError& e) {
      report.flags.push_back(key + " not computed: " + e.what());
      return;
    }
    report.timings_seconds[key] = seconds_since(start);
  };
  const bool multi = assign.cluster_count() >= 2;
  auto needs_two = [&](const std::string& key, auto&& compute) {
    if (!wants(metrics, key)) return;
    if (!multi) {
      report.flags.push_back(key + " not computed: needs at least two clusters");
      return;
    }
    global(key, compute);
  };
  needs_two("silhouette", [&] { return silhouette(cloud, assign, o.threads); });
  needs_two("davies_bouldin", [&] { return davies_bouldin(cloud, assign); });
  needs_two("calinski_harabasz", [&] { return calinski_harabasz(cloud, assign); });
  global("mean_dist_to_centroid", [&] { return mean_dist_to_centroid(views); });
  global("mean_pairwise_dist", [&] { return mean_pairwise_dist(views); });
  global("size_variance", [&] { return cluster_size_variance(assign); });

  report.check_bounds();
  return report;
}

MetricReport average_reports(const std::vector<MetricReport>& reports, const std::vector<std::string>& tags) {
  if (reports.empty()) throw DataError("no reports to average");
  MetricReport out;
  const MetricReport& first = reports.front();
  out.seed = first.seed;
  out.vectors = first.vectors;
  out.dims = first.dims;
  out.points = first.points;
  out.cluster_count = 0;
  out.parameters = first.parameters;

  std::set<std::string> keys;
  for (const auto& r : reports)
    for (const auto& [k, v] : r.global) keys.insert(k);
  for (const auto& key : keys) {
    double sum = 0.0;
    std::size_t present = 0;
    for (const auto& r : reports) {
      if (auto it = r.global.find(key); it != r.global.end()) {
        sum += it->second;
        ++present;
      }
    }
    if (present == reports.size()) {
      out.global[key] = sum / static_cast<double>(present);
    } else {
      out.flags.push_back(key + " not averaged: missing from " + std::to_string(reports.size() - present) +
                          " of " + std::to_string(reports.size()) + " clusterings");
    }
  }
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (const auto& f : reports[i].flags) out.flags.push_back(tags[i] + ": " + f);
    for (const auto& [k, v] : reports[i].timings_seconds) out.timings_seconds[tags[i] + "." + k] = v;
  }
  return out;
}

// sweep --------------------------------------------------------------------

std::vector<SweepRow> run_sweep(const SweepOptions& o) {
  if (o.repeats < 1) throw UsageError("--repeats must be at least 1");
  if (o.timing_runs < 1) throw UsageError("timing runs must be at least 1");
  if (o.points < 2) throw UsageError("--points must be at least 2");
  for (Index d : o.dims)
    if (d < 1) throw UsageError("every dimension must be at least 1");
  for (Index v : o.vectors)
    if (v < 2) throw UsageError("every vector count must be at least 2");

  // Runs fn timing_runs times; returns its (deterministic) value and median time.
  auto timed = [&](const std::function<double()>& fn) {
    std::vector<double> times;
    double value = 0.0;
    for (int r = 0; r < o.timing_runs; ++r) {
      const auto start = Clock::now();
      value = fn();
      times.push_back(seconds_since(start));
    }
    std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2), times.end());
    return std::pair{value, times[times.size() / 2]};
  };

  std::vector<SweepRow> rows;
  for (Index dim : o.dims) {
    SweepRow vec{dim, "vec", dim, o.repeats, 0.0, 0.0};
    std::vector<SweepRow> rnd;
    for (Index v : o.vectors) rnd.push_back({dim, "rnd", v, o.repeats, 0.0, 0.0});

    const std::uint64_t dim_seed = derive_seed(o.seed, static_cast<std::uint64_t>(dim));
    for (int r = 0; r < o.repeats; ++r) {
      const std::uint64_t cluster_seed = derive_seed(dim_seed, static_cast<std::uint64_t>(r));
      const PointCloud cloud = gaussian_cluster(dim, o.points, 0.0, 1.0, cluster_seed);
      const ClusterView view = ClusterView::whole(cloud);

      const auto [vv, vt] = timed([&] { return isotropy_vec(view); });
      vec.mean_value += vv;
      vec.mean_seconds += vt;
      for (auto& row : rnd) {
        const std::uint64_t s = derive_seed(cluster_seed, static_cast<std::uint64_t>(row.vectors));
        const auto [rv, rt] = timed([&] { return isotropy_rnd(view, row.vectors, s); });
        row.mean_value += rv;
        row.mean_seconds += rt;
      }
    }
    const auto reps = static_cast<double>(o.repeats);
    vec.mean_value /= reps;
    vec.mean_seconds /= reps;
    rows.push_back(vec);
    for (auto& row : rnd) {
      row.mean_value /= reps;
      row.mean_seconds /= reps;
      rows.push_back(row);
    }
  }
  return rows;
}

CsvTable sweep_table(const std::vector<SweepRow>& rows) {
  CsvTable t;
  t.header = {"dim", "method", "vectors", "repeats", "mean_value", "mean_seconds"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.dim), r.method, std::to_string(r.vectors), std::to_string(r.repeats),
                      format_double(r.mean_value), format_double(r.mean_seconds)});
  }
  return t;
}

// mp -----------------------------------------------------------------------

std::vector<MpRow> run_mp(const MpOptions& o) {
  if (o.dims.empty()) throw UsageError("--dims needs at least one value");
  std::vector<MpRow> rows(o.dims.size());
  parallel_for(o.dims.size(), o.threads, [&](std::size_t i) {
    MpParams p;
    p.points = o.points;
    p.dims = static_cast<double>(o.dims[i]);
    p.sigma2 = o.sigma2;
    p.mu = o.mu;
    p.validate();
    const MpSupport support = mp_support(p);
    const MpMoments m = mp_moments(p);
    MpRow& row = rows[i];
    row.dims = o.dims[i];
    row.lambda_min = support.min;
    row.lambda_max = support.max;
    row.mass = m.mass;
    row.mean = m.mean;
    row.second = m.second;
    row.expected_fa = expected_fa(m);
    row.expected_var_lambda = expected_var_lambda(m, p.dims);
    // Sampled clusters are centred at the origin, which models mu = 0 only.
    if (o.samples > 0 && o.mu == 0.0) {
      const auto e = empirical_spectrum(p, o.samples, derive_seed(o.seed, static_cast<std::uint64_t>(o.dims[i])));
      row.empirical_fa = e.mean_fa;
      row.empirical_var_lambda = e.mean_var_lambda;
    }
  });
  return rows;
}

CsvTable mp_table(const std::vector<MpRow>& rows) {
  CsvTable t;
  t.header = {"n",           "lambda_min",          "lambda_max",   "mass",
              "mean",        "second",              "expected_fa",  "expected_var_lambda",
              "empirical_fa", "empirical_var_lambda"};
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.dims), format_double(r.lambda_min), format_double(r.lambda_max),
                      format_double(r.mass), format_double(r.mean), format_double(r.second),
                      format_double(r.expected_fa), format_double(r.expected_var_lambda), opt(r.empirical_fa),
                      opt(r.empirical_var_lambda)});
  }
  return t;
}

// transform ----------------------------------------------------------------

TransformStep parse_step(const std::string& text, Index default_components, double default_gamma,
                         std::uint64_t default_seed) {
  static const std::regex form(R"(\s*(minmax|rbf)\s*(?:\(([^()]*)\))?\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, form)) throw UsageError("cannot parse step '" + text + "'");

  std::vector<std::string> args;
  if (m[2].matched) {
    const std::string inner = m[2].str();
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = inner.find(',', start);
      args.push_back(inner.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (args.size() == 1 && args[0].find_first_not_of(" \t") == std::string::npos) args.clear();
  }
  auto number = [&](std::size_t i) {
    try {
      return parse_number(args[i], 0, "step");
    } catch (const DataError&) {
      throw UsageError("step '" + text + "': argument " + std::to_string(i + 1) + " is not a number");
    }
  };

  TransformStep step;
  if (m[1] == "minmax") {
    step.kind = TransformStep::Kind::minmax;
    if (args.size() == 2) {
      step.lo = number(0);
      step.hi = number(1);
    } else if (!args.empty()) {
      throw UsageError("minmax takes no arguments or (lo,hi)");
    }
    if (!(step.lo < step.hi)) throw UsageError("minmax needs lo < hi");
    return step;
  }
  step.kind = TransformStep::Kind::rbf;
  if (args.size() > 3) throw UsageError("rbf takes at most (components,gamma,seed)");
  step.components = default_components;
  step.gamma = default_gamma;
  step.seed = default_seed;
  if (args.size() >= 1) {
    const double c = number(0);
    if (c < 1 || c != std::floor(c)) throw UsageError("rbf components must be a positive integer");
    step.components = static_cast<Index>(c);
  }
  if (args.size() >= 2) step.gamma = number(1);
  if (args.size() == 3) {
    const double s = number(2);
    if (s < 0 || s != std::floor(s)) throw UsageError("rbf seed must be a nonnegative integer");
    step.seed = static_cast<std::uint64_t>(s);
  }
  if (step.components < 1) throw UsageError("rbf needs a component count (argument or --components)");
  return step;
}

TransformResult fit_pipeline(const PointCloud& cloud, const std::vector<TransformStep>& steps) {
  PointCloud current = cloud;
  nlohmann::json fitted = nlohmann::json::array();
  for (const auto& step : steps) {
    if (step.kind == TransformStep::Kind::minmax) {
      auto r = minmax_scale(current, step.lo, step.hi);
      fitted.push_back(record_json(r.record));
      current = std::move(r.cloud);
    } else {
      const RbfMap map = rbf_fit(current.dims(), step.components, step.gamma, step.seed);
      nlohmann::json j = map.to_json();
      fitted.push_back(std::move(j));
      current = rbf_transform(map, current);
    }
  }
  return {std::move(current), {{"steps", fitted}}};
}

PointCloud replay_pipeline(const PointCloud& cloud, const nlohmann::json& pipeline) {
  if (!pipeline.is_object() || !pipeline.contains("steps") || !pipeline["steps"].is_array()) {
    throw DataError("pipeline file must hold an object with a 'steps' array");
  }
  PointCloud current = cloud;
  for (const auto& step : pipeline["steps"]) {
    const std::string kind = step.value("kind", "");
    if (kind == "minmax") {
      current = apply_minmax(current, record_from_json(step));
    } else if (kind == "rbf") {
      current = rbf_transform(RbfMap::from_json(step), current);
    } else {
      throw DataError("unknown pipeline step kind '" + kind + "'");
    }
  }
  return current;
}

// generate -----------------------------------------------------------------

Dataset run_generate(const GenerateOptions& o) {
  if (o.count < 1) throw UsageError("--count must be at least 1");
  if (o.kind == "gaussian") {
    if (o.dims < 1) throw UsageError("--dims must be at least 1");
    if (o.clusters < 1) throw UsageError("--clusters must be at least 1");
    if (o.std < 0.0) throw DataError("negative std");
    Matrix data(o.count * o.clusters, o.dims);
    std::vector<long long> labels;
    for (int c = 0; c < o.clusters; ++c) {
      const std::uint64_t seed = o.clusters == 1 ? o.seed : derive_seed(o.seed, static_cast<std::uint64_t>(c));
      const PointCloud part = gaussian_cluster(o.dims, o.count, o.mean + c * o.spacing, o.std, seed);
      data.middleRows(c * o.count, o.count) = part.data();
      labels.insert(labels.end(), static_cast<std::size_t>(o.count), c);
    }
    Dataset d{PointCloud(std::move(data), feature_names(o.dims, "x")), std::nullopt, "label"};
    if (o.clusters > 1) d.labels = std::move(labels);
    return d;
  }
  if (o.clusters != 1) throw UsageError("--clusters applies to the gaussian kind only");
  if (o.kind == "anisotropic") {
    if (o.stds.empty()) throw UsageError("anisotropic needs --stds");
    const PointCloud c = anisotropic_gaussian(o.stds, o.count, o.seed);
    return {PointCloud(c.data(), feature_names(c.dims(), "x")), std::nullopt, "label"};
  }
  if (o.noise < 0.0) throw DataError("negative noise");
  const PointCloud c = shape_cluster(parse_shape_kind(o.kind), o.count, o.noise, o.seed);
  return {PointCloud(c.data(), feature_names(2, "x")), std::nullopt, "label"};
}

// cluster ------------------------------------------------------------------

nlohmann::json centroids_json(const KMeansResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < r.centroids.rows(); ++i) {
    std::vector<double> row(r.centroids.row(i).begin(), r.centroids.row(i).end());
    rows.push_back(row);
  }
  return {{"k", r.centroids.rows()},   {"seed", r.seed},           {"inertia", r.inertia},
          {"iterations", r.iterations}, {"converged", r.converged}, {"reseeds", r.reseeds},
          {"centroids", rows}};
}

}  // namespace isotropy::cli
