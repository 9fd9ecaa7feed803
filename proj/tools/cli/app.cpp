#include "app.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "isotropy/kmeans.hpp"
#include "isotropy/transforms.hpp"
#include "isotropy/zmeasure.hpp"

namespace isotropy::cli {
namespace {

// Writes `fn(stream)` to `path`, or to `out` when path is empty or "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot open output file '" + path + "'");
  fn(file);
  if (!file) throw DataError("failed writing '" + path + "'");
}

void write_json(const std::string& path, std::ostream& out, const nlohmann::json& j) {
  emit(path, out, [&](std::ostream& s) { s << j.dump(2) << '\n'; });
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError("'" + path + "' is not valid JSON: " + e.what());
  }
}

std::string sidecar(const std::string& output, const std::string& suffix) {
  return (output.empty() || output == "-") ? std::string() : output + suffix;
}

struct Common {
  std::string input;
  std::string output;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

void add_io(CLI::App* cmd, Common& c, bool needs_input) {
  auto* in = cmd->add_option("--input,-i", c.input, "Input CSV with a header row");
  if (needs_input) in->required();
  cmd->add_option("--output,-o", c.output, "Output path (default: standard output)");
}

void add_seed(CLI::App* cmd, Common& c) { cmd->add_option("--seed", c.seed, "Random seed")->capture_default_str(); }

void add_threads(CLI::App* cmd, Common& c) {
  cmd->add_option("--threads", c.threads, "Maximum worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isotropy measures for point clusters", "isotropy"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common common;

  // measure
  auto* measure = app.add_subcommand("measure", "Compute isotropy and validation metrics as a JSON report");
  add_io(measure, common, true);
  add_seed(measure, common);
  add_threads(measure, common);
  std::optional<std::string> label_column;
  std::optional<int> kmeans_k;
  std::vector<int> kmeans_multi;
  std::vector<std::string> metric_names{"all"};
  Index vectors = kDefaultRandomVectors;
  bool fa_normalized = false;
  measure->add_option("--label-column", label_column, "Integer column holding cluster labels");
  auto* km_opt = measure->add_option("--kmeans", kmeans_k, "Cluster with K-means using K clusters")
                     ->check(CLI::PositiveNumber);
  measure->add_option("--kmeans-multi", kmeans_multi, "Average global metrics over K-means runs, e.g. 5,10")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->excludes(km_opt);
  measure->add_option("--metrics", metric_names, "Comma-separated metric names or 'all'")
      ->delimiter(',')
      ->capture_default_str();
  measure->add_option("--vectors", vectors, "Random directions for i_rnd")->check(CLI::Range(Index{2}, Index{1} << 40))
      ->capture_default_str();
  measure->add_flag("--fa-normalized", fa_normalized, "Report FA scaled by sqrt(n/(n-1))");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Gaussian-cluster sweep of I_c,vec and I_c,rnd over dimensions (CSV)");
  SweepOptions sweep_opts;
  sweep->add_option("--output,-o", common.output, "Output path (default: standard output)");
  add_seed(sweep, common);
  sweep->add_option("--dims", sweep_opts.dims, "Comma-separated dimensions")->delimiter(',')->capture_default_str();
  sweep->add_option("--points", sweep_opts.points, "Points per cluster")->capture_default_str();
  sweep->add_option("--repeats", sweep_opts.repeats, "Clusters per dimension")->capture_default_str();
  sweep->add_option("--vectors", sweep_opts.vectors, "Comma-separated random-vector counts")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--timing-runs", sweep_opts.timing_runs, "Timed runs per measurement (median is kept)")
      ->capture_default_str();

  // mp
  auto* mp = app.add_subcommand("mp", "Marchenko-Pastur predictions with sampled cross-checks (CSV)");
  MpOptions mp_opts;
  mp->add_option("--output,-o", common.output, "Output path (default: standard output)");
  add_seed(mp, common);
  add_threads(mp, common);
  mp->add_option("--points", mp_opts.points, "Points per cluster (T)")->capture_default_str();
  mp->add_option("--dims", mp_opts.dims, "Comma-separated dimensions (n)")->delimiter(',')->capture_default_str();
  mp->add_option("--sigma2", mp_opts.sigma2, "Coordinate variance")->capture_default_str();
  mp->add_option("--mu", mp_opts.mu, "Support shift")->capture_default_str();
  mp->add_option("--samples", mp_opts.samples, "Sampled clusters per n (0 disables)")->capture_default_str();

  // transform
  auto* transform = app.add_subcommand("transform", "Apply minmax / RBF steps in order (CSV)");
  add_io(transform, common, true);
  add_seed(transform, common);
  std::vector<std::string> step_texts;
  Index components = 0;
  double gamma = 0.0;
  std::string pipeline_in;
  std::string pipeline_out;
  std::optional<std::string> transform_label;
  transform->add_option("--step", step_texts, "minmax(lo,hi) or rbf(components,gamma,seed); repeatable");
  transform->add_option("--components", components, "Default RBF output dimension");
  transform->add_option("--gamma", gamma, "Default RBF gamma (<= 0 selects 1/n)");
  transform->add_option("--pipeline", pipeline_in, "Replay a saved pipeline JSON instead of fitting")
      ->check(CLI::ExistingFile);
  transform->add_option("--save-pipeline", pipeline_out, "Where to write the fitted pipeline JSON "
                                                          "(default: <output>.pipeline.json)");
  transform->add_option("--label-column", transform_label, "Integer column passed through unchanged");

  // generate
  auto* generate = app.add_subcommand("generate", "Synthetic clusters (CSV)");
  GenerateOptions gen;
  generate->add_option("--output,-o", common.output, "Output path (default: standard output)");
  add_seed(generate, common);
  generate->add_option("--kind", gen.kind, "gaussian, anisotropic, s_curve or l_shape")->capture_default_str();
  generate->add_option("--dims", gen.dims, "Dimension (gaussian)")->capture_default_str();
  generate->add_option("--count", gen.count, "Points per cluster")->capture_default_str();
  generate->add_option("--mean", gen.mean, "Coordinate mean (gaussian)")->capture_default_str();
  generate->add_option("--std", gen.std, "Coordinate standard deviation (gaussian)")->capture_default_str();
  generate->add_option("--stds", gen.stds, "Per-axis standard deviations (anisotropic)")->delimiter(',');
  generate->add_option("--noise", gen.noise, "Gaussian jitter (s_curve, l_shape)")->capture_default_str();
  generate->add_option("--clusters", gen.clusters, "Number of gaussian clusters")->capture_default_str();
  generate->add_option("--spacing", gen.spacing, "Mean offset between gaussian clusters")->capture_default_str();

  // cluster
  auto* cluster = app.add_subcommand("cluster", "K-means labels appended to the input (CSV)");
  add_io(cluster, common, true);
  add_seed(cluster, common);
  KMeansOptions km;
  std::string label_name = "cluster";
  std::optional<std::string> cluster_label;
  cluster->add_option("--kmeans,-k", km.k, "Number of clusters")->check(CLI::PositiveNumber)->capture_default_str();
  cluster->add_option("--max-iter", km.max_iter, "Lloyd iteration cap")->capture_default_str();
  cluster->add_option("--tol", km.tol, "Relative centroid movement tolerance")->capture_default_str();
  cluster->add_option("--label-name", label_name, "Name of the appended label column")->capture_default_str();
  cluster->add_option("--label-column", cluster_label, "Existing label column to drop before clustering");

  // project
  auto* project = app.add_subcommand("project", "PCA projection to 2 or 3 dimensions (CSV)");
  add_io(project, common, true);
  Index project_dims = 3;
  std::optional<std::string> project_label;
  project->add_option("--dims", project_dims, "Output dimensions")->check(CLI::Range(1, 3))->capture_default_str();
  project->add_option("--label-column", project_label, "Integer column passed through unchanged");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (measure->parsed()) {
      MeasureOptions o;
      o.metrics = resolve_metrics(metric_names);
      o.vectors = vectors;
      o.seed = common.seed;
      o.threads = common.threads;
      o.fa_normalized = fa_normalized;
      if (!label_column && !kmeans_k && kmeans_multi.empty()) {
        throw UsageError("measure needs --label-column or --kmeans/--kmeans-multi");
      }
      const Dataset data = load_dataset(read_csv_file(common.input), label_column);

      auto with_kmeans = [&](int k) {
        KMeansOptions kopt;
        kopt.k = k;
        kopt.seed = common.seed;
        const auto start = std::chrono::steady_clock::now();
        const KMeansResult r = kmeans(data.cloud, kopt);
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        MetricReport rep = measure_clusters(data.cloud, r.assignment, o);
        rep.timings_seconds["kmeans"] = t;
        rep.parameters["kmeans"] = {{"k", k}, {"seed", common.seed}, {"iterations", r.iterations},
                                    {"converged", r.converged}, {"inertia", r.inertia}};
        if (r.reseeds > 0) rep.flags.push_back("kmeans repaired " + std::to_string(r.reseeds) + " empty cluster(s)");
        if (!r.converged) rep.flags.push_back("kmeans reached max_iter without converging");
        return rep;
      };

      MetricReport report;
      if (label_column) {
        std::vector<long long> values;
        const ClusterAssignment assign = contiguous_labels(*data.labels, values);
        report = measure_clusters(data.cloud, assign, o);
        report.parameters["label_column"] = *label_column;
        report.parameters["label_values"] = values;
      } else if (kmeans_k) {
        report = with_kmeans(*kmeans_k);
      } else {
        std::vector<MetricReport> reports;
        std::vector<std::string> tags;
        for (int k : kmeans_multi) {
          reports.push_back(with_kmeans(k));
          tags.push_back("k=" + std::to_string(k));
        }
        report = average_reports(reports, tags);
        report.parameters["kmeans_multi"] = kmeans_multi;
      }
      report.parameters["input"] = common.input;
      write_json(common.output, out, report.to_json());
      return 0;
    }

    if (sweep->parsed()) {
      sweep_opts.seed = common.seed;
      const auto rows = run_sweep(sweep_opts);
      emit(common.output, out, [&](std::ostream& s) { write_csv(s, sweep_table(rows)); });
      return 0;
    }

    if (mp->parsed()) {
      mp_opts.seed = common.seed;
      mp_opts.threads = common.threads;
      const auto rows = run_mp(mp_opts);
      emit(common.output, out, [&](std::ostream& s) { write_csv(s, mp_table(rows)); });
      return 0;
    }

    if (transform->parsed()) {
      const Dataset data = load_dataset(read_csv_file(common.input), transform_label);
      PointCloud result = data.cloud;
      if (!pipeline_in.empty()) {
        if (!step_texts.empty()) throw UsageError("--pipeline and --step are mutually exclusive");
        result = replay_pipeline(data.cloud, read_json_file(pipeline_in));
      } else {
        if (step_texts.empty()) throw UsageError("transform needs at least one --step or a --pipeline");
        std::vector<TransformStep> steps;
        for (const auto& s : step_texts) steps.push_back(parse_step(s, components, gamma, common.seed));
        auto fitted = fit_pipeline(data.cloud, steps);
        result = std::move(fitted.cloud);
        const std::string path = pipeline_out.empty() ? sidecar(common.output, ".pipeline.json") : pipeline_out;
        if (!path.empty()) write_json(path, out, fitted.pipeline);
      }
      std::vector<std::string> names = data.cloud.column_names();
      if (result.dims() != data.cloud.dims()) {
        names.clear();
        for (Index j = 0; j < result.dims(); ++j) names.push_back("rbf" + std::to_string(j));
      }
      emit(common.output, out, [&](std::ostream& s) {
        write_csv(s, cloud_table(result.data(), names, data.labels, data.label_column));
      });
      return 0;
    }

    if (generate->parsed()) {
      gen.seed = common.seed;
      const Dataset data = run_generate(gen);
      emit(common.output, out, [&](std::ostream& s) {
        write_csv(s, cloud_table(data.cloud.data(), data.cloud.column_names(), data.labels, data.label_column));
      });
      return 0;
    }

    if (cluster->parsed()) {
      km.seed = common.seed;
      const Dataset data = load_dataset(read_csv_file(common.input), cluster_label);
      const KMeansResult r = kmeans(data.cloud, km);
      std::vector<long long> labels(r.assignment.labels().begin(), r.assignment.labels().end());
      emit(common.output, out, [&](std::ostream& s) {
        write_csv(s, cloud_table(data.cloud.data(), data.cloud.column_names(), labels, label_name));
      });
      const std::string path = sidecar(common.output, ".centroids.json");
      if (!path.empty()) write_json(path, out, centroids_json(r));
      return 0;
    }

    if (project->parsed()) {
      const Dataset data = load_dataset(read_csv_file(common.input), project_label);
      const PointCloud p = pca_project(data.cloud, project_dims);
      std::vector<std::string> names;
      for (Index j = 0; j < p.dims(); ++j) names.push_back("pc" + std::to_string(j + 1));
      emit(common.output, out, [&](std::ostream& s) {
        write_csv(s, cloud_table(p.data(), names, data.labels, data.label_column));
      });
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return 4;
  } catch (const Error& e) {
    err << "data error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace isotropy::cli
