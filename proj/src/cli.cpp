#include "batchsim/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "batchsim/harness.hpp"
#include "batchsim/svg.hpp"

namespace fs = std::filesystem;

namespace batchsim {

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::BadFlag:
    case Errc::UnknownScheduler:
    case Errc::UnknownCluster:
    case Errc::BadParams:
      return 1;
    case Errc::IoError:
    case Errc::SchemaError:
    case Errc::IntegrityError:
    case Errc::MissingSummary:
    case Errc::EmptyBatch:
    case Errc::NonPositiveBurst:
    case Errc::EmptyInput:
      return 2;
    default:
      return 3;
  }
}

namespace {

constexpr std::uint64_t kDefaultSeed = 42;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned parallel = 1;
};

struct SchedulerFlags {
  std::string schedulers = "all";
  std::optional<Time> rr_quantum;
  std::optional<Time> cfs_target_latency;
  std::optional<Time> cfs_min_granularity;
  std::optional<Time> lrtf_tick;
  std::string sort_order = "desc";
  std::string variant = "naive";
};

struct GenFlags {
  std::string clusters = "all";
  std::size_t cases = 100;
  std::size_t jobs = 100;
  std::vector<std::string> params;
  bool csv = false;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::uint64_t resolve_seed(const GlobalFlags& g) {
  if (g.seed) return *g.seed;
  if (const char* env = std::getenv("BATCHSIM_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw Error(Errc::BadFlag, std::string("BATCHSIM_SEED is not an unsigned integer: ") + env);
  }
  return kDefaultSeed;
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot write " + path.string());
  f << content;
  if (!f) throw Error(Errc::IoError, "write failed for " + path.string());
}

std::string read_file(const fs::path& path, Errc missing) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(missing, "cannot read " + path.string());
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<ClusterId> parse_cluster_list(const std::string& list) {
  if (list == "all") return {all_clusters().begin(), all_clusters().end()};
  std::vector<ClusterId> out;
  for (const auto& name : split_list(list)) {
    try {
      out.push_back(parse_cluster(name));
    } catch (const Error& e) {
      throw Error(Errc::BadFlag, e.what());
    }
  }
  if (out.empty()) throw Error(Errc::BadFlag, "--clusters is empty");
  return out;
}

std::vector<ClusterSpec> cluster_specs(const GlobalFlags& g, const GenFlags& f) {
  if (f.cases < 1 || f.jobs < 1) throw Error(Errc::BadFlag, "--cases and --jobs must be >= 1");
  const std::uint64_t seed = resolve_seed(g);
  std::vector<ClusterSpec> specs;
  for (ClusterId id : parse_cluster_list(f.clusters)) {
    ClusterSpec s = ClusterSpec::defaults(id, seed);
    s.cases = f.cases;
    s.jobs_per_case = f.jobs;
    specs.push_back(std::move(s));
  }
  // --param cluster.key=value
  for (const auto& p : f.params) {
    const auto dot = p.find('.');
    const auto eq = p.find('=');
    if (dot == std::string::npos || eq == std::string::npos || eq < dot) {
      throw Error(Errc::BadFlag, "--param expects cluster.key=value, got '" + p + "'");
    }
    const ClusterId id = parse_cluster_list(p.substr(0, dot)).front();
    double value = 0;
    try {
      value = std::stod(p.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(Errc::BadFlag, "--param value is not a number: '" + p + "'");
    }
    for (ClusterSpec& s : specs) {
      if (s.id == id) s.params[p.substr(dot + 1, eq - dot - 1)] = value;
    }
  }
  for (const ClusterSpec& s : specs) validate_spec(s);
  return specs;
}

std::vector<std::string> scheduler_list(const SchedulerFlags& f) {
  if (f.schedulers == "all") return {scheduler_ids().begin(), scheduler_ids().end()};
  std::vector<std::string> out = split_list(f.schedulers);
  if (out.empty()) throw Error(Errc::BadFlag, "--schedulers is empty");
  for (const auto& id : out) check_scheduler_id(id);
  return out;
}

SchedulerOptions scheduler_options(const SchedulerFlags& f) {
  SchedulerOptions o;
  if (f.rr_quantum) {
    if (*f.rr_quantum < 1) throw Error(Errc::BadFlag, "--rr-quantum must be >= 1");
    o.rr_quantum = f.rr_quantum;
  }
  if (f.cfs_target_latency) o.cfs.target_latency = *f.cfs_target_latency;
  if (f.cfs_min_granularity) o.cfs.min_granularity = *f.cfs_min_granularity;
  if (o.cfs.min_granularity < 1 || o.cfs.target_latency < o.cfs.min_granularity) {
    throw Error(Errc::BadFlag, "need --cfs-target-latency >= --cfs-min-granularity >= 1");
  }
  if (f.lrtf_tick) {
    if (*f.lrtf_tick < 1) throw Error(Errc::BadFlag, "--lrtf-tick must be >= 1");
    o.lrtf.tick = *f.lrtf_tick;
  }
  if (f.sort_order == "desc") {
    o.fairbatch.sort_order = SortOrder::Descending;
  } else if (f.sort_order == "asc") {
    o.fairbatch.sort_order = SortOrder::Ascending;
  } else {
    throw Error(Errc::BadFlag, "--fairbatch-sort-order must be desc or asc");
  }
  if (f.variant == "naive") {
    o.fairbatch.variant = Variant::Naive;
  } else if (f.variant == "optimized") {
    o.fairbatch.variant = Variant::Optimized;
  } else {
    throw Error(Errc::BadFlag, "--fairbatch-variant must be naive or optimized");
  }
  return o;
}

void add_scheduler_flags(CLI::App* cmd, SchedulerFlags& f) {
  cmd->add_option("--schedulers", f.schedulers, "comma-separated scheduler ids, or 'all'");
  cmd->add_option("--rr-quantum", f.rr_quantum, "round-robin quantum (default: ceil of mean burst)");
  cmd->add_option("--cfs-target-latency", f.cfs_target_latency, "CFS target latency");
  cmd->add_option("--cfs-min-granularity", f.cfs_min_granularity, "CFS minimum granularity");
  cmd->add_option("--lrtf-tick", f.lrtf_tick, "LRTF dispatch tick");
  cmd->add_option("--fairbatch-sort-order", f.sort_order, "desc|asc");
  cmd->add_option("--fairbatch-variant", f.variant, "naive|optimized");
}

void report_failures(const std::vector<SweepFailure>& failures, std::ostream& err) {
  for (const SweepFailure& fl : failures) {
    err << "failed: " << fl.cluster << " case " << fl.case_id << ' ' << fl.scheduler << ": "
        << fl.message << '\n';
  }
}

// --- subcommands -------------------------------------------------------------

int cmd_gen(const GlobalFlags& g, const GenFlags& f, std::ostream& out) {
  const fs::path dir = g.out.empty() ? fs::path("data") : fs::path(g.out);
  std::string manifest = "cluster,seed,checksum\n";
  for (const ClusterSpec& spec : cluster_specs(g, f)) {
    const Dataset d = generate_dataset(spec);
    const std::string text = serialize_dataset(d);
    const std::string name(cluster_name(spec.id));
    write_file(dir / (name + ".json"), text);
    if (f.csv) write_file(dir / (name + ".csv"), dataset_csv(d));
    manifest += name + ',' + std::to_string(spec.seed) + ',' + hex64(fnv1a64(text)) + '\n';
  }
  write_file(dir / "manifest.csv", manifest);
  out << manifest;
  return 0;
}

int cmd_run(const GlobalFlags& g, const std::vector<std::string>& paths, const SchedulerFlags& f,
            std::ostream& out, std::ostream& err) {
  const auto schedulers = scheduler_list(f);
  const SchedulerOptions opts = scheduler_options(f);
  std::vector<Dataset> datasets;
  for (const auto& p : paths) datasets.push_back(load_dataset(p));
  const SweepOutcome sweep = run_sweep(datasets, schedulers, opts, g.parallel);
  if (!sweep.failures.empty()) {
    report_failures(sweep.failures, err);
    return exit_code_for(sweep.failures.front().code);
  }
  const std::string csv = results_csv(sweep.rows);
  if (g.out.empty()) {
    out << csv;
  } else {
    write_file(fs::path(g.out) / "results.csv", csv);
    out << sweep.rows.size() << " rows written to " << (fs::path(g.out) / "results.csv").string() << '\n';
  }
  return 0;
}

int cmd_bench(const GlobalFlags& g, const std::string& data_dir, const GenFlags& gen,
              const SchedulerFlags& f, std::ostream& out, std::ostream& err) {
  const auto schedulers = scheduler_list(f);
  const SchedulerOptions opts = scheduler_options(f);
  std::vector<Dataset> datasets;
  if (!data_dir.empty()) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(data_dir, ec)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) throw Error(Errc::IoError, "cannot list " + data_dir);
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(Errc::IoError, "no dataset files in " + data_dir);
    for (const auto& p : files) datasets.push_back(load_dataset(p));
  } else {
    for (const ClusterSpec& spec : cluster_specs(g, gen)) datasets.push_back(generate_dataset(spec));
  }

  const fs::path dir = g.out.empty() ? fs::path("bench") : fs::path(g.out);
  const SweepOutcome sweep = run_sweep(datasets, schedulers, opts, g.parallel);
  write_file(dir / "results.csv", results_csv(sweep.rows));
  if (!sweep.failures.empty()) {
    std::string manifest = "cluster,case_id,scheduler,error,message\n";
    for (const SweepFailure& fl : sweep.failures) {
      manifest += fl.cluster + ',' + std::to_string(fl.case_id) + ',' + fl.scheduler + ',' +
                  std::string(errc_name(fl.code)) + ",\"" + fl.message + "\"\n";
    }
    write_file(dir / "failures.csv", manifest);
    report_failures(sweep.failures, err);
    return exit_code_for(sweep.failures.front().code);
  }
  write_file(dir / "summary.csv", summary_csv(summarize(sweep.rows)));
  const std::string ranking = ranking_report(sweep.rows);
  write_file(dir / "ranking.txt", ranking);
  out << ranking;
  out << sweep.rows.size() << " result rows written to " << dir.string() << '\n';
  return 0;
}

int cmd_report(const GlobalFlags& g, const std::string& summary_path, const std::string& results_path,
               const std::string& metric_filter, const std::string& cluster_filter, std::ostream& out) {
  std::optional<Metric> metric;
  if (!metric_filter.empty()) metric = parse_metric(metric_filter);
  std::optional<std::string> cluster;
  if (!cluster_filter.empty()) {
    cluster = std::string(cluster_name(parse_cluster_list(cluster_filter).front()));
  }
  if (summary_path.empty()) throw Error(Errc::MissingSummary, "--summary is required");
  const auto summary = parse_summary_csv(read_file(summary_path, Errc::MissingSummary));

  // Recompute full stats (with outlier values) when per-case results are available.
  std::map<std::tuple<std::string, std::string, Metric>, BoxplotStats> full;
  if (!results_path.empty()) {
    const auto rows = parse_results_csv(read_file(results_path, Errc::IoError));
    for (const SummaryRow& s : summarize(rows)) full[{s.cluster, s.scheduler, s.metric}] = s.stats;
  }

  std::map<std::pair<std::string, Metric>, std::vector<BoxGlyph>> charts;
  for (const SummaryRow& r : summary) {
    if (metric && r.metric != *metric) continue;
    if (cluster && r.cluster != *cluster) continue;
    auto it = full.find({r.cluster, r.scheduler, r.metric});
    charts[{r.cluster, r.metric}].push_back(BoxGlyph{r.scheduler, it != full.end() ? it->second : r.stats});
  }
  if (charts.empty()) throw Error(Errc::MissingSummary, "no summary rows match the requested cluster/metric");

  const fs::path dir = g.out.empty() ? fs::path("report") : fs::path(g.out);
  for (auto& [key, glyphs] : charts) {
    std::stable_sort(glyphs.begin(), glyphs.end(), [](const BoxGlyph& a, const BoxGlyph& b) {
      return legend_number(a.scheduler) < legend_number(b.scheduler);
    });
    const std::string name = key.first + "_" + std::string(metric_name(key.second)) + ".svg";
    write_file(dir / name, boxplot_svg(key.first + ": average " + std::string(metric_name(key.second)) + " time", glyphs));
    out << (dir / name).string() << '\n';
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Batch scheduling simulator and benchmark harness", "batchsim"};
  app.require_subcommand(1);
  app.fallthrough();
  GlobalFlags g;
  app.add_option("--seed", g.seed, "dataset seed (default: $BATCHSIM_SEED, then 42)");
  app.add_option("--out", g.out, "output directory");
  app.add_option("--parallel", g.parallel, "worker threads for simulation sweeps")->check(CLI::PositiveNumber);

  GenFlags gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate workload datasets");
  gen_cmd->add_option("--clusters", gen.clusters, "comma-separated cluster ids, or 'all'");
  gen_cmd->add_option("--cases", gen.cases, "test cases per cluster");
  gen_cmd->add_option("--jobs", gen.jobs, "jobs per test case");
  gen_cmd->add_option("--param", gen.params, "distribution override, cluster.key=value");
  gen_cmd->add_flag("--csv", gen.csv, "also write a flat case_id,job_index,burst CSV");

  std::vector<std::string> dataset_paths;
  SchedulerFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "simulate schedulers over dataset files");
  run_cmd->add_option("--dataset", dataset_paths, "dataset file (repeatable)")->required();
  add_scheduler_flags(run_cmd, run_flags);

  std::string data_dir;
  GenFlags bench_gen;
  SchedulerFlags bench_flags;
  CLI::App* bench_cmd = app.add_subcommand("bench", "full sweep with summary and ranking report");
  bench_cmd->add_option("--data", data_dir, "directory of dataset files (default: generate)");
  bench_cmd->add_option("--clusters", bench_gen.clusters, "clusters to generate when --data is absent");
  bench_cmd->add_option("--cases", bench_gen.cases, "cases per generated cluster");
  bench_cmd->add_option("--jobs", bench_gen.jobs, "jobs per generated case");
  add_scheduler_flags(bench_cmd, bench_flags);

  std::string summary_path, results_path, metric, cluster;
  CLI::App* report_cmd = app.add_subcommand("report", "render SVG boxplots from a summary CSV");
  report_cmd->add_option("--summary", summary_path, "summary CSV written by bench");
  report_cmd->add_option("--results", results_path, "results CSV, for outlier dots");
  report_cmd->add_option("--metric", metric, "waiting|turnaround|response");
  report_cmd->add_option("--cluster", cluster, "restrict to one cluster");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen_cmd) return cmd_gen(g, gen, out);
    if (*run_cmd) return cmd_run(g, dataset_paths, run_flags, out, err);
    if (*bench_cmd) return cmd_bench(g, data_dir, bench_gen, bench_flags, out, err);
    if (*report_cmd) return cmd_report(g, summary_path, results_path, metric, cluster, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}

}  // namespace batchsim
