#include "batchsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <sstream>
#include <thread>

namespace batchsim {

namespace {

const std::vector<std::string> kSchedulerIds = {"fcfs", "sjf", "srtf", "lrtf",
                                                "rr",   "cfs", "fairbatch", "fairbatch-opt"};
const std::vector<std::string> kLegend = {"fcfs", "fairbatch", "srtf", "lrtf", "rr", "cfs"};

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) out.push_back(line);
    start = end + 1;
  }
  return out;
}

double to_number(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::SchemaError, "not a number: '" + s + "'");
  }
}

// Exact rational from a fixed 4-decimal field.
Rational to_rational4(const std::string& s) {
  return Rational(static_cast<std::int64_t>(std::llround(to_number(s) * 10000.0)), 10000);
}

}  // namespace

std::span<const std::string> scheduler_ids() { return kSchedulerIds; }
std::span<const std::string> legend_lineup() { return kLegend; }

int legend_number(std::string_view id) {
  for (std::size_t i = 0; i < kLegend.size(); ++i) {
    if (kLegend[i] == id) return static_cast<int>(i) + 1;
  }
  if (id == "sjf") return 7;
  if (id == "fairbatch-opt") return 8;
  return 0;
}

void check_scheduler_id(std::string_view id) {
  if (std::find(kSchedulerIds.begin(), kSchedulerIds.end(), id) != kSchedulerIds.end()) return;
  std::string valid;
  for (const auto& s : kSchedulerIds) valid += (valid.empty() ? "" : ", ") + s;
  throw Error(Errc::UnknownScheduler,
              "unknown scheduler '" + std::string(id) + "'; valid ids: " + valid);
}

ScheduleResult run_scheduler(std::string_view id, const Batch& batch, const SchedulerOptions& opts) {
  check_scheduler_id(id);
  if (id == "fcfs") return run_fcfs(batch);
  if (id == "sjf") return run_sjf(batch);
  if (id == "srtf") return run_srtf(batch);
  if (id == "lrtf") return run_lrtf(batch, opts.lrtf);
  if (id == "rr") {
    return run_rr(batch, RoundRobinConfig{opts.rr_quantum.value_or(rr_default_quantum(batch))});
  }
  if (id == "cfs") return run_cfs(batch, opts.cfs);
  if (id == "fairbatch") {
    FairBatchRun run = run_fairbatch_variant(batch, opts.fairbatch);
    run.result.scheduler_id = "fairbatch";
    return std::move(run.result);
  }
  return run_fairbatch_opt(batch, opts.fairbatch).result;
}

SweepOutcome run_sweep(std::span<const Dataset> datasets, std::span<const std::string> schedulers,
                       const SchedulerOptions& opts, unsigned parallel) {
  for (const auto& id : schedulers) check_scheduler_id(id);

  struct Task {
    const Dataset* dataset;
    std::size_t case_id;
    const std::string* scheduler;
  };
  std::vector<Task> tasks;
  for (const Dataset& d : datasets) {
    for (std::size_t c = 0; c < d.cases.size(); ++c) {
      for (const auto& s : schedulers) tasks.push_back(Task{&d, c, &s});
    }
  }
  std::stable_sort(tasks.begin(), tasks.end(), [](const Task& a, const Task& b) {
    const auto ca = cluster_name(a.dataset->cluster.id);
    const auto cb = cluster_name(b.dataset->cluster.id);
    if (ca != cb) return ca < cb;
    if (a.case_id != b.case_id) return a.case_id < b.case_id;
    return *a.scheduler < *b.scheduler;
  });

  std::vector<std::optional<ResultRow>> done(tasks.size());
  std::vector<std::optional<SweepFailure>> failed(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      const std::string cluster(cluster_name(t.dataset->cluster.id));
      try {
        const Batch batch(t.dataset->cases[t.case_id]);
        const ScheduleResult r = run_scheduler(*t.scheduler, batch, opts);
        done[i] = ResultRow{cluster, t.case_id, *t.scheduler, batch_metrics(batch, r)};
      } catch (const Error& e) {
        failed[i] = SweepFailure{cluster, t.case_id, *t.scheduler, e.code(), e.what()};
      } catch (const std::exception& e) {
        failed[i] = SweepFailure{cluster, t.case_id, *t.scheduler, Errc::DomainError, e.what()};
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(tasks.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  SweepOutcome out;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (done[i]) out.rows.push_back(std::move(*done[i]));
    if (failed[i]) out.failures.push_back(std::move(*failed[i]));
  }
  return out;
}

std::string results_csv(std::span<const ResultRow> rows) {
  std::ostringstream os;
  os << "cluster,case_id,scheduler,avg_waiting,avg_turnaround,avg_response,preemptions,makespan\n";
  for (const ResultRow& r : rows) {
    os << r.cluster << ',' << r.case_id << ',' << r.scheduler << ','
       << r.metrics.avg_waiting.to_fixed4() << ',' << r.metrics.avg_turnaround.to_fixed4() << ','
       << r.metrics.avg_response.to_fixed4() << ',' << r.metrics.preemptions << ','
       << r.metrics.makespan << '\n';
  }
  return os.str();
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || !lines[0].starts_with("cluster,case_id,scheduler,")) {
    throw Error(Errc::SchemaError, "results CSV header missing");
  }
  std::vector<ResultRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 8) throw Error(Errc::SchemaError, "results CSV row " + std::to_string(i) + " malformed");
    ResultRow r;
    r.cluster = f[0];
    r.case_id = static_cast<std::size_t>(to_number(f[1]));
    r.scheduler = f[2];
    r.metrics.avg_waiting = to_rational4(f[3]);
    r.metrics.avg_turnaround = to_rational4(f[4]);
    r.metrics.avg_response = to_rational4(f[5]);
    r.metrics.preemptions = static_cast<std::int64_t>(to_number(f[6]));
    r.metrics.makespan = static_cast<Time>(to_number(f[7]));
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<SummaryRow> summarize(std::span<const ResultRow> rows) {
  // cluster -> scheduler -> rows in case order
  std::map<std::string, std::map<std::string, std::vector<const ResultRow*>>> grouped;
  for (const ResultRow& r : rows) grouped[r.cluster][r.scheduler].push_back(&r);

  std::vector<SummaryRow> out;
  for (const auto& [cluster, by_sched] : grouped) {
    for (Metric metric : {Metric::Waiting, Metric::Turnaround, Metric::Response}) {
      std::vector<SchedulerSeries> series;
      for (const auto& [sched, list] : by_sched) {
        SchedulerSeries s{sched, {}};
        for (const ResultRow* r : list) s.values.push_back(metric_value(r->metrics, metric).to_double());
        series.push_back(std::move(s));
      }
      for (CompareRow& row : compare_table(series)) {
        out.push_back(SummaryRow{cluster, row.scheduler, metric, std::move(row.stats), row.mean, row.rank});
      }
    }
  }
  return out;
}

std::string summary_csv(std::span<const SummaryRow> rows) {
  std::ostringstream os;
  os << "cluster,scheduler,metric,q1,q2,q3,lower_whisker,upper_whisker,n_outliers,mean\n";
  for (const SummaryRow& r : rows) {
    os << r.cluster << ',' << r.scheduler << ',' << metric_name(r.metric) << ',' << fixed4(r.stats.q1)
       << ',' << fixed4(r.stats.q2) << ',' << fixed4(r.stats.q3) << ','
       << fixed4(r.stats.lower_whisker) << ',' << fixed4(r.stats.upper_whisker) << ','
       << r.stats.outliers.size() << ',' << fixed4(r.mean) << '\n';
  }
  return os.str();
}

std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
  const auto lines = lines_of(text);
  if (lines.empty() || !lines[0].starts_with("cluster,scheduler,metric,")) {
    throw Error(Errc::SchemaError, "summary CSV header missing");
  }
  std::vector<SummaryRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i], ',');
    if (f.size() != 10) throw Error(Errc::SchemaError, "summary CSV row " + std::to_string(i) + " malformed");
    SummaryRow r;
    r.cluster = f[0];
    r.scheduler = f[1];
    try {
      r.metric = parse_metric(f[2]);
    } catch (const Error& e) {
      throw Error(Errc::SchemaError, e.what());
    }
    r.stats.q1 = to_number(f[3]);
    r.stats.q2 = to_number(f[4]);
    r.stats.q3 = to_number(f[5]);
    r.stats.iqr = r.stats.q3 - r.stats.q1;
    r.stats.lower_whisker = to_number(f[6]);
    r.stats.upper_whisker = to_number(f[7]);
    r.mean = to_number(f[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

struct Tally {
  int hits = 0;
  int total = 0;
};

// `need` of `full` clusters is the reference threshold; partial sweeps
// scale it to the clusters actually present.
std::string claim_line(const std::string& name, const Tally& t, int need, int full,
                       const std::string& what) {
  std::ostringstream os;
  if (t.total == 0) {
    os << "CLAIM " << name << " SKIP (" << what << ": no applicable clusters)\n";
    return os.str();
  }
  const int required = (need * t.total + full - 1) / full;
  os << "CLAIM " << name << ' ' << (t.hits >= required ? "PASS" : "FAIL") << " (" << what << ": "
     << t.hits << '/' << t.total << ", need " << required << ")\n";
  return os.str();
}

}  // namespace

std::string ranking_report(std::span<const ResultRow> rows) {
  const std::vector<SummaryRow> summary = summarize(rows);
  // (cluster, metric) -> scheduler -> median
  std::map<std::pair<std::string, Metric>, std::map<std::string, double>> medians;
  for (const SummaryRow& r : summary) medians[{r.cluster, r.metric}][r.scheduler] = r.stats.q2;

  std::ostringstream os;
  os << "# ranking by median over the legend lineup";
  for (const auto& id : kLegend) os << ' ' << legend_number(id) << '=' << id;
  os << '\n';

  // Rank of `id` among legend schedulers present: 1 + number strictly better.
  auto rank_of = [&](const std::map<std::string, double>& m, const std::string& id) -> int {
    const auto it = m.find(id);
    if (it == m.end()) return 0;
    int r = 1;
    for (const auto& other : kLegend) {
      const auto o = m.find(other);
      if (o != m.end() && o->second < it->second) ++r;
    }
    return r;
  };

  Tally sjf_first, fb_wait2, fb_turn2, fb_resp_uni, fb_resp_multi, normal_order;
  for (const auto& [key, m] : medians) {
    const auto& [cluster, metric] = key;
    os << cluster << ' ' << metric_name(metric) << ':';
    std::vector<std::pair<int, std::string>> ranked;
    for (const auto& id : kLegend) {
      if (m.count(id)) ranked.emplace_back(rank_of(m, id), id);
    }
    std::sort(ranked.begin(), ranked.end());
    for (const auto& [r, id] : ranked) os << ' ' << id << '=' << r;
    os << '\n';

    const bool multimodal = is_multimodal(parse_cluster(cluster));
    if (metric == Metric::Waiting && m.count("srtf")) {
      ++sjf_first.total;
      sjf_first.hits += rank_of(m, "srtf") == 1;
    }
    if (!m.count("fairbatch")) continue;
    if (!multimodal && metric == Metric::Waiting) {
      ++fb_wait2.total;
      fb_wait2.hits += rank_of(m, "fairbatch") == 2;
    }
    if (!multimodal && metric == Metric::Turnaround) {
      ++fb_turn2.total;
      fb_turn2.hits += rank_of(m, "fairbatch") == 2;
    }
    if (metric == Metric::Response) {
      Tally& t = multimodal ? fb_resp_multi : fb_resp_uni;
      ++t.total;
      t.hits += rank_of(m, "fairbatch") == 1;
      if (cluster == "normal" && m.count("lrtf") && m.count("fcfs")) {
        ++normal_order.total;
        normal_order.hits += m.at("lrtf") < m.at("fairbatch") && m.at("fairbatch") < m.at("fcfs");
      }
    }
  }
  os << claim_line("srtf-least-waiting", sjf_first, 12, 12, "srtf ranks 1st on waiting");
  os << claim_line("fairbatch-waiting-after-srtf", fb_wait2, 6, 9, "fairbatch ranks 2nd on waiting, unimodal");
  os << claim_line("fairbatch-turnaround-after-srtf", fb_turn2, 6, 9,
                   "fairbatch ranks 2nd on turnaround, unimodal");
  os << claim_line("fairbatch-least-response-unimodal", fb_resp_uni, 6, 9,
                   "fairbatch ranks 1st on response, unimodal");
  os << claim_line("fairbatch-least-response-multimodal", fb_resp_multi, 3, 3,
                   "fairbatch ranks 1st on response, multimodal");
  os << claim_line("normal-lrtf-fairbatch-fcfs-response", normal_order, 1, 1,
                   "lrtf < fairbatch < fcfs median response on normal");
  return os.str();
}

}  // namespace batchsim
