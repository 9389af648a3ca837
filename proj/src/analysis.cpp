#include "batchsim/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace batchsim {

BatchMetrics batch_metrics(const Batch& batch, const ScheduleResult& result) {
  const std::vector<JobMetrics> per_job = derive_job_metrics(batch, result);
  Time waiting = 0;
  Time turnaround = 0;
  Time response = 0;
  Time makespan = 0;
  for (const JobMetrics& m : per_job) {
    waiting += m.waiting;
    turnaround += m.turnaround;
    response += m.response;
    makespan = std::max(makespan, m.turnaround);
  }
  const auto n = static_cast<std::int64_t>(per_job.size());
  return BatchMetrics{Rational(waiting, n), Rational(turnaround, n), Rational(response, n),
                      result.preemption_count, makespan};
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::Waiting: return "waiting";
    case Metric::Turnaround: return "turnaround";
    case Metric::Response: return "response";
  }
  return "?";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::Waiting, Metric::Turnaround, Metric::Response}) {
    if (metric_name(m) == name) return m;
  }
  throw Error(Errc::BadFlag,
              "unknown metric '" + std::string(name) + "'; valid: waiting, turnaround, response");
}

const Rational& metric_value(const BatchMetrics& m, Metric metric) {
  switch (metric) {
    case Metric::Waiting: return m.avg_waiting;
    case Metric::Turnaround: return m.avg_turnaround;
    case Metric::Response: break;
  }
  return m.avg_response;
}

namespace {

double median_of_sorted(std::span<const double> v) {
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace

BoxplotStats boxplot_stats(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "boxplot of no values");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();

  BoxplotStats s;
  s.q2 = median_of_sorted(v);
  if (n == 1) {
    s.q1 = s.q3 = s.q2;
  } else {
    const std::size_t half = n / 2;
    s.q1 = median_of_sorted(std::span<const double>(v).first(half));
    s.q3 = median_of_sorted(std::span<const double>(v).last(half));
  }
  s.iqr = s.q3 - s.q1;
  const double lo_fence = s.q1 - 1.5 * s.iqr;
  const double hi_fence = s.q3 + 1.5 * s.iqr;
  s.lower_whisker = *std::find_if(v.begin(), v.end(), [&](double x) { return x >= lo_fence; });
  s.upper_whisker = *std::find_if(v.rbegin(), v.rend(), [&](double x) { return x <= hi_fence; });
  for (double x : v) {
    if (x < lo_fence || x > hi_fence) s.outliers.push_back(x);
  }
  return s;
}

std::vector<CompareRow> compare_table(std::span<const SchedulerSeries> series) {
  std::vector<CompareRow> rows;
  rows.reserve(series.size());
  for (const SchedulerSeries& s : series) {
    CompareRow row;
    row.scheduler = s.scheduler;
    row.stats = boxplot_stats(s.values);
    // Sum in sorted order so the mean does not depend on case order.
    std::vector<double> sorted = s.values;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0;
    for (double x : sorted) sum += x;
    row.mean = sum / static_cast<double>(sorted.size());
    rows.push_back(std::move(row));
  }
  for (CompareRow& row : rows) {
    row.rank = 1 + static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [&](const CompareRow& o) {
                 return o.stats.q2 < row.stats.q2;
               }));
  }
  std::sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
    if (a.stats.q2 != b.stats.q2) return a.stats.q2 < b.stats.q2;
    if (a.mean != b.mean) return a.mean < b.mean;
    return a.scheduler < b.scheduler;
  });
  return rows;
}

}  // namespace batchsim
