#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "batchsim/core.hpp"
#include "batchsim/rational.hpp"

namespace batchsim {

struct BatchMetrics {
  Rational avg_waiting;
  Rational avg_turnaround;
  Rational avg_response;
  std::int64_t preemptions = 0;
  Time makespan = 0;

  friend bool operator==(const BatchMetrics&, const BatchMetrics&) = default;
};

BatchMetrics batch_metrics(const Batch& batch, const ScheduleResult& result);

enum class Metric { Waiting, Turnaround, Response };

std::string_view metric_name(Metric m);
/// Throws BadFlag listing the valid names.
Metric parse_metric(std::string_view name);
const Rational& metric_value(const BatchMetrics& m, Metric metric);

/// Quartiles use the Moore-McCabe convention: for an odd count the median is
/// left out of both halves. Whiskers are the most extreme data points inside
/// the 1.5 * IQR fences; everything outside is an outlier (ascending).
struct BoxplotStats {
  double q1 = 0, q2 = 0, q3 = 0, iqr = 0;
  double lower_whisker = 0, upper_whisker = 0;
  std::vector<double> outliers;

  friend bool operator==(const BoxplotStats&, const BoxplotStats&) = default;
};

/// Throws EmptyInput.
BoxplotStats boxplot_stats(std::span<const double> values);

struct SchedulerSeries {
  std::string scheduler;
  std::vector<double> values;  // one metric value per case
};

struct CompareRow {
  std::string scheduler;
  BoxplotStats stats;
  double mean = 0;
  /// Competition rank by median: 1 + number of rows with a strictly smaller median.
  std::size_t rank = 0;
};

/// Rows come back sorted by (median, mean, scheduler id).
std::vector<CompareRow> compare_table(std::span<const SchedulerSeries> series);

}  // namespace batchsim
