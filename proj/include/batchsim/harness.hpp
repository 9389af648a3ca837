#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "batchsim/analysis.hpp"
#include "batchsim/fairbatch.hpp"
#include "batchsim/schedulers.hpp"
#include "batchsim/workload.hpp"

namespace batchsim {

/// fcfs, sjf, srtf, lrtf, rr, cfs, fairbatch, fairbatch-opt.
std::span<const std::string> scheduler_ids();
/// The six policies of the reference comparison, in legend order 1..6.
std::span<const std::string> legend_lineup();
/// Legend number of a scheduler id; sjf and fairbatch-opt continue at 7, 8.
int legend_number(std::string_view id);
/// Throws UnknownScheduler.
void check_scheduler_id(std::string_view id);

struct SchedulerOptions {
  std::optional<Time> rr_quantum;  // default: rr_default_quantum per case
  CfsConfig cfs;
  LrtfConfig lrtf;
  FairBatchConfig fairbatch;
};

ScheduleResult run_scheduler(std::string_view id, const Batch& batch, const SchedulerOptions& opts);

struct ResultRow {
  std::string cluster;
  std::size_t case_id = 0;
  std::string scheduler;
  BatchMetrics metrics;
};

struct SweepFailure {
  std::string cluster;
  std::size_t case_id = 0;
  std::string scheduler;
  Errc code = Errc::DomainError;
  std::string message;
};

struct SweepOutcome {
  std::vector<ResultRow> rows;  // canonical order: cluster, case_id, scheduler
  std::vector<SweepFailure> failures;
};

/// Runs every (case, scheduler) pair on up to `parallel` worker threads.
/// Output order never depends on completion order.
SweepOutcome run_sweep(std::span<const Dataset> datasets, std::span<const std::string> schedulers,
                       const SchedulerOptions& opts, unsigned parallel);

std::string results_csv(std::span<const ResultRow> rows);

struct SummaryRow {
  std::string cluster;
  std::string scheduler;
  Metric metric = Metric::Waiting;
  BoxplotStats stats;
  double mean = 0;
  std::size_t rank = 0;
};

/// One compare_table per (cluster, metric), clusters in name order.
std::vector<SummaryRow> summarize(std::span<const ResultRow> rows);
std::string summary_csv(std::span<const SummaryRow> rows);
/// Parses summary_csv output. Outlier values are not stored there, so the
/// returned stats carry none. Throws SchemaError.
std::vector<SummaryRow> parse_summary_csv(std::string_view text);
/// Parses results_csv output back into rows. Throws SchemaError.
std::vector<ResultRow> parse_results_csv(std::string_view text);

/// Per-(cluster, metric) ranking lines followed by CLAIM lines restating the
/// expected orderings as pass/fail checks over the legend lineup.
std::string ranking_report(std::span<const ResultRow> rows);

}  // namespace batchsim
