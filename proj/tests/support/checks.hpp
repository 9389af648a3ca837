#pragma once

// Log-level checks of FairBatch runs, shared by the property tests and the
// acceptance binary. Each returns an empty string on success and a short
// description of the first violation otherwise.

#include <random>
#include <string>
#include <vector>

#include "batchsim/core.hpp"
#include "batchsim/fairbatch.hpp"

namespace batchsim::testkit {

/// Within one cycle every job occupies at most one contiguous stretch.
std::string check_no_preemption_within_cycle(const Batch& batch, const FairBatchRun& run);

/// Per cycle at most one job is cut short, and it is the last chosen one.
std::string check_at_most_one_preemption(const Batch& batch, const FairBatchRun& run);

/// Waiting and response accruals seen in the log equal the closed forms per
/// cycle, and their sums reproduce the batch totals.
std::string check_group_oracles(const Batch& batch, const FairBatchRun& run);

/// Live count stays under the max-alive bound; unresponded count follows
/// its recurrence exactly.
std::string check_remaining_recurrences(const Batch& batch, const FairBatchRun& run);

/// Everything above.
std::string check_fairbatch_run(const Batch& batch, const FairBatchRun& run);

/// ScheduleResults equal in everything but the scheduler id.
bool same_schedule(const ScheduleResult& a, const ScheduleResult& b);

std::vector<Time> random_bursts(std::mt19937_64& rng, std::size_t n, Time max_burst);

}  // namespace batchsim::testkit
