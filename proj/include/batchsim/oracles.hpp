#pragma once

#include <span>

#include "batchsim/core.hpp"
#include "batchsim/rational.hpp"

namespace batchsim {

/// Closed forms for one FairBatch cycle and for the greedy response floor.
/// These are independent of the simulator and are checked against its logs.

/// Sum over chosen p_i of the remaining times of p_1..p_{i-1}, plus tq for
/// each of the n - k jobs that did not run. `chosen_remaining` is in
/// dispatch order.
Time oracle_group_waiting(std::span<const Time> chosen_remaining, std::size_t live_count, Time tq);

struct GroupMember {
  Time remaining = 0;  // at cycle start
  Time burst = 0;
};

/// Like oracle_group_waiting, but only jobs that have never run (remaining
/// equal to burst) accrue anything.
Time oracle_group_response(std::span<const GroupMember> chosen, std::size_t fresh_not_chosen,
                           Time tq);

enum class RemainingMode {
  MaxAlive,     // R_k = R_{k-1} - p_k + 1
  Unresponded,  // R_k = R_{k-1} - p_k
};

/// One step of the remaining-jobs recurrence; pass R_prev = N for R_1.
/// MaxAlive needs R_prev >= p_k >= 1. Unresponded counts p_k as the jobs
/// that received their first response this cycle and accepts p_k = 0.
std::size_t oracle_remaining_jobs(std::size_t r_prev, std::size_t p_k, RemainingMode mode);

/// Average first-response time when each of n jobs in turn is granted k
/// units: (0 + k + ... + k(n-1)) / n = k(n-1)/2.
Rational oracle_min_avg_response(std::size_t n, Time k);

}  // namespace batchsim
