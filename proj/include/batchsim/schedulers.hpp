#pragma once

#include <limits>

#include "batchsim/core.hpp"

namespace batchsim {

struct RoundRobinConfig {
  Time quantum = 1;
};

/// Equal-weight CFS. slice = max(ceil(target_latency / alive), min_granularity).
/// The defaults keep the kernel's 8:1 latency/granularity ratio with the
/// granularity at the 500-unit burst ceiling of the generated workloads.
struct CfsConfig {
  Time target_latency = 4000;
  Time min_granularity = 500;
  int nice = 0;
};

/// Dispatch granularity for longest-remaining-time-first. A tick at least as
/// large as the longest burst gives the non-preemptive longest-first order.
struct LrtfConfig {
  Time tick = 1;

  static constexpr LrtfConfig non_preemptive() { return {std::numeric_limits<Time>::max()}; }
};

ScheduleResult run_fcfs(const Batch& batch);
ScheduleResult run_sjf(const Batch& batch);
/// Unit-tick shortest-remaining-time-first. The raw log has one slice per tick.
ScheduleResult run_srtf(const Batch& batch);
ScheduleResult run_lrtf(const Batch& batch, const LrtfConfig& cfg = {});
ScheduleResult run_rr(const Batch& batch, const RoundRobinConfig& cfg);
/// ceil(total burst / job count).
Time rr_default_quantum(const Batch& batch);
ScheduleResult run_cfs(const Batch& batch, const CfsConfig& cfg = {});

/// CFS slice length for the given number of runnable jobs.
Time cfs_slice(const CfsConfig& cfg, std::size_t alive);

}  // namespace batchsim
