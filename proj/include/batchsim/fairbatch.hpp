#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "batchsim/core.hpp"
#include "batchsim/rational.hpp"

namespace batchsim {

/// Direction in which live jobs are ordered by fairness ratio before a
/// cycle dispatches them front to back. Ties always go to the lower index.
enum class SortOrder { Descending, Ascending };
enum class Variant { Naive, Optimized };

struct FairBatchConfig {
  SortOrder sort_order = SortOrder::Descending;
  Variant variant = Variant::Naive;
  /// Seeds the pivot choice of the optimized Select.
  std::uint64_t pivot_seed = 0x9e3779b97f4a7c15ULL;
};

/// Per-job bookkeeping. internal_waiting only shapes the ratio; reported
/// waiting times always come from the event log.
struct SchedState {
  std::size_t index = 0;
  Time burst = 0;
  Time remaining = 0;
  Time internal_waiting = 1;
  std::int64_t preemption_count = 1;
  Rational ratio;
};

struct CycleRecord {
  Time start = 0;
  Time quantum = 0;
  /// Dispatch order of the jobs that executed this cycle.
  std::vector<std::size_t> chosen;
  std::vector<Time> executed_spans;
  std::size_t survivors_after = 0;
};

/// Counters of the optimized Select, summed over a run.
struct SelectStats {
  std::uint64_t calls = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t live_total = 0;  // sum over calls of the live-set size
};

struct FairBatchRun {
  ScheduleResult result;
  std::vector<CycleRecord> cycles;
  SelectStats select_stats;
};

/// (burst - remaining + internal_waiting) / (burst * preemption_count),
/// exactly. DomainError on a violated precondition.
Rational fairness_ratio(Time burst, Time remaining, Time internal_waiting,
                        std::int64_t preemption_count);

/// ceil((mean + median) / 2) of the remaining times. The median of an
/// even-sized multiset is the mean of its two central values.
Time cycle_quantum(std::span<const Time> remainings);

/// True if `a` is dispatched before `b` under `order`.
bool dispatched_before(const SchedState& a, const SchedState& b, SortOrder order);

/// Naive form: full sort of the live set every cycle.
FairBatchRun run_fairbatch(const Batch& batch, const FairBatchConfig& cfg = {});
/// Median-partition Select plus Runner; produces the same result as run_fairbatch.
FairBatchRun run_fairbatch_opt(const Batch& batch, const FairBatchConfig& cfg = {});
/// Dispatches on cfg.variant.
FairBatchRun run_fairbatch_variant(const Batch& batch, const FairBatchConfig& cfg);

// --- optimized pipeline pieces -----------------------------------------------

/// One level of the median partition. `preferred/tied/rest` hold job indices
/// whose ratio is dispatched before / equal to / after the median `m`.
struct SelectPartition {
  Rational m;
  std::vector<std::size_t> preferred, tied, rest;
  Time preferred_work = 0, tied_work = 0, rest_work = 0;
  Time budget = 0;
};

/// Seeded pivot source and comparison counter for Select.
class Selector {
 public:
  explicit Selector(std::uint64_t seed) : state_(seed ? seed : 1) {}

  /// Minimal prefix, in dispatch order, of the live set whose cumulative
  /// remaining time reaches `budget`, or the whole live set if it cannot.
  /// The result is in no particular order. `states` is indexed by job
  /// index; `live` lists the live job indices. Throws EmptySet or
  /// NonPositiveBudget.
  std::vector<std::size_t> select(std::span<const SchedState> states,
                                  std::span<const std::size_t> live, Time budget,
                                  SortOrder order);

  /// Top-level partition around the median ratio (exposed for inspection).
  SelectPartition partition(std::span<const SchedState> states,
                            std::span<const std::size_t> live, Time budget, SortOrder order);

  const SelectStats& stats() const noexcept { return stats_; }

 private:
  std::uint64_t next_random();
  using Compare = std::function<std::strong_ordering(std::size_t, std::size_t)>;
  void weighted_prefix(std::span<const SchedState> states, std::span<std::size_t> items,
                       Time budget, const Compare& cmp, std::vector<std::size_t>& out);
  void median_partition(std::span<std::size_t> items, const Compare& cmp, std::size_t& eq_begin,
                        std::size_t& eq_end);
  Compare ratio_order(std::span<const SchedState> states, SortOrder order);

  std::uint64_t state_;
  SelectStats stats_;
};

struct RunnerOutcome {
  std::vector<std::size_t> order;  // chosen set in dispatch order
  std::vector<Time> spans;
};

/// Executes one cycle for a chosen set produced by Select with the same
/// budget: sorts it into dispatch order, runs it front to back, then
/// charges the full budget to every live job that did not run. Throws
/// InconsistentChosenSet if `chosen` is not that minimal prefix.
RunnerOutcome runner(std::span<const std::size_t> chosen, Time budget,
                     std::span<const std::size_t> live, std::vector<SchedState>& states,
                     SortOrder order, LogBuilder& log);

}  // namespace batchsim
