#include "batchsim/fairbatch.hpp"

#include <algorithm>
#include <numeric>

namespace batchsim {

Rational fairness_ratio(Time burst, Time remaining, Time internal_waiting,
                        std::int64_t preemption_count) {
  if (burst < 1 || preemption_count < 1 || remaining < 0 || remaining > burst ||
      internal_waiting < 1) {
    throw Error(Errc::DomainError, "fairness ratio arguments out of range: burst=" +
                                       std::to_string(burst) + " remaining=" +
                                       std::to_string(remaining) + " waiting=" +
                                       std::to_string(internal_waiting) + " preemptions=" +
                                       std::to_string(preemption_count));
  }
  return Rational(burst - remaining + internal_waiting, burst * preemption_count);
}

Time cycle_quantum(std::span<const Time> remainings) {
  if (remainings.empty()) throw Error(Errc::EmptySet, "cycle_quantum of an empty live set");
  std::vector<Time> v(remainings.begin(), remainings.end());
  const auto n = static_cast<Time>(v.size());
  Time sum = 0;
  for (Time r : v) {
    if (r < 1) throw Error(Errc::DomainError, "remaining time must be >= 1");
    sum += r;
  }
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  const Time upper = *mid;
  // tq = ceil((sum/n + median) / 2), evaluated over a common denominator.
  Time numerator = 0;
  Time denominator = 0;
  if (v.size() % 2 == 1) {
    numerator = sum + n * upper;
    denominator = 2 * n;
  } else {
    const Time lower = *std::max_element(v.begin(), mid);
    numerator = 2 * sum + n * (lower + upper);
    denominator = 4 * n;
  }
  return (numerator + denominator - 1) / denominator;
}

bool dispatched_before(const SchedState& a, const SchedState& b, SortOrder order) {
  if (a.ratio != b.ratio) {
    return order == SortOrder::Descending ? a.ratio > b.ratio : a.ratio < b.ratio;
  }
  return a.index < b.index;
}

namespace {

std::vector<SchedState> initial_states(const Batch& batch) {
  std::vector<SchedState> states;
  states.reserve(batch.size());
  for (const Job& j : batch.jobs()) {
    SchedState s;
    s.index = j.index;
    s.burst = j.burst;
    s.remaining = j.burst;
    states.push_back(s);
  }
  return states;
}

// Runs `ordered` front to back against `budget`. Each dispatched job accrues
// the cycle-start remaining time of the jobs dispatched ahead of it; live
// jobs that never ran accrue the whole budget.
RunnerOutcome dispatch(std::span<const std::size_t> ordered, Time budget,
                       std::span<const std::size_t> live, std::vector<SchedState>& states,
                       LogBuilder& log) {
  RunnerOutcome out;
  std::vector<char> ran(states.size(), 0);
  Time left = budget;
  Time ahead = 0;
  for (std::size_t j : ordered) {
    if (left == 0) break;
    SchedState& s = states[j];
    const Time delta = std::min(left, s.remaining);
    log.run(j, delta);
    left -= delta;
    s.preemption_count += 1;
    s.internal_waiting += ahead;
    ahead += s.remaining;
    s.remaining -= delta;
    ran[j] = 1;
    out.order.push_back(j);
    out.spans.push_back(delta);
  }
  for (std::size_t j : live) {
    if (!ran[j]) states[j].internal_waiting += budget;
  }
  return out;
}

template <typename Step>
FairBatchRun run_cycles(const Batch& batch, const FairBatchConfig& cfg, std::string id,
                        Step&& step) {
  validate_batch(batch);
  std::vector<SchedState> states = initial_states(batch);
  std::vector<std::size_t> live(batch.size());
  std::iota(live.begin(), live.end(), 0);
  std::vector<Time> remainings;
  LogBuilder log(batch);
  FairBatchRun run;

  while (!live.empty()) {
    remainings.clear();
    for (std::size_t j : live) {
      SchedState& s = states[j];
      s.ratio = fairness_ratio(s.burst, s.remaining, s.internal_waiting, s.preemption_count);
      remainings.push_back(s.remaining);
    }
    const Time tq = cycle_quantum(remainings);
    CycleRecord rec;
    rec.start = log.now();
    rec.quantum = tq;

    RunnerOutcome outcome = step(live, tq, states, cfg.sort_order, log);
    log.mark_boundary();

    std::erase_if(live, [&](std::size_t j) { return states[j].remaining == 0; });
    rec.chosen = std::move(outcome.order);
    rec.executed_spans = std::move(outcome.spans);
    rec.survivors_after = live.size();
    run.cycles.push_back(std::move(rec));
  }
  run.result = std::move(log).finish(std::move(id));
  return run;
}

}  // namespace

RunnerOutcome runner(std::span<const std::size_t> chosen, Time budget,
                     std::span<const std::size_t> live, std::vector<SchedState>& states,
                     SortOrder order, LogBuilder& log) {
  if (budget < 1) throw Error(Errc::NonPositiveBudget, "runner budget must be >= 1");
  if (chosen.empty()) throw Error(Errc::InconsistentChosenSet, "empty chosen set");

  std::vector<char> member(states.size(), 0);
  for (std::size_t j : live) member[j] = 1;
  for (std::size_t j : chosen) {
    if (j >= states.size() || member[j] != 1) {
      throw Error(Errc::InconsistentChosenSet, "chosen job " + std::to_string(j) +
                                                   " is not live or is repeated");
    }
    member[j] = 2;
  }

  std::vector<std::size_t> ordered(chosen.begin(), chosen.end());
  std::sort(ordered.begin(), ordered.end(), [&](std::size_t a, std::size_t b) {
    return dispatched_before(states[a], states[b], order);
  });

  // Must be the minimal dispatch-order prefix reaching the budget.
  const SchedState& last = states[ordered.back()];
  for (std::size_t j : live) {
    if (member[j] == 1 && dispatched_before(states[j], last, order)) {
      throw Error(Errc::InconsistentChosenSet,
                  "job " + std::to_string(j) + " outranks a chosen job but was not chosen");
    }
  }
  Time before_last = 0;
  for (std::size_t i = 0; i + 1 < ordered.size(); ++i) before_last += states[ordered[i]].remaining;
  const Time total = before_last + last.remaining;
  if (before_last >= budget || (total < budget && ordered.size() != live.size())) {
    throw Error(Errc::InconsistentChosenSet, "chosen set is not the minimal prefix for the budget");
  }

  return dispatch(ordered, budget, live, states, log);
}

FairBatchRun run_fairbatch(const Batch& batch, const FairBatchConfig& cfg) {
  std::vector<std::size_t> ordered;
  return run_cycles(batch, cfg, "fairbatch",
                    [&](std::span<const std::size_t> live, Time tq, std::vector<SchedState>& states,
                        SortOrder order, LogBuilder& log) {
                      ordered.assign(live.begin(), live.end());
                      std::sort(ordered.begin(), ordered.end(), [&](std::size_t a, std::size_t b) {
                        return dispatched_before(states[a], states[b], order);
                      });
                      return dispatch(ordered, tq, live, states, log);
                    });
}

FairBatchRun run_fairbatch_opt(const Batch& batch, const FairBatchConfig& cfg) {
  Selector selector(cfg.pivot_seed);
  FairBatchRun run =
      run_cycles(batch, cfg, "fairbatch-opt",
                 [&](std::span<const std::size_t> live, Time tq, std::vector<SchedState>& states,
                     SortOrder order, LogBuilder& log) {
                   const std::vector<std::size_t> chosen = selector.select(states, live, tq, order);
                   return runner(chosen, tq, live, states, order, log);
                 });
  run.select_stats = selector.stats();
  return run;
}

FairBatchRun run_fairbatch_variant(const Batch& batch, const FairBatchConfig& cfg) {
  return cfg.variant == Variant::Optimized ? run_fairbatch_opt(batch, cfg)
                                           : run_fairbatch(batch, cfg);
}

}  // namespace batchsim
