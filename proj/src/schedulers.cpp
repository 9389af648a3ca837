#include "batchsim/schedulers.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <queue>
#include <set>
#include <utility>

namespace batchsim {

namespace {

ScheduleResult run_in_order(const Batch& batch, std::span<const std::size_t> order, std::string id) {
  LogBuilder log(batch);
  for (std::size_t j : order) log.run(j, batch[j].burst);
  return std::move(log).finish(std::move(id));
}

// Remaining time keyed priority dispatch. `Better` orders (remaining, index)
// pairs so that the top of the heap is the next job to run.
template <typename Better>
ScheduleResult run_remaining_priority(const Batch& batch, Time tick, std::string id) {
  using Entry = std::pair<Time, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, Better> heap;
  for (const Job& j : batch.jobs()) heap.emplace(j.burst, j.index);
  LogBuilder log(batch);
  while (!heap.empty()) {
    auto [remaining, job] = heap.top();
    heap.pop();
    const Time delta = std::min(tick, remaining);
    log.run(job, delta);
    if (remaining > delta) heap.emplace(remaining - delta, job);
  }
  return std::move(log).finish(std::move(id));
}

// priority_queue keeps the *largest* element on top, so these comparators
// are "a is worse than b".
struct ShortestFirst {
  bool operator()(const std::pair<Time, std::size_t>& a, const std::pair<Time, std::size_t>& b) const {
    return a > b;
  }
};

struct LongestFirst {
  bool operator()(const std::pair<Time, std::size_t>& a, const std::pair<Time, std::size_t>& b) const {
    if (a.first != b.first) return a.first < b.first;
    return a.second > b.second;
  }
};

}  // namespace

ScheduleResult run_fcfs(const Batch& batch) {
  validate_batch(batch);
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  return run_in_order(batch, order, "fcfs");
}

ScheduleResult run_sjf(const Batch& batch) {
  validate_batch(batch);
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return batch[a].burst < batch[b].burst; });
  return run_in_order(batch, order, "sjf");
}

ScheduleResult run_srtf(const Batch& batch) {
  validate_batch(batch);
  return run_remaining_priority<ShortestFirst>(batch, 1, "srtf");
}

ScheduleResult run_lrtf(const Batch& batch, const LrtfConfig& cfg) {
  validate_batch(batch);
  if (cfg.tick < 1) throw Error(Errc::DomainError, "lrtf tick must be >= 1");
  return run_remaining_priority<LongestFirst>(batch, cfg.tick, "lrtf");
}

Time rr_default_quantum(const Batch& batch) {
  validate_batch(batch);
  const Time n = static_cast<Time>(batch.size());
  return (batch.total_burst() + n - 1) / n;
}

ScheduleResult run_rr(const Batch& batch, const RoundRobinConfig& cfg) {
  validate_batch(batch);
  if (cfg.quantum < 1) throw Error(Errc::DomainError, "round-robin quantum must be >= 1");
  std::deque<std::pair<std::size_t, Time>> queue;
  for (const Job& j : batch.jobs()) queue.emplace_back(j.index, j.burst);
  LogBuilder log(batch);
  while (!queue.empty()) {
    auto [job, remaining] = queue.front();
    queue.pop_front();
    const Time delta = std::min(cfg.quantum, remaining);
    log.run(job, delta);
    if (remaining > delta) queue.emplace_back(job, remaining - delta);
  }
  return std::move(log).finish("rr");
}

Time cfs_slice(const CfsConfig& cfg, std::size_t alive) {
  const Time n = static_cast<Time>(alive);
  return std::max((cfg.target_latency + n - 1) / n, cfg.min_granularity);
}

ScheduleResult run_cfs(const Batch& batch, const CfsConfig& cfg) {
  validate_batch(batch);
  if (cfg.min_granularity < 1 || cfg.target_latency < cfg.min_granularity) {
    throw Error(Errc::DomainError, "cfs needs target_latency >= min_granularity >= 1");
  }
  if (cfg.nice != 0) throw Error(Errc::DomainError, "only nice 0 is modelled");

  // (vruntime, index); the set's minimum is the next job to run.
  std::set<std::pair<Time, std::size_t>> runnable;
  std::vector<Time> remaining = batch.bursts();
  for (const Job& j : batch.jobs()) runnable.emplace(0, j.index);
  LogBuilder log(batch);
  while (!runnable.empty()) {
    auto [vruntime, job] = *runnable.begin();
    runnable.erase(runnable.begin());
    const Time delta = std::min(cfs_slice(cfg, runnable.size() + 1), remaining[job]);
    log.run(job, delta);
    remaining[job] -= delta;
    // nice 0: weight 1024 / 1024, vruntime advances by wall time.
    if (remaining[job] > 0) runnable.emplace(vruntime + delta, job);
  }
  return std::move(log).finish("cfs");
}

}  // namespace batchsim
