#include "checks.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "batchsim/oracles.hpp"

namespace batchsim::testkit {

namespace {

struct CycleWindow {
  Time start = 0;
  Time end = 0;
};

std::vector<CycleWindow> windows(const FairBatchRun& run) {
  std::vector<CycleWindow> out;
  const auto& b = run.result.iteration_boundaries;
  Time prev = 0;
  for (Time t : b) {
    out.push_back({prev, t});
    prev = t;
  }
  return out;
}

// Time job j spent running inside [from, to).
Time run_time_in(const ScheduleResult& r, std::size_t j, Time from, Time to) {
  Time total = 0;
  for (const ExecutionSlice& s : r.log) {
    if (s.job_index != j) continue;
    const Time lo = std::max(from, s.start);
    const Time hi = std::min(to, s.end());
    if (hi > lo) total += hi - lo;
  }
  return total;
}

std::string where(std::size_t cycle, const std::string& what) {
  std::ostringstream os;
  os << "cycle " << cycle << ": " << what;
  return os.str();
}

std::string shape_check(const FairBatchRun& run) {
  if (run.cycles.size() != run.result.iteration_boundaries.size()) {
    return "cycle records and iteration boundaries disagree";
  }
  return {};
}

}  // namespace

std::string check_no_preemption_within_cycle(const Batch&, const FairBatchRun& run) {
  if (auto s = shape_check(run); !s.empty()) return s;
  const auto ws = windows(run);
  for (std::size_t c = 0; c < ws.size(); ++c) {
    std::vector<ExecutionSlice> inside;
    for (const ExecutionSlice& s : run.result.log) {
      if (s.start >= ws[c].start && s.end() <= ws[c].end) inside.push_back(s);
      else if (s.start < ws[c].end && s.end() > ws[c].start) return where(c, "slice crosses a cycle boundary");
    }
    std::vector<std::size_t> seen;
    for (const ExecutionSlice& s : coalesce(inside)) {
      if (std::find(seen.begin(), seen.end(), s.job_index) != seen.end()) {
        return where(c, "job " + std::to_string(s.job_index) + " resumed within the cycle");
      }
      seen.push_back(s.job_index);
    }
  }
  return {};
}

std::string check_at_most_one_preemption(const Batch& batch, const FairBatchRun& run) {
  if (auto s = shape_check(run); !s.empty()) return s;
  const auto ws = windows(run);
  for (std::size_t c = 0; c < ws.size(); ++c) {
    const CycleRecord& rec = run.cycles[c];
    std::size_t cut = 0;
    for (std::size_t i = 0; i < rec.chosen.size(); ++i) {
      const std::size_t j = rec.chosen[i];
      const Time before = batch[j].burst - run_time_in(run.result, j, 0, ws[c].start);
      const Time ran = run_time_in(run.result, j, ws[c].start, ws[c].end);
      if (ran != rec.executed_spans[i]) return where(c, "span record disagrees with the log");
      if (ran < before) {
        ++cut;
        if (i + 1 != rec.chosen.size()) return where(c, "a job other than the last was cut short");
      }
    }
    if (cut > 1) return where(c, "more than one preemption");
  }
  return {};
}

std::string check_group_oracles(const Batch& batch, const FairBatchRun& run) {
  if (auto s = shape_check(run); !s.empty()) return s;
  const ScheduleResult& r = run.result;
  const auto ws = windows(run);
  Time wait_oracle_sum = 0, resp_oracle_sum = 0;
  for (std::size_t c = 0; c < ws.size(); ++c) {
    const CycleRecord& rec = run.cycles[c];
    const Time s = ws[c].start, e = ws[c].end;
    std::vector<Time> chosen_rt;
    std::vector<GroupMember> chosen_members;
    for (std::size_t j : rec.chosen) {
      const Time rt = batch[j].burst - run_time_in(r, j, 0, s);
      chosen_rt.push_back(rt);
      chosen_members.push_back({rt, batch[j].burst});
    }
    std::size_t live = 0, fresh_not_chosen = 0;
    Time log_wait = 0, log_resp = 0;
    for (std::size_t j = 0; j < batch.size(); ++j) {
      if (r.per_job[j].completion <= s) continue;
      ++live;
      const Time present = std::min(r.per_job[j].completion, e) - s;
      log_wait += present - run_time_in(r, j, s, e);
      const bool fresh = r.per_job[j].first_start >= s;
      if (fresh) log_resp += std::min(r.per_job[j].first_start, e) - s;
      if (fresh && std::find(rec.chosen.begin(), rec.chosen.end(), j) == rec.chosen.end()) {
        ++fresh_not_chosen;
      }
    }
    const Time ow = oracle_group_waiting(chosen_rt, live, rec.quantum);
    const Time orr = oracle_group_response(chosen_members, fresh_not_chosen, rec.quantum);
    if (ow != log_wait) {
      return where(c, "waiting accrual " + std::to_string(log_wait) + " != oracle " + std::to_string(ow));
    }
    if (orr != log_resp) {
      return where(c, "response accrual " + std::to_string(log_resp) + " != oracle " + std::to_string(orr));
    }
    wait_oracle_sum += ow;
    resp_oracle_sum += orr;
  }
  Time wait_total = 0, resp_total = 0;
  for (const JobMetrics& m : derive_job_metrics(batch, r)) {
    wait_total += m.waiting;
    resp_total += m.response;
  }
  if (wait_total != wait_oracle_sum) return "summed waiting oracle differs from the batch total";
  if (resp_total != resp_oracle_sum) return "summed response oracle differs from the batch total";
  return {};
}

std::string check_remaining_recurrences(const Batch& batch, const FairBatchRun& run) {
  if (auto s = shape_check(run); !s.empty()) return s;
  const ScheduleResult& r = run.result;
  const auto ws = windows(run);
  std::size_t bound = batch.size();
  std::size_t unresponded = batch.size();
  for (std::size_t c = 0; c < ws.size(); ++c) {
    const CycleRecord& rec = run.cycles[c];
    std::size_t fresh_ran = 0;
    for (std::size_t j : rec.chosen) {
      if (r.per_job[j].first_start >= ws[c].start) ++fresh_ran;
    }
    bound = oracle_remaining_jobs(bound, rec.chosen.size(), RemainingMode::MaxAlive);
    unresponded = oracle_remaining_jobs(unresponded, fresh_ran, RemainingMode::Unresponded);
    std::size_t live_after = 0, unresponded_after = 0;
    for (std::size_t j = 0; j < batch.size(); ++j) {
      if (r.per_job[j].completion > ws[c].end) ++live_after;
      if (r.per_job[j].first_start >= ws[c].end) ++unresponded_after;
    }
    if (live_after != rec.survivors_after) return where(c, "survivor count disagrees with the log");
    if (live_after > bound) return where(c, "live count above the max-alive bound");
    if (unresponded_after != unresponded) return where(c, "unresponded count off its recurrence");
  }
  return {};
}

std::string check_fairbatch_run(const Batch& batch, const FairBatchRun& run) {
  for (auto* check : {check_no_preemption_within_cycle, check_at_most_one_preemption,
                      check_group_oracles, check_remaining_recurrences}) {
    if (auto s = check(batch, run); !s.empty()) return s;
  }
  return {};
}

bool same_schedule(const ScheduleResult& a, const ScheduleResult& b) {
  return a.log == b.log && a.per_job == b.per_job && a.preemption_count == b.preemption_count &&
         a.iteration_boundaries == b.iteration_boundaries;
}

std::vector<Time> random_bursts(std::mt19937_64& rng, std::size_t n, Time max_burst) {
  std::uniform_int_distribution<Time> d(1, max_burst);
  std::vector<Time> out(n);
  for (Time& v : out) v = d(rng);
  return out;
}

}  // namespace batchsim::testkit
