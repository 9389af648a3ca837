#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "batchsim/error.hpp"

namespace batchsim {

/// Discrete time, in abstract units.
using Time = std::int64_t;

struct Job {
  std::size_t index = 0;
  Time burst = 0;

  friend bool operator==(const Job&, const Job&) = default;
};

/// Ordered set of jobs that all arrive at time 0. Array order is the
/// submission order used by FCFS and by every tie-break.
class Batch {
 public:
  Batch() = default;
  explicit Batch(std::span<const Time> bursts);
  Batch(std::initializer_list<Time> bursts);

  std::span<const Job> jobs() const noexcept { return jobs_; }
  const Job& operator[](std::size_t i) const { return jobs_[i]; }
  std::size_t size() const noexcept { return jobs_.size(); }
  bool empty() const noexcept { return jobs_.empty(); }

  std::vector<Time> bursts() const;
  Time total_burst() const noexcept;
  Time max_burst() const noexcept;

 private:
  std::vector<Job> jobs_;
};

struct ExecutionSlice {
  std::size_t job_index = 0;
  Time start = 0;
  Time duration = 0;

  Time end() const noexcept { return start + duration; }
  friend bool operator==(const ExecutionSlice&, const ExecutionSlice&) = default;
};

struct JobTimes {
  Time first_start = 0;
  Time completion = 0;

  friend bool operator==(const JobTimes&, const JobTimes&) = default;
};

struct ScheduleResult {
  std::vector<ExecutionSlice> log;
  std::vector<JobTimes> per_job;
  /// Coalesced slices that ended with work still left for their job.
  std::int64_t preemption_count = 0;
  std::string scheduler_id;
  /// End times of FairBatch cycles; empty for every other policy.
  std::vector<Time> iteration_boundaries;

  friend bool operator==(const ScheduleResult&, const ScheduleResult&) = default;
};

struct JobMetrics {
  Time waiting = 0;
  Time turnaround = 0;
  Time response = 0;

  friend bool operator==(const JobMetrics&, const JobMetrics&) = default;
};

/// Throws EmptyBatch or NonPositiveBurst.
void validate_batch(const Batch& batch);

/// Throws GapInLog, OverlapInLog, BurstMismatch(job) or TimesMismatch.
void check_log(const Batch& batch, const ScheduleResult& result);

/// Arrival is 0 for every job, so turnaround is completion and response is
/// the first start. Runs check_log first.
std::vector<JobMetrics> derive_job_metrics(const Batch& batch, const ScheduleResult& result);

/// Merges adjacent slices of the same job.
std::vector<ExecutionSlice> coalesce(std::span<const ExecutionSlice> log);

/// Appends contiguous slices starting at time 0 and assembles the
/// ScheduleResult. Every scheduler builds its log through this.
class LogBuilder {
 public:
  explicit LogBuilder(const Batch& batch);

  Time now() const noexcept { return now_; }
  void run(std::size_t job_index, Time duration);
  void mark_boundary() { boundaries_.push_back(now_); }

  ScheduleResult finish(std::string scheduler_id) &&;

 private:
  const Batch* batch_;
  Time now_ = 0;
  std::vector<ExecutionSlice> log_;
  std::vector<Time> boundaries_;
};

}  // namespace batchsim
