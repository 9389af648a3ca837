#include "batchsim/core.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "batchsim/rational.hpp"

namespace batchsim {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::EmptyBatch: return "EmptyBatch";
    case Errc::NonPositiveBurst: return "NonPositiveBurst";
    case Errc::GapInLog: return "GapInLog";
    case Errc::OverlapInLog: return "OverlapInLog";
    case Errc::BurstMismatch: return "BurstMismatch";
    case Errc::TimesMismatch: return "TimesMismatch";
    case Errc::DomainError: return "DomainError";
    case Errc::EmptySet: return "EmptySet";
    case Errc::NonPositiveBudget: return "NonPositiveBudget";
    case Errc::InconsistentChosenSet: return "InconsistentChosenSet";
    case Errc::UnknownCluster: return "UnknownCluster";
    case Errc::BadParams: return "BadParams";
    case Errc::IoError: return "IoError";
    case Errc::SchemaError: return "SchemaError";
    case Errc::IntegrityError: return "IntegrityError";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::UnknownScheduler: return "UnknownScheduler";
    case Errc::BadFlag: return "BadFlag";
    case Errc::MissingSummary: return "MissingSummary";
  }
  return "Unknown";
}

// --- Rational --------------------------------------------------------------

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error(Errc::DomainError, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  return Rational(a.num_ * (b.den_ / g) + b.num_ * (a.den_ / g), a.den_ / g * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return a + Rational(-b.num_, b.den_);
}

std::string Rational::to_fixed4() const {
  // Round half away from zero at the 4th decimal, in exact integer arithmetic.
  const bool negative = num_ < 0;
  const int128 scaled = static_cast<int128>(negative ? -num_ : num_) * 10000;
  int128 q = scaled / den_;
  if ((scaled % den_) * 2 >= den_) ++q;
  const auto whole = static_cast<long long>(q / 10000);
  const auto frac = static_cast<long long>(q % 10000);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%04lld", negative && q != 0 ? "-" : "", whole, frac);
  return buf;
}

// --- Batch -----------------------------------------------------------------

Batch::Batch(std::span<const Time> bursts) {
  jobs_.reserve(bursts.size());
  for (std::size_t i = 0; i < bursts.size(); ++i) jobs_.push_back(Job{i, bursts[i]});
}

Batch::Batch(std::initializer_list<Time> bursts)
    : Batch(std::span<const Time>(bursts.begin(), bursts.size())) {}

std::vector<Time> Batch::bursts() const {
  std::vector<Time> out;
  out.reserve(jobs_.size());
  for (const Job& j : jobs_) out.push_back(j.burst);
  return out;
}

Time Batch::total_burst() const noexcept {
  Time sum = 0;
  for (const Job& j : jobs_) sum += j.burst;
  return sum;
}

Time Batch::max_burst() const noexcept {
  Time best = 0;
  for (const Job& j : jobs_) best = std::max(best, j.burst);
  return best;
}

// --- validation --------------------------------------------------------------

void validate_batch(const Batch& batch) {
  if (batch.empty()) throw Error(Errc::EmptyBatch, "a batch needs at least one job");
  for (const Job& j : batch.jobs()) {
    if (j.burst < 1) {
      throw Error(Errc::NonPositiveBurst,
                  "job " + std::to_string(j.index) + " has burst " + std::to_string(j.burst));
    }
  }
}

void check_log(const Batch& batch, const ScheduleResult& result) {
  std::vector<Time> executed(batch.size(), 0);
  std::vector<JobTimes> observed(batch.size(), JobTimes{-1, -1});
  Time expected_start = 0;
  for (const ExecutionSlice& s : result.log) {
    if (s.start > expected_start) {
      throw Error(Errc::GapInLog, "slice starts at " + std::to_string(s.start) +
                                      " but previous ended at " + std::to_string(expected_start));
    }
    if (s.start < expected_start) {
      throw Error(Errc::OverlapInLog, "slice starts at " + std::to_string(s.start) +
                                          " before previous end " + std::to_string(expected_start));
    }
    if (s.job_index >= batch.size() || s.duration < 1) {
      throw Error(Errc::DomainError, "malformed slice at " + std::to_string(s.start));
    }
    executed[s.job_index] += s.duration;
    if (observed[s.job_index].first_start < 0) observed[s.job_index].first_start = s.start;
    observed[s.job_index].completion = s.end();
    expected_start = s.end();
  }
  for (const Job& j : batch.jobs()) {
    if (executed[j.index] != j.burst) {
      throw Error(Errc::BurstMismatch,
                  "job " + std::to_string(j.index) + " executed " +
                      std::to_string(executed[j.index]) + " of " + std::to_string(j.burst),
                  j.index);
    }
  }
  if (result.per_job != observed) {
    throw Error(Errc::TimesMismatch, "per-job first start/completion disagree with the log");
  }
}

std::vector<JobMetrics> derive_job_metrics(const Batch& batch, const ScheduleResult& result) {
  check_log(batch, result);
  std::vector<JobMetrics> out;
  out.reserve(batch.size());
  for (const Job& j : batch.jobs()) {
    const JobTimes& t = result.per_job[j.index];
    out.push_back(JobMetrics{t.completion - j.burst, t.completion, t.first_start});
  }
  return out;
}

std::vector<ExecutionSlice> coalesce(std::span<const ExecutionSlice> log) {
  std::vector<ExecutionSlice> out;
  for (const ExecutionSlice& s : log) {
    if (!out.empty() && out.back().job_index == s.job_index && out.back().end() == s.start) {
      out.back().duration += s.duration;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

// --- LogBuilder --------------------------------------------------------------

LogBuilder::LogBuilder(const Batch& batch) : batch_(&batch) {}

void LogBuilder::run(std::size_t job_index, Time duration) {
  if (duration < 1) throw std::logic_error("LogBuilder::run with non-positive duration");
  log_.push_back(ExecutionSlice{job_index, now_, duration});
  now_ += duration;
}

ScheduleResult LogBuilder::finish(std::string scheduler_id) && {
  ScheduleResult r;
  r.scheduler_id = std::move(scheduler_id);
  r.per_job.assign(batch_->size(), JobTimes{-1, -1});
  for (const ExecutionSlice& s : log_) {
    JobTimes& t = r.per_job[s.job_index];
    if (t.first_start < 0) t.first_start = s.start;
    t.completion = s.end();
  }
  std::vector<Time> remaining = batch_->bursts();
  for (const ExecutionSlice& s : coalesce(log_)) {
    remaining[s.job_index] -= s.duration;
    if (remaining[s.job_index] > 0) ++r.preemption_count;
  }
  r.log = std::move(log_);
  r.iteration_boundaries = std::move(boundaries_);
  return r;
}

}  // namespace batchsim
