#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace batchsim {

enum class Errc {
  EmptyBatch,
  NonPositiveBurst,
  GapInLog,
  OverlapInLog,
  BurstMismatch,
  TimesMismatch,
  DomainError,
  EmptySet,
  NonPositiveBudget,
  InconsistentChosenSet,
  UnknownCluster,
  BadParams,
  IoError,
  SchemaError,
  IntegrityError,
  EmptyInput,
  UnknownScheduler,
  BadFlag,
  MissingSummary,
};

std::string_view errc_name(Errc code);

/// Every failure in the library is reported as an Error carrying a code.
/// BurstMismatch additionally names the offending job.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<std::size_t> job = std::nullopt)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code), job_(job) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> job() const noexcept { return job_; }

 private:
  Errc code_;
  std::optional<std::size_t> job_;
};

}  // namespace batchsim
