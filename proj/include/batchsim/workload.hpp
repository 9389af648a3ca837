#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "batchsim/core.hpp"

namespace batchsim {

enum class ClusterId {
  Normal,
  Exponential,
  Geometric,
  NegativeBinomial,
  Poisson,
  Uniform,
  Pareto,
  Gamma,
  Cauchy,
  Bimodal,
  Trimodal,
  Multimodal,
};

/// All twelve clusters; the first nine are the unimodal families.
std::span<const ClusterId> all_clusters();
std::string_view cluster_name(ClusterId id);
/// Throws UnknownCluster listing the valid ids.
ClusterId parse_cluster(std::string_view name);
bool is_multimodal(ClusterId id);

using DistributionParams = std::map<std::string, double>;

DistributionParams default_params(ClusterId id);
/// Alternative Cauchy parameterization centred inside the clip range.
DistributionParams shifted_cauchy_params();

struct ClusterSpec {
  ClusterId id = ClusterId::Normal;
  DistributionParams params;
  std::size_t cases = 100;
  std::size_t jobs_per_case = 100;
  std::uint64_t seed = 42;

  static ClusterSpec defaults(ClusterId id, std::uint64_t seed = 42);
  friend bool operator==(const ClusterSpec&, const ClusterSpec&) = default;
};

inline constexpr double kClipLow = 1.0;
inline constexpr double kClipHigh = 500.0;
inline constexpr Time kNormalizedTotal = 25000;
inline constexpr int kDatasetFormatVersion = 1;
inline constexpr std::string_view kGeneratorId = "xoshiro256**/splitmix64-substreams/std-distributions";

struct Dataset {
  ClusterSpec cluster;
  std::string generator{kGeneratorId};
  std::vector<std::vector<Time>> cases;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// xoshiro256** seeded through splitmix64. Satisfies UniformRandomBitGenerator.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;
  explicit Xoshiro256(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view bytes);
/// Seed of the substream for one (seed, cluster, case) triple.
std::uint64_t case_stream_seed(std::uint64_t seed, ClusterId id, std::size_t case_index);

/// Throws BadParams on unknown, missing, or out-of-range parameters.
void validate_spec(const ClusterSpec& spec);

std::vector<double> sample_raw(const ClusterSpec& spec, std::size_t case_index);
/// Clamps each value into [1, 500].
std::vector<double> clip(std::span<const double> values);
/// round(v / sum * 25000) half away from zero, floored at 1.
std::vector<Time> normalize(std::span<const double> values);
Dataset generate_dataset(const ClusterSpec& spec);

/// Throws IntegrityError if a case breaks the burst floor, the job count, or
/// the |sum - 25000| <= jobs_per_case slack.
void validate_dataset(const Dataset& dataset);

/// Canonical JSON: sorted keys, one case per line.
std::string serialize_dataset(const Dataset& dataset);
/// Throws SchemaError or IntegrityError.
Dataset parse_dataset(std::string_view text);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);
/// Flat export: case_id,job_index,burst.
std::string dataset_csv(const Dataset& dataset);

}  // namespace batchsim
