#include "batchsim/workload.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace batchsim {

namespace {

constexpr std::array<ClusterId, 12> kClusters = {
    ClusterId::Normal,   ClusterId::Exponential, ClusterId::Geometric, ClusterId::NegativeBinomial,
    ClusterId::Poisson,  ClusterId::Uniform,     ClusterId::Pareto,    ClusterId::Gamma,
    ClusterId::Cauchy,   ClusterId::Bimodal,     ClusterId::Trimodal,  ClusterId::Multimodal,
};

std::string valid_cluster_list() {
  std::string out;
  for (ClusterId id : kClusters) {
    if (!out.empty()) out += ", ";
    out += cluster_name(id);
  }
  return out;
}

DistributionParams mixture(std::initializer_list<std::pair<double, double>> components) {
  DistributionParams p;
  int i = 0;
  for (auto [mean, sd] : components) {
    p["mean" + std::to_string(i)] = mean;
    p["sd" + std::to_string(i)] = sd;
    ++i;
  }
  return p;
}

struct Component {
  double mean;
  double sd;
};

std::vector<Component> mixture_components(const DistributionParams& p) {
  std::vector<Component> out;
  for (std::size_t i = 0;; ++i) {
    auto m = p.find("mean" + std::to_string(i));
    auto s = p.find("sd" + std::to_string(i));
    if (m == p.end() && s == p.end()) break;
    if (m == p.end() || s == p.end()) {
      throw Error(Errc::BadParams, "mixture component " + std::to_string(i) + " is incomplete");
    }
    out.push_back({m->second, s->second});
  }
  return out;
}

double param(const DistributionParams& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw Error(Errc::BadParams, "missing parameter '" + key + "'");
  return it->second;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::BadParams, what);
}

void expect_keys(const DistributionParams& p, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : p) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* want) { return k == want; }) ==
        keys.end()) {
      throw Error(Errc::BadParams, "unexpected parameter '" + k + "'");
    }
    require(std::isfinite(v), "parameter '" + k + "' is not finite");
  }
  for (const char* k : keys) param(p, k);
}

}  // namespace

std::span<const ClusterId> all_clusters() { return kClusters; }

std::string_view cluster_name(ClusterId id) {
  switch (id) {
    case ClusterId::Normal: return "normal";
    case ClusterId::Exponential: return "exponential";
    case ClusterId::Geometric: return "geometric";
    case ClusterId::NegativeBinomial: return "negative_binomial";
    case ClusterId::Poisson: return "poisson";
    case ClusterId::Uniform: return "uniform";
    case ClusterId::Pareto: return "pareto";
    case ClusterId::Gamma: return "gamma";
    case ClusterId::Cauchy: return "cauchy";
    case ClusterId::Bimodal: return "bimodal";
    case ClusterId::Trimodal: return "trimodal";
    case ClusterId::Multimodal: return "multimodal";
  }
  return "?";
}

ClusterId parse_cluster(std::string_view name) {
  for (ClusterId id : kClusters) {
    if (cluster_name(id) == name) return id;
  }
  throw Error(Errc::UnknownCluster,
              "unknown cluster '" + std::string(name) + "'; valid ids: " + valid_cluster_list());
}

bool is_multimodal(ClusterId id) {
  return id == ClusterId::Bimodal || id == ClusterId::Trimodal || id == ClusterId::Multimodal;
}

DistributionParams default_params(ClusterId id) {
  switch (id) {
    case ClusterId::Normal: return {{"mean", 250.0}, {"sd", 60.0}};
    case ClusterId::Exponential: return {{"scale", 180.0}};
    case ClusterId::Geometric: return {{"p", 0.01}};
    case ClusterId::NegativeBinomial: return {{"r", 5.0}, {"p", 0.03}};
    case ClusterId::Poisson: return {{"lambda", 220.0}};
    case ClusterId::Uniform: return {{"low", 1.0}, {"high", 500.0}};
    case ClusterId::Pareto: return {{"alpha", 1.5}, {"xm", 20.0}};
    case ClusterId::Gamma: return {{"shape", 2.0}, {"scale", 90.0}};
    case ClusterId::Cauchy: return {{"loc", 0.0}, {"scale", 1.0}};
    case ClusterId::Bimodal: return mixture({{120, 30}, {380, 30}});
    case ClusterId::Trimodal: return mixture({{80, 20}, {250, 20}, {420, 20}});
    case ClusterId::Multimodal: return mixture({{60, 15}, {180, 15}, {300, 15}, {440, 15}});
  }
  return {};
}

DistributionParams shifted_cauchy_params() { return {{"loc", 250.0}, {"scale", 50.0}}; }

ClusterSpec ClusterSpec::defaults(ClusterId id, std::uint64_t seed) {
  ClusterSpec spec;
  spec.id = id;
  spec.params = default_params(id);
  spec.seed = seed;
  return spec;
}

// --- PRNG ------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  for (auto& word : s_) {
    seed = splitmix64(seed);
    word = seed;
  }
}

Xoshiro256::result_type Xoshiro256::operator()() {
  auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t case_stream_seed(std::uint64_t seed, ClusterId id, std::size_t case_index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ fnv1a64(cluster_name(id)));
  return splitmix64(h ^ static_cast<std::uint64_t>(case_index));
}

// --- sampling ----------------------------------------------------------------

void validate_spec(const ClusterSpec& spec) {
  require(spec.cases >= 1, "cases must be >= 1");
  require(spec.jobs_per_case >= 1, "jobs_per_case must be >= 1");
  const DistributionParams& p = spec.params;
  switch (spec.id) {
    case ClusterId::Normal:
      expect_keys(p, {"mean", "sd"});
      require(param(p, "sd") > 0, "normal sd must be > 0");
      break;
    case ClusterId::Exponential:
      expect_keys(p, {"scale"});
      require(param(p, "scale") > 0, "exponential scale must be > 0");
      break;
    case ClusterId::Geometric:
      expect_keys(p, {"p"});
      require(param(p, "p") > 0 && param(p, "p") <= 1, "geometric p must be in (0, 1]");
      break;
    case ClusterId::NegativeBinomial: {
      expect_keys(p, {"r", "p"});
      const double r = param(p, "r");
      require(r >= 1 && r == std::floor(r), "negative_binomial r must be a positive integer");
      require(param(p, "p") > 0 && param(p, "p") <= 1, "negative_binomial p must be in (0, 1]");
      break;
    }
    case ClusterId::Poisson:
      expect_keys(p, {"lambda"});
      require(param(p, "lambda") > 0, "poisson lambda must be > 0");
      break;
    case ClusterId::Uniform:
      expect_keys(p, {"low", "high"});
      require(param(p, "low") < param(p, "high"), "uniform needs low < high");
      break;
    case ClusterId::Pareto:
      expect_keys(p, {"alpha", "xm"});
      require(param(p, "alpha") > 0 && param(p, "xm") > 0, "pareto alpha and xm must be > 0");
      break;
    case ClusterId::Gamma:
      expect_keys(p, {"shape", "scale"});
      require(param(p, "shape") > 0 && param(p, "scale") > 0, "gamma shape and scale must be > 0");
      break;
    case ClusterId::Cauchy:
      expect_keys(p, {"loc", "scale"});
      require(param(p, "scale") > 0, "cauchy scale must be > 0");
      break;
    case ClusterId::Bimodal:
    case ClusterId::Trimodal:
    case ClusterId::Multimodal: {
      const auto comps = mixture_components(p);
      require(!comps.empty(), "mixture needs at least one component");
      require(p.size() == 2 * comps.size(), "mixture has unexpected parameters");
      for (const Component& c : comps) {
        require(std::isfinite(c.mean) && c.sd > 0, "mixture components need sd > 0");
      }
      break;
    }
  }
}

std::vector<double> sample_raw(const ClusterSpec& spec, std::size_t case_index) {
  validate_spec(spec);
  Xoshiro256 rng(case_stream_seed(spec.seed, spec.id, case_index));
  const DistributionParams& p = spec.params;
  std::vector<double> out(spec.jobs_per_case);

  auto fill = [&](auto&& draw) {
    for (double& v : out) v = static_cast<double>(draw());
  };

  switch (spec.id) {
    case ClusterId::Normal: {
      std::normal_distribution<double> d(param(p, "mean"), param(p, "sd"));
      fill([&] { return d(rng); });
      break;
    }
    case ClusterId::Exponential: {
      std::exponential_distribution<double> d(1.0 / param(p, "scale"));
      fill([&] { return d(rng); });
      break;
    }
    case ClusterId::Geometric: {
      // Trials up to and including the first success (support 1, 2, ...).
      std::geometric_distribution<long> d(param(p, "p"));
      fill([&] { return d(rng) + 1; });
      break;
    }
    case ClusterId::NegativeBinomial: {
      std::negative_binomial_distribution<long> d(static_cast<long>(param(p, "r")), param(p, "p"));
      fill([&] { return d(rng); });
      break;
    }
    case ClusterId::Poisson: {
      std::poisson_distribution<long> d(param(p, "lambda"));
      fill([&] { return d(rng); });
      break;
    }
    case ClusterId::Uniform: {
      std::uniform_real_distribution<double> d(param(p, "low"), param(p, "high"));
      fill([&] { return d(rng); });
      break;
    }
    case ClusterId::Pareto: {
      // Inverse CDF: xm * U^(-1/alpha), U in (0, 1].
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double alpha = param(p, "alpha");
      const double xm = param(p, "xm");
      fill([&] { return xm * std::pow(1.0 - u(rng), -1.0 / alpha); });
      break;
    }
    case ClusterId::Gamma: {
      std::gamma_distribution<double> d(param(p, "shape"), param(p, "scale"));
      fill([&] { return d(rng); });
      break;
    }
    case ClusterId::Cauchy: {
      std::cauchy_distribution<double> d(param(p, "loc"), param(p, "scale"));
      fill([&] { return d(rng); });
      break;
    }
    case ClusterId::Bimodal:
    case ClusterId::Trimodal:
    case ClusterId::Multimodal: {
      const auto comps = mixture_components(p);
      std::uniform_int_distribution<std::size_t> pick(0, comps.size() - 1);
      std::vector<std::normal_distribution<double>> normals;
      for (const Component& c : comps) normals.emplace_back(c.mean, c.sd);
      fill([&] { return normals[pick(rng)](rng); });
      break;
    }
  }
  return out;
}

std::vector<double> clip(std::span<const double> values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(std::clamp(v, kClipLow, kClipHigh));
  return out;
}

std::vector<Time> normalize(std::span<const double> values) {
  double sum = 0;
  for (double v : values) sum += v;
  std::vector<Time> out;
  out.reserve(values.size());
  for (double v : values) {
    const double scaled = std::round(v * static_cast<double>(kNormalizedTotal) / sum);
    out.push_back(std::max<Time>(1, static_cast<Time>(scaled)));
  }
  return out;
}

Dataset generate_dataset(const ClusterSpec& spec) {
  validate_spec(spec);
  Dataset d;
  d.cluster = spec;
  d.cases.reserve(spec.cases);
  for (std::size_t i = 0; i < spec.cases; ++i) {
    const std::vector<double> raw = sample_raw(spec, i);
    d.cases.push_back(normalize(clip(raw)));
  }
  return d;
}

void validate_dataset(const Dataset& dataset) {
  const std::size_t jobs = dataset.cluster.jobs_per_case;
  if (dataset.cases.empty()) throw Error(Errc::IntegrityError, "dataset has no cases");
  for (std::size_t c = 0; c < dataset.cases.size(); ++c) {
    const auto& bursts = dataset.cases[c];
    const std::string where = "case " + std::to_string(c);
    if (bursts.size() != jobs) {
      throw Error(Errc::IntegrityError, where + " has " + std::to_string(bursts.size()) +
                                            " jobs, expected " + std::to_string(jobs));
    }
    Time sum = 0;
    for (Time b : bursts) {
      if (b < 1) throw Error(Errc::IntegrityError, where + " has a burst below 1");
      sum += b;
    }
    if (std::abs(sum - kNormalizedTotal) > static_cast<Time>(jobs)) {
      throw Error(Errc::IntegrityError,
                  where + " sums to " + std::to_string(sum) + ", outside the normalization slack");
    }
  }
}

// --- persistence -------------------------------------------------------------

std::string serialize_dataset(const Dataset& dataset) {
  using nlohmann::json;
  std::ostringstream os;
  os << "{\n  \"cases\": [";
  for (std::size_t c = 0; c < dataset.cases.size(); ++c) {
    os << (c ? ",\n    " : "\n    ") << json(dataset.cases[c]).dump();
  }
  os << "\n  ],\n";
  os << "  \"cluster\": " << json(std::string(cluster_name(dataset.cluster.id))).dump() << ",\n";
  os << "  \"format_version\": " << kDatasetFormatVersion << ",\n";
  os << "  \"generator\": " << json(dataset.generator).dump() << ",\n";
  os << "  \"jobs_per_case\": " << dataset.cluster.jobs_per_case << ",\n";
  os << "  \"params\": " << json(dataset.cluster.params).dump() << ",\n";
  os << "  \"seed\": " << dataset.cluster.seed << "\n}\n";
  return os.str();
}

Dataset parse_dataset(std::string_view text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::SchemaError, std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(Errc::SchemaError, "dataset must be a JSON object");
  for (const char* key :
       {"cases", "cluster", "format_version", "generator", "jobs_per_case", "params", "seed"}) {
    if (!doc.contains(key)) throw Error(Errc::SchemaError, std::string("missing field '") + key + "'");
  }
  if (!doc["format_version"].is_number_integer() ||
      doc["format_version"].get<int>() != kDatasetFormatVersion) {
    throw Error(Errc::SchemaError, "unsupported format_version");
  }

  Dataset d;
  try {
    d.cluster.id = parse_cluster(doc["cluster"].get<std::string>());
    d.generator = doc["generator"].get<std::string>();
    d.cluster.jobs_per_case = doc["jobs_per_case"].get<std::size_t>();
    d.cluster.seed = doc["seed"].get<std::uint64_t>();
    d.cluster.params = doc["params"].get<DistributionParams>();
    d.cases = doc["cases"].get<std::vector<std::vector<Time>>>();
  } catch (const json::exception& e) {
    throw Error(Errc::SchemaError, std::string("field has the wrong type: ") + e.what());
  } catch (const Error& e) {
    throw Error(Errc::SchemaError, e.what());
  }
  d.cluster.cases = d.cases.size();
  validate_dataset(d);
  return d;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot open " + path.string() + " for writing");
  out << serialize_dataset(dataset);
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

std::string dataset_csv(const Dataset& dataset) {
  std::ostringstream os;
  os << "case_id,job_index,burst\n";
  for (std::size_t c = 0; c < dataset.cases.size(); ++c) {
    for (std::size_t j = 0; j < dataset.cases[c].size(); ++j) {
      os << c << ',' << j << ',' << dataset.cases[c][j] << '\n';
    }
  }
  return os.str();
}

}  // namespace batchsim
