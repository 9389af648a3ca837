#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>

#include "batchsim/workload.hpp"

using namespace batchsim;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::DomainError;
}

ClusterSpec small(ClusterId id, std::size_t cases = 5, std::size_t jobs = 40) {
  ClusterSpec s = ClusterSpec::defaults(id, 42);
  s.cases = cases;
  s.jobs_per_case = jobs;
  return s;
}

}  // namespace

TEST(Clusters, NamesRoundTrip) {
  ASSERT_EQ(all_clusters().size(), 12u);
  for (ClusterId id : all_clusters()) EXPECT_EQ(parse_cluster(cluster_name(id)), id);
  EXPECT_EQ(code_of([] { parse_cluster("nosuch"); }), Errc::UnknownCluster);
  try {
    parse_cluster("nosuch");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("negative_binomial"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("multimodal"), std::string::npos);
  }
  EXPECT_FALSE(is_multimodal(ClusterId::Cauchy));
  EXPECT_TRUE(is_multimodal(ClusterId::Trimodal));
}

TEST(Prng, KnownSplitmixAndStreamsDiffer) {
  // Reference value of splitmix64 for state 0 (first output).
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_NE(case_stream_seed(42, ClusterId::Normal, 0), case_stream_seed(42, ClusterId::Normal, 1));
  EXPECT_NE(case_stream_seed(42, ClusterId::Normal, 0), case_stream_seed(42, ClusterId::Poisson, 0));
  EXPECT_NE(case_stream_seed(42, ClusterId::Normal, 0), case_stream_seed(43, ClusterId::Normal, 0));
}

TEST(SampleRaw, Deterministic) {
  const auto s = small(ClusterId::Normal);
  EXPECT_EQ(sample_raw(s, 0), sample_raw(s, 0));
  EXPECT_NE(sample_raw(s, 0), sample_raw(s, 1));
}

TEST(SampleRaw, UniformSupport) {
  const auto v = sample_raw(small(ClusterId::Uniform, 1, 5000), 0);
  for (double x : v) {
    EXPECT_GE(x, 1.0);
    EXPECT_LE(x, 500.0);
  }
}

TEST(SampleRaw, BimodalHasTwoModes) {
  const auto v = sample_raw(small(ClusterId::Bimodal, 1, 20000), 0);
  auto count_in = [&](double lo, double hi) {
    return std::count_if(v.begin(), v.end(), [&](double x) { return x >= lo && x < hi; });
  };
  // Mixture mass within one sd of each centre is about 0.34; the trough at 250 is near zero.
  EXPECT_GT(count_in(90, 150), 5500);
  EXPECT_GT(count_in(350, 410), 5500);
  EXPECT_LT(count_in(220, 280), 200);
}

TEST(SampleRaw, RejectsBadParams) {
  ClusterSpec s = small(ClusterId::Normal);
  s.params["sd"] = -1;
  EXPECT_EQ(code_of([&] { sample_raw(s, 0); }), Errc::BadParams);
  s = small(ClusterId::Geometric);
  s.params["p"] = 1.5;
  EXPECT_EQ(code_of([&] { validate_spec(s); }), Errc::BadParams);
  s = small(ClusterId::Poisson);
  s.params["bogus"] = 1;
  EXPECT_EQ(code_of([&] { validate_spec(s); }), Errc::BadParams);
}

TEST(Clip, Bounds) {
  const std::vector<double> in{0.4, 730, 250, -3};
  EXPECT_EQ(clip(in), (std::vector<double>{1, 500, 250, 1}));
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize(std::vector<double>{100, 300, 100}), (std::vector<Time>{5000, 15000, 5000}));
  EXPECT_EQ(normalize(std::vector<double>{1, 1}), (std::vector<Time>{12500, 12500}));
  // One tiny value among huge ones must still floor at 1.
  std::vector<double> v(100, 500.0);
  v[0] = 1.0;
  const auto n = normalize(v);
  EXPECT_EQ(n[0], 1);
}

TEST(GenerateDataset, PipelinePostconditions) {
  for (ClusterId id : all_clusters()) {
    const Dataset d = generate_dataset(ClusterSpec::defaults(id, 42));
    ASSERT_EQ(d.cases.size(), 100u);
    for (const auto& c : d.cases) {
      ASSERT_EQ(c.size(), 100u);
      EXPECT_GE(*std::min_element(c.begin(), c.end()), 1);
      const Time sum = std::accumulate(c.begin(), c.end(), Time{0});
      EXPECT_LE(std::abs(sum - kNormalizedTotal), 100) << cluster_name(id);
    }
  }
}

TEST(GenerateDataset, ByteIdenticalRegeneration) {
  const auto s = small(ClusterId::Gamma, 10, 100);
  EXPECT_EQ(serialize_dataset(generate_dataset(s)), serialize_dataset(generate_dataset(s)));
}

TEST(GenerateDataset, StandardCauchyPilesUpAtTheClipFloor) {
  const Dataset d = generate_dataset(ClusterSpec::defaults(ClusterId::Cauchy, 42));
  std::size_t at_floor = 0, total = 0;
  for (const auto& c : d.cases) {
    // Every draw clipped to 1 maps to the same, smallest normalized value.
    const Time lo = *std::min_element(c.begin(), c.end());
    at_floor += static_cast<std::size_t>(std::count(c.begin(), c.end(), lo));
    total += c.size();
  }
  EXPECT_GT(static_cast<double>(at_floor) / static_cast<double>(total), 0.5);
}

TEST(Persistence, RoundTrip) {
  const Dataset d = generate_dataset(small(ClusterId::Pareto));
  EXPECT_EQ(parse_dataset(serialize_dataset(d)), d);
  const auto path = std::filesystem::temp_directory_path() / "batchsim_roundtrip.json";
  save_dataset(d, path);
  EXPECT_EQ(load_dataset(path), d);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([] { load_dataset("/nonexistent/dir/file.json"); }), Errc::IoError);
}

TEST(Persistence, SchemaAndIntegrityErrors) {
  const Dataset d = generate_dataset(small(ClusterId::Normal, 2, 10));
  std::string text = serialize_dataset(d);
  std::string no_cluster = text;
  no_cluster.replace(no_cluster.find("\"cluster\""), 9, "\"klaster\"");
  EXPECT_EQ(code_of([&] { parse_dataset(no_cluster); }), Errc::SchemaError);
  std::string bad_version = text;
  bad_version.replace(bad_version.find("\"format_version\": 1"), 19, "\"format_version\": 9");
  EXPECT_EQ(code_of([&] { parse_dataset(bad_version); }), Errc::SchemaError);
  EXPECT_EQ(code_of([] { parse_dataset("not json"); }), Errc::SchemaError);
  Dataset tampered = d;
  tampered.cases[1][3] = 0;
  EXPECT_EQ(code_of([&] { parse_dataset(serialize_dataset(tampered)); }), Errc::IntegrityError);
  tampered = d;
  tampered.cases[0][0] += 500;
  EXPECT_EQ(code_of([&] { parse_dataset(serialize_dataset(tampered)); }), Errc::IntegrityError);
}

TEST(Persistence, CsvExport) {
  const Dataset d = generate_dataset(small(ClusterId::Uniform, 2, 3));
  const std::string csv = dataset_csv(d);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "case_id,job_index,burst");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}
