#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "batchsim/analysis.hpp"
#include "batchsim/fairbatch.hpp"
#include "support/checks.hpp"

using namespace batchsim;

namespace {

using V = std::vector<Time>;
using O = std::vector<std::size_t>;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::DomainError;
}

FairBatchConfig config(SortOrder order, Variant variant) {
  FairBatchConfig c;
  c.sort_order = order;
  c.variant = variant;
  return c;
}

}  // namespace

TEST(FairnessRatio, Substitutions) {
  EXPECT_EQ(fairness_ratio(10, 10, 1, 1), Rational(1, 10));
  EXPECT_EQ(fairness_ratio(10, 4, 6, 2), Rational(3, 5));
  EXPECT_EQ(fairness_ratio(5, 5, 5, 1), Rational(1));
}

TEST(FairnessRatio, RejectsViolatedPreconditions) {
  EXPECT_EQ(code_of([] { fairness_ratio(0, 0, 1, 1); }), Errc::DomainError);
  EXPECT_EQ(code_of([] { fairness_ratio(5, 5, 1, 0); }), Errc::DomainError);
  EXPECT_EQ(code_of([] { fairness_ratio(5, 6, 1, 1); }), Errc::DomainError);
  EXPECT_EQ(code_of([] { fairness_ratio(5, -1, 1, 1); }), Errc::DomainError);
  EXPECT_EQ(code_of([] { fairness_ratio(5, 5, 0, 1); }), Errc::DomainError);
}

TEST(CycleQuantum, MeanMedianCeiling) {
  EXPECT_EQ(cycle_quantum(V{3, 5, 2}), 4);
  EXPECT_EQ(cycle_quantum(V{7}), 7);
  EXPECT_EQ(cycle_quantum(V{1, 5}), 3);
  EXPECT_EQ(cycle_quantum(V{1, 2}), 2);
  EXPECT_EQ(cycle_quantum(V{1, 1, 1, 10}), 3);  // mean 13/4, median 1 -> ceil(17/8)
  EXPECT_EQ(code_of([] { cycle_quantum(V{}); }), Errc::EmptySet);
  EXPECT_EQ(code_of([] { cycle_quantum(V{3, 0}); }), Errc::DomainError);
}

TEST(FairBatch, HandTrace) {
  const Batch b{3, 5, 2};
  const FairBatchRun run = run_fairbatch(b);
  ASSERT_EQ(run.cycles.size(), 4u);
  const std::vector<Time> tq{4, 3, 2, 1};
  const std::vector<O> chosen{{2, 0}, {1}, {0, 1}, {1}};
  const std::vector<V> spans{{2, 2}, {3}, {1, 1}, {1}};
  for (std::size_t c = 0; c < 4; ++c) {
    EXPECT_EQ(run.cycles[c].quantum, tq[c]) << c;
    EXPECT_EQ(run.cycles[c].chosen, chosen[c]) << c;
    EXPECT_EQ(run.cycles[c].executed_spans, spans[c]) << c;
  }
  EXPECT_EQ(run.result.iteration_boundaries, (V{4, 7, 9, 10}));
  const std::vector<ExecutionSlice> log{{2, 0, 2}, {0, 2, 2}, {1, 4, 3}, {0, 7, 1}, {1, 8, 1}, {1, 9, 1}};
  EXPECT_EQ(run.result.log, log);
  const auto jm = derive_job_metrics(b, run.result);
  EXPECT_EQ(jm[0], (JobMetrics{5, 8, 2}));
  EXPECT_EQ(jm[1], (JobMetrics{5, 10, 4}));
  EXPECT_EQ(jm[2], (JobMetrics{0, 2, 0}));
  const auto m = batch_metrics(b, run.result);
  EXPECT_EQ(m.avg_waiting, Rational(10, 3));
  EXPECT_EQ(m.avg_turnaround, Rational(20, 3));
  EXPECT_EQ(m.avg_response, Rational(2));
  EXPECT_TRUE(testkit::check_fairbatch_run(b, run).empty());
}

TEST(FairBatch, LoneJobSingleCycle) {
  for (Variant v : {Variant::Naive, Variant::Optimized}) {
    const FairBatchRun run = run_fairbatch_variant(Batch{7}, config(SortOrder::Descending, v));
    ASSERT_EQ(run.cycles.size(), 1u);
    EXPECT_EQ(run.cycles[0].quantum, 7);
    EXPECT_EQ(run.result.log, (std::vector<ExecutionSlice>{{0, 0, 7}}));
  }
}

TEST(FairBatch, RejectsEmptyBatch) {
  EXPECT_EQ(code_of([] { run_fairbatch(Batch{}); }), Errc::EmptyBatch);
  EXPECT_EQ(code_of([] { run_fairbatch_opt(Batch{}); }), Errc::EmptyBatch);
}

TEST(FairBatch, OptimizedMatchesHandTrace) {
  const Batch b{3, 5, 2};
  const auto naive = run_fairbatch(b);
  const auto opt = run_fairbatch_opt(b);
  EXPECT_TRUE(testkit::same_schedule(naive.result, opt.result));
  EXPECT_EQ(opt.result.scheduler_id, "fairbatch-opt");
}

TEST(FairBatch, AscendingOrderDispatchesLongestFirst) {
  const Batch b{3, 5, 2};
  const auto run = run_fairbatch(b, config(SortOrder::Ascending, Variant::Naive));
  EXPECT_EQ(run.cycles[0].chosen.front(), 1u);
}

// --- properties -------------------------------------------------------------

class FairBatchProperty : public ::testing::TestWithParam<std::tuple<SortOrder, Variant>> {};

TEST_P(FairBatchProperty, LogLevelInvariants) {
  const auto [order, variant] = GetParam();
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const Time max_burst = 1 + static_cast<Time>(rng() % (trial % 3 == 0 ? 6 : 120));
    const Batch b(testkit::random_bursts(rng, 1 + rng() % 40, max_burst));
    const FairBatchRun run = run_fairbatch_variant(b, config(order, variant));
    ASSERT_NO_THROW(check_log(b, run.result));
    const std::string why = testkit::check_fairbatch_run(b, run);
    ASSERT_TRUE(why.empty()) << why << " (trial " << trial << ")";
    // Remark 1: a cycle with a single live job completes it.
    for (std::size_t c = 0; c < run.cycles.size(); ++c) {
      const std::size_t live_before = c == 0 ? b.size() : run.cycles[c - 1].survivors_after;
      if (live_before == 1) EXPECT_EQ(run.cycles[c].survivors_after, 0u);
      EXPECT_GE(run.cycles[c].quantum, 1);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Orders, FairBatchProperty,
                         ::testing::Combine(::testing::Values(SortOrder::Descending, SortOrder::Ascending),
                                            ::testing::Values(Variant::Naive, Variant::Optimized)),
                         [](const auto& info) {
                           return std::string(std::get<0>(info.param) == SortOrder::Descending ? "Desc" : "Asc") +
                                  (std::get<1>(info.param) == Variant::Naive ? "Naive" : "Optimized");
                         });

TEST(FairBatchEquivalence, NaiveAndOptimizedAgree) {
  for (SortOrder order : {SortOrder::Descending, SortOrder::Ascending}) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 300; ++trial) {
      const Time max_burst = 1 + static_cast<Time>(rng() % (trial % 2 ? 4 : 300));
      const Batch b(testkit::random_bursts(rng, 1 + rng() % 60, max_burst));
      const auto naive = run_fairbatch(b, config(order, Variant::Naive));
      const auto opt = run_fairbatch_opt(b, config(order, Variant::Optimized));
      ASSERT_TRUE(testkit::same_schedule(naive.result, opt.result)) << "trial " << trial;
      ASSERT_EQ(naive.cycles.size(), opt.cycles.size());
      for (std::size_t c = 0; c < naive.cycles.size(); ++c) {
        EXPECT_EQ(naive.cycles[c].chosen, opt.cycles[c].chosen);
      }
    }
  }
}

TEST(FairBatchProperty, FreshBatchStartsWithShortestJob) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const Batch b(testkit::random_bursts(rng, 1 + rng() % 30, 50));
    const auto run = run_fairbatch(b);
    const auto bursts = b.bursts();
    const auto shortest = std::min_element(bursts.begin(), bursts.end()) - bursts.begin();
    EXPECT_EQ(run.cycles[0].chosen.front(), static_cast<std::size_t>(shortest));
  }
}

TEST(FairBatchProperty, Deterministic) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const Batch b(testkit::random_bursts(rng, 1 + rng() % 50, 300));
    EXPECT_EQ(run_fairbatch_opt(b).result, run_fairbatch_opt(b).result);
  }
}
