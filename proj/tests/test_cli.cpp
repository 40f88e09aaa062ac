#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "mcc/cli.hpp"

using namespace mcc;

namespace {

// Rates p_L = A (x / x_th)^((d+1)/2) per round, turned into exact failure counts.
std::vector<ThresholdRecord> synthetic(double x_th, const std::vector<double>& xs) {
  std::vector<ThresholdRecord> recs;
  for (int d : {5, 9, 13})
    for (double x : xs) {
      double rate = 0.03 * std::pow(x / x_th, (d + 1) / 2.0);
      ThresholdRecord r{};
      r.d = d;
      r.pp_rate = x;
      r.epsilon = x / 5;
      r.rounds = d;
      r.shots = 100000000;
      r.failures = std::lround(rate * r.shots * d);
      r.rate_per_round = double(r.failures) / (double(r.shots) * d);
      recs.push_back(r);
    }
  return recs;
}

}  // namespace

TEST(Wilson, KnownValues) {
  Interval a = wilson_interval(0, 100);
  EXPECT_EQ(a.low, 0.0);
  EXPECT_NEAR(a.high, 0.0370, 1e-4);
  Interval b = wilson_interval(50, 100);
  EXPECT_NEAR(b.low, 0.4038, 1e-4);
  EXPECT_NEAR(b.high, 0.5962, 1e-4);
  Interval c = wilson_interval(100, 100);
  EXPECT_NEAR(c.low, 0.9630, 1e-4);
  EXPECT_EQ(c.high, 1.0);
}

TEST(Wilson, ContainsPointEstimate) {
  for (long n : {10L, 1000L, 100000L})
    for (long k = 0; k <= n; k += std::max(1L, n / 17)) {
      Interval w = wilson_interval(k, n);
      double p = double(k) / n;
      EXPECT_LE(w.low, p + 1e-15);
      EXPECT_GE(w.high, p - 1e-15);
    }
}

TEST(Config, ParsesAndRejects) {
  SweepConfig c = load_sweep_config(R"({"d_list": [5, 9], "eps_list": [0.001], "shots": 10,
                                        "rounds": "d", "seed": 4, "weighting": "unit"})");
  EXPECT_EQ(c.d_list, (std::vector<int>{5, 9}));
  EXPECT_EQ(c.rounds_for(9), 9);
  EXPECT_EQ(c.seed, 4u);
  EXPECT_EQ(c.weighting, Weighting::unit);
  EXPECT_EQ(load_sweep_config(R"({"rounds": 3})").rounds_for(9), 3);
  EXPECT_THROW(load_sweep_config(R"({"bogus": 1})"), std::invalid_argument);
  EXPECT_THROW(load_sweep_config(R"({"rounds": "x"})"), std::invalid_argument);
  EXPECT_THROW(load_sweep_config(R"({"weighting": "x"})"), std::invalid_argument);
  SweepConfig bad;
  bad.d_list = {7};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad.d_list = {5};
  bad.eps_list = {0.05};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad.eps_list = {0.001};
  bad.shots = 0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Csv, RoundTripAndHeader) {
  std::vector<ThresholdRecord> recs = synthetic(0.008, {0.004, 0.008});
  for (auto& r : recs) {
    Interval w = wilson_interval(r.failures, r.shots);
    r.ci_low = w.low / r.rounds;
    r.ci_high = w.high / r.rounds;
    r.seed = 77;
  }
  std::stringstream ss;
  write_csv(ss, recs);
  std::string first;
  std::getline(std::stringstream(ss.str()), first);
  EXPECT_EQ(first, "d,epsilon,pp_rate,rounds,shots,failures,rate_per_round,ci_low,ci_high,seed");
  auto back = read_csv(ss);
  ASSERT_EQ(back.size(), recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(back[i].d, recs[i].d);
    EXPECT_EQ(back[i].failures, recs[i].failures);
    EXPECT_DOUBLE_EQ(back[i].pp_rate, recs[i].pp_rate);
    EXPECT_DOUBLE_EQ(back[i].rate_per_round, recs[i].rate_per_round);
    EXPECT_EQ(back[i].seed, 77u);
  }
  std::stringstream wrong("d,eps\n5,0.1\n");
  EXPECT_THROW(read_csv(wrong), std::exception);
}

TEST(Threshold, RecoversSyntheticCrossing) {
  auto est = estimate_threshold(synthetic(0.008, {0.004, 0.006, 0.008, 0.010, 0.012}));
  ASSERT_TRUE(est.found);
  EXPECT_NEAR(est.x, 0.008, 3 * est.sigma + 1e-5);
  ASSERT_EQ(est.crossings.size(), 2u);
  for (auto& c : est.crossings) {
    EXPECT_TRUE(c.found);
    EXPECT_NEAR(c.x, 0.008, 1e-4);
  }
  EXPECT_EQ(est.fits.size(), 3u);
  EXPECT_NEAR(est.fits[0].b, 3.0, 0.01);
}

TEST(Threshold, NoCrossingBelowThreshold) {
  auto est = estimate_threshold(synthetic(0.02, {0.004, 0.006, 0.008}));
  EXPECT_FALSE(est.found);
  for (auto& c : est.crossings) EXPECT_FALSE(c.found);
}

TEST(Threshold, PerRoundConversion) {
  EXPECT_NEAR(per_round_from_shot(0.01, 1), 0.01, 1e-15);
  // Composing R rounds at rate q gives back the shot rate.
  double q = 0.003;
  int R = 9;
  double P = (1 - std::pow(1 - 2 * q, R)) / 2;
  EXPECT_NEAR(per_round_from_shot(P, R), q, 1e-12);
  EXPECT_EQ(per_round_from_shot(0.6, 5), 0.5);
}

TEST(Sweep, DeterministicAndWorkerIndependent) {
  SweepConfig c;
  c.d_list = {5};
  c.eps_list = {0.0, 0.002};
  c.shots = 600;
  c.seed = 9;
  c.workers = 1;
  auto a = run_threshold(c);
  c.workers = 3;
  auto b = run_threshold(c);
  ASSERT_EQ(a.size(), 2u);
  std::stringstream sa, sb;
  write_csv(sa, a);
  write_csv(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a[0].failures, 0);
  EXPECT_GT(a[1].failures, 0);
  for (auto& r : a) {
    EXPECT_LE(r.ci_low, r.rate_per_round);
    EXPECT_GE(r.ci_high, r.rate_per_round);
    EXPECT_DOUBLE_EQ(r.pp_rate, 5 * r.epsilon);
    EXPECT_DOUBLE_EQ(r.rate_per_round, double(r.failures) / (double(r.shots) * r.rounds));
  }
}

TEST(Sweep, StableOrdering) {
  SweepConfig c;
  c.d_list = {9, 5};
  c.eps_list = {0.002, 0.001};
  c.shots = 20;
  auto recs = run_threshold(c);
  ASSERT_EQ(recs.size(), 4u);
  EXPECT_EQ(recs[0].d, 5);
  EXPECT_EQ(recs[0].epsilon, 0.001);
  EXPECT_EQ(recs[1].epsilon, 0.002);
  EXPECT_EQ(recs[3].d, 9);
}
