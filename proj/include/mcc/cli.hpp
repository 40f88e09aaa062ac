#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcc/decoder.hpp"

namespace mcc {

struct SweepConfig {
  std::vector<int> d_list{5, 9, 13};
  std::vector<double> eps_list{0.0008, 0.0012, 0.0016, 0.002, 0.0024};
  long shots = 10000;
  int rounds = 0;  // 0 means R = d
  uint64_t seed = 1;
  Weighting weighting = Weighting::probability;
  int workers = 0;  // 0 means hardware concurrency
  std::string out;

  int rounds_for(int d) const { return rounds > 0 ? rounds : d; }
  void validate() const;
};

// JSON config; keys match the field names, weighting is "probability" or "unit".
SweepConfig load_sweep_config(const std::string& json_text);

struct ThresholdRecord {
  int d;
  double epsilon;
  double pp_rate;
  int rounds;
  long shots;
  long failures;
  double rate_per_round;
  double ci_low, ci_high;
  uint64_t seed;
};

struct Interval {
  double low, high;
};
// 95% Wilson score interval for k successes in n trials.
Interval wilson_interval(long k, long n, double z = 1.959963984540054);

// Seed for the shots of one (d, epsilon) point.
uint64_t point_seed(uint64_t master, int d, double epsilon);

// Failures over shots [begin, end) of one point; used by run_threshold.
long count_failures(const CodeLayout& layout, const Decoder& dec, const ErrorParams& params, int rounds,
                    uint64_t seed, long begin, long end, long* dirty = nullptr);

std::vector<ThresholdRecord> run_threshold(const SweepConfig& cfg);

extern const char* const kCsvHeader;
void write_csv(std::ostream& os, const std::vector<ThresholdRecord>& recs);
std::vector<ThresholdRecord> read_csv(std::istream& is);

// Per-round rate from the per-shot failure probability, 1 - (1 - 2P)^(1/R)
// over 2, for the sensitivity check of the linear rate.
double per_round_from_shot(double p_shot, int rounds);

enum class RateModel { linear, compounded };

struct LineFit {
  int d;
  double a, b;                // log rate = a + b log x
  double var_a, var_b, cov;   // parameter covariance
};

struct Crossing {
  int d1, d2;
  bool found = false;
  double x = 0, sigma = 0;  // in units of 5 epsilon
};

struct ThresholdEstimate {
  std::vector<LineFit> fits;
  std::vector<Crossing> crossings;  // consecutive distance pairs
  bool found = false;               // every consecutive pair crosses in the window
  double x = 0, sigma = 0;          // inverse-variance mean of the crossings
};

ThresholdEstimate estimate_threshold(const std::vector<ThresholdRecord>& recs,
                                     RateModel model = RateModel::linear);

}  // namespace mcc
