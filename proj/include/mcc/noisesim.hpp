#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "mcc/code.hpp"

namespace mcc {

struct ErrorParams {
  double epsilon = 0;
  bool outcome_flips = true;  // false outcomes of projections and pair measurements
  bool state_flips = true;    // init, idle and projection mode flips
  double projection_rate() const { return 5 * epsilon; }
};

enum class SiteKind { init, projection, measurement, idle };

// Branch numbering for a projection fault site.
//   0        no error
//   1..4     single-mode flip on modes[k-1]
//   5..10    two-mode flip on pair k-5 (01 02 03 12 13 23)
//   11       outcome flip
//   12..15   outcome flip + single-mode flip
//   16..21   outcome flip + two-mode flip
constexpr int kProjectionBranches = 22;
double projection_branch_probability(int branch, double epsilon);

struct Primitive {
  enum Type : uint8_t { init, project, measure, idle, finish8 } type;
  int modes[4] = {-1, -1, -1, -1};
  int slot = -1;       // outcome slot written by project/measure
  int circuit = -1;    // finish8: circuit index
  int site = -1;       // fault site index within the round, -1 if noiseless
};

// One eight-slot stabiliser-measurement circuit: c1..c8 are data modes (the
// last two are fresh virtual modes for 6-mode plaquettes), a1..a8 ancillas.
struct Circuit8 {
  int plaquette;
  int c[8];
  int a[8];
  int proj_slot[4];  // u12, u34, u56, u78
  int meas_slot[4];  // eta81, eta23, eta45, eta67
  bool virtual_pair;
};

struct Schedule {
  int num_data = 0;
  int num_modes = 0;  // data + ancilla + virtual
  int num_plaquettes = 0;
  int num_slots = 0;
  std::vector<std::vector<Primitive>> steps;  // one round
  std::vector<Circuit8> circuits;
  std::vector<int> direct_slot;  // per plaquette: outcome slot of a direct projection, or -1
  std::vector<int> circuit_of;   // per plaquette: circuit index, or -1
  std::vector<SiteKind> site_kind;
  std::vector<int> site_step;
  int num_sites() const { return int(site_kind.size()); }
  size_t num_primitives() const;
  size_t count(Primitive::Type t) const;
};

Schedule build_schedule(const CodeLayout& layout);

// Correction from deviations of the four pair outcomes (eta81, eta23,
// eta45, eta67), as a subset of c1..c8 (bit k = c_{k+1}). Odd-parity patterns
// use the same linear rule with eta81 ignored.
uint8_t correction_mask(int d81, int d23, int d45, int d67);

// Source of fault branches. Returns the branch for a site; 0 means no fault.
class FaultSampler {
 public:
  virtual ~FaultSampler() = default;
  virtual int branch(int round, int site, SiteKind kind) = 0;
};

class RandomSampler : public FaultSampler {
 public:
  RandomSampler(const ErrorParams& p, uint64_t seed);
  int branch(int round, int site, SiteKind kind) override;

 private:
  ErrorParams p_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> u_{0.0, 1.0};
};

// Injects listed (round, site, branch) faults, nothing else.
class ScriptedSampler : public FaultSampler {
 public:
  struct Fault {
    int round, site, branch;
  };
  explicit ScriptedSampler(std::vector<Fault> f) : faults_(std::move(f)) {}
  int branch(int round, int site, SiteKind) override;

 private:
  std::vector<Fault> faults_;
};

// Per-shot seed derived from the master seed and shot index.
uint64_t shot_seed(uint64_t master, uint64_t shot);

struct SyndromeHistory {
  int rounds = 0;          // noisy rounds; one noiseless round follows
  int num_plaquettes = 0;
  std::vector<uint8_t> bits;  // (rounds + 1) x num_plaquettes, 1 = differs from reference
  Bits frame;                 // data modes with odd accumulated flips
  uint8_t at(int round, int p) const { return bits[size_t(round) * num_plaquettes + p]; }
  uint8_t& at(int round, int p) { return bits[size_t(round) * num_plaquettes + p]; }
};

// Data-mode flips applied between rounds before round r (for tests).
struct DataInjection {
  int before_round;
  int mode;
};

SyndromeHistory run_memory_experiment(const CodeLayout& layout, const Schedule& schedule,
                                      FaultSampler& sampler, int rounds,
                                      const std::vector<DataInjection>& injections = {});
SyndromeHistory run_memory_experiment(const CodeLayout& layout, const ErrorParams& params, int rounds,
                                      uint64_t seed);

struct DetectionEvent {
  int plaquette, round;
  bool operator==(const DetectionEvent&) const = default;
};
std::vector<DetectionEvent> detection_events(const SyndromeHistory& h);

// Outcome of one noisy projection on a frame, exposed for tests.
int apply_noisy_projection(std::vector<uint8_t>& frame, const int modes[4], int branch);

// Binary history file: "MCCH", u32 version, u32 d, u32 plaquettes, u32 rounds,
// u64 shots, f64 epsilon, u64 seed, u32 data modes, then per shot the packed
// syndrome bits ((rounds+1) x plaquettes, LSB first) and the packed frame bits.
struct HistoryFileHeader {
  uint32_t version = 1, d = 0, num_plaquettes = 0, rounds = 0;
  uint64_t shots = 0;
  double epsilon = 0;
  uint64_t seed = 0;
  uint32_t num_data = 0;
};
void write_history_header(std::ostream& os, const HistoryFileHeader& h);
void write_history_record(std::ostream& os, const SyndromeHistory& h, uint32_t num_data);
HistoryFileHeader read_history_header(std::istream& is);
SyndromeHistory read_history_record(std::istream& is, const HistoryFileHeader& h);

}  // namespace mcc
