// mcc: command-line front end for the Majorana colour-code toolkit.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcc/cli.hpp"
#include "mcc/exactsim.hpp"
#include "mcc/surgery.hpp"

using namespace mcc;

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_d(int d) {
  if (d < 5 || d % 4 != 1) throw UsageError("--d must be 1 mod 4 and at least 5");
}

void print_row(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%-44s %s  %s\n", name.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
}

int print_report(const Report& r) {
  for (auto& c : r) print_row(c.name, c.ok, c.detail);
  return all_ok(r) ? kOk : kFail;
}

int cmd_build(int d, const std::string& out) {
  check_d(d);
  CodeLayout L = build_code(d);
  std::string text = layout_to_json(L);
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    std::ofstream os(out);
    if (!os) throw UsageError("cannot write " + out);
    os << text << "\n";
  }
  std::fprintf(stderr, "d=%d vertices=%d plaquettes=%zu\n", d, L.num_vertices(), L.plaquettes.size());
  return kOk;
}

int cmd_validate(const std::string& path) {
  CodeLayout L;
  try {
    L = layout_from_json(slurp(path));
  } catch (const nlohmann::json::exception& e) {
    std::printf("malformed layout: %s\n", e.what());
    return kFail;
  }
  return print_report(validate_code(L));
}

int cmd_verify_circuits(long distill_samples) {
  Report all;
  auto add = [&](const std::string& group, const Report& r) {
    for (auto c : r) {
      c.name = group + ": " + c.name;
      all.push_back(c);
    }
  };
  add("exchange", verify_exchange_and_phase().checks);
  add("transfer", verify_transfer_circuit().checks);
  add("t-gate", verify_tgate_circuit().checks);
  add("encodings", verify_encodings().checks);
  add("stabiliser circuit", simulate_stab_meas_circuit().checks);
  auto dist = verify_distillation(0.1, distill_samples);
  add("distillation", dist.checks);
  int rc = print_report(all);
  std::printf("distillation p=0.1: %.6f over %ld accepted (expected %.6f)\n", dist.conditional_error,
              dist.accepted, dist.expected);
  return rc;
}

int cmd_verify_surgery(int d, const std::string& type) {
  check_d(d);
  MergeType t;
  if (type == "1") t = MergeType::type_one;
  else if (type == "2") t = MergeType::type_two;
  else if (type == "pp") t = MergeType::parity_projection;
  else throw UsageError("--type must be 1, 2 or pp");

  CodeLayout L = build_code(d);
  MergedLayout m = build_merge(L, L, t);
  std::printf("%s merge, d=%d: %d modes, %zu ancillas\n", merge_type_name(t), d, m.merged.num_vertices(),
              m.ancilla.size());
  Report r = validate_merge(m);
  try {
    BarPattern p = construct_pattern(m);
    std::printf("bar pattern: %zu bars\n", p.size());
    for (auto& c : verify_pattern(m, p)) r.push_back(c);
  } catch (const std::exception& e) {
    r.push_back({"bar pattern found", false, e.what()});
  }
  for (auto c : verify_logical_phase(L)) {
    c.name = "logical phase: " + c.name;
    r.push_back(c);
  }
  return print_report(r);
}

int cmd_distance(int d, const std::string& layout_path) {
  CodeLayout L;
  if (!layout_path.empty()) {
    L = layout_from_json(slurp(layout_path));
  } else {
    check_d(d);
    L = build_code(d);
  }
  std::vector<int> path;
  int w = min_logical_weight(L, &path);
  std::printf("d=%d min_logical_weight=%d edges=%zu\n", L.d, w, path.size());
  return w == L.d ? kOk : kFail;
}

int cmd_simulate(int d, double eps, int rounds, long shots, uint64_t seed, const std::string& out) {
  check_d(d);
  if (eps < 0 || eps >= 0.2) throw UsageError("--eps must lie in [0, 0.2)");
  if (shots < 1) throw UsageError("--shots must be positive");
  if (rounds <= 0) rounds = d;
  CodeLayout L = build_code(d);
  Schedule sch = build_schedule(L);
  std::ofstream os(out, std::ios::binary);
  if (!os) throw UsageError("cannot write " + out);
  HistoryFileHeader hdr;
  hdr.d = uint32_t(d);
  hdr.num_plaquettes = uint32_t(L.plaquettes.size());
  hdr.rounds = uint32_t(rounds);
  hdr.shots = uint64_t(shots);
  hdr.epsilon = eps;
  hdr.seed = seed;
  hdr.num_data = uint32_t(L.num_vertices());
  write_history_header(os, hdr);
  ErrorParams params{eps};
  long events = 0;
  for (long s = 0; s < shots; ++s) {
    RandomSampler rng(params, shot_seed(seed, uint64_t(s)));
    SyndromeHistory h = run_memory_experiment(L, sch, rng, rounds);
    events += long(detection_events(h).size());
    write_history_record(os, h, hdr.num_data);
  }
  std::fprintf(stderr, "wrote %ld shots, %.2f detection events per shot\n", shots, double(events) / shots);
  return kOk;
}

int cmd_decode(const std::string& in, const std::string& layout_path, const std::string& out,
               const std::string& weighting) {
  std::ifstream is(in, std::ios::binary);
  if (!is) throw UsageError("cannot open " + in);
  HistoryFileHeader hdr = read_history_header(is);
  CodeLayout L = layout_from_json(slurp(layout_path));
  if (uint32_t(L.d) != hdr.d || L.plaquettes.size() != hdr.num_plaquettes)
    throw UsageError("layout does not match the history file");
  Weighting w = weighting == "unit" ? Weighting::unit : Weighting::probability;
  double eps = hdr.epsilon > 0 ? hdr.epsilon : 1e-3;
  Decoder dec(L, int(hdr.rounds), ErrorParams{eps}, w);

  std::ofstream os(out);
  if (!os) throw UsageError("cannot write " + out);
  os << "shot,failures,syndrome_clean,matching_weight\n";
  long failures = 0, dirty = 0;
  for (uint64_t s = 0; s < hdr.shots; ++s) {
    SyndromeHistory h = read_history_record(is, hdr);
    DecodeOutcome o = dec.decode(h);
    failures += o.logical_failure;
    dirty += !o.syndrome_clean;
    os << s << "," << int(o.logical_failure) << "," << int(o.syndrome_clean) << "," << o.matching_weight << "\n";
  }
  std::fprintf(stderr, "%llu shots, %ld failures, %ld dirty syndromes\n", (unsigned long long)hdr.shots,
               failures, dirty);
  return dirty ? kFail : kOk;
}

void print_estimate(const char* label, const ThresholdEstimate& est) {
  for (auto& c : est.crossings) {
    if (c.found)
      std::printf("%s crossing d=%d/%d: 5eps = %.5f +- %.5f\n", label, c.d1, c.d2, c.x, c.sigma);
    else
      std::printf("%s crossing d=%d/%d: no crossing\n", label, c.d1, c.d2);
  }
  if (est.found) std::printf("%s threshold: 5eps = %.5f +- %.5f\n", label, est.x, est.sigma);
  else std::printf("%s threshold: no crossing in the scanned window\n", label);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Majorana colour code: construction, verification and threshold simulation"};
  app.require_subcommand(1);

  int d = 5;
  std::string out, in, layout_path, type = "1", config, weighting;
  auto* build = app.add_subcommand("build", "build a code patch and write its layout JSON");
  build->add_option("--d", d, "code distance")->required();
  build->add_option("--out", out, "output path (stdout if omitted)");

  auto* validate = app.add_subcommand("validate", "check a layout JSON against the code invariants");
  validate->add_option("layout", layout_path)->required();

  long distill = 100000;
  auto* circuits = app.add_subcommand("verify-circuits", "exact checks of the elementary circuits");
  circuits->add_option("--distill-samples", distill, "accepted distillation samples");

  auto* surgery = app.add_subcommand("verify-surgery", "lattice-surgery operator identities");
  surgery->add_option("--d", d)->required();
  surgery->add_option("--type", type, "1, 2 or pp")->required();

  auto* distance = app.add_subcommand("distance", "minimum weight of a logical string");
  distance->add_option("--d", d);
  distance->add_option("--layout", layout_path);

  double eps = 1e-3;
  int rounds = 0;
  long shots = 1000;
  uint64_t seed = 1;
  auto* simulate = app.add_subcommand("simulate", "noisy memory experiment, writes a history file");
  simulate->add_option("--d", d)->required();
  simulate->add_option("--eps", eps, "elementary fault probability")->required();
  simulate->add_option("--rounds", rounds, "noisy rounds (default d)");
  simulate->add_option("--shots", shots);
  simulate->add_option("--seed", seed);
  simulate->add_option("--out", out)->required();

  auto* decode_cmd = app.add_subcommand("decode", "decode a history file");
  decode_cmd->add_option("--in", in)->required();
  decode_cmd->add_option("--layout", layout_path)->required();
  decode_cmd->add_option("--out", out)->required();
  decode_cmd->add_option("--weighting", weighting, "probability or unit")
      ->check(CLI::IsMember({"probability", "unit"}));

  std::vector<int> t_d;
  std::vector<double> t_eps;
  long t_shots = 0;
  std::string t_rounds;
  uint64_t t_seed = 0;
  int t_workers = -1;
  auto* threshold = app.add_subcommand("threshold", "Monte Carlo threshold sweep");
  threshold->add_option("--config", config, "JSON sweep configuration");
  threshold->add_option("--out", out, "results CSV");
  threshold->add_option("--d", t_d, "code distances");
  threshold->add_option("--eps", t_eps, "elementary fault probabilities");
  threshold->add_option("--shots", t_shots);
  threshold->add_option("--rounds", t_rounds, "\"d\" or an integer");
  threshold->add_option("--seed", t_seed);
  threshold->add_option("--weighting", weighting)->check(CLI::IsMember({"probability", "unit"}));
  threshold->add_option("--workers", t_workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*build) return cmd_build(d, out);
    if (*validate) return cmd_validate(layout_path);
    if (*circuits) return cmd_verify_circuits(distill);
    if (*surgery) return cmd_verify_surgery(d, type);
    if (*distance) return cmd_distance(d, layout_path);
    if (*simulate) return cmd_simulate(d, eps, rounds, shots, seed, out);
    if (*decode_cmd) return cmd_decode(in, layout_path, out, weighting);
    if (*threshold) {
      SweepConfig cfg = config.empty() ? SweepConfig{} : load_sweep_config(slurp(config));
      if (!t_d.empty()) cfg.d_list = t_d;
      if (!t_eps.empty()) cfg.eps_list = t_eps;
      if (t_shots) cfg.shots = t_shots;
      if (t_rounds == "d") cfg.rounds = 0;
      else if (!t_rounds.empty()) cfg.rounds = std::stoi(t_rounds);
      if (threshold->count("--seed")) cfg.seed = t_seed;
      if (!weighting.empty()) cfg.weighting = weighting == "unit" ? Weighting::unit : Weighting::probability;
      if (t_workers >= 0) cfg.workers = t_workers;
      if (!out.empty()) cfg.out = out;
      if (cfg.out.empty()) throw UsageError("threshold needs --out or an \"out\" config field");
      cfg.validate();

      auto recs = run_threshold(cfg);
      std::ofstream os(cfg.out);
      if (!os) throw UsageError("cannot write " + cfg.out);
      write_csv(os, recs);
      for (auto& r : recs)
        std::printf("d=%2d 5eps=%.4f failures=%ld/%ld rate=%.3e [%.3e, %.3e]\n", r.d, r.pp_rate, r.failures,
                    r.shots, r.rate_per_round, r.ci_low, r.ci_high);
      if (cfg.d_list.size() >= 2 && cfg.eps_list.size() >= 3) {
        print_estimate("linear", estimate_threshold(recs, RateModel::linear));
        print_estimate("compounded", estimate_threshold(recs, RateModel::compounded));
      }
      return kOk;
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFail;
  }
  return kUsage;
}
