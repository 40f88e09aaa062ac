#include "mcc/cli.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace mcc {

void SweepConfig::validate() const {
  if (d_list.empty() || eps_list.empty()) throw std::invalid_argument("config: empty d or eps list");
  for (int d : d_list)
    if (d < 5 || d % 4 != 1) throw std::invalid_argument("config: d must be 1 mod 4 and >= 5");
  for (double e : eps_list)
    if (!(e >= 0 && e <= 0.04)) throw std::invalid_argument("config: epsilon must lie in [0, 0.04]");
  if (shots < 1) throw std::invalid_argument("config: shots must be >= 1");
  if (rounds < 0) throw std::invalid_argument("config: rounds must be >= 0");
}

SweepConfig load_sweep_config(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  SweepConfig c;
  if (j.contains("d_list")) c.d_list = j["d_list"].get<std::vector<int>>();
  if (j.contains("eps_list")) c.eps_list = j["eps_list"].get<std::vector<double>>();
  if (j.contains("shots")) c.shots = j["shots"].get<long>();
  if (j.contains("rounds")) {
    if (j["rounds"].is_string()) {
      if (j["rounds"] != "d") throw std::invalid_argument("config: rounds must be \"d\" or an integer");
      c.rounds = 0;
    } else {
      c.rounds = j["rounds"].get<int>();
    }
  }
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  if (j.contains("weighting")) {
    std::string w = j["weighting"];
    if (w == "probability") c.weighting = Weighting::probability;
    else if (w == "unit") c.weighting = Weighting::unit;
    else throw std::invalid_argument("config: weighting must be probability or unit");
  }
  if (j.contains("workers")) c.workers = j["workers"].get<int>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
  for (auto& [k, v] : j.items()) {
    static const char* known[] = {"d_list", "eps_list", "shots", "rounds", "seed", "weighting", "workers", "out"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* s) { return k == s; }) == std::end(known))
      throw std::invalid_argument("config: unknown key " + k);
  }
  return c;
}

Interval wilson_interval(long k, long n, double z) {
  if (n <= 0) return {0, 1};
  double p = double(k) / n, z2 = z * z;
  double den = 1 + z2 / n;
  double mid = (p + z2 / (2 * n)) / den;
  double half = z * std::sqrt(p * (1 - p) / n + z2 / (4.0 * n * n)) / den;
  return {k == 0 ? 0.0 : std::max(0.0, mid - half), k == n ? 1.0 : std::min(1.0, mid + half)};
}

uint64_t point_seed(uint64_t master, int d, double epsilon) {
  uint64_t bits;
  std::memcpy(&bits, &epsilon, sizeof bits);
  return shot_seed(shot_seed(master, uint64_t(d)), bits);
}

long count_failures(const CodeLayout& L, const Decoder& dec, const ErrorParams& params, int rounds, uint64_t seed,
                    long begin, long end, long* dirty) {
  long fails = 0, bad = 0;
  for (long s = begin; s < end; ++s) {
    RandomSampler rs(params, shot_seed(seed, uint64_t(s)));
    SyndromeHistory h = run_memory_experiment(L, dec.schedule(), rs, rounds);
    DecodeOutcome o = dec.decode(h);
    fails += o.logical_failure;
    bad += !o.syndrome_clean;
  }
  if (dirty) *dirty = bad;
  if (bad && !dirty) throw std::logic_error("decoder left a dirty syndrome");
  return fails;
}

std::vector<ThresholdRecord> run_threshold(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<int> ds = cfg.d_list;
  std::vector<double> es = cfg.eps_list;
  std::sort(ds.begin(), ds.end());
  std::sort(es.begin(), es.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());

  struct Point {
    int d;
    double eps;
    int rounds;
    uint64_t seed;
    ErrorParams params;
    const CodeLayout* layout;
    std::unique_ptr<Decoder> dec;
    std::atomic<long> failures{0};
  };
  std::map<int, CodeLayout> layouts;
  for (int d : ds) layouts.emplace(d, build_code(d));
  std::vector<std::unique_ptr<Point>> points;
  for (int d : ds)
    for (double e : es) {
      auto p = std::make_unique<Point>();
      p->d = d;
      p->eps = e;
      p->rounds = cfg.rounds_for(d);
      p->seed = point_seed(cfg.seed, d, e);
      p->params.epsilon = e;
      p->layout = &layouts.at(d);
      points.push_back(std::move(p));
    }

  // Tasks: (point, shot range). Decoders are built lazily by the first task.
  const long chunk = 250;
  struct Task {
    size_t point;
    long begin, end;
  };
  std::vector<Task> tasks;
  for (size_t i = 0; i < points.size(); ++i)
    for (long b = 0; b < cfg.shots; b += chunk) tasks.push_back({i, b, std::min(cfg.shots, b + chunk)});
  std::vector<std::once_flag> built(points.size());
  std::atomic<size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto worker = [&] {
    try {
      for (size_t t; (t = next++) < tasks.size();) {
        Point& p = *points[tasks[t].point];
        std::call_once(built[tasks[t].point], [&] {
          p.dec = std::make_unique<Decoder>(*p.layout, p.rounds, p.params, cfg.weighting);
        });
        p.failures += count_failures(*p.layout, *p.dec, p.params, p.rounds, p.seed, tasks[t].begin, tasks[t].end);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lk(err_mu);
      if (!err) err = std::current_exception();
      next = tasks.size();
    }
  };
  int nw = cfg.workers > 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (int i = 0; i < nw; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);

  std::vector<ThresholdRecord> out;
  for (auto& p : points) {
    long k = p->failures;
    Interval ci = wilson_interval(k, cfg.shots);
    double R = p->rounds;
    out.push_back({p->d, p->eps, 5 * p->eps, p->rounds, cfg.shots, k, double(k) / (cfg.shots * R), ci.low / R,
                   ci.high / R, cfg.seed});
  }
  return out;
}

const char* const kCsvHeader = "d,epsilon,pp_rate,rounds,shots,failures,rate_per_round,ci_low,ci_high,seed";

void write_csv(std::ostream& os, const std::vector<ThresholdRecord>& recs) {
  os << kCsvHeader << "\n";
  char buf[512];
  for (auto& r : recs) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%d,%ld,%ld,%.17g,%.17g,%.17g,%llu\n", r.d, r.epsilon, r.pp_rate,
                  r.rounds, r.shots, r.failures, r.rate_per_round, r.ci_low, r.ci_high,
                  static_cast<unsigned long long>(r.seed));
    os << buf;
  }
}

std::vector<ThresholdRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("csv: unexpected header");
  std::vector<ThresholdRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
    if (f.size() != 10) throw std::runtime_error("csv: expected 10 fields: " + line);
    out.push_back({std::stoi(f[0]), std::stod(f[1]), std::stod(f[2]), std::stoi(f[3]), std::stol(f[4]),
                   std::stol(f[5]), std::stod(f[6]), std::stod(f[7]), std::stod(f[8]), std::stoull(f[9])});
  }
  return out;
}

double per_round_from_shot(double p, int R) {
  if (p >= 0.5) return 0.5;
  return (1 - std::pow(1 - 2 * p, 1.0 / R)) / 2;
}

ThresholdEstimate estimate_threshold(const std::vector<ThresholdRecord>& recs, RateModel model) {
  ThresholdEstimate est;
  std::map<int, std::vector<const ThresholdRecord*>> by_d;
  double xmin = 1e300, xmax = 0;
  for (auto& r : recs) {
    by_d[r.d].push_back(&r);
    xmin = std::min(xmin, r.pp_rate);
    xmax = std::max(xmax, r.pp_rate);
  }
  for (auto& [d, rs] : by_d) {
    // Weighted least squares of log rate on log x.
    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    std::vector<std::array<double, 3>> pts;
    for (auto* r : rs) {
      if (r->failures <= 0 || r->failures >= r->shots) continue;
      double P = double(r->failures) / r->shots;
      double y, var;
      if (model == RateModel::linear) {
        y = std::log(P / r->rounds);
        var = (1 - P) / r->failures;
      } else {
        if (P >= 0.5) continue;
        double rate = per_round_from_shot(P, r->rounds);
        double deriv = std::pow(1 - 2 * P, 1.0 / r->rounds - 1) / r->rounds;
        y = std::log(rate);
        var = std::pow(deriv / rate, 2) * P * (1 - P) / r->shots;
      }
      double x = std::log(r->pp_rate), w = 1 / var;
      pts.push_back({x, y, w});
      S += w, Sx += w * x, Sy += w * y, Sxx += w * x * x, Sxy += w * x * y;
    }
    if (pts.size() < 2) continue;
    double det = S * Sxx - Sx * Sx;
    LineFit f{d, (Sxx * Sy - Sx * Sxy) / det, (S * Sxy - Sx * Sy) / det, Sxx / det, S / det, -Sx / det};
    if (pts.size() > 2) {
      double chi2 = 0;
      for (auto& p : pts) chi2 += p[2] * std::pow(p[1] - f.a - f.b * p[0], 2);
      double scale = std::max(1.0, chi2 / double(pts.size() - 2));
      f.var_a *= scale, f.var_b *= scale, f.cov *= scale;
    }
    est.fits.push_back(f);
  }
  double wsum = 0, xw = 0;
  est.found = est.fits.size() >= 2;
  for (size_t i = 0; i + 1 < est.fits.size(); ++i) {
    auto& f1 = est.fits[i];
    auto& f2 = est.fits[i + 1];
    Crossing c{f1.d, f2.d};
    double db = f1.b - f2.b;
    if (std::abs(db) > 1e-12) {
      double lx = (f2.a - f1.a) / db;
      // d lx / d(a1, b1, a2, b2)
      double g1a = -1 / db, g1b = -lx / db, g2a = 1 / db, g2b = lx / db;
      double var = g1a * g1a * f1.var_a + g1b * g1b * f1.var_b + 2 * g1a * g1b * f1.cov + g2a * g2a * f2.var_a +
                   g2b * g2b * f2.var_b + 2 * g2a * g2b * f2.cov;
      c.x = std::exp(lx);
      c.sigma = c.x * std::sqrt(var);
      c.found = c.x >= xmin && c.x <= xmax;
    }
    est.found = est.found && c.found;
    if (c.found && c.sigma > 0) wsum += 1 / (c.sigma * c.sigma), xw += c.x / (c.sigma * c.sigma);
    est.crossings.push_back(c);
  }
  if (est.found && wsum > 0) {
    est.x = xw / wsum;
    est.sigma = 1 / std::sqrt(wsum);
  }
  return est;
}

}  // namespace mcc
