#include "mcc/noisesim.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace mcc {

namespace {

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

uint64_t splitmix64(uint64_t& x) {
  uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double projection_branch_probability(int b, double eps) {
  if (b == 0) return 1 - 5 * eps;
  if (b <= 4) return eps / 4;
  if (b <= 10) return eps / 6;
  if (b == 11) return eps;
  if (b <= 15) return eps / 4;
  if (b < kProjectionBranches) return eps / 6;
  return 0;
}

size_t Schedule::num_primitives() const {
  size_t n = 0;
  for (auto& s : steps) n += s.size();
  return n;
}

size_t Schedule::count(Primitive::Type t) const {
  size_t n = 0;
  for (auto& s : steps)
    for (auto& p : s) n += p.type == t;
  return n;
}

Schedule build_schedule(const CodeLayout& L) {
  Schedule s;
  s.num_data = L.num_vertices();
  s.num_plaquettes = int(L.plaquettes.size());
  s.direct_slot.assign(s.num_plaquettes, -1);
  s.circuit_of.assign(s.num_plaquettes, -1);
  s.steps.resize(5);
  int next_mode = s.num_data;

  auto add = [&](int step, Primitive p, SiteKind kind) {
    p.site = s.num_sites();
    s.site_kind.push_back(kind);
    s.site_step.push_back(step);
    s.steps[step].push_back(p);
  };
  auto direct = [&](int step, const Plaquette& p) {
    Primitive pr{Primitive::project};
    std::copy(p.vertices.begin(), p.vertices.end(), pr.modes);
    pr.slot = s.num_slots++;
    s.direct_slot[p.id] = pr.slot;
    add(step, pr, SiteKind::projection);
  };

  // Steps: 0 blue + red init, 1 red projections, 2 red readout + green init,
  // 3 green projections, 4 green readout.
  for (auto& p : L.plaquettes)
    if (p.color == Color::blue) direct(0, p);

  for (Color col : {Color::red, Color::green}) {
    int init_step = col == Color::red ? 0 : 2;
    for (auto& p : L.plaquettes) {
      if (p.color != col) continue;
      if (p.vertices.size() == 4) {
        direct(init_step + 1, p);
        continue;
      }
      Circuit8 c{};
      c.plaquette = p.id;
      c.virtual_pair = p.vertices.size() == 6;
      for (int k = 0; k < 8; ++k)
        c.c[k] = k < int(p.vertices.size()) ? p.vertices[k] : next_mode++;
      for (int k = 0; k < 8; ++k) c.a[k] = next_mode++;
      int ci = int(s.circuits.size());
      s.circuit_of[p.id] = ci;
      // Ancilla pairs (a2 a3) (a4 a5) (a6 a7) (a8 a1).
      for (int i = 0; i < 4; ++i) {
        Primitive in{Primitive::init};
        in.modes[0] = c.a[2 * i + 1];
        in.modes[1] = c.a[(2 * i + 2) % 8];
        add(init_step, in, SiteKind::init);
      }
      if (c.virtual_pair) {
        Primitive in{Primitive::init};
        in.modes[0] = c.c[6];
        in.modes[1] = c.c[7];
        add(init_step, in, SiteKind::init);
      }
      for (int i = 0; i < 4; ++i) {
        Primitive pr{Primitive::project};
        pr.modes[0] = c.c[2 * i];
        pr.modes[1] = c.c[2 * i + 1];
        pr.modes[2] = c.a[2 * i];
        pr.modes[3] = c.a[2 * i + 1];
        pr.slot = c.proj_slot[i] = s.num_slots++;
        add(init_step + 1, pr, SiteKind::projection);
      }
      // eta81 first, then eta23, eta45, eta67.
      for (int j = 0; j < 4; ++j) {
        int i = (j + 3) % 4;
        Primitive m{Primitive::measure};
        m.modes[0] = c.a[2 * i + 1];
        m.modes[1] = c.a[(2 * i + 2) % 8];
        m.slot = c.meas_slot[j] = s.num_slots++;
        add(init_step + 2, m, SiteKind::measurement);
      }
      s.circuits.push_back(c);
    }
    for (auto& c : s.circuits) {
      if (L.plaquettes[c.plaquette].color != col) continue;
      Primitive f{Primitive::finish8};
      f.circuit = int(&c - s.circuits.data());
      s.steps[init_step + 2].push_back(f);
    }
  }
  s.num_modes = next_mode;

  // Memory faults on data modes left alone during a step. Ancilla and virtual
  // modes are operated in every step between their init and readout.
  for (int st = 0; st < 5; ++st) {
    std::vector<char> busy(s.num_data, 0);
    for (auto& p : s.steps[st])
      for (int m : p.modes)
        if (m >= 0 && m < s.num_data) busy[m] = 1;
    for (int v = 0; v < s.num_data; ++v) {
      if (busy[v]) continue;
      Primitive id{Primitive::idle};
      id.modes[0] = v;
      add(st, id, SiteKind::idle);
    }
  }
  return s;
}

uint8_t correction_mask(int d81, int d23, int d45, int d67) {
  (void)d81;
  uint8_t m = 0;
  if (d23) m ^= 0b00000011;
  if (d45) m ^= 0b00001111;
  if (d67) m ^= 0b11000000;
  return m;
}

RandomSampler::RandomSampler(const ErrorParams& p, uint64_t seed) : p_(p), rng_(seed) {}

int RandomSampler::branch(int, int, SiteKind kind) {
  double eps = p_.epsilon;
  if (eps <= 0) return 0;
  double u = u_(rng_);
  if (kind != SiteKind::projection) {
    if (u >= eps) return 0;
    bool on = kind == SiteKind::measurement ? p_.outcome_flips : p_.state_flips;
    return on ? 1 : 0;
  }
  if (u >= 5 * eps) return 0;
  int cat = std::min(4, int(u / eps));
  double r = u / eps - cat;  // uniform in [0, 1) given the category
  int single = 1 + std::min(3, int(r * 4));
  int pair = 5 + std::min(5, int(r * 6));
  int state = cat == 0 || cat == 3 ? single : cat == 1 || cat == 4 ? pair : 0;
  bool flip = cat >= 2;
  if (!p_.state_flips) state = 0;
  if (!p_.outcome_flips) flip = false;
  if (!flip) return state;
  return state == 0 ? 11 : 11 + state;
}

int ScriptedSampler::branch(int round, int site, SiteKind) {
  int b = 0;
  for (auto& f : faults_)
    if (f.round == round && f.site == site) b = f.branch;
  return b;
}

uint64_t shot_seed(uint64_t master, uint64_t shot) {
  uint64_t x = master;
  uint64_t a = splitmix64(x);
  x = a ^ (shot * 0xd1b54a32d192ed03ULL);
  return splitmix64(x);
}

int apply_noisy_projection(std::vector<uint8_t>& frame, const int modes[4], int branch) {
  int parity = frame[modes[0]] ^ frame[modes[1]] ^ frame[modes[2]] ^ frame[modes[3]];
  int flip = branch >= 11;
  int state = flip ? branch - 11 : branch;
  if (state >= 1 && state <= 4) {
    frame[modes[state - 1]] ^= 1;
  } else if (state >= 5) {
    frame[modes[kPairs[state - 5][0]]] ^= 1;
    frame[modes[kPairs[state - 5][1]]] ^= 1;
  }
  return parity ^ flip;
}

SyndromeHistory run_memory_experiment(const CodeLayout& L, const Schedule& s, FaultSampler& sampler,
                                      int rounds, const std::vector<DataInjection>& injections) {
  if (rounds < 1) throw std::invalid_argument("run_memory_experiment: rounds must be >= 1");
  SyndromeHistory h;
  h.rounds = rounds;
  h.num_plaquettes = s.num_plaquettes;
  h.bits.assign(size_t(rounds + 1) * s.num_plaquettes, 0);
  std::vector<uint8_t> frame(s.num_modes, 0), slot(s.num_slots, 0);

  auto inject = [&](int r) {
    for (auto& in : injections)
      if (in.before_round == r) frame[in.mode] ^= 1;
  };

  for (int r = 0; r < rounds; ++r) {
    inject(r);
    for (auto& step : s.steps) {
      for (auto& p : step) {
        int b = p.site >= 0 ? sampler.branch(r, p.site, s.site_kind[p.site]) : 0;
        switch (p.type) {
          case Primitive::init:
            frame[p.modes[0]] = b ? 1 : 0;
            frame[p.modes[1]] = 0;
            break;
          case Primitive::project:
            slot[p.slot] = uint8_t(apply_noisy_projection(frame, p.modes, b));
            break;
          case Primitive::measure:
            slot[p.slot] = uint8_t(frame[p.modes[0]] ^ frame[p.modes[1]] ^ (b ? 1 : 0));
            frame[p.modes[0]] = frame[p.modes[1]] = 0;
            break;
          case Primitive::idle:
            if (b) frame[p.modes[0]] ^= 1;
            break;
          case Primitive::finish8: {
            auto& c = s.circuits[p.circuit];
            uint8_t m = correction_mask(slot[c.meas_slot[0]], slot[c.meas_slot[1]], slot[c.meas_slot[2]],
                                        slot[c.meas_slot[3]]);
            for (int k = 0; k < 8; ++k)
              if (m >> k & 1) frame[c.c[k]] ^= 1;
            if (c.virtual_pair) frame[c.c[6]] = frame[c.c[7]] = 0;
            h.at(r, c.plaquette) = slot[c.proj_slot[0]] ^ slot[c.proj_slot[1]] ^ slot[c.proj_slot[2]] ^
                                   slot[c.proj_slot[3]];
            break;
          }
        }
      }
    }
    for (int p = 0; p < s.num_plaquettes; ++p)
      if (s.direct_slot[p] >= 0) h.at(r, p) = slot[s.direct_slot[p]];
  }
  inject(rounds);
  for (auto& p : L.plaquettes) {
    uint8_t par = 0;
    for (int v : p.vertices) par ^= frame[v];
    h.at(rounds, p.id) = par;
  }
  for (int v = 0; v < s.num_data; ++v)
    if (frame[v]) h.frame.set(v);
  return h;
}

SyndromeHistory run_memory_experiment(const CodeLayout& L, const ErrorParams& params, int rounds,
                                      uint64_t seed) {
  Schedule s = build_schedule(L);
  RandomSampler rs(params, seed);
  return run_memory_experiment(L, s, rs, rounds);
}

std::vector<DetectionEvent> detection_events(const SyndromeHistory& h) {
  std::vector<DetectionEvent> ev;
  for (int r = 0; r <= h.rounds; ++r)
    for (int p = 0; p < h.num_plaquettes; ++p) {
      uint8_t prev = r ? h.at(r - 1, p) : 0;
      if (h.at(r, p) ^ prev) ev.push_back({p, r});
    }
  return ev;
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
T get(std::istream& is) {
  T v{};
  if (!is.read(reinterpret_cast<char*>(&v), sizeof v)) throw std::runtime_error("history file truncated");
  return v;
}

void put_bits(std::ostream& os, const std::vector<uint8_t>& b) {
  std::vector<char> packed((b.size() + 7) / 8, 0);
  for (size_t i = 0; i < b.size(); ++i)
    if (b[i]) packed[i / 8] |= char(1 << (i % 8));
  os.write(packed.data(), std::streamsize(packed.size()));
}
std::vector<uint8_t> get_bits(std::istream& is, size_t n) {
  std::vector<char> packed((n + 7) / 8);
  if (!is.read(packed.data(), std::streamsize(packed.size()))) throw std::runtime_error("history file truncated");
  std::vector<uint8_t> b(n);
  for (size_t i = 0; i < n; ++i) b[i] = (packed[i / 8] >> (i % 8)) & 1;
  return b;
}

}  // namespace

void write_history_header(std::ostream& os, const HistoryFileHeader& h) {
  os.write("MCCH", 4);
  put(os, h.version);
  put(os, h.d);
  put(os, h.num_plaquettes);
  put(os, h.rounds);
  put(os, h.shots);
  put(os, h.epsilon);
  put(os, h.seed);
  put(os, h.num_data);
}

void write_history_record(std::ostream& os, const SyndromeHistory& h, uint32_t num_data) {
  put_bits(os, h.bits);
  std::vector<uint8_t> f(num_data);
  for (uint32_t v = 0; v < num_data; ++v) f[v] = h.frame.get(int(v));
  put_bits(os, f);
}

HistoryFileHeader read_history_header(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::string(magic, 4) != "MCCH") throw std::runtime_error("not a history file");
  HistoryFileHeader h;
  h.version = get<uint32_t>(is);
  if (h.version != 1) throw std::runtime_error("unsupported history version");
  h.d = get<uint32_t>(is);
  h.num_plaquettes = get<uint32_t>(is);
  h.rounds = get<uint32_t>(is);
  h.shots = get<uint64_t>(is);
  h.epsilon = get<double>(is);
  h.seed = get<uint64_t>(is);
  h.num_data = get<uint32_t>(is);
  return h;
}

SyndromeHistory read_history_record(std::istream& is, const HistoryFileHeader& hd) {
  SyndromeHistory h;
  h.rounds = int(hd.rounds);
  h.num_plaquettes = int(hd.num_plaquettes);
  h.bits = get_bits(is, size_t(hd.rounds + 1) * hd.num_plaquettes);
  auto f = get_bits(is, hd.num_data);
  for (uint32_t v = 0; v < hd.num_data; ++v)
    if (f[v]) h.frame.set(int(v));
  return h;
}

}  // namespace mcc
