#include "mcc/surgery.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace mcc {

namespace {

int pmod2(int a) { return ((a % 2) + 2) % 2; }

std::string ratio_str(int dphase) {
  static const char* s[] = {"+1", "+i", "-1", "-i"};
  return s[dphase & 3];
}

// Product of the given stabilisers; commuting even operators, so order is free.
Monomial product(const std::vector<Monomial>& ms) {
  Monomial r = Monomial::scalar(0);
  for (auto& m : ms) r = r * m;
  return r;
}

}  // namespace

const char* merge_type_name(MergeType t) {
  switch (t) {
    case MergeType::type_one: return "type-I";
    case MergeType::type_two: return "type-II";
    default: return "parity-projection";
  }
}

Monomial MergedLayout::logical(int k) const {
  const auto& P = patches[k];
  std::vector<int> ids;
  for (int v : P.logical_support) ids.push_back(patch_modes[k][v]);
  Monomial own = logical_operator(P);
  return Monomial::scalar(own.phase) * ordered_product(ids);
}

Monomial MergedLayout::pre_stabilizer(int k, int p) const {
  const auto& P = patches[k];
  std::vector<int> ids;
  for (int v : P.plaquettes[p].vertices) ids.push_back(patch_modes[k][v]);
  std::sort(ids.begin(), ids.end());
  return hermitian(Bits::of(ids));
}

MergedLayout build_merge(const CodeLayout& a, const CodeLayout& b, MergeType type) {
  if (a.d != b.d) throw std::invalid_argument("build_merge: patches have different d");
  int d = a.d;
  MergedLayout m;
  m.type = type;
  m.d = d;
  m.measured = type == MergeType::type_two ? Color::green : Color::red;

  // Mirror constants in lattice units; even, so colours and square positions
  // are preserved.
  const int K = -(d + 1);
  const int Kv = type == MergeType::parity_projection ? -4 : -(d + 1);
  using Map = std::function<Point(Point)>;
  Map id = [](Point p) { return p; };
  Map mx = [&](Point p) { return Point{4 * K - p.x, p.y}; };
  Map my = [&](Point p) { return Point{p.x, 4 * Kv - p.y}; };
  Map mxy = [&](Point p) { return Point{4 * K - p.x, 4 * Kv - p.y}; };
  std::vector<std::pair<const CodeLayout*, Map>> placed;
  switch (type) {
    case MergeType::type_one: placed = {{&a, id}, {&b, mx}}; break;
    case MergeType::type_two: placed = {{&a, id}, {&b, my}}; break;
    case MergeType::parity_projection: placed = {{&a, id}, {&b, mx}, {&a, my}, {&b, mxy}}; break;
  }

  auto in_strip = [&](Point p) {
    switch (type) {
      case MergeType::type_one: return p.x > 4 * K - 2 && p.x < 2 && p.y > -2 && p.y < 4 * (d - 1);
      case MergeType::type_two: return p.y > 4 * Kv + 2 && p.y < -2 && p.x > 2 && p.x < 4 * d;
      default: return p.x > 4 * K - 2 && p.x < 2 && p.y > 4 * Kv - 4 * (d - 1) && p.y < 4 * (d - 1);
    }
  };

  std::set<Point> patch_pts, strip;
  for (auto& [L, f] : placed)
    for (auto& v : L->vertices) patch_pts.insert(f({v.x, v.y}));
  int lo = -8 * (d + 2), hi = 8 * (d + 2);
  for (int U = lo / 4; U <= hi / 4; ++U)
    for (int V = lo / 4; V <= hi / 4; ++V) {
      if (!pmod2(U + V)) continue;
      for (int sx : {1, -1})
        for (int sy : {1, -1}) {
          Point p{4 * U + sx, 4 * V + sy};
          if (in_strip(p) && !patch_pts.count(p)) strip.insert(p);
        }
    }

  std::vector<Point> pts(patch_pts.begin(), patch_pts.end());
  pts.insert(pts.end(), strip.begin(), strip.end());
  std::sort(pts.begin(), pts.end(), [](Point p, Point q) { return std::pair(p.y, p.x) < std::pair(q.y, q.x); });
  std::map<Point, int> index;
  for (size_t i = 0; i < pts.size(); ++i) index[pts[i]] = int(i);

  m.merged.d = d;
  for (size_t i = 0; i < pts.size(); ++i) m.merged.vertices.push_back({int(i), pts[i].x, pts[i].y});
  m.merged.plaquettes = lattice_plaquettes(pts);
  for (auto& [L, f] : placed) {
    m.patches.push_back(*L);
    std::vector<int> ids;
    for (auto& v : L->vertices) ids.push_back(index.at(f({v.x, v.y})));
    m.patch_modes.push_back(ids);
  }
  for (auto& p : strip) m.ancilla.push_back(index.at(p));
  std::sort(m.ancilla.begin(), m.ancilla.end());
  return m;
}

Monomial bar_operator(const Bar& b) { return Monomial::scalar(1) * Monomial::mode(b.i) * Monomial::mode(b.j); }

Report validate_merge(const MergedLayout& m) {
  Report r;
  const auto& P = m.merged.plaquettes;
  int odd = 0, odd_overlap = 0;
  std::vector<Bits> sup;
  for (auto& p : P) {
    sup.push_back(Bits::of(p.vertices));
    odd += p.vertices.size() % 2;
  }
  for (size_t i = 0; i < sup.size(); ++i)
    for (size_t j = i + 1; j < sup.size(); ++j) odd_overlap += sup[i].and_count(sup[j]) % 2;
  r.push_back({"merged plaquettes have even size", odd == 0, std::to_string(P.size()) + " plaquettes"});
  r.push_back({"merged plaquettes overlap evenly", odd_overlap == 0, std::to_string(odd_overlap) + " odd pairs"});

  Bits covered;
  for (auto& s : sup) covered |= s;
  r.push_back({"every merged mode lies in a plaquette", int(covered.count()) == m.merged.num_vertices(),
               std::to_string(covered.count()) + "/" + std::to_string(m.merged.num_vertices())});

  for (size_t k = 0; k < m.patches.size(); ++k) {
    Bits mine = Bits::of(m.patch_modes[k]);
    std::set<std::vector<int>> got, want;
    for (auto& s : sup) {
      Bits x = s & mine;
      if (x.count() > 2) got.insert(x.indices());
    }
    for (auto& p : m.patches[k].plaquettes) {
      std::vector<int> ids;
      for (int v : p.vertices) ids.push_back(m.patch_modes[k][v]);
      std::sort(ids.begin(), ids.end());
      want.insert(ids);
    }
    r.push_back({"restriction to patch " + std::string(1, char('a' + k)) + " gives its stabilisers", got == want,
                 std::to_string(got.size()) + " vs " + std::to_string(want.size())});
  }
  return r;
}

namespace {

std::vector<Bits> pre_merge_rows(const MergedLayout& m) {
  std::vector<Bits> rows;
  for (size_t k = 0; k < m.patches.size(); ++k)
    for (size_t p = 0; p < m.patches[k].plaquettes.size(); ++p)
      rows.push_back(m.pre_stabilizer(int(k), int(p)).support);
  return rows;
}

// Plaquettes whose outcomes must stay determined: everything except the
// measured colour.
std::vector<int> protected_plaquettes(const MergedLayout& m) {
  std::vector<int> out;
  for (auto& p : m.merged.plaquettes)
    if (p.color != m.measured) out.push_back(p.id);
  return out;
}

Monomial logical_target(const MergedLayout& m, const Monomial& qa) {
  if (m.type == MergeType::parity_projection) return m.logical(0) * m.logical(1) * m.logical(2) * m.logical(3) * qa;
  return Monomial::scalar(1) * m.logical(0) * m.logical(1) * qa;
}

Monomial measured_product(const MergedLayout& m) {
  std::vector<Monomial> ms;
  for (auto& p : m.merged.plaquettes)
    if (p.color == m.measured) ms.push_back(m.merged.stabilizer(p.id));
  return product(ms);
}

}  // namespace

BarPattern construct_pattern(const MergedLayout& m) {
  Bits anc = Bits::of(m.ancilla);
  auto rows = pre_merge_rows(m);
  auto prot = protected_plaquettes(m);
  for (int id : prot) {
    Bits rest = m.merged.support(id);
    for (int v : m.ancilla) rest.set(v, false);
    if (!gf2_solve(rows, rest, nullptr))
      throw std::runtime_error("construct_pattern: " + std::string(color_name(m.merged.plaquettes[id].color)) +
                               " stabiliser " + std::to_string(id) +
                               " is not a product of bars and pre-merge stabilisers");
  }

  // Candidate partners: inside every protected plaquette containing the mode.
  int n = m.merged.num_vertices();
  std::vector<Bits> cand(n);
  for (int v : m.ancilla) {
    Bits c = anc;
    bool constrained = false;
    for (int id : prot) {
      Bits s = m.merged.support(id);
      if (!s.get(v)) continue;
      c = c & s;
      constrained = true;
    }
    if (!constrained) {
      Bits near;
      for (auto& p : m.merged.plaquettes)
        if (p.color == Color::blue && m.merged.support(p.id).get(v)) near |= m.merged.support(p.id);
      c = c & near;
    }
    c.set(v, false);
    cand[v] = c;
  }

  std::vector<int> mate(n, -1);
  long budget = 1'000'000;
  std::function<bool(size_t)> search = [&](size_t k) -> bool {
    while (k < m.ancilla.size() && mate[m.ancilla[k]] >= 0) ++k;
    if (k == m.ancilla.size()) return true;
    if (--budget < 0) return false;
    int v = m.ancilla[k];
    for (int w : cand[v].indices()) {
      if (mate[w] >= 0 || !cand[w].get(v)) continue;
      mate[v] = w, mate[w] = v;
      if (search(k + 1)) return true;
      mate[v] = mate[w] = -1;
    }
    return false;
  };
  if (!search(0)) {
    for (int v : m.ancilla)
      if (cand[v].none())
        throw std::runtime_error("construct_pattern: ancilla mode " + std::to_string(v) + " has no admissible partner");
    throw std::runtime_error("construct_pattern: no perfect bar pattern");
  }
  BarPattern pat;
  for (int v : m.ancilla)
    if (mate[v] > v) pat.push_back({v, mate[v]});

  // Orientation of the first bar fixes the sign of the logical identity.
  Monomial qa = Monomial::scalar(0);
  for (auto& b : pat) qa = qa * bar_operator(b);
  Monomial q = measured_product(m), t = logical_target(m, qa);
  if (q.support != t.support)
    throw std::runtime_error("construct_pattern: measured product does not cover the logical support");
  if (((q.phase - t.phase) & 3) == 2 && !pat.empty()) std::swap(pat[0].i, pat[0].j);
  return pat;
}

Report verify_pattern(const MergedLayout& m, const BarPattern& pat) {
  Report r;
  Bits anc = Bits::of(m.ancilla), seen;
  bool disjoint = true;
  for (auto& b : pat) {
    if (b.i == b.j || !anc.get(b.i) || !anc.get(b.j) || seen.get(b.i) || seen.get(b.j)) disjoint = false;
    seen.set(b.i);
    seen.set(b.j);
  }
  r.push_back({"bars are disjoint pairs of ancilla modes", disjoint, std::to_string(pat.size()) + " bars"});
  r.push_back({"bars cover every ancilla mode", seen == anc,
               std::to_string(seen.count()) + "/" + std::to_string(anc.count())});

  std::vector<Bits> bar_sup;
  std::vector<Monomial> bar_ops;
  for (auto& b : pat) bar_sup.push_back(Bits{b.i, b.j}), bar_ops.push_back(bar_operator(b));

  // (ii) protected stabilisers are products of bars and pre-merge stabilisers.
  auto rows = pre_merge_rows(m);
  std::vector<Monomial> pre_ops;
  for (size_t k = 0; k < m.patches.size(); ++k)
    for (size_t p = 0; p < m.patches[k].plaquettes.size(); ++p) pre_ops.push_back(m.pre_stabilizer(int(k), int(p)));
  int bad = 0, checked = 0;
  std::string first_bad;
  for (int id : protected_plaquettes(m)) {
    ++checked;
    Bits s = m.merged.support(id), rest = s;
    std::vector<Monomial> parts;
    bool straddles = false;
    for (size_t j = 0; j < bar_sup.size(); ++j) {
      size_t ov = bar_sup[j].and_count(s);
      if (ov == 2) rest ^= bar_sup[j], parts.push_back(bar_ops[j]);
      if (ov == 1) straddles = true;
    }
    std::vector<int> combo;
    bool ok = !straddles && (rest & anc).none() && gf2_solve(rows, rest, &combo);
    if (ok) {
      for (int c : combo) parts.push_back(pre_ops[c]);
      Monomial prod = product(parts), st = m.merged.stabilizer(id);
      // Equal up to the sign fixed by the initial eigenvalues.
      ok = prod.support == st.support && ((prod.phase - st.phase) & 1) == 0;
    }
    if (!ok) {
      ++bad;
      if (first_bad.empty())
        first_bad = std::string(color_name(m.merged.plaquettes[id].color)) + " " + std::to_string(id);
    }
  }
  std::string prot = m.measured == Color::red ? "green and blue" : "red and blue";
  r.push_back({"every " + prot + " merged stabiliser is bars times pre-merge stabilisers", bad == 0,
               std::to_string(checked - bad) + "/" + std::to_string(checked) +
                   (first_bad.empty() ? "" : ", first failure " + first_bad)});

  // Blue squares inside the strip carry exactly one pair of bars.
  int squares = 0, good_squares = 0;
  std::vector<char> paired(pat.size(), 0);
  for (auto& p : m.merged.plaquettes) {
    if (p.color != Color::blue || p.vertices.size() != 4) continue;
    Bits s = m.merged.support(p.id);
    if ((s & anc) != s) continue;
    ++squares;
    std::vector<int> inside;
    for (size_t j = 0; j < bar_sup.size(); ++j)
      if (bar_sup[j].and_count(s) == 2) inside.push_back(int(j));
    if (inside.size() == 2) {
      Monomial prod = bar_ops[inside[0]] * bar_ops[inside[1]];
      if (prod.support == s) {
        ++good_squares;
        paired[inside[0]] = paired[inside[1]] = 1;
      }
    }
  }
  r.push_back({"each strip blue square is the product of one pair of bars", squares == good_squares,
               std::to_string(good_squares) + "/" + std::to_string(squares)});

  // (i) logical identity with exact phase.
  Monomial qa = product(bar_ops);
  Monomial q = measured_product(m), t = logical_target(m, qa);
  std::string qname = m.measured == Color::red ? "Q_R" : "Q_G";
  std::string lhs = m.type == MergeType::parity_projection ? "a b c d Q_A" : "i a b Q_A";
  bool same_support = q.support == t.support;
  r.push_back({qname + " support is every merged mode", int(q.support.count()) == m.merged.num_vertices(),
               std::to_string(q.support.count()) + "/" + std::to_string(m.merged.num_vertices())});
  r.push_back({qname + " = " + lhs + " as monomials", same_support && q.phase == t.phase,
               same_support ? "phase of " + qname + " (" + lhs + ")^-1 = " + ratio_str(q.phase - t.phase)
                            : "supports differ"});

  // (iii) conserved quantities i a x Q_x, Q_x a product of bars.
  std::vector<Monomial> stabs;
  for (auto& p : m.merged.plaquettes) stabs.push_back(m.merged.stabilizer(p.id));
  auto parity_vector = [&](const Bits& sup) {
    Bits v;
    for (size_t s = 0; s < stabs.size(); ++s)
      if (stabs[s].support.and_count(sup) % 2) v.set(s);
    return v;
  };
  std::vector<Bits> bar_rows;
  for (auto& b : bar_sup) bar_rows.push_back(parity_vector(b));
  std::vector<int> partners = {1};
  if (m.type == MergeType::parity_projection) partners = {1, 2, 3};
  for (int x : partners) {
    Monomial ax = Monomial::scalar(1) * m.logical(0) * m.logical(x);
    std::vector<int> combo;
    bool ok = gf2_solve(bar_rows, parity_vector(ax.support), &combo);
    std::string detail;
    if (ok) {
      Monomial cq = ax;
      int unpaired_used = 0;
      for (int c : combo) cq = cq * bar_ops[c], unpaired_used += !paired[c];
      for (auto& s : stabs) ok = ok && commutes(cq, s);
      int unpaired = int(std::count(paired.begin(), paired.end(), 0));
      detail = std::to_string(combo.size()) + " bars (" + std::to_string(unpaired_used) + " of " +
               std::to_string(unpaired) + " unpaired)";
    } else {
      detail = "no bar product found";
    }
    std::string name = std::string("i a ") + char('a' + x) + " Q_" + char('a' + x);
    r.push_back({name + " commutes with every merged stabiliser", ok, detail});
  }

  if (m.type == MergeType::parity_projection) {
    // The projection must not reveal i a b on its own.
    std::vector<Bits> all;
    for (auto& s : stabs) all.push_back(s.support);
    for (auto& b : bar_sup) all.push_back(b);
    Bits ab = m.logical(0).support ^ m.logical(1).support;
    r.push_back({"i a b is not fixed by merged stabilisers and bars", !gf2_solve(all, ab, nullptr), ""});
  }
  return r;
}

Report verify_logical_phase(const CodeLayout& L) {
  Report r;
  Monomial cbar = logical_operator(L);
  int n = L.num_vertices();
  bool all_commute = true;
  for (auto& p : L.plaquettes) all_commute = all_commute && commutes(cbar, L.stabilizer(p.id));
  r.push_back({"every stabiliser commutes with the logical operator", all_commute, ""});

  // Hermitian monomials square to one, so conjugation is u o u.
  auto conj = [](const Monomial& u, const Monomial& o) { return u * o * u; };
  std::vector<Monomial> probes;
  for (int i = 0; i < n + 2; ++i) probes.push_back(Monomial::mode(i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n + 2; ++j) probes.push_back(Monomial::scalar(1) * Monomial::mode(i) * Monomial::mode(j));
  for (auto& p : L.plaquettes) probes.push_back(L.stabilizer(p.id));
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    Bits s;
    for (int i = 0; i < n + 4; ++i)
      if (rng() & 1) s.set(i);
    probes.push_back(hermitian(s));
  }
  int agree = 0;
  for (auto& o : probes) {
    Monomial a = conj(cbar, o), b = o;
    for (int i : L.logical_support) b = conj(Monomial::mode(i), b);
    agree += a == b;
  }
  r.push_back({"frame of the product of single-mode flips equals the frame of [c]", agree == int(probes.size()),
               std::to_string(agree) + "/" + std::to_string(probes.size()) + " probe operators"});
  r.push_back({"logical support is odd", L.logical_support.size() % 2 == 1,
               std::to_string(L.logical_support.size()) + " modes"});
  return r;
}

}  // namespace mcc
