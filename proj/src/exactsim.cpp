#include "mcc/exactsim.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <random>
#include <sstream>

namespace mcc {

namespace {

using Op = Operator<cd>;
using Mat = MatrixX<cd>;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

// min over global phase of ||a - e^{i t} b||, Frobenius.
double phase_distance(const Mat& a, const Mat& b) {
  cd ov = (b.adjoint() * a).trace();
  cd ph = std::abs(ov) > 1e-300 ? ov / std::abs(ov) : cd(1);
  return (a - ph * b).norm();
}

Op sum(const Op& a, const Op& b, double sb = 1.0) { return a + cd(sb) * b; }

// Normalised common +1 eigenvector of a rank-one projector product.
Eigen::VectorXcd pure_state(const ModeSpace<cd>& sp, const Op& proj) {
  Mat p = sp.dense(proj);
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < p.cols(); ++j)
    if (p.col(j).norm() > p.col(best).norm()) best = j;
  return p.col(best).normalized();
}

double expect(const ModeSpace<cd>& sp, const Op& o, const Eigen::VectorXcd& psi) {
  return (psi.adjoint() * sp.left(o, Mat(psi))).trace().real();
}

}  // namespace

CircuitReport verify_exchange_and_phase() {
  CircuitReport r;
  ModeSpace<cd> sp(4);
  Op a = Op::mode(0), b = Op::mode(1);
  Mat R = sp.dense(exchange_gate(a, b)), S = sp.dense(phase_gate(a, b));
  Mat A = sp.c(0), B = sp.c(1), I = Mat::Identity(sp.dim(), sp.dim());
  double e1 = (R * A * R.adjoint() + B).norm();
  double e2 = (R * B * R.adjoint() - A).norm();
  double e3 = phase_distance(R * R, S);
  double e4 = (S * A * S.adjoint() + A).norm() + (S * B * S.adjoint() + B).norm();
  double e5 = phase_distance(S * S, I);
  r.checks.push_back({"R a R^dag = -b", e1 < 1e-10, fmt(e1)});
  r.checks.push_back({"R b R^dag = a", e2 < 1e-10, fmt(e2)});
  r.checks.push_back({"R^2 = S up to phase", e3 < 1e-10, fmt(e3)});
  r.checks.push_back({"S a S^dag = -a, S b S^dag = -b", e4 < 1e-10, fmt(e4)});
  r.checks.push_back({"S^2 = identity up to phase", e5 < 1e-10, fmt(e5)});
  r.values["max_error"] = std::max({e1, e2, e3, e4, e5});
  return r;
}

CircuitReport verify_transfer_circuit() {
  CircuitReport r;
  {
    ModeSpace<cd> sp(6);
    Op a = Op::mode(0), b = Op::mode(1), c = Op::mode(2);
    Channel<cd> lhs = transfer(a, b, c);
    Channel<cd> rhs = {init_pair(b, c), {exchange_gate(a, c)}};
    double d = channel_distance(sp, lhs, rhs);
    r.checks.push_back({"T_{a,b,c} = [R_{a,c}] I_{b,c}", d < 1e-9, fmt(d)});
    r.values["transfer_distance"] = d;

    // With iab = +1 on input, the measurement takes only the mu = +1 branch.
    Mat rho = sp.dense(projector(iab(a, b), +1)) / cd(double(sp.dim()) / 2);
    Mat other = sp.conjugate(measure_transfer(a, b, c)[1], rho);
    r.checks.push_back({"iab = +1 input: no mu = -1 branch", other.norm() < 1e-12, fmt(other.norm())});
  }
  {
    ModeSpace<cd> sp(6);
    Op a1 = Op::mode(0), a2 = Op::mode(1), b = Op::mode(2), c = Op::mode(3);
    Channel<cd> lhs = then(then(transfer(a2, b, c), transfer(a1, b, a2)), transfer(c, b, a1));
    Channel<cd> rhs = {init_pair(b, c), {exchange_gate(a1, a2)}};
    double d = channel_distance(sp, lhs, rhs);
    r.checks.push_back({"T_{c,b,a1} T_{a1,b,a2} T_{a2,b,c} = [R_{a1,a2}] I_{b,c}", d < 1e-9, fmt(d)});
    r.values["chain_distance"] = d;
  }
  return r;
}

CircuitReport verify_tgate_circuit() {
  CircuitReport r;
  ModeSpace<cd> sp(8);
  Op a1 = Op::mode(0), a2 = Op::mode(1), b1 = Op::mode(2), b2 = Op::mode(3);
  Op c1 = Op::mode(4), c2 = Op::mode(5);
  const double s = 1 / std::sqrt(2.0);
  Op cm = cd(s) * sum(c1, c2, -1), cp = cd(s) * sum(c1, c2);

  Channel<cd> lhs = then(then(then(transfer(a2, b2, cp), transfer(a1, b1, cm)), transfer(c1, b1, a1)),
                         transfer(c2, b2, a2));
  Channel<cd> mid = {init_pair(b2, cp), init_pair(b1, cm), {t_gate(c2, c1)}, {t_gate(a1, a2)}};
  Channel<cd> rhs = {init_pair(b1, c1), init_pair(b2, c2), {t_gate(a1, a2)}};
  double d1 = channel_distance(sp, lhs, mid);
  double d2 = channel_distance(sp, lhs, rhs);
  r.checks.push_back({"sequence = [T_{a1,a2}][T_{c2,c1}] I_{b1,c-} I_{b2,c+}", d1 < 1e-9, fmt(d1)});
  r.checks.push_back({"sequence = [T_{a1,a2}] I_{b1,c1} I_{b2,c2}", d2 < 1e-9, fmt(d2)});
  r.values["tgate_distance"] = d2;

  // Consumed magic state: outputs satisfy i b1 c1 = i b2 c2 = 1.
  Mat rho = Mat::Identity(sp.dim(), sp.dim()) / cd(double(sp.dim()));
  Mat out = apply_channel(sp, lhs, rho);
  double v1 = (sp.dense(iab(b1, c1)) * out).trace().real();
  double v2 = (sp.dense(iab(b2, c2)) * out).trace().real();
  r.checks.push_back({"consumed state has i b1 c1 = i b2 c2 = 1", std::abs(v1 - 1) + std::abs(v2 - 1) < 1e-9,
                      fmt(std::abs(v1 - 1) + std::abs(v2 - 1))});

  Mat T = sp.dense(t_gate(a1, a2)), R = sp.dense(exchange_gate(a1, a2));
  double d3 = phase_distance(T * T, R);
  r.checks.push_back({"T^2 = R up to phase", d3 < 1e-10, fmt(d3)});

  // A-state in the four-mode qubit encoding (c1, c2, c3, c4) = (b2, b1, c2, c1).
  ModeSpace<cd> q(4);
  Op B1 = Op::mode(0), B2 = Op::mode(1), C1 = Op::mode(2), C2 = Op::mode(3);
  Op qm = cd(s) * sum(C1, C2, -1), qp = cd(s) * sum(C1, C2);
  auto psi = pure_state(q, projector(iab(B1, qm), 1) * projector(iab(B2, qp), 1));
  Op sx = iab(B2, C1), sz = iab(C2, C1), sy = cd(0, 1) * (sx * sz);
  double par = expect(q, B2 * B1 * C2 * C1, psi);
  double x = expect(q, sx, psi), y = expect(q, sy, psi), z = expect(q, sz, psi);
  double err = std::abs(par - 1) + std::abs(x - s) + std::abs(y - s) + std::abs(z);
  r.checks.push_back({"A-state is (|0> + e^{i pi/4}|1>)/sqrt(2) in the qubit encoding", err < 1e-10,
                      "bloch=(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")"});
  return r;
}

std::vector<int> outcome_correction(int e81, int e23, int e45, int e67) {
  struct Row {
    int e[4];
    std::vector<int> u;
  };
  static const Row rows[] = {
      {{1, 1, 1, 1}, {}},           {{-1, -1, 1, 1}, {0, 1}},     {{1, -1, -1, 1}, {2, 3}},
      {{1, 1, -1, -1}, {4, 5}},     {{-1, 1, 1, -1}, {6, 7}},     {{-1, 1, -1, 1}, {0, 1, 2, 3}},
      {{1, -1, 1, -1}, {2, 3, 4, 5}}, {{-1, -1, -1, -1}, {0, 1, 4, 5}},
  };
  for (auto& r : rows)
    if (r.e[0] == e81 && r.e[1] == e23 && r.e[2] == e45 && r.e[3] == e67) return r.u;
  throw std::invalid_argument("outcome_correction: outcome pattern with odd product");
}

StabMeasResult simulate_stab_meas_circuit(const std::vector<int>& flips) {
  if (!flips.empty() && flips.size() != 8)
    throw std::invalid_argument("simulate_stab_meas_circuit: flips must have 8 entries");
  for (int f : flips)
    if (f != 0 && f != 1) throw std::invalid_argument("simulate_stab_meas_circuit: flips are 0/1");

  StabMeasResult res;
  ModeSpace<cd> full(16), data(8), anc(8);
  auto c = [](int k) { return Op::mode(k - 1); };      // data c1..c8
  auto af = [](int k) { return Op::mode(7 + k); };     // ancilla in the full space
  auto aa = [](int k) { return Op::mode(k - 1); };     // ancilla in its own space
  auto pair_of = [](int i) { return std::pair{2 * i, 2 * i + 1 > 8 ? 1 : 2 * i + 1}; };

  // Even ancilla operators act as (ancilla) x (identity on data).
  {
    Mat lhs = full.dense(iab(af(2), af(3)));
    Mat rhs = Eigen::kroneckerProduct(anc.dense(iab(aa(2), aa(3))), Mat::Identity(16, 16)).eval();
    double e = (lhs - rhs).norm();
    res.checks.push_back({"ancilla factorisation", e < 1e-12, fmt(e)});
  }

  Op init;
  init = Op::identity();
  for (int i = 1; i <= 4; ++i) {
    auto [x, y] = pair_of(i);
    init = init * projector(iab(aa(x), aa(y)), +1);
  }
  Eigen::VectorXcd psi0 = pure_state(anc, init);
  Mat X0 = Eigen::kroneckerProduct(Mat(psi0), Mat::Identity(16, 16)).eval();
  Op all_c = Op::identity();
  for (int k = 1; k <= 8; ++k) all_c = all_c * c(k);

  Mat completeness = Mat::Zero(16, 16);
  double worst = 0, worst_wrong_sign = 1e300;
  bool rows_ok = true;
  for (int up = 0; up < 16; ++up)
    for (int ep = 0; ep < 16; ++ep) {
      int ups[4], eta[4];
      for (int k = 0; k < 4; ++k) ups[k] = (up >> k & 1) ? -1 : 1, eta[k] = (ep >> k & 1) ? -1 : 1;
      if (!flips.empty()) {
        bool match = true;
        for (int k = 0; k < 4; ++k) match = match && ((ups[k] < 0) == bool(flips[k])) && ((eta[k] < 0) == bool(flips[4 + k]));
        if (!match) continue;
      }
      Mat X = X0;
      for (int i = 1; i <= 4; ++i)
        X = full.left(projector(c(2 * i - 1) * c(2 * i) * af(2 * i - 1) * af(2 * i), ups[i - 1]), X);
      // eta[0] = eta_{8,1}, eta[1] = eta_{2,3}, ...
      Op anc_final = Op::identity();
      for (int i = 1; i <= 4; ++i) {
        auto [x, y] = pair_of(i);
        int e = eta[i % 4];
        X = full.left(projector(iab(af(x), af(y)), e), X);
        anc_final = anc_final * projector(iab(aa(x), aa(y)), e);
      }
      completeness += X.adjoint() * X;
      if (X.norm() < 1e-12) {
        ++res.impossible_patterns;
        if (!flips.empty()) res.checks.push_back({"requested outcome pattern has nonzero probability", false, ""});
        continue;
      }
      if (eta[0] * eta[1] * eta[2] * eta[3] != 1) {
        res.checks.push_back({"odd ancilla outcome product never occurs", false, ""});
        continue;
      }
      auto u = outcome_correction(eta[0], eta[1], eta[2], eta[3]);
      Op U = Op::identity();
      for (int k : u) U = U * c(k + 1);
      Mat A = full.left(U, X);
      Mat A2 = full.left(U * all_c, X);

      int s = -ups[0] * ups[1] * ups[2] * ups[3];
      Eigen::VectorXcd phi = pure_state(anc, anc_final);
      Mat B = Eigen::kroneckerProduct(Mat(phi), data.dense(projector(all_c, s))).eval();
      Mat Bwrong = Eigen::kroneckerProduct(Mat(phi), data.dense(projector(all_c, -s))).eval();
      auto rel = [&](const Mat& a, const Mat& b) {
        cd lam = (b.adjoint() * a).trace() / (b.adjoint() * b).trace();
        return (a - lam * b).norm() / a.norm();
      };
      double d = std::max(rel(A, B), rel(A2, B));
      worst = std::max(worst, d);
      worst_wrong_sign = std::min(worst_wrong_sign, rel(A, Bwrong));
      ++res.patterns_checked;
      res.total_probability += A.squaredNorm() / 16.0;

      // Full operator-basis sweep on the table rows with all parity outcomes +1.
      if (up == 0) {
        cd lam = (B.adjoint() * A).trace() / (B.adjoint() * B).trace();
        double p = std::norm(lam);
        for (uint32_t m = 0; m < 256; ++m) {
          Bits sup;
          for (int k = 0; k < 8; ++k)
            if (m >> k & 1) sup.flip(k);
          Mat M = data.dense(Op{{{cd(1), sup}}}) / cd(16);
          Mat diff = A * M * A.adjoint() - p * (B * M * B.adjoint());
          double tn = trace_norm<cd>(diff);
          if (tn > 1e-9) rows_ok = false;
          worst = std::max(worst, tn);
        }
      }
    }
  res.worst_distance = worst;
  double tp = (completeness - Mat::Identity(16, 16)).norm();
  bool full_sweep = flips.empty();
  res.checks.push_back({"data channel = projection with outcome -u12 u34 u56 u78 after U", worst < 1e-9,
                        std::to_string(res.patterns_checked) + " patterns, worst " + fmt(worst)});
  res.checks.push_back({"U and U c1..c8 equivalent", worst < 1e-9, ""});
  res.checks.push_back({"operator-basis sweep on the eight table rows", rows_ok, ""});
  if (full_sweep) {
    res.checks.push_back({"outcome set complete (trace preserving)", tp < 1e-10, fmt(tp)});
    res.checks.push_back({"opposite outcome sign rejected", worst_wrong_sign > 0.5, fmt(worst_wrong_sign)});
    res.checks.push_back({"odd-parity ancilla outcomes impossible", res.impossible_patterns == 128,
                          std::to_string(res.impossible_patterns)});
  }
  return res;
}

DistillationResult verify_distillation(double p, long accepted_target, uint64_t seed) {
  DistillationResult res;
  ModeSpace<cd> sp(8);
  // a1 b1 c1 d1 a2 b2 c2 d2
  auto m = [](int j, int k) { return Op::mode(4 * (j - 1) + k); };
  auto a = [&](int j) { return m(j, 0); };
  auto b = [&](int j) { return m(j, 1); };
  auto c = [&](int j) { return m(j, 2); };
  auto d = [&](int j) { return m(j, 3); };
  auto copy_parity = [&](int j) { return a(j) * b(j) * c(j) * d(j); };

  Op ex = exchange_gate(b(1), b(2)) * exchange_gate(d(1), d(2));
  Op P1 = copy_parity(1), P2 = copy_parity(2);

  // Initial states for each error configuration.
  Eigen::VectorXcd init[2][2];
  for (int e1 = 0; e1 < 2; ++e1)
    for (int e2 = 0; e2 < 2; ++e2)
      init[e1][e2] = pure_state(sp, projector(P1, 1) * projector(iab(a(1), c(1)), e1 ? -1 : 1) *
                                        projector(P2, 1) * projector(iab(a(2), c(2)), e2 ? -1 : 1));

  // Outcome distribution of the two projections after the exchanges.
  auto branches = [&](const Eigen::VectorXcd& psi0) {
    std::vector<std::pair<std::pair<int, int>, Eigen::VectorXcd>> out;
    Mat psi = sp.left(ex, Mat(psi0));
    for (int o1 : {1, -1})
      for (int o2 : {1, -1}) {
        Mat v = sp.left(projector(P2, o2), sp.left(projector(P1, o1), psi));
        if (v.norm() > 1e-9) out.push_back({{o1, o2}, v.col(0)});
      }
    return out;
  };
  auto ref = branches(init[0][0]);
  bool clean_det = ref.size() == 1 && std::abs(ref[0].second.squaredNorm() - 1) < 1e-10;
  res.checks.push_back({"error-free copies give deterministic parities", clean_det, ""});
  auto want = ref[0].first;

  // Exact acceptance and error from the branch weights.
  double acc = 0, bad = 0;
  bool single_discarded = true;
  for (int e1 = 0; e1 < 2; ++e1)
    for (int e2 = 0; e2 < 2; ++e2) {
      double w = (e1 ? p : 1 - p) * (e2 ? p : 1 - p);
      for (auto& [o, v] : branches(init[e1][e2])) {
        double pb = v.squaredNorm();
        if (e1 != e2 && o == want) single_discarded = false;
        if (e1 != e2 && (o.first == want.first || o.second == want.second)) single_discarded = false;
        if (o != want) continue;
        acc += w * pb;
        double ev = expect(sp, iab(a(1), c(1)), v.normalized());
        bad += w * pb * (1 - ev) / 2;
      }
    }
  double formula = p * p / (1 - 2 * p + 2 * p * p);
  res.expected = formula;
  res.checks.push_back({"single-copy error flips both parity outcomes", single_discarded, ""});
  res.checks.push_back({"exact conditional error matches p^2/(1-2p+2p^2)", std::abs(bad / acc - formula) < 1e-12,
                        fmt(std::abs(bad / acc - formula))});
  res.checks.push_back({"acceptance probability 1-2p+2p^2", std::abs(acc - (1 - 2 * p + 2 * p * p)) < 1e-12, ""});

  // Sampled estimate.
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution flip(p);
  std::uniform_real_distribution<double> uni(0, 1);
  long errors = 0;
  while (res.accepted < accepted_target) {
    ++res.samples;
    int e1 = flip(rng), e2 = flip(rng);
    auto br = branches(init[e1][e2]);
    double u = uni(rng), cum = 0;
    size_t pick = br.size() - 1;
    for (size_t k = 0; k < br.size(); ++k) {
      cum += br[k].second.squaredNorm();
      if (u < cum) {
        pick = k;
        break;
      }
    }
    if (br[pick].first != want) continue;
    ++res.accepted;
    Eigen::VectorXcd v = br[pick].second.normalized();
    double ev = expect(sp, iab(a(1), c(1)), v);
    if (uni(rng) < (1 - ev) / 2) ++errors;
  }
  res.conditional_error = double(errors) / double(res.accepted);
  res.checks.push_back({"sampled conditional error within 0.001 of formula",
                        std::abs(res.conditional_error - formula) < 1e-3,
                        std::to_string(res.conditional_error) + " vs " + std::to_string(formula)});

  // Duplication: copy 2 starts in a2b2c2d2 = 1, i a2 b2 = 1. Both parities
  // read the same value; on the flipped value the phase gate S_{b1,a2} restores
  // i a2 c2 = 1 without disturbing copy 1.
  Eigen::VectorXcd dup0 = pure_state(sp, projector(P1, 1) * projector(iab(a(1), c(1)), 1) * projector(P2, 1) *
                                             projector(iab(a(2), b(2)), 1));
  bool dup_ok = true;
  int dup_branches = 0;
  for (auto& [o, v] : branches(dup0)) {
    ++dup_branches;
    Mat w = v.normalized();
    dup_ok = dup_ok && o.first * o.second == want.first * want.second;
    if (o != want) w = sp.left(phase_gate(b(1), a(2)), w);
    Eigen::VectorXcd fin = w.col(0);
    for (int j : {1, 2}) {
      dup_ok = dup_ok && std::abs(expect(sp, iab(a(j), c(j)), fin) - 1) < 1e-10;
      dup_ok = dup_ok && std::abs(expect(sp, copy_parity(j), fin) - 1) < 1e-10;
    }
  }
  res.checks.push_back({"duplication yields two clean copies", dup_ok && dup_branches == 2,
                        std::to_string(dup_branches) + " outcome branches"});
  return res;
}

CircuitReport verify_encodings() {
  CircuitReport r;
  ModeSpace<cd> q(4);
  Op c1 = Op::mode(0), c2 = Op::mode(1), c3 = Op::mode(2), c4 = Op::mode(3);
  Mat P = q.dense(projector(c1 * c2 * c3 * c4, 1));
  Mat X = P * q.dense(iab(c1, c4)) * P, Z = P * q.dense(iab(c3, c4)) * P;
  Mat Y = cd(0, 1) * X * Z;
  double e = (X * X - P).norm() + (Z * Z - P).norm() + (Y * Y - P).norm() + (X * Z + Z * X).norm() +
             (Y - Y.adjoint()).norm() + (X * Y - cd(0, 1) * Z).norm();
  r.checks.push_back({"four-mode encoding obeys the Pauli algebra", e < 1e-12, fmt(e)});

  auto psi = pure_state(q, projector(c1 * c2 * c3 * c4, 1) * projector(iab(c1, c3), 1));
  double x = expect(q, iab(c1, c4), psi), z = expect(q, iab(c3, c4), psi);
  double y = expect(q, cd(0, 1) * (iab(c1, c4) * iab(c3, c4)), psi);
  double err = std::abs(x) + std::abs(y - 1) + std::abs(z);
  r.checks.push_back({"Y-state is (|0> + i|1>)/sqrt(2)", err < 1e-12,
                      "bloch=(" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")"});
  return r;
}

}  // namespace mcc
