#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mcc/algebra.hpp"
#include "mcc/code.hpp"

namespace mcc {

using cd = std::complex<double>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Linear combination of Majorana monomials; supports key the ascending product.
template <typename Scalar = cd>
struct Operator {
  std::vector<std::pair<Scalar, Bits>> terms;

  static Operator identity() { return {{{Scalar(1), Bits{}}}}; }
  static Operator mono(const Monomial& m) {
    static const Scalar ph[] = {Scalar(1), Scalar(0, 1), Scalar(-1), Scalar(0, -1)};
    return {{{ph[m.phase & 3], m.support}}};
  }
  static Operator mode(int i) { return mono(Monomial::mode(i)); }
};

template <typename Scalar>
Operator<Scalar> operator*(const Operator<Scalar>& a, const Operator<Scalar>& b) {
  static const Scalar ph[] = {Scalar(1), Scalar(0, 1), Scalar(-1), Scalar(0, -1)};
  std::vector<std::pair<Scalar, Bits>> acc;
  for (auto& [ca, sa] : a.terms)
    for (auto& [cb, sb] : b.terms) {
      Monomial m = mono_mul({sa, 0}, {sb, 0});
      Scalar c = ca * cb * ph[m.phase];
      auto it = std::find_if(acc.begin(), acc.end(), [&](auto& t) { return t.second == m.support; });
      if (it == acc.end()) acc.push_back({c, m.support});
      else it->first += c;
    }
  Operator<Scalar> out;
  for (auto& t : acc)
    if (std::abs(t.first) > 1e-15) out.terms.push_back(t);
  return out;
}

template <typename Scalar>
Operator<Scalar> operator+(Operator<Scalar> a, const Operator<Scalar>& b) {
  for (auto& t : b.terms) {
    auto it = std::find_if(a.terms.begin(), a.terms.end(), [&](auto& s) { return s.second == t.second; });
    if (it == a.terms.end()) a.terms.push_back(t);
    else it->first += t.first;
  }
  return a;
}

template <typename Scalar>
Operator<Scalar> operator*(Scalar s, Operator<Scalar> a) {
  for (auto& t : a.terms) t.first *= s;
  return a;
}

template <typename Scalar>
Operator<Scalar> adjoint(const Operator<Scalar>& a) {
  Operator<Scalar> out;
  for (auto& [c, s] : a.terms) {
    size_t m = s.count();
    double sign = (m * (m - 1) / 2) % 2 ? -1.0 : 1.0;
    out.terms.push_back({std::conj(c) * sign, s});
  }
  return out;
}

// Named operators from the circuit identities.
template <typename Scalar = cd>
Operator<Scalar> projector(const Operator<Scalar>& hermitian_op, int eta) {
  return Scalar(0.5) * (Operator<Scalar>::identity() + Scalar(eta) * hermitian_op);
}
// i a b for two (possibly composite) single-mode operators.
template <typename Scalar = cd>
Operator<Scalar> iab(const Operator<Scalar>& a, const Operator<Scalar>& b) {
  return Scalar(0, 1) * (a * b);
}
// exp(theta a b) = cos(theta) + sin(theta) a b.
template <typename Scalar = cd>
Operator<Scalar> rotation(const Operator<Scalar>& a, const Operator<Scalar>& b, double theta) {
  return Scalar(std::cos(theta)) * Operator<Scalar>::identity() + Scalar(std::sin(theta)) * (a * b);
}
template <typename Scalar = cd>
Operator<Scalar> exchange_gate(const Operator<Scalar>& a, const Operator<Scalar>& b) {
  return rotation(a, b, M_PI / 4);
}
template <typename Scalar = cd>
Operator<Scalar> phase_gate(const Operator<Scalar>& a, const Operator<Scalar>& b) {
  return a * b;
}
template <typename Scalar = cd>
Operator<Scalar> t_gate(const Operator<Scalar>& a, const Operator<Scalar>& b) {
  return rotation(a, b, M_PI / 8);
}

// Jordan-Wigner representation on n_modes/2 qubits, little-endian basis:
// c_{2k} = X_k prod_{j<k} Z_j, c_{2k+1} = Y_k prod_{j<k} Z_j.
template <typename Scalar = cd>
class ModeSpace {
 public:
  using Matrix = MatrixX<Scalar>;

  explicit ModeSpace(int n_modes) : n_(n_modes) {
    if (n_modes <= 0 || n_modes % 2 || n_modes > 24)
      throw std::invalid_argument("ModeSpace: n_modes must be even and <= 24");
    dim_ = Eigen::Index(1) << (n_modes / 2);
  }
  int n_modes() const { return n_; }
  Eigen::Index dim() const { return dim_; }

  // Signed permutation M|x> = phase[x] |x ^ flip> for the ascending product.
  struct Action {
    uint32_t flip = 0;
    std::vector<Scalar> phase;
  };
  const Action& action(const Bits& s) const {
    auto key = s.indices();
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    if (!key.empty() && key.back() >= n_) throw std::out_of_range("ModeSpace: mode index");
    Action a;
    a.phase.assign(dim_, Scalar(1));
    for (int i : key) a.flip ^= 1u << (i / 2);
    for (Eigen::Index x = 0; x < dim_; ++x) {
      uint32_t y = uint32_t(x);
      Scalar ph(1);
      for (auto r = key.rbegin(); r != key.rend(); ++r) {
        int q = *r / 2;
        if (std::popcount(y & ((1u << q) - 1)) & 1) ph = -ph;
        if (*r % 2) ph *= (y >> q & 1) ? Scalar(0, -1) : Scalar(0, 1);
        y ^= 1u << q;
      }
      a.phase[x] = ph;
    }
    return cache_.emplace(key, std::move(a)).first->second;
  }

  Matrix dense(const Operator<Scalar>& op) const {
    Matrix m = Matrix::Zero(dim_, dim_);
    for (auto& [c, s] : op.terms) {
      auto& a = action(s);
      for (Eigen::Index x = 0; x < dim_; ++x) m(x ^ a.flip, x) += c * a.phase[x];
    }
    return m;
  }
  Matrix c(int i) const { return dense(Operator<Scalar>::mode(i)); }

  // op * A for any A with dim() rows.
  Matrix left(const Operator<Scalar>& op, const Matrix& A) const {
    Matrix out = Matrix::Zero(A.rows(), A.cols());
    for (auto& [c, s] : op.terms) {
      auto& a = action(s);
      for (Eigen::Index x = 0; x < dim_; ++x) out.row(x ^ a.flip) += (c * a.phase[x]) * A.row(x);
    }
    return out;
  }
  // A * op for any A with dim() columns.
  Matrix right(const Matrix& A, const Operator<Scalar>& op) const {
    Matrix out = Matrix::Zero(A.rows(), A.cols());
    for (auto& [c, s] : op.terms) {
      auto& a = action(s);
      for (Eigen::Index x = 0; x < dim_; ++x) out.col(x) += (c * a.phase[x]) * A.col(x ^ a.flip);
    }
    return out;
  }
  Matrix conjugate(const Operator<Scalar>& op, const Matrix& rho) const {
    return right(left(op, rho), adjoint(op));
  }

 private:
  int n_;
  Eigen::Index dim_;
  mutable std::map<std::vector<int>, Action> cache_;
};

// A channel as a sequence of steps, each a Kraus set applied to the output of the previous.
template <typename Scalar = cd>
using KrausSet = std::vector<Operator<Scalar>>;
template <typename Scalar = cd>
using Channel = std::vector<KrausSet<Scalar>>;

template <typename Scalar>
MatrixX<Scalar> apply_channel(const ModeSpace<Scalar>& sp, const Channel<Scalar>& ch,
                              const MatrixX<Scalar>& rho) {
  MatrixX<Scalar> cur = rho;
  for (auto& step : ch) {
    MatrixX<Scalar> next = MatrixX<Scalar>::Zero(cur.rows(), cur.cols());
    for (auto& k : step) next += sp.conjugate(k, cur);
    cur = std::move(next);
  }
  return cur;
}

template <typename Scalar>
double trace_norm(const MatrixX<Scalar>& m) {
  double fro = m.norm();
  if (fro * std::sqrt(double(m.rows())) < 1e-13) return fro * std::sqrt(double(m.rows()));
  Eigen::BDCSVD<MatrixX<Scalar>> svd(m);
  return svd.singularValues().sum();
}

// Largest trace-norm output difference over the full monomial basis of the
// mode space. Inputs are unnormalised basis operators.
template <typename Scalar>
double channel_distance(const ModeSpace<Scalar>& sp, const Channel<Scalar>& a,
                        const Channel<Scalar>& b) {
  double worst = 0;
  uint32_t nb = 1u << sp.n_modes();
  for (uint32_t mask = 0; mask < nb; ++mask) {
    Bits s;
    for (int i = 0; i < sp.n_modes(); ++i)
      if (mask >> i & 1) s.flip(i);
    MatrixX<Scalar> rho = sp.dense(Operator<Scalar>{{{Scalar(1), s}}}) / Scalar(double(sp.dim()));
    worst = std::max(worst, trace_norm<Scalar>(apply_channel(sp, a, rho) - apply_channel(sp, b, rho)));
  }
  return worst;
}

// Initialisation I_{a,b} = sum_nu [a^{(1-nu)/2}][pi^{(iab)}_nu] and
// measure-and-correct M_{a,b,c} = sum_mu [(ac)^{(1+mu)/2}][pi^{(iab)}_mu].
template <typename Scalar = cd>
KrausSet<Scalar> init_pair(const Operator<Scalar>& a, const Operator<Scalar>& b) {
  return {projector(iab(a, b), +1), a * projector(iab(a, b), -1)};
}
template <typename Scalar = cd>
KrausSet<Scalar> measure_transfer(const Operator<Scalar>& a, const Operator<Scalar>& b,
                                  const Operator<Scalar>& c) {
  return {(a * c) * projector(iab(a, b), +1), projector(iab(a, b), -1)};
}
template <typename Scalar = cd>
Channel<Scalar> transfer(const Operator<Scalar>& a, const Operator<Scalar>& b, const Operator<Scalar>& c) {
  return {init_pair(b, c), measure_transfer(a, b, c)};
}

// Channel composition: first `first`, then `then`.
template <typename Scalar>
Channel<Scalar> then(Channel<Scalar> first, const Channel<Scalar>& next) {
  first.insert(first.end(), next.begin(), next.end());
  return first;
}

struct CircuitReport {
  Report checks;
  std::map<std::string, double> values;
};

CircuitReport verify_exchange_and_phase();
CircuitReport verify_transfer_circuit();
CircuitReport verify_tgate_circuit();

// Eight-mode stabiliser measurement circuit. flips[k] for k < 4 forces
// the k-th parity outcome to -1, k >= 4 forces the final ancilla outcomes; an
// empty vector sweeps every outcome pattern.
struct StabMeasResult {
  Report checks;
  int patterns_checked = 0;
  int impossible_patterns = 0;
  double worst_distance = 0;
  double total_probability = 0;
};
StabMeasResult simulate_stab_meas_circuit(const std::vector<int>& flips = {});

// Correction U for ancilla outcomes (eta81, eta23, eta45, eta67), data modes 0..7.
std::vector<int> outcome_correction(int eta81, int eta23, int eta45, int eta67);

struct DistillationResult {
  Report checks;
  long accepted = 0;
  long samples = 0;
  double conditional_error = 0;
  double expected = 0;
};
DistillationResult verify_distillation(double p = 0.1, long accepted_target = 100000, uint64_t seed = 7);

CircuitReport verify_encodings();

}  // namespace mcc
