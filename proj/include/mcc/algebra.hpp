#pragma once

#include <string>
#include <vector>

#include "mcc/bits.hpp"

namespace mcc {

// i^phase times the ascending-index product of the Majorana operators in support.
struct Monomial {
  Bits support;
  int phase = 0;

  static Monomial mode(int i) { return {Bits{i}, 0}; }
  static Monomial scalar(int phase) { return {Bits{}, phase & 3}; }
  size_t weight() const { return support.count(); }
  bool is_scalar() const { return support.none(); }
  bool operator==(const Monomial& o) const { return phase == o.phase && support == o.support; }
  std::string str() const;
};

Monomial mono_mul(const Monomial& a, const Monomial& b);
inline Monomial operator*(const Monomial& a, const Monomial& b) { return mono_mul(a, b); }

// Product of single modes taken in the given (not necessarily sorted) order.
Monomial ordered_product(const std::vector<int>& modes);

// k with i^k * prod c_i Hermitian, for even-size supports. Throws on odd size.
int hermitian_phase(size_t support_size);
// Hermitian representative for any support size. Even sizes use hermitian_phase,
// odd sizes take k = m(m-1)/2 mod 2.
Monomial hermitian(const Bits& support);

bool commutes(const Monomial& a, const Monomial& b);

size_t gf2_rank(std::vector<Bits> rows);

// Solve sum_j x_j rows[j] = target over GF(2); combo receives the chosen row indices.
bool gf2_solve(const std::vector<Bits>& rows, const Bits& target, std::vector<int>* combo);

}  // namespace mcc
