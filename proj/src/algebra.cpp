#include "mcc/algebra.hpp"

#include <bit>
#include <sstream>
#include <stdexcept>

namespace mcc {

namespace {

// Number of pairs (i in a, j in b) with i > j.
size_t inversions(const Bits& a, const Bits& b) {
  size_t n = std::max(a.num_words(), b.num_words());
  size_t above = 0, total = 0;
  for (size_t k = n; k-- > 0;) {
    uint64_t wa = a.word(k), wb = b.word(k);
    for (uint64_t x = wb; x; x &= x - 1) {
      int j = std::countr_zero(x);
      uint64_t higher = j == 63 ? 0 : (wa >> (j + 1));
      total += above + std::popcount(higher);
    }
    above += std::popcount(wa);
  }
  return total;
}

}  // namespace

std::string Monomial::str() const {
  static const char* ph[] = {"+", "+i", "-", "-i"};
  std::ostringstream os;
  os << ph[phase & 3];
  auto idx = support.indices();
  if (idx.empty()) os << "1";
  for (size_t k = 0; k < idx.size(); ++k) os << (k ? " c" : "c") << idx[k];
  return os.str();
}

Monomial mono_mul(const Monomial& a, const Monomial& b) {
  size_t swaps = inversions(a.support, b.support);
  return {a.support ^ b.support, int((a.phase + b.phase + 2 * (swaps & 1)) & 3)};
}

Monomial ordered_product(const std::vector<int>& modes) {
  Monomial m;
  for (int i : modes) m = mono_mul(m, Monomial::mode(i));
  return m;
}

int hermitian_phase(size_t support_size) {
  if (support_size % 2) throw std::invalid_argument("hermitian_phase: odd support size");
  return int((support_size / 2) % 4);
}

Monomial hermitian(const Bits& support) {
  size_t m = support.count();
  int k = m % 2 == 0 ? hermitian_phase(m) : int((m * (m - 1) / 2) % 2);
  return {support, k};
}

bool commutes(const Monomial& a, const Monomial& b) {
  size_t na = a.weight(), nb = b.weight(), ov = a.support.and_count(b.support);
  return ((na * nb - ov) & 1) == 0;
}

size_t gf2_rank(std::vector<Bits> rows) {
  size_t rank = 0;
  for (size_t r = 0; r < rows.size(); ++r) {
    size_t piv = rows[r].extent();
    if (!piv) continue;
    --piv;
    ++rank;
    for (size_t s = r + 1; s < rows.size(); ++s)
      if (rows[s].get(piv)) rows[s] ^= rows[r];
  }
  return rank;
}

bool gf2_solve(const std::vector<Bits>& rows, const Bits& target, std::vector<int>* combo) {
  // Reduced rows carry the set of original rows they are built from.
  std::vector<Bits> basis, tags;
  std::vector<size_t> pivots;
  for (size_t r = 0; r < rows.size(); ++r) {
    Bits v = rows[r], t;
    t.flip(r);
    for (size_t k = 0; k < basis.size(); ++k)
      if (v.get(pivots[k])) v ^= basis[k], t ^= tags[k];
    size_t e = v.extent();
    if (!e) continue;
    basis.push_back(v);
    tags.push_back(t);
    pivots.push_back(e - 1);
  }
  Bits v = target, t;
  for (size_t k = 0; k < basis.size(); ++k)
    if (v.get(pivots[k])) v ^= basis[k], t ^= tags[k];
  if (v.any()) return false;
  if (combo) *combo = t.indices();
  return true;
}

}  // namespace mcc
