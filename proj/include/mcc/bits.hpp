#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace mcc {

// Growable bitset over mode indices. Words beyond the stored range read as zero.
class Bits {
 public:
  Bits() = default;
  explicit Bits(size_t n) : w_((n + 63) / 64, 0) {}
  Bits(std::initializer_list<int> idx) {
    for (int i : idx) flip(i);
  }
  static Bits of(const std::vector<int>& idx) {
    Bits b;
    for (int i : idx) b.flip(i);
    return b;
  }

  bool get(size_t i) const {
    size_t k = i >> 6;
    return k < w_.size() && ((w_[k] >> (i & 63)) & 1);
  }
  void set(size_t i, bool v = true) {
    grow(i + 1);
    if (v) w_[i >> 6] |= uint64_t{1} << (i & 63);
    else w_[i >> 6] &= ~(uint64_t{1} << (i & 63));
  }
  void flip(size_t i) {
    grow(i + 1);
    w_[i >> 6] ^= uint64_t{1} << (i & 63);
  }

  Bits& operator^=(const Bits& o) {
    if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
    for (size_t k = 0; k < o.w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    if (o.w_.size() > w_.size()) w_.resize(o.w_.size(), 0);
    for (size_t k = 0; k < o.w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }
  friend Bits operator^(Bits a, const Bits& b) { return a ^= b; }
  Bits operator&(const Bits& o) const {
    Bits r;
    size_t n = std::min(w_.size(), o.w_.size());
    r.w_.resize(n);
    for (size_t k = 0; k < n; ++k) r.w_[k] = w_[k] & o.w_[k];
    return r;
  }

  size_t count() const {
    size_t c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }
  size_t and_count(const Bits& o) const {
    size_t c = 0, n = std::min(w_.size(), o.w_.size());
    for (size_t k = 0; k < n; ++k) c += std::popcount(w_[k] & o.w_[k]);
    return c;
  }
  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }
  bool none() const { return !any(); }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (size_t k = 0; k < w_.size(); ++k)
      for (uint64_t x = w_[k]; x; x &= x - 1) out.push_back(int(k * 64 + std::countr_zero(x)));
    return out;
  }

  bool operator==(const Bits& o) const {
    size_t n = std::max(w_.size(), o.w_.size());
    for (size_t k = 0; k < n; ++k)
      if (word(k) != o.word(k)) return false;
    return true;
  }

  uint64_t word(size_t k) const { return k < w_.size() ? w_[k] : 0; }
  size_t num_words() const { return w_.size(); }
  // Highest set index + 1, or 0.
  size_t extent() const {
    for (size_t k = w_.size(); k-- > 0;)
      if (w_[k]) return k * 64 + 64 - std::countl_zero(w_[k]);
    return 0;
  }

 private:
  void grow(size_t n) {
    size_t need = (n + 63) / 64;
    if (need > w_.size()) w_.resize(need, 0);
  }
  std::vector<uint64_t> w_;
};

}  // namespace mcc
