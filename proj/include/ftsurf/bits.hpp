#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

namespace ftsurf {

/// Dense GF(2) vector.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool v = true) {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v) {
      words_[i >> 6] |= m;
    } else {
      words_[i >> 6] &= ~m;
    }
  }
  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend bool operator==(const BitVec&, const BitVec&) = default;

  bool any() const {
    for (auto w : words_) {
      if (w) return true;
    }
    return false;
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  /// Index of the lowest set bit, or size() when empty.
  std::size_t first() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w]) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return n_;
  }
  std::vector<std::uint32_t> ones() const {
    std::vector<std::uint32_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t v = words_[w];
      while (v) {
        out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(v)));
        v &= v - 1;
      }
    }
    return out;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Incrementally maintained GF(2) row basis in reduced echelon form.
class Gf2Basis {
 public:
  explicit Gf2Basis(std::size_t width) : width_(width) {}

  /// Reduces v against the basis; the result is a canonical coset representative.
  BitVec reduce(BitVec v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (v.get(pivots_[i])) v ^= rows_[i];
    }
    return v;
  }
  /// Adds v; returns false when v was already in the span.
  bool insert(const BitVec& v) {
    BitVec r = reduce(v);
    const std::size_t p = r.first();
    if (p == width_) return false;
    for (auto& row : rows_) {
      if (row.get(p)) row ^= r;
    }
    rows_.push_back(std::move(r));
    pivots_.push_back(p);
    return true;
  }
  bool contains(const BitVec& v) const { return !reduce(v).any(); }
  std::size_t rank() const { return rows_.size(); }
  std::size_t width() const { return width_; }

 private:
  std::size_t width_;
  std::vector<BitVec> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace ftsurf
