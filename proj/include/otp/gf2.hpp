#pragma once

// Exact linear algebra over F2: bit vectors, canonical (RREF) subspace
// bases, uniform subspace sampling, membership and orthogonal complements.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "otp/errors.hpp"
#include "otp/rng.hpp"

namespace otp::gf2 {

class BitVector {
 public:
  BitVector() = default;

  explicit BitVector(std::size_t length)
      : length_(length), words_((length + 63) / 64, 0) {
    if (length == 0) throw InvalidDimension("BitVector length must be >= 1");
  }

  // Bit i of the vector is bit i of `value`.
  static BitVector from_uint(std::uint64_t value, std::size_t length) {
    BitVector v(length);
    for (std::size_t i = 0; i < length && i < 64; ++i) v.set(i, (value >> i) & 1u);
    if (length < 64 && (value >> length) != 0)
      throw DomainError("value does not fit in " + std::to_string(length) + " bits");
    return v;
  }

  // "0110" -> position 0 is the leftmost character.
  static BitVector from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i, true);
      } else if (bits[i] != '0') {
        throw FormatError("bit string may contain only 0 and 1");
      }
    }
    return v;
  }

  static BitVector random(std::size_t length, Rng& rng) {
    BitVector v(length);
    for (auto& w : v.words_) w = rng();
    v.clear_tail();
    return v;
  }

  std::size_t size() const { return length_; }

  bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool bit) {
    const std::uint64_t m = std::uint64_t{1} << (i % 64);
    if (bit) {
      words_[i / 64] |= m;
    } else {
      words_[i / 64] &= ~m;
    }
  }

  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  BitVector& operator^=(const BitVector& other) {
    require_same_length(other);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
    return *this;
  }

  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }

  bool dot(const BitVector& other) const {
    require_same_length(other);
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) acc ^= words_[w] & other.words_[w];
    return std::popcount(acc) & 1;
  }

  bool is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w == 0; });
  }

  std::size_t weight() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  // Index of the first set bit, or size() when zero.
  std::size_t leading_index() const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] != 0) return w * 64 + static_cast<std::size_t>(std::countr_zero(words_[w]));
    }
    return length_;
  }

  std::uint64_t to_uint() const {
    if (length_ > 64) throw CapacityError("BitVector wider than 64 bits");
    return words_.empty() ? 0 : words_[0];
  }

  std::string to_string() const {
    std::string s(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
      if (get(i)) s[i] = '1';
    }
    return s;
  }

  // Appends `other` after the last bit of this vector.
  BitVector concat(const BitVector& other) const {
    BitVector out(length_ + other.length_);
    for (std::size_t i = 0; i < length_; ++i) out.set(i, get(i));
    for (std::size_t i = 0; i < other.length_; ++i) out.set(length_ + i, other.get(i));
    return out;
  }

  BitVector slice(std::size_t offset, std::size_t length) const {
    if (offset + length > length_) throw DimensionMismatch("slice out of range");
    BitVector out(length);
    for (std::size_t i = 0; i < length; ++i) out.set(i, get(offset + i));
    return out;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

  // Lexicographic in bit positions (position 0 most significant).
  friend std::strong_ordering operator<=>(const BitVector& a, const BitVector& b) {
    if (a.length_ != b.length_) return a.length_ <=> b.length_;
    for (std::size_t i = 0; i < a.length_; ++i) {
      if (a.get(i) != b.get(i)) return a.get(i) ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const BitVector& v) { return os << v.to_string(); }

 private:
  void require_same_length(const BitVector& other) const {
    if (other.length_ != length_) {
      throw DimensionMismatch("bit vector lengths differ: " + std::to_string(length_) + " vs " +
                              std::to_string(other.length_));
    }
  }

  void clear_tail() {
    if (length_ % 64 != 0) words_.back() &= (std::uint64_t{1} << (length_ % 64)) - 1;
  }

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

struct BitVectorHash {
  std::size_t operator()(const BitVector& v) const {
    std::uint64_t h = mix64(v.size());
    for (auto w : v.words()) h = mix64(h ^ w);
    return static_cast<std::size_t>(h);
  }
};

class SubspaceBasis;
SubspaceBasis rref(std::vector<BitVector> rows, std::size_t ambient);

// Canonical basis of a subspace of F2^ambient: rows in reduced row-echelon
// form with pivots leftmost, so equal subspaces compare equal.
class SubspaceBasis {
 public:
  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<BitVector>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  friend bool operator==(const SubspaceBasis& a, const SubspaceBasis& b) {
    return a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
  }

  // "λ d" on the first line, then one 0/1 row per line.
  std::string to_text() const {
    std::ostringstream os;
    os << ambient_ << ' ' << rows_.size() << '\n';
    for (const auto& r : rows_) os << r.to_string() << '\n';
    return os.str();
  }

  static SubspaceBasis from_text(std::istream& in) {
    std::size_t ambient = 0, d = 0;
    if (!(in >> ambient >> d)) throw FormatError("basis header must be 'ambient dim'");
    std::vector<BitVector> rows;
    for (std::size_t i = 0; i < d; ++i) {
      std::string s;
      if (!(in >> s)) throw FormatError("basis truncated");
      if (s.size() != ambient) throw FormatError("basis row has wrong length");
      rows.push_back(BitVector::from_string(s));
    }
    SubspaceBasis b = rref(std::move(rows), ambient);
    if (b.dim() != d) throw FormatError("basis rows are linearly dependent");
    return b;
  }

  static SubspaceBasis from_text(const std::string& text) {
    std::istringstream in(text);
    return from_text(in);
  }

 private:
  friend SubspaceBasis rref(std::vector<BitVector> rows, std::size_t ambient);

  std::size_t ambient_ = 0;
  std::vector<BitVector> rows_;
  std::vector<std::size_t> pivots_;
};

inline SubspaceBasis rref(std::vector<BitVector> rows, std::size_t ambient) {
  if (ambient == 0) throw InvalidDimension("ambient dimension must be >= 1");
  for (const auto& r : rows) {
    if (r.size() != ambient) {
      throw DimensionMismatch("row of length " + std::to_string(r.size()) + " in ambient " +
                              std::to_string(ambient));
    }
  }
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;
  for (std::size_t col = 0; col < ambient && rank < rows.size(); ++col) {
    auto it = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                           [col](const BitVector& r) { return r.get(col); });
    if (it == rows.end()) continue;
    std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(rank), it);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i != rank && rows[i].get(col)) rows[i] ^= rows[rank];
    }
    pivots.push_back(col);
    ++rank;
  }
  rows.resize(rank);
  SubspaceBasis b;
  b.ambient_ = ambient;
  b.rows_ = std::move(rows);
  b.pivots_ = std::move(pivots);
  return b;
}

inline SubspaceBasis rref(const std::vector<BitVector>& rows) {
  if (rows.empty()) throw InvalidDimension("cannot infer ambient dimension from no rows");
  return rref(rows, rows.front().size());
}

inline SubspaceBasis zero_subspace(std::size_t ambient) { return rref({}, ambient); }

inline SubspaceBasis full_space(std::size_t ambient) {
  std::vector<BitVector> rows;
  for (std::size_t i = 0; i < ambient; ++i) {
    BitVector e(ambient);
    e.set(i, true);
    rows.push_back(std::move(e));
  }
  return rref(std::move(rows), ambient);
}

// Uniform over d-dimensional subspaces: every subspace has the same number of
// ordered full-rank generating d-tuples, so rejection-sampling a full-rank
// d×λ matrix and canonicalizing is exact.
inline SubspaceBasis sample_uniform_subspace(std::size_t ambient, std::size_t d, Rng& rng) {
  if (d > ambient) {
    throw InvalidDimension("subspace dimension " + std::to_string(d) + " exceeds ambient " +
                           std::to_string(ambient));
  }
  while (true) {
    std::vector<BitVector> rows;
    rows.reserve(d);
    for (std::size_t i = 0; i < d; ++i) rows.push_back(BitVector::random(ambient, rng));
    SubspaceBasis b = rref(std::move(rows), ambient);
    if (b.dim() == d) return b;
  }
}

inline bool contains(const SubspaceBasis& a, const BitVector& v) {
  if (v.size() != a.ambient()) {
    throw DimensionMismatch("vector of length " + std::to_string(v.size()) + " vs ambient " +
                            std::to_string(a.ambient()));
  }
  BitVector r = v;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (r.get(a.pivots()[i])) r ^= a.rows()[i];
  }
  return r.is_zero();
}

// A^⊥ = {b : b·a = 0 for all a in A}. One kernel vector per free column.
inline SubspaceBasis orthogonal_complement(const SubspaceBasis& a) {
  const std::size_t n = a.ambient();
  std::vector<bool> is_pivot(n, false);
  for (auto p : a.pivots()) is_pivot[p] = true;
  std::vector<BitVector> kernel;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    BitVector v(n);
    v.set(free, true);
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (a.rows()[i].get(free)) v.set(a.pivots()[i], true);
    }
    kernel.push_back(std::move(v));
  }
  return rref(std::move(kernel), n);
}

inline constexpr std::size_t kMaxEnumerationDim = 20;

// Element with coefficient mask `k`: XOR of rows whose bit is set in k.
inline BitVector element_at(const SubspaceBasis& a, std::uint64_t k) {
  BitVector v(a.ambient());
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if ((k >> i) & 1u) v ^= a.rows()[i];
  }
  return v;
}

inline std::vector<BitVector> enumerate_elements(const SubspaceBasis& a) {
  if (a.dim() > kMaxEnumerationDim) {
    throw CapacityError("refusing to enumerate 2^" + std::to_string(a.dim()) + " elements");
  }
  std::vector<BitVector> out;
  out.reserve(std::size_t{1} << a.dim());
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << a.dim()); ++k) out.push_back(element_at(a, k));
  return out;
}

inline BitVector sample_element(const SubspaceBasis& a, Rng& rng) {
  BitVector v(a.ambient());
  for (const auto& row : a.rows()) {
    if (coin(rng)) v ^= row;
  }
  return v;
}

}  // namespace otp::gf2

template <>
struct std::hash<otp::gf2::BitVector> : otp::gf2::BitVectorHash {};
