#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>

namespace ktbrst {

// Symmetric multi-index over the base coordinates: counts how many times each
// coordinate index appears. Comparison is graded-lexicographic (total order
// first, then the count vector), which keeps jet variables of low order in
// front of higher ones.
class MultiIndex {
 public:
  static constexpr int kMaxDim = 8;

  MultiIndex() = default;

  explicit MultiIndex(int dim) : dim_(check_dim(dim)) { counts_.fill(0); }

  static MultiIndex unit(int dim, int coord) {
    MultiIndex m(dim);
    m.bump(coord);
    return m;
  }

  static MultiIndex of(int dim, std::initializer_list<int> coords) {
    MultiIndex m(dim);
    for (int c : coords) m.bump(c);
    return m;
  }

  int dim() const { return dim_; }

  int order() const {
    int total = 0;
    for (int i = 0; i < dim_; ++i) total += counts_[i];
    return total;
  }

  int count(int coord) const {
    range_check(coord);
    return counts_[coord];
  }

  bool empty() const { return order() == 0; }

  MultiIndex plus(int coord) const {
    MultiIndex m = *this;
    m.bump(coord);
    return m;
  }

  MultiIndex plus(const MultiIndex& other) const {
    if (other.dim_ != dim_) throw std::invalid_argument("multi-index dimension mismatch");
    MultiIndex m = *this;
    for (int i = 0; i < dim_; ++i) {
      int c = m.counts_[i] + other.counts_[i];
      if (c > 255) throw std::overflow_error("multi-index count overflow");
      m.counts_[i] = static_cast<std::uint8_t>(c);
    }
    return m;
  }

  // Λ - λ when λ occurs in Λ; used when walking jet towers downward.
  bool try_minus(int coord, MultiIndex* out) const {
    range_check(coord);
    if (counts_[coord] == 0) return false;
    *out = *this;
    out->counts_[coord] -= 1;
    return true;
  }

  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (auto c = a.dim_ <=> b.dim_; c != 0) return c;
    if (auto c = a.order() <=> b.order(); c != 0) return c;
    for (int i = 0; i < a.dim_; ++i)
      if (auto c = a.counts_[i] <=> b.counts_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return (a <=> b) == 0;
  }

  // Calls f(coord) once per occurrence, coordinates ascending.
  template <class F>
  void for_each_coord(F&& f) const {
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < counts_[i]; ++k) f(i);
  }

 private:
  static int check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim)
      throw std::invalid_argument("base dimension out of range");
    return dim;
  }
  void range_check(int coord) const {
    if (coord < 0 || coord >= dim_) throw std::out_of_range("coordinate index out of range");
  }
  void bump(int coord) {
    range_check(coord);
    if (counts_[coord] == 255) throw std::overflow_error("multi-index count overflow");
    counts_[coord] += 1;
  }

  std::int8_t dim_ = 0;
  std::array<std::uint8_t, kMaxDim> counts_{};
};

}  // namespace ktbrst
