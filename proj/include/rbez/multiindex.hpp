#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "rbez/types.hpp"

namespace rbez {

enum class IndexSetType { simplex_cartesian, simplex_barycentric, tensor, box };

struct IndexSetSpec {
  IndexSetType type = IndexSetType::simplex_cartesian;
  int p = 0;         // simplex degree
  int d = 2;         // simplex dimension
  MultiIndex bound;  // tensor degree or box extent

  static IndexSetSpec simplex_cartesian(int p, int d) { return {IndexSetType::simplex_cartesian, p, d, {}}; }
  static IndexSetSpec simplex_barycentric(int p, int d) {
    return {IndexSetType::simplex_barycentric, p, d, {}};
  }
  static IndexSetSpec tensor(const MultiIndex& p) { return {IndexSetType::tensor, 0, p.size(), p}; }
  static IndexSetSpec box(const MultiIndex& alpha) { return {IndexSetType::box, 0, alpha.size(), alpha}; }
};

class IndexSet {
 public:
  explicit IndexSet(const IndexSetSpec& spec);

  const IndexSetSpec& spec() const { return spec_; }
  const std::vector<MultiIndex>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const MultiIndex& operator[](std::size_t n) const { return members_[n]; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  // position of i in canonical order, -1 when absent
  int position(const MultiIndex& i) const;
  bool contains(const MultiIndex& i) const { return position(i) >= 0; }

 private:
  IndexSetSpec spec_;
  std::vector<MultiIndex> members_;
  int radix_ = 1;
  std::vector<int> lookup_;
};

IndexSet enumerate(const IndexSetSpec& spec);

// Shared cached index set of a Bernstein space (Cartesian form for simplices).
const IndexSet& index_set(const ElementKind& kind);

// Scalar helpers, exact in 64-bit arithmetic; overflow throws.
std::int64_t factorial(int n);
std::int64_t binomial(int n, int k);
// n! / (k_1! ... k_m!) with |k| <= n (the remaining entry is n - |k|)
std::int64_t multichoose(int n, const MultiIndex& k);
// prod_j binomial(n_j, k_j) with k <= n componentwise
std::int64_t multichoose(const MultiIndex& n, const MultiIndex& k);

MultiIndex to_barycentric(const MultiIndex& i, int p);
MultiIndex to_cartesian(const MultiIndex& bary);

// All (i_1..i_k) >= 0 with sum i_m = j and sum m*i_m = k.
std::vector<std::vector<int>> composition_pairs(int j, int k);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t n, std::int64_t d);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
};

std::int64_t checked_mul(std::int64_t a, std::int64_t b);

}  // namespace rbez
