#pragma once

// Plain data types shared by every module.  Header-only so that the test
// oracles can consume elements without linking the library.

#include <algorithm>
#include <array>
#include <cassert>
#include <compare>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rbez {

// Point in R^n with n <= 4, stored inline.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, 4, 1>;

class MultiIndex {
 public:
  static constexpr int kMaxLength = 4;

  MultiIndex() = default;
  explicit MultiIndex(int length, int fill = 0) : n_(length) {
    assert(length >= 0 && length <= kMaxLength);
    v_.fill(0);
    for (int j = 0; j < n_; ++j) v_[j] = fill;
  }
  MultiIndex(std::initializer_list<int> entries) : n_(static_cast<int>(entries.size())) {
    assert(n_ <= kMaxLength);
    v_.fill(0);
    std::copy(entries.begin(), entries.end(), v_.begin());
  }

  int size() const { return n_; }
  int operator[](int j) const { return v_[j]; }
  int& operator[](int j) { return v_[j]; }
  const int* begin() const { return v_.data(); }
  const int* end() const { return v_.data() + n_; }

  int order() const {
    int s = 0;
    for (int j = 0; j < n_; ++j) s += v_[j];
    return s;
  }
  int max_entry() const {
    int m = 0;
    for (int j = 0; j < n_; ++j) m = std::max(m, v_[j]);
    return m;
  }

  static MultiIndex unit(int length, int j) {
    MultiIndex e(length);
    e[j] = 1;
    return e;
  }

  MultiIndex& operator+=(const MultiIndex& o) {
    for (int j = 0; j < n_; ++j) v_[j] += o.v_[j];
    return *this;
  }
  MultiIndex& operator-=(const MultiIndex& o) {
    for (int j = 0; j < n_; ++j) v_[j] -= o.v_[j];
    return *this;
  }
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }

  // componentwise a <= b
  bool dominated_by(const MultiIndex& b) const {
    for (int j = 0; j < n_; ++j)
      if (v_[j] > b.v_[j]) return false;
    return true;
  }
  bool nonnegative() const {
    for (int j = 0; j < n_; ++j)
      if (v_[j] < 0) return false;
    return true;
  }

  // First differing entry decides; shorter indices sort first.
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    for (int j = 0; j < a.n_; ++j)
      if (a.v_[j] != b.v_[j]) return a.v_[j] <=> b.v_[j];
    return std::strong_ordering::equal;
  }
  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return (a <=> b) == std::strong_ordering::equal;
  }

  std::string str() const {
    std::string s = "(";
    for (int j = 0; j < n_; ++j) {
      if (j) s += ",";
      s += std::to_string(v_[j]);
    }
    return s + ")";
  }

 private:
  std::array<int, kMaxLength> v_{};
  int n_ = 0;
};

enum class Topology { simplex, tensor };

inline const char* topology_name(Topology t) { return t == Topology::simplex ? "simplex" : "tensor"; }

// Topology, dimension and degree of a Bernstein space.  Simplex degree is a
// scalar stored as a length-1 index; tensor degree has one entry per direction.
struct ElementKind {
  Topology topology = Topology::simplex;
  int dim = 2;
  MultiIndex degree{1};

  static ElementKind simplex(int d, int p) { return {Topology::simplex, d, MultiIndex{p}}; }
  static ElementKind tensor(const MultiIndex& p) { return {Topology::tensor, p.size(), p}; }
  static ElementKind tensor_uniform(int d, int p) { return tensor(MultiIndex(d, p)); }

  bool is_simplex() const { return topology == Topology::simplex; }
  int simplex_degree() const { return degree[0]; }
  // largest total degree of any basis function
  int total_degree() const { return is_simplex() ? degree[0] : degree.order(); }
  int max_degree() const { return degree.max_entry(); }

  friend bool operator==(const ElementKind& a, const ElementKind& b) {
    return a.topology == b.topology && a.dim == b.dim && a.degree == b.degree;
  }
};

// Control net of a rational element.  Column c of `points` and entry c of
// `weights` belong to the c-th index of the canonical index set.
struct RationalElement {
  ElementKind kind;
  Eigen::MatrixXd points;   // dim x N
  Eigen::VectorXd weights;  // N

  int dim() const { return kind.dim; }
  int size() const { return static_cast<int>(weights.size()); }
};

struct Mesh {
  ElementKind kind;
  std::vector<RationalElement> elements;
  std::vector<std::vector<bool>> fixed;  // per element, per control point

  int dim() const { return kind.dim; }
  std::size_t size() const { return elements.size(); }
};

}  // namespace rbez
