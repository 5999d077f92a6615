#pragma once

#include <random>

#include "rbez/element.hpp"
#include "rbez/family.hpp"
#include "rbez/types.hpp"

namespace testing {

using namespace rbez;

inline Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) out[k++] = x;
  return out;
}

// Perturbed canonical lattice, rotated and stretched, weights in [0.5, 2].
inline RationalElement random_element(const ElementKind& kind, std::mt19937_64& rng, double amp = 0.25) {
  const int d = kind.dim;
  std::uniform_real_distribution<double> unit(-1.0, 1.0), wdist(0.5, 2.0), sdist(0.5, 2.0);
  Eigen::MatrixXd R(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) R(r, c) = unit(rng);
  Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(R).householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  for (int j = 0; j < d; ++j) A(j, j) = sdist(rng);
  A = Q * A;
  const auto lat = lattice_points(kind);
  const double a = amp / kind.max_degree();
  RationalElement e{kind, Eigen::MatrixXd(d, static_cast<Eigen::Index>(lat.size())),
                    Eigen::VectorXd(static_cast<Eigen::Index>(lat.size()))};
  for (std::size_t n = 0; n < lat.size(); ++n) {
    Vec x = lat[n];
    for (int j = 0; j < d; ++j) x[j] += a * unit(rng);
    e.points.col(static_cast<Eigen::Index>(n)) = A * x;
    e.weights[static_cast<Eigen::Index>(n)] = wdist(rng);
  }
  return e;
}

inline Vec random_point(const ElementKind& kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec xi(kind.dim);
  while (true) {
    double s = 0.0;
    for (int j = 0; j < kind.dim; ++j) s += (xi[j] = u(rng));
    if (!kind.is_simplex() || s < 1.0) return xi;
  }
}

// Quadratic quarter-annulus quad between radii ri and ro (exact circles).
inline RationalElement quarter_annulus(double ri = 1.0, double ro = 2.0) {
  const ElementKind k = ElementKind::tensor_uniform(2, 2);
  const IndexSet& set = index_set(k);
  const double s = std::sqrt(0.5);
  const Vec q[3] = {v({1, 0}), v({1, 1}), v({0, 1})};
  const double wq[3] = {1.0, s, 1.0};
  const double rho[3] = {ri, 0.5 * (ri + ro), ro};
  RationalElement e{k, Eigen::MatrixXd(2, 9), Eigen::VectorXd(9)};
  for (std::size_t n = 0; n < set.size(); ++n) {
    const auto c = static_cast<Eigen::Index>(n);
    e.points.col(c) = rho[set[n][0]] * q[set[n][1]];
    e.weights[c] = wq[set[n][1]];
  }
  return e;
}

// x = A i + b over the control indices i; exact in floating point for
// integer A and b.
inline RationalElement integer_affine(const ElementKind& kind, const Eigen::MatrixXd& A, const Vec& b) {
  const IndexSet& set = index_set(kind);
  RationalElement e{kind, Eigen::MatrixXd(kind.dim, static_cast<Eigen::Index>(set.size())),
                    Eigen::VectorXd::Ones(static_cast<Eigen::Index>(set.size()))};
  for (std::size_t n = 0; n < set.size(); ++n) {
    Vec i(kind.dim);
    for (int j = 0; j < kind.dim; ++j) i[j] = set[n][j];
    e.points.col(static_cast<Eigen::Index>(n)) = A * i + b;
  }
  return e;
}

inline Mesh single(const RationalElement& e, bool all_fixed = false) {
  Mesh m;
  m.kind = e.kind;
  m.elements.push_back(e);
  m.fixed.emplace_back(static_cast<std::size_t>(e.size()), all_fixed);
  return m;
}

}  // namespace testing
