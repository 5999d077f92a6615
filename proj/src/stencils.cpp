#include "rbez/stencils.hpp"

#include <cmath>

#include "rbez/element.hpp"
#include "rbez/errors.hpp"
#include "rbez/multiindex.hpp"

namespace rbez {

std::vector<MultiIndex> alphas_of_order(int d, int k) {
  std::vector<MultiIndex> out;
  for (const auto& a : IndexSet(IndexSetSpec::simplex_cartesian(k, d)))
    if (a.order() == k) out.push_back(a);
  return out;
}

Stencil make_stencil(const ElementKind& kind, const MultiIndex& alpha) {
  if (alpha.size() != kind.dim || !alpha.nonnegative()) throw DomainError("derivative order " + alpha.str() + " does not match dimension");
  Stencil s;
  s.alpha = alpha;
  const int k = alpha.order();
  if (kind.is_simplex()) {
    const int p = kind.simplex_degree();
    if (k > p) {
      s.zero_by_degree = true;
      s.support = ElementKind::simplex(kind.dim, 0);
      return s;
    }
    s.scale = factorial(p) / factorial(p - k);
    s.support = ElementKind::simplex(kind.dim, p - k);
  } else {
    if (!alpha.dominated_by(kind.degree)) {
      s.zero_by_degree = true;
      s.support = ElementKind::tensor(MultiIndex(kind.dim, 0));
      return s;
    }
    s.scale = 1;
    for (int j = 0; j < kind.dim; ++j) s.scale = checked_mul(s.scale, factorial(kind.degree[j]) / factorial(kind.degree[j] - alpha[j]));
    s.support = ElementKind::tensor(kind.degree - alpha);
  }
  for (const auto& j : IndexSet(IndexSetSpec::box(alpha))) {
    const std::int64_t sign = ((k + j.order()) % 2 == 0) ? 1 : -1;
    s.taps.emplace_back(j, sign * multichoose(alpha, j));
  }
  return s;
}

BernsteinField derivative_field(const BernsteinField& f, const MultiIndex& alpha) {
  const Stencil s = make_stencil(f.kind, alpha);
  BernsteinField out(s.support, f.values_dim());
  if (s.zero_by_degree) return out;
  const IndexSet& full = f.indices();
  const IndexSet& sup = index_set(s.support);
  for (std::size_t n = 0; n < sup.size(); ++n) {
    auto col = out.coeffs.col(static_cast<Eigen::Index>(n));
    for (const auto& [j, c] : s.taps) col += static_cast<double>(c) * f.coeffs.col(full.position(sup[n] + j));
    col *= static_cast<double>(s.scale);
  }
  return out;
}

BernsteinField derivative_field(const RationalElement& e, const MultiIndex& alpha) {
  return derivative_field(lift(e), alpha);
}

double coefficient_bound(const BernsteinField& f) {
  if (f.coeffs.cols() == 0) return 0.0;
  return f.coeffs.colwise().norm().maxCoeff();
}

double derivative_bound(const RationalElement& e, const MultiIndex& alpha) {
  return coefficient_bound(derivative_field(e, alpha));
}

bool derivative_vanishes(const RationalElement& e, const MultiIndex& alpha) { return derivative_bound(e, alpha) == 0.0; }

double sampled_sup(const BernsteinField& f, const std::vector<Vec>& points) {
  double m = 0.0;
  Eigen::VectorXd b;
  for (const Vec& x : points) {
    eval_basis_all(f.kind, x, b);
    m = std::max(m, (f.coeffs * b).norm());
  }
  return m;
}

BoundPair scaled_derivative_metric(const RationalElement& e, const MultiIndex& alpha, const std::vector<Vec>& points) {
  const double h = proxy(e).h;
  const BernsteinField f = derivative_field(e, alpha);
  const double s = std::pow(h, -alpha.order());
  return {s * sampled_sup(f, points), s * coefficient_bound(f)};
}

}  // namespace rbez
