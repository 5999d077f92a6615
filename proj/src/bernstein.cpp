#include "rbez/bernstein.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "rbez/errors.hpp"

namespace rbez {

namespace {

constexpr double kDomainTol = 1e-12;

// Per-space data for fast simplex evaluation: barycentric exponents and
// multinomial coefficients in canonical order.
struct SimplexTable {
  int d = 0, p = 0;
  std::vector<int> bary;  // N x (d+1)
  std::vector<double> coef;
};

const SimplexTable& simplex_table(const ElementKind& kind) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<SimplexTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{kind.dim, kind.simplex_degree()}];
  if (!slot) {
    auto t = std::make_unique<SimplexTable>();
    t->d = kind.dim;
    t->p = kind.simplex_degree();
    for (const auto& i : IndexSet(IndexSetSpec::simplex_cartesian(t->p, t->d))) {
      MultiIndex b = to_barycentric(i, t->p);
      for (int v : b) t->bary.push_back(v);
      t->coef.push_back(static_cast<double>(multichoose(t->p, i)));
    }
    slot = std::move(t);
  }
  return *slot;
}

// clamp to the closed domain after the tolerance check
Vec clamp_reference(const ElementKind& kind, const Vec& xi) {
  Vec x = xi;
  for (int j = 0; j < x.size(); ++j) x[j] = std::max(0.0, x[j]);
  if (kind.is_simplex()) {
    double s = x.sum();
    if (s > 1.0) x /= s;
  } else {
    for (int j = 0; j < x.size(); ++j) x[j] = std::min(1.0, x[j]);
  }
  return x;
}

double univariate(int p, int i, double t) {
  return static_cast<double>(binomial(p, i)) * std::pow(t, i) * std::pow(1.0 - t, p - i);
}

}  // namespace

BernsteinField::BernsteinField(const ElementKind& k, int values_dim)
    : kind(k), coeffs(Eigen::MatrixXd::Zero(values_dim, static_cast<Eigen::Index>(index_set(k).size()))) {}

Eigen::VectorXd BernsteinField::coeff(const MultiIndex& i) const {
  int n = indices().position(i);
  if (n < 0) throw DomainError("index " + i.str() + " not in field index set");
  return coeffs.col(n);
}

bool in_reference(const ElementKind& kind, const Vec& xi) {
  if (xi.size() != kind.dim) return false;
  for (int j = 0; j < xi.size(); ++j) {
    if (!std::isfinite(xi[j]) || xi[j] < -kDomainTol) return false;
    if (!kind.is_simplex() && xi[j] > 1.0 + kDomainTol) return false;
  }
  if (kind.is_simplex() && xi.sum() > 1.0 + kDomainTol) return false;
  return true;
}

void check_reference(const ElementKind& kind, const Vec& xi) {
  if (!in_reference(kind, xi)) throw DomainError("point outside the reference element");
}

double eval_basis(const ElementKind& kind, const MultiIndex& i, const Vec& xi) {
  check_reference(kind, xi);
  Vec x = clamp_reference(kind, xi);
  if (kind.is_simplex()) {
    const int p = kind.simplex_degree();
    if (i.size() != kind.dim || !i.nonnegative() || i.order() > p) throw DomainError("index " + i.str() + " not in basis");
    MultiIndex b = to_barycentric(i, p);
    double v = static_cast<double>(multichoose(p, i));
    for (int j = 0; j < kind.dim; ++j) v *= std::pow(x[j], b[j]);
    return v * std::pow(std::max(0.0, 1.0 - x.sum()), b[kind.dim]);
  }
  if (i.size() != kind.dim || !i.nonnegative() || !i.dominated_by(kind.degree))
    throw DomainError("index " + i.str() + " not in basis");
  double v = 1.0;
  for (int j = 0; j < kind.dim; ++j) v *= univariate(kind.degree[j], i[j], x[j]);
  return v;
}

void eval_basis_all(const ElementKind& kind, const Vec& xi_in, Eigen::VectorXd& out) {
  const int d = kind.dim;
  Vec xi = clamp_reference(kind, xi_in);
  if (kind.is_simplex()) {
    const SimplexTable& t = simplex_table(kind);
    const int p = t.p;
    double pw[4][32];
    double lam[4];
    for (int j = 0; j < d; ++j) lam[j] = xi[j];
    lam[d] = std::max(0.0, 1.0 - xi.sum());
    for (int j = 0; j <= d; ++j) {
      pw[j][0] = 1.0;
      for (int e = 1; e <= p; ++e) pw[j][e] = pw[j][e - 1] * lam[j];
    }
    const std::size_t n = t.coef.size();
    out.resize(static_cast<Eigen::Index>(n));
    const int* b = t.bary.data();
    for (std::size_t m = 0; m < n; ++m, b += d + 1) {
      double v = t.coef[m];
      for (int j = 0; j <= d; ++j) v *= pw[j][b[j]];
      out[static_cast<Eigen::Index>(m)] = v;
    }
    return;
  }
  // tensor: univariate tables per direction, then products in canonical order
  double uni[3][32];
  for (int j = 0; j < d; ++j) {
    const int p = kind.degree[j];
    const double t = xi[j], s = 1.0 - t;
    double tp[32], sp[32];
    tp[0] = sp[0] = 1.0;
    for (int e = 1; e <= p; ++e) {
      tp[e] = tp[e - 1] * t;
      sp[e] = sp[e - 1] * s;
    }
    double c = 1.0;
    for (int i = 0; i <= p; ++i) {
      uni[j][i] = c * tp[i] * sp[p - i];
      c = c * (p - i) / (i + 1);
    }
  }
  const MultiIndex& p = kind.degree;
  out.resize(static_cast<Eigen::Index>(index_set(kind).size()));
  Eigen::Index m = 0;
  if (d == 1) {
    for (int a = 0; a <= p[0]; ++a) out[m++] = uni[0][a];
  } else if (d == 2) {
    for (int a = 0; a <= p[0]; ++a)
      for (int b = 0; b <= p[1]; ++b) out[m++] = uni[0][a] * uni[1][b];
  } else {
    for (int a = 0; a <= p[0]; ++a)
      for (int b = 0; b <= p[1]; ++b) {
        const double ab = uni[0][a] * uni[1][b];
        for (int c = 0; c <= p[2]; ++c) out[m++] = ab * uni[2][c];
      }
  }
}

Eigen::VectorXd eval_basis_all(const ElementKind& kind, const Vec& xi) {
  check_reference(kind, xi);
  Eigen::VectorXd out;
  eval_basis_all(kind, xi, out);
  return out;
}

Vec eval_field_with(const BernsteinField& f, const Eigen::VectorXd& basis) { return f.coeffs * basis; }

Vec eval_field(const BernsteinField& f, const Vec& xi) {
  check_reference(f.kind, xi);
  Eigen::VectorXd b;
  eval_basis_all(f.kind, xi, b);
  return f.coeffs * b;
}

SingleBasis product_to_single_basis(const std::vector<std::pair<ElementKind, MultiIndex>>& factors) {
  if (factors.empty()) throw DomainError("empty factor list");
  const ElementKind& k0 = factors.front().first;
  const int d = k0.dim;
  MultiIndex k(d);
  std::int64_t num = 1;
  SingleBasis out;
  if (k0.is_simplex()) {
    int total = 0;
    for (const auto& [kind, i] : factors) {
      if (!kind.is_simplex() || kind.dim != d) throw DomainError("incompatible factor spaces");
      total += kind.simplex_degree();
      k += i;
      num = checked_mul(num, multichoose(kind.simplex_degree(), i));
    }
    out.kind = ElementKind::simplex(d, total);
    out.k = k;
    out.ratio = Rational::make(num, multichoose(total, k));
    return out;
  }
  MultiIndex total(d);
  for (const auto& [kind, i] : factors) {
    if (kind.is_simplex() || kind.dim != d) throw DomainError("incompatible factor spaces");
    total += kind.degree;
    k += i;
    num = checked_mul(num, multichoose(kind.degree, i));
  }
  out.kind = ElementKind::tensor(total);
  out.k = k;
  out.ratio = Rational::make(num, multichoose(total, k));
  return out;
}

}  // namespace rbez
