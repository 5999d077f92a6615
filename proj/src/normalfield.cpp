#include "rbez/normalfield.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "rbez/element.hpp"
#include "rbez/errors.hpp"
#include "rbez/multiindex.hpp"

namespace rbez {

namespace {

struct EtaEntry {
  int pos[3];  // position of i_j in the j-th difference set
  int k;       // position of k in the normal index set
  double eta;
};

struct EtaTable {
  std::vector<ElementKind> diff_kinds;  // space of the j-th difference net
  std::vector<EtaEntry> entries;
};

ElementKind difference_kind(const ElementKind& kind, int j) {
  if (kind.is_simplex()) return ElementKind::simplex(kind.dim, kind.simplex_degree() - 1);
  MultiIndex p = kind.degree;
  p[j] -= 1;
  return ElementKind::tensor(p);
}

const EtaTable& eta_table(const ElementKind& kind) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::unique_ptr<EtaTable>> cache;
  std::vector<int> key{static_cast<int>(kind.topology), kind.dim};
  for (int v : kind.degree) key.push_back(v);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (slot) return *slot;

  auto t = std::make_unique<EtaTable>();
  const int d = kind.dim;
  const ElementKind nk = normal_kind(kind);
  const IndexSet& nset = index_set(nk);
  for (int j = 0; j < d; ++j) t->diff_kinds.push_back(difference_kind(kind, j));
  std::vector<const IndexSet*> sets;
  for (int j = 0; j < d; ++j) sets.push_back(&index_set(t->diff_kinds[j]));

  // leading factor p^d (simplex) or prod_j p_j (tensor)
  std::int64_t lead = 1;
  for (int j = 0; j < d; ++j) lead = checked_mul(lead, kind.is_simplex() ? kind.simplex_degree() : kind.degree[j]);

  std::vector<int> pos(d);
  auto rec = [&](auto&& self, int j, const MultiIndex& partial) -> void {
    if (j == d) {
      std::vector<std::pair<ElementKind, MultiIndex>> factors;
      for (int q = 0; q < d; ++q) factors.emplace_back(t->diff_kinds[q], (*sets[q])[pos[q]]);
      SingleBasis sb = product_to_single_basis(factors);
      EtaEntry en{};
      for (int q = 0; q < d; ++q) en.pos[q] = pos[q];
      en.k = nset.position(sb.k);
      Rational eta = Rational::make(checked_mul(lead, sb.ratio.num), sb.ratio.den);
      en.eta = eta.value();
      t->entries.push_back(en);
      return;
    }
    for (std::size_t n = 0; n < sets[j]->size(); ++n) {
      MultiIndex next = partial + (*sets[j])[n];
      // prune on partial sums exceeding the normal degree
      if (nk.is_simplex() ? next.order() > nk.simplex_degree() : !next.dominated_by(nk.degree)) continue;
      pos[j] = static_cast<int>(n);
      self(self, j + 1, next);
    }
  };
  rec(rec, 0, MultiIndex(d));
  slot = std::move(t);
  return *slot;
}

}  // namespace

ElementKind normal_kind(const ElementKind& kind) {
  if (kind.is_simplex()) return ElementKind::simplex(kind.dim, kind.dim * (kind.simplex_degree() - 1));
  MultiIndex q(kind.dim);
  for (int l = 0; l < kind.dim; ++l) q[l] = kind.dim * kind.degree[l] - 1;
  return ElementKind::tensor(q);
}

Vec hodge_normal(const Eigen::MatrixXd& v) {
  const int d = static_cast<int>(v.cols());
  Vec n(d + 1);
  Eigen::MatrixXd minor(d, d);
  for (int i = 0; i <= d; ++i) {
    for (int r = 0, rr = 0; r <= d; ++r) {
      if (r == i) continue;
      minor.row(rr++) = v.row(r);
    }
    // (-1)^{d+1+i} with 1-based i
    const double sign = ((d + i) % 2 == 0) ? 1.0 : -1.0;
    n[i] = sign * minor.determinant();
  }
  return n;
}

BernsteinField normal_coeffs(const RationalElement& e) {
  const ElementKind& kind = e.kind;
  const bool ok = kind.is_simplex() ? kind.simplex_degree() >= 1 : MultiIndex(kind.dim, 1).dominated_by(kind.degree);
  if (!ok)
    throw DomainError("normal field needs degree at least 1 in every direction");
  const int d = kind.dim;
  const BernsteinField net = lift(e);
  const IndexSet& full = index_set(kind);
  const EtaTable& t = eta_table(kind);

  // difference vectors, one matrix per direction
  std::vector<Eigen::MatrixXd> diffs(d);
  for (int j = 0; j < d; ++j) {
    const IndexSet& s = index_set(t.diff_kinds[j]);
    diffs[j].resize(d + 1, static_cast<Eigen::Index>(s.size()));
    const MultiIndex ej = MultiIndex::unit(d, j);
    for (std::size_t n = 0; n < s.size(); ++n) {
      const int hi = full.position(s[n] + ej), lo = full.position(s[n]);
      diffs[j].col(static_cast<Eigen::Index>(n)) = net.coeffs.col(hi) - net.coeffs.col(lo);
    }
  }

  BernsteinField out(normal_kind(kind), d + 1);
  Eigen::MatrixXd v(d + 1, d);
  for (const EtaEntry& en : t.entries) {
    for (int j = 0; j < d; ++j) v.col(j) = diffs[j].col(en.pos[j]);
    out.coeffs.col(en.k) += en.eta * hodge_normal(v);
  }
  return out;
}

DetEvaluator::DetEvaluator(const RationalElement& e) : normal_(normal_coeffs(e)), net_(lift(e)), d_(e.dim()) {}

double DetEvaluator::operator()(const Vec& xi) const {
  eval_basis_all(normal_.kind, xi, bn_);
  eval_basis_all(net_.kind, xi, bx_);
  Vec n = normal_.coeffs * bn_;
  Vec x = net_.coeffs * bx_;
  const double w = x[d_];
  return n.dot(x) / std::pow(w, d_ + 1);
}

double det_jacobian(const RationalElement& e, const Vec& xi) {
  check_reference(e.kind, xi);
  return DetEvaluator(e)(xi);
}

DetRatioBound det_ratio_bound(const RationalElement& e) {
  const BernsteinField n = normal_coeffs(e);
  const BernsteinField net = lift(e);
  const Eigen::MatrixXd dots = n.coeffs.transpose() * net.coeffs;
  DetRatioBound b;
  b.lower_dot = dots.minCoeff();
  b.upper_dot = dots.maxCoeff();
  b.w_min = e.weights.minCoeff();
  b.w_max = e.weights.maxCoeff();
  b.valid = b.lower_dot > 0.0;
  if (b.valid)
    b.bound = std::sqrt(std::pow(b.w_max / b.w_min, e.dim() + 1) * b.upper_dot / b.lower_dot);
  else
    b.bound = std::numeric_limits<double>::infinity();
  return b;
}

}  // namespace rbez
