#pragma once

#include <utility>
#include <vector>

#include "rbez/multiindex.hpp"
#include "rbez/types.hpp"

namespace rbez {

// R^m-valued polynomial in Bernstein form; column n of coeffs belongs to the
// n-th member of index_set(kind).
struct BernsteinField {
  ElementKind kind;
  Eigen::MatrixXd coeffs;  // m x N

  BernsteinField() = default;
  BernsteinField(const ElementKind& k, int values_dim);

  int values_dim() const { return static_cast<int>(coeffs.rows()); }
  const IndexSet& indices() const { return index_set(kind); }
  Eigen::VectorXd coeff(const MultiIndex& i) const;
};

// True when xi lies in the closed reference element (tolerance 1e-12).
bool in_reference(const ElementKind& kind, const Vec& xi);
// Throws DomainError outside the reference element.
void check_reference(const ElementKind& kind, const Vec& xi);

double eval_basis(const ElementKind& kind, const MultiIndex& i, const Vec& xi);
// All basis values in canonical order.
void eval_basis_all(const ElementKind& kind, const Vec& xi, Eigen::VectorXd& out);
Eigen::VectorXd eval_basis_all(const ElementKind& kind, const Vec& xi);

Vec eval_field(const BernsteinField& f, const Vec& xi);
// No domain check; `basis` must hold eval_basis_all(f.kind, xi).
Vec eval_field_with(const BernsteinField& f, const Eigen::VectorXd& basis);

struct SingleBasis {
  ElementKind kind;
  MultiIndex k;
  Rational ratio;  // product of factors = ratio * B^{kind}_k
};

// Factors are (space, index) pairs sharing topology and dimension.
SingleBasis product_to_single_basis(const std::vector<std::pair<ElementKind, MultiIndex>>& factors);

}  // namespace rbez
