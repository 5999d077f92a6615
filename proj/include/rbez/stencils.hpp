#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rbez/bernstein.hpp"
#include "rbez/types.hpp"

namespace rbez {

struct Stencil {
  MultiIndex alpha;
  std::int64_t scale = 0;
  std::vector<std::pair<MultiIndex, std::int64_t>> taps;  // over Box(alpha), canonical order
  ElementKind support;  // space of the differentiated field
  bool zero_by_degree = false;
};

Stencil make_stencil(const ElementKind& kind, const MultiIndex& alpha);

// D^alpha of a Bernstein field, again in Bernstein form.
BernsteinField derivative_field(const BernsteinField& f, const MultiIndex& alpha);
BernsteinField derivative_field(const RationalElement& e, const MultiIndex& alpha);

// max_n |c_n| over the coefficients of a field (Euclidean norm per column)
double coefficient_bound(const BernsteinField& f);
double derivative_bound(const RationalElement& e, const MultiIndex& alpha);
// Exact zero test: the bound vanishes iff the derivative does.
bool derivative_vanishes(const RationalElement& e, const MultiIndex& alpha);

// sup over the given points of |f|
double sampled_sup(const BernsteinField& f, const std::vector<Vec>& points);

struct BoundPair {
  double sampled = 0.0;
  double bound = 0.0;
};

BoundPair scaled_derivative_metric(const RationalElement& e, const MultiIndex& alpha, const std::vector<Vec>& points);

// all alpha of a given order with dimension d, canonical order
std::vector<MultiIndex> alphas_of_order(int d, int k);

}  // namespace rbez
