#pragma once

// Brute-force reference implementations for the test suite.  Depends only on
// the plain data types, never on the library under test.

#include <functional>
#include <vector>

#include "rbez/types.hpp"

namespace oracle {

using rbez::MultiIndex;
using rbez::RationalElement;
using rbez::Vec;

struct OracleConfig {
  double fd_step = 1e-4;
  int grid_resolution = 200;
  unsigned long long sample_seed = 7;
  double tolerance = 1e-6;
};

// Control-net index order, rebuilt by sorting all candidate indices.
std::vector<MultiIndex> net_indices(const rbez::ElementKind& kind);

// De Casteljau evaluation of the projective net (w P, w); result has d+1 entries.
Vec projective_eval(const RationalElement& e, const Vec& xi);
Vec map_eval(const RationalElement& e, const Vec& xi);

// Central differences with one Richardson step.
Eigen::MatrixXd fd_jacobian(const RationalElement& e, const Vec& xi, double step);
// D^alpha of the projective net (projective = true) or of the rational map.
Vec fd_partial(const RationalElement& e, const MultiIndex& alpha, const Vec& xi, double step, bool projective);

// Weighted least squares over {q / w : q polynomial of the element's space}
// in the monomial basis on a uniform midpoint grid.
double dense_l2_project(const RationalElement& e, const std::function<double(const Vec&)>& u, int resolution);

// max | |x(t)| - r | along the straight parameter segment from a to b.
double radius_check(const RationalElement& e, const Vec& a, const Vec& b, double r, int samples = 2001);

// Every (i_1..i_k) with sum i_m = j and sum m i_m = k, by exhaustive search.
std::vector<std::vector<int>> compositions(int j, int k);

}  // namespace oracle
