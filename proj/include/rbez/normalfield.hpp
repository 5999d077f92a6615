#pragma once

#include "rbez/bernstein.hpp"
#include "rbez/types.hpp"

namespace rbez {

// Degree of the normal field: d(p-1) for simplices, d*p_l - 1 per direction
// for tensor elements.
ElementKind normal_kind(const ElementKind& kind);

// Signed-minor normal of d vectors in R^{d+1} (columns of v).
Vec hodge_normal(const Eigen::MatrixXd& v);

BernsteinField normal_coeffs(const RationalElement& e);

// Precomputes the normal field and the projective net for repeated
// determinant evaluation.
class DetEvaluator {
 public:
  explicit DetEvaluator(const RationalElement& e);
  double operator()(const Vec& xi) const;  // no domain check
  const BernsteinField& normal() const { return normal_; }

 private:
  BernsteinField normal_;
  BernsteinField net_;
  int d_;
  mutable Eigen::VectorXd bn_, bx_;
};

double det_jacobian(const RationalElement& e, const Vec& xi);

struct DetRatioBound {
  double lower_dot = 0.0;
  double upper_dot = 0.0;
  double w_min = 0.0;
  double w_max = 0.0;
  double bound = 0.0;
  bool valid = false;
};

DetRatioBound det_ratio_bound(const RationalElement& e);

}  // namespace rbez
