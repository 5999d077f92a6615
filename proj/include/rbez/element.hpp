#pragma once

#include <functional>
#include <vector>

#include "rbez/bernstein.hpp"
#include "rbez/types.hpp"

namespace rbez {

// Validates shapes and weights; throws InputError / InvalidWeightError.
void validate(const RationalElement& e);
void validate(const Mesh& m);

RationalElement make_element(const ElementKind& kind, Eigen::MatrixXd points, Eigen::VectorXd weights);

// Projective control net (w P, w) as a field with d+1 components.
BernsteinField lift(const RationalElement& e);
// Inverse of lift; weights taken from the last row.
RationalElement project(const BernsteinField& net);

struct MapValue {
  Vec x;
  double w = 1.0;
};

Vec map(const RationalElement& e, const Vec& xi);
double weight(const RationalElement& e, const Vec& xi);
MapValue map_and_weight(const RationalElement& e, const Vec& xi);

std::vector<Vec> reference_vertices(const ElementKind& kind);
// canonical lattice xi_i = i / p of the Bernstein space
std::vector<Vec> lattice_points(const ElementKind& kind);

// Bernstein field interpolating f at the canonical lattice.
BernsteinField interpolate_field(const ElementKind& kind, int values_dim,
                                 const std::function<Vec(const Vec&)>& f);

RationalElement identity_element(const ElementKind& kind);
RationalElement affine_element(const ElementKind& kind, const Eigen::MatrixXd& A, const Vec& b);

struct LinearProxy {
  Vec origin;
  Eigen::MatrixXd jbar;
  double h = 0.0;
  double rho = 0.0;
  double sigma = 0.0;
};

// Diameter over corner images and inscribed-ball diameter of the linear proxy.
LinearProxy proxy(const RationalElement& e);
double diameter(const RationalElement& e);

// Largest ball inside {x : n_f . x <= b_f} (rows of normals); returns radius,
// or -1 when the region is empty.
double chebyshev_radius(const Eigen::MatrixXd& normals, const Eigen::VectorXd& offsets);

}  // namespace rbez
