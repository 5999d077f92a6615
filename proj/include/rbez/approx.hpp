#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rbez/family.hpp"
#include "rbez/types.hpp"

namespace rbez {

struct QuadratureRule {
  Topology topology = Topology::tensor;
  int dim = 2;
  int order = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre on [0,1]; n points.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Exact for polynomials of total degree <= order (simplex) or of degree
// <= order in each variable (tensor).  Collapsed coordinates on simplices.
QuadratureRule quadrature(Topology topology, int dim, int order);

struct ManufacturedSolution {
  std::string name;
  std::map<std::string, double> params;
  std::function<double(const Vec&)> u;
};

// name in {plate, hole, annulus, chamfer}; missing parameters take defaults.
ManufacturedSolution make_solution(const std::string& name, const std::map<std::string, double>& params = {});

struct BestApproximation {
  double error = 0.0;
  Eigen::VectorXd coeffs;  // numerator q in the element's Bernstein basis
};

int default_quad_order(const ElementKind& kind);

BestApproximation best_approx(const RationalElement& e, const std::function<double(const Vec&)>& u, int quad_order);
double best_approx_error(const RationalElement& e, const ManufacturedSolution& u, int quad_order);
double mesh_error(const Mesh& m, const ManufacturedSolution& u, int quad_order);

// Least-squares slope of log(values) against log(h).
double fit_loglog(const std::vector<double>& h, const std::vector<double>& values);
// Same, restricted to the finest ceil(M/2) levels.
double fit_slope_finest(const std::vector<double>& h, const std::vector<double>& values);

struct ConvergenceTable {
  std::vector<double> h;
  std::vector<double> error;
  double slope = 0.0;
};

// quad_order <= 0 selects the default for the family's degree.
ConvergenceTable family_convergence(const MeshFamily& family, const ManufacturedSolution& u, int quad_order = 0);

}  // namespace rbez
