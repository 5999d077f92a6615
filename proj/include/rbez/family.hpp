#pragma once

#include <map>
#include <string>
#include <vector>

#include "rbez/bernstein.hpp"
#include "rbez/types.hpp"

namespace rbez {

struct MeshFamily {
  std::string generator;
  std::map<std::string, double> params;
  std::vector<Mesh> meshes;
  std::vector<double> h;  // global mesh size per level
};

// Max over elements of the corner diameter.
double mesh_size(const Mesh& m);

// Polynomial blossoms by repeated de Casteljau steps.
// simplex: one argument point per degree; tensor: per direction, p_j values.
Eigen::VectorXd simplex_blossom(const BernsteinField& f, const std::vector<Vec>& args);
Eigen::VectorXd tensor_blossom(const BernsteinField& f, const std::vector<std::vector<double>>& args);

// Element composed with the affine parameter map xi -> A xi + b, which must
// send the reference element into itself (axis-aligned for tensor elements).
RationalElement reparametrize(const RationalElement& e, const Eigen::MatrixXd& A, const Vec& b);

struct ChildMap {
  Eigen::MatrixXd A;
  Vec b;
};

// Parameter maps of the uniform children (2^d tensor, 4 red-refinement
// triangles, 2 segments).
std::vector<ChildMap> subdivision_maps(const ElementKind& kind);

Mesh subdivide_uniform(const Mesh& m);

RationalElement degree_elevate(const RationalElement& e);
Mesh degree_elevate(const Mesh& m);

// Quad split along the (1,0)-(0,1) diagonal into two triangles of the same degree.
Mesh bisect_to_triangles(const Mesh& quads);

enum class PertScheme { pert1, pert2 };

// Control-point shift of the cubic perturbation families.
double perturbation(PertScheme s, int level, double a, double x1, int i2);
Mesh perturb(const Mesh& m, PertScheme s, int level, double a);

MeshFamily uniform_family(const Mesh& seed, int levels);
MeshFamily perturb_family(const Mesh& seed, PertScheme s, int levels, double a, double b);

enum class WeightScheme { subdivide_weights, boundary_only };
MeshFamily weight_family(const Mesh& seed, WeightScheme s, int levels);

MeshFamily elevate_family(const Mesh& seed, int levels);

// Seed meshes.
Mesh plate_seed(double a = 2.0, double b = 1.0, int nx = 2, int ny = 2, int p = 3);
Mesh annulus_seed(double ri = 1.0, double ro = 2.0);
// Cubic rational triangles between a circle of radius r and a star-shaped
// outer polygon (counter-clockwise), with `layers` rings of cells.
Mesh ring_seed(const std::vector<Vec>& outer, double r, int layers);
Mesh hole_seed(double a = 1.0, double r = 0.5, int layers = 1);
Mesh chamfer_seed(double a = 1.0, double r = 0.4, double c = 0.3, int layers = 2);

}  // namespace rbez
