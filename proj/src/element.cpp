#include "rbez/element.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "rbez/errors.hpp"

namespace rbez {

namespace {

std::vector<Vec> corner_images(const RationalElement& e) {
  std::vector<Vec> out;
  for (const Vec& v : reference_vertices(e.kind)) out.push_back(map(e, v));
  return out;
}

double simplex_volume(const std::vector<Vec>& v) {
  const int d = static_cast<int>(v.size()) - 1;
  Eigen::MatrixXd m(v[0].size(), d);
  for (int j = 0; j < d; ++j) m.col(j) = v[j + 1] - v[0];
  if (m.rows() != m.cols()) return std::sqrt(std::abs((m.transpose() * m).determinant())) / factorial(d);
  return std::abs(m.determinant()) / static_cast<double>(factorial(d));
}

// Unit outward normal n and offset b of the plane through pts, oriented so
// that `inside` satisfies n.x <= b.
void halfspace(const std::vector<Vec>& pts, const Vec& inside, Eigen::VectorXd& n, double& b) {
  const int d = static_cast<int>(inside.size());
  if (d == 2) {
    Vec t = pts[1] - pts[0];
    n.resize(2);
    n << t[1], -t[0];
  } else {
    Eigen::Vector3d a = (pts[1] - pts[0]).head<3>(), c = (pts[2] - pts[0]).head<3>();
    n = a.cross(c);
  }
  double len = n.norm();
  if (len == 0.0) throw DegenerateElementError("degenerate facet in linear proxy");
  n /= len;
  b = n.dot(pts[0]);
  if (n.dot(inside) > b) {
    n = -n;
    b = -b;
  }
}

}  // namespace

void validate(const RationalElement& e) {
  const ElementKind& k = e.kind;
  if (k.dim < 1 || k.dim > 3) throw UnsupportedError("dimension must be 1, 2 or 3");
  if (k.is_simplex() ? k.degree.size() != 1 : k.degree.size() != k.dim) throw InputError("degree does not match topology");
  if (!k.degree.nonnegative() || k.max_degree() > 30) throw InputError("degree out of range");
  const auto n = static_cast<Eigen::Index>(index_set(k).size());
  if (e.points.rows() != k.dim || e.points.cols() != n || e.weights.size() != n)
    throw InputError("control net size does not match the element space");
  if (!e.points.allFinite()) throw InputError("non-finite control point");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(e.weights[i] > 0.0) || !std::isfinite(e.weights[i])) throw InvalidWeightError("control weights must be positive");
}

void validate(const Mesh& m) {
  if (m.fixed.size() != m.elements.size()) throw InputError("fixed flags do not match element count");
  for (std::size_t n = 0; n < m.elements.size(); ++n) {
    if (!(m.elements[n].kind == m.kind)) throw InputError("mesh is not homogeneous");
    validate(m.elements[n]);
    if (static_cast<int>(m.fixed[n].size()) != m.elements[n].size()) throw InputError("fixed flags do not match control net");
  }
}

RationalElement make_element(const ElementKind& kind, Eigen::MatrixXd points, Eigen::VectorXd weights) {
  RationalElement e{kind, std::move(points), std::move(weights)};
  validate(e);
  return e;
}

BernsteinField lift(const RationalElement& e) {
  for (Eigen::Index i = 0; i < e.weights.size(); ++i)
    if (!(e.weights[i] > 0.0)) throw InvalidWeightError("control weights must be positive");
  BernsteinField f(e.kind, e.dim() + 1);
  f.coeffs.topRows(e.dim()) = e.points * e.weights.asDiagonal();
  f.coeffs.row(e.dim()) = e.weights.transpose();
  return f;
}

RationalElement project(const BernsteinField& net) {
  const int d = net.values_dim() - 1;
  RationalElement e;
  e.kind = net.kind;
  e.weights = net.coeffs.row(d).transpose();
  for (Eigen::Index i = 0; i < e.weights.size(); ++i)
    if (!(e.weights[i] > 0.0)) throw InvalidWeightError("projective net has a non-positive weight");
  e.points = net.coeffs.topRows(d) * e.weights.cwiseInverse().asDiagonal();
  return e;
}

MapValue map_and_weight(const RationalElement& e, const Vec& xi) {
  check_reference(e.kind, xi);
  Eigen::VectorXd b;
  eval_basis_all(e.kind, xi, b);
  Eigen::VectorXd wb = e.weights.cwiseProduct(b);
  double w = wb.sum();
  if (!(w > 0.0)) throw DegenerateWeightError("weighting function is not positive");
  return {(e.points * wb) / w, w};
}

Vec map(const RationalElement& e, const Vec& xi) { return map_and_weight(e, xi).x; }
double weight(const RationalElement& e, const Vec& xi) { return map_and_weight(e, xi).w; }

std::vector<Vec> reference_vertices(const ElementKind& kind) {
  const int d = kind.dim;
  std::vector<Vec> out;
  if (kind.is_simplex()) {
    out.push_back(Vec::Zero(d));
    for (int j = 0; j < d; ++j) out.push_back(Vec::Unit(d, j));
    return out;
  }
  // corners in canonical order of {0,1}^d
  for (int c = 0; c < (1 << d); ++c) {
    Vec v(d);
    for (int j = 0; j < d; ++j) v[j] = (c >> (d - 1 - j)) & 1;
    out.push_back(v);
  }
  return out;
}

std::vector<Vec> lattice_points(const ElementKind& kind) {
  std::vector<Vec> out;
  for (const auto& i : index_set(kind)) {
    Vec x(kind.dim);
    for (int j = 0; j < kind.dim; ++j) {
      const int p = kind.is_simplex() ? kind.simplex_degree() : kind.degree[j];
      x[j] = p == 0 ? (kind.is_simplex() ? 1.0 / (kind.dim + 1) : 0.5) : static_cast<double>(i[j]) / p;
    }
    out.push_back(x);
  }
  return out;
}

BernsteinField interpolate_field(const ElementKind& kind, int values_dim, const std::function<Vec(const Vec&)>& f) {
  static std::mutex mu;
  static std::map<std::vector<int>, std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>>> cache;
  std::vector<int> key{static_cast<int>(kind.topology), kind.dim};
  for (int v : kind.degree) key.push_back(v);
  std::shared_ptr<Eigen::PartialPivLU<Eigen::MatrixXd>> lu;
  const auto pts = lattice_points(kind);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[key];
    if (!slot) {
      const auto n = static_cast<Eigen::Index>(pts.size());
      Eigen::MatrixXd V(n, n);
      for (Eigen::Index r = 0; r < n; ++r) V.row(r) = eval_basis_all(kind, pts[r]).transpose();
      slot = std::make_shared<Eigen::PartialPivLU<Eigen::MatrixXd>>(V);
    }
    lu = slot;
  }
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd rhs(n, values_dim);
  for (Eigen::Index r = 0; r < n; ++r) rhs.row(r) = f(pts[r]).transpose();
  BernsteinField out(kind, values_dim);
  out.coeffs = lu->solve(rhs).transpose();
  return out;
}

RationalElement affine_element(const ElementKind& kind, const Eigen::MatrixXd& A, const Vec& b) {
  RationalElement e;
  e.kind = kind;
  const auto pts = lattice_points(kind);
  e.points.resize(kind.dim, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t n = 0; n < pts.size(); ++n) e.points.col(static_cast<Eigen::Index>(n)) = A * pts[n] + b;
  e.weights = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(pts.size()));
  return e;
}

RationalElement identity_element(const ElementKind& kind) {
  return affine_element(kind, Eigen::MatrixXd::Identity(kind.dim, kind.dim), Vec::Zero(kind.dim));
}

double diameter(const RationalElement& e) {
  auto c = corner_images(e);
  double h = 0.0;
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = a + 1; b < c.size(); ++b) h = std::max(h, (c[a] - c[b]).norm());
  return h;
}

double chebyshev_radius(const Eigen::MatrixXd& normals, const Eigen::VectorXd& offsets) {
  // Vertex enumeration of the LP  max r  s.t.  n_f.c + r |n_f| <= b_f.
  const int m = static_cast<int>(normals.rows());
  const int d = static_cast<int>(normals.cols());
  const int k = d + 1;
  Eigen::MatrixXd A(m, k);
  for (int f = 0; f < m; ++f) {
    A.row(f).head(d) = normals.row(f);
    A(f, d) = normals.row(f).norm();
  }
  const double scale = 1.0 + offsets.cwiseAbs().maxCoeff();
  double best = -1.0;
  std::vector<int> pick(k);
  auto rec = [&](auto&& self, int start, int depth) -> void {
    if (depth == k) {
      Eigen::MatrixXd S(k, k);
      Eigen::VectorXd rhs(k);
      for (int t = 0; t < k; ++t) {
        S.row(t) = A.row(pick[t]);
        rhs[t] = offsets[pick[t]];
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(S);
      if (lu.rank() < k) return;
      Eigen::VectorXd z = lu.solve(rhs);
      if (z[d] < 0.0) return;
      for (int f = 0; f < m; ++f)
        if (A.row(f).dot(z) > offsets[f] + 1e-12 * scale) return;
      best = std::max(best, z[d]);
      return;
    }
    for (int f = start; f < m; ++f) {
      pick[depth] = f;
      self(self, f + 1, depth + 1);
    }
  };
  rec(rec, 0, 0);
  return best;
}

LinearProxy proxy(const RationalElement& e) {
  const int d = e.dim();
  LinearProxy out;
  const auto corners = corner_images(e);
  out.origin = corners[0];
  out.jbar.resize(d, d);
  // reference vertex e_j sits at position j+1 (simplex) or 2^(d-1-j) (tensor)
  for (int j = 0; j < d; ++j) {
    const std::size_t at = e.kind.is_simplex() ? static_cast<std::size_t>(j + 1) : (std::size_t{1} << (d - 1 - j));
    out.jbar.col(j) = corners[at] - corners[0];
  }
  out.h = diameter(e);
  if (!(out.h > 0.0)) throw DegenerateElementError("element has zero diameter");
  if (std::abs(out.jbar.determinant()) <= 1e-14 * std::pow(out.h, d))
    throw DegenerateElementError("linear proxy Jacobian is singular");

  if (d == 1) {
    out.rho = out.h;
  } else if (e.kind.is_simplex()) {
    double facet_area = 0.0;
    for (int skip = 0; skip <= d; ++skip) {
      std::vector<Vec> f;
      for (int v = 0; v <= d; ++v)
        if (v != skip) f.push_back(corners[v]);
      facet_area += simplex_volume(f);
    }
    out.rho = 2.0 * d * simplex_volume(corners) / facet_area;
  } else {
    Vec centroid = Vec::Zero(d);
    for (const auto& c : corners) centroid += c;
    centroid /= static_cast<double>(corners.size());
    std::vector<std::vector<Vec>> facets;
    if (d == 2) {
      const int ring[4] = {0, 2, 3, 1};  // (0,0),(1,0),(1,1),(0,1)
      for (int t = 0; t < 4; ++t) facets.push_back({corners[ring[t]], corners[ring[(t + 1) % 4]]});
    } else {
      // each hexahedron face split along both diagonals
      const int faces[6][4] = {{0, 1, 3, 2}, {4, 5, 7, 6}, {0, 1, 5, 4}, {2, 3, 7, 6}, {0, 2, 6, 4}, {1, 3, 7, 5}};
      for (const auto& q : faces)
        for (int skip = 0; skip < 4; ++skip) {
          std::vector<Vec> tri;
          for (int t = 0; t < 4; ++t)
            if (t != skip) tri.push_back(corners[q[t]]);
          facets.push_back(tri);
        }
    }
    Eigen::MatrixXd N(static_cast<Eigen::Index>(facets.size()), d);
    Eigen::VectorXd b(static_cast<Eigen::Index>(facets.size()));
    for (std::size_t f = 0; f < facets.size(); ++f) {
      Eigen::VectorXd n;
      double off;
      halfspace(facets[f], centroid, n, off);
      for (const auto& c : corners)
        if (n.dot(c) > off + 1e-12 * out.h) throw DegenerateElementError("linear proxy is not convex");
      N.row(static_cast<Eigen::Index>(f)) = n.transpose();
      b[static_cast<Eigen::Index>(f)] = off;
    }
    double r = chebyshev_radius(N, b);
    if (!(r > 0.0)) throw DegenerateElementError("linear proxy has no interior");
    out.rho = 2.0 * r;
  }
  if (!(out.rho > 0.0)) throw DegenerateElementError("linear proxy has no interior");
  out.sigma = out.h / out.rho;
  return out;
}

}  // namespace rbez
