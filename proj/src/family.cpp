#include "rbez/family.hpp"

#include <array>
#include <cmath>

#include "rbez/element.hpp"
#include "rbez/errors.hpp"
#include "rbez/multiindex.hpp"

namespace rbez {

namespace {

constexpr double kOnFacetTol = 1e-12;

// Control points of `parent` lying on each of its facets, as (predicate on
// the reference point, member test on the index).
struct Facet {
  int dir;    // coordinate direction, or -1 for the simplex hypotenuse
  bool high;  // xi_dir = 1 instead of 0
};

std::vector<Facet> facets(const ElementKind& kind) {
  std::vector<Facet> out;
  for (int j = 0; j < kind.dim; ++j) {
    out.push_back({j, false});
    if (!kind.is_simplex()) out.push_back({j, true});
  }
  if (kind.is_simplex()) out.push_back({-1, true});
  return out;
}

bool index_on_facet(const ElementKind& kind, const MultiIndex& i, const Facet& f) {
  if (f.dir < 0) return i.order() == kind.simplex_degree();
  if (!f.high) return i[f.dir] == 0;
  return i[f.dir] == kind.degree[f.dir];
}

bool point_on_facet(const Vec& y, const Facet& f) {
  if (f.dir < 0) return std::abs(y.sum() - 1.0) <= kOnFacetTol;
  return std::abs(y[f.dir] - (f.high ? 1.0 : 0.0)) <= kOnFacetTol;
}

// A child control point is fixed when its parameter location lies on a
// parent facet whose control points are all fixed.
std::vector<bool> child_fixed(const ElementKind& pk, const std::vector<bool>& pfixed, const ElementKind& ck,
                              const ChildMap& cm) {
  const IndexSet& pset = index_set(pk);
  std::vector<Facet> fixed_facets;
  for (const Facet& f : facets(pk)) {
    bool all = true;
    for (std::size_t n = 0; n < pset.size(); ++n)
      if (index_on_facet(pk, pset[n], f) && !pfixed[n]) all = false;
    if (all) fixed_facets.push_back(f);
  }
  std::vector<bool> out;
  for (const Vec& x : lattice_points(ck)) {
    const Vec y = cm.A * x + cm.b;
    bool on = false;
    for (const Facet& f : fixed_facets) on = on || point_on_facet(y, f);
    out.push_back(on);
  }
  return out;
}

void require_cubic(const ElementKind& k) {
  const bool ok = k.dim == 2 && (k.is_simplex() ? k.simplex_degree() == 3 : k.degree == MultiIndex({3, 3}));
  if (!ok) throw InputError("perturbation families need a cubic two-dimensional seed");
}

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

double cross2(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

// Cubic triangle X0 X1 X2 (local origin, e1, e2); optionally the edge X0-X1 is
// the circular arc of radius r about the origin.  bnd flags edges 01, 12, 20.
void add_triangle(Mesh& m, Vec X0, Vec X1, Vec X2, bool arc01, double r, std::array<bool, 3> bnd) {
  if (cross2(X1 - X0, X2 - X0) < 0.0) {
    std::swap(X0, X1);
    std::swap(bnd[1], bnd[2]);
  }
  const ElementKind kind = ElementKind::simplex(2, 3);
  Eigen::MatrixXd A(2, 2);
  A.col(0) = X1 - X0;
  A.col(1) = X2 - X0;
  RationalElement e = affine_element(kind, A, X0);
  const IndexSet& set = index_set(kind);
  if (arc01) {
    const double t0 = std::atan2(X0[1], X0[0]);
    double delta = std::atan2(X1[1], X1[0]) - t0;
    if (delta > M_PI) delta -= 2 * M_PI;
    if (delta <= -M_PI) delta += 2 * M_PI;
    const double c = std::cos(delta / 2), mid = t0 + delta / 2;
    Eigen::Vector3d q0(X0[0], X0[1], 1.0), q2(X1[0], X1[1], 1.0);
    Eigen::Vector3d q1(r * std::cos(mid), r * std::sin(mid), c);  // c * (r / c) * direction
    const Eigen::Vector3d e1 = (q0 + 2 * q1) / 3, e2 = (2 * q1 + q2) / 3;
    const int p1 = set.position({1, 0}), p2 = set.position({2, 0});
    e.points.col(p1) = e1.head<2>() / e1[2];
    e.weights[p1] = e1[2];
    e.points.col(p2) = e2.head<2>() / e2[2];
    e.weights[p2] = e2[2];
  }
  std::vector<bool> fixed;
  for (const auto& i : set) {
    const bool on01 = i[1] == 0, on12 = i.order() == 3, on20 = i[0] == 0;
    fixed.push_back((bnd[0] && on01) || (bnd[1] && on12) || (bnd[2] && on20));
  }
  validate(e);
  m.elements.push_back(std::move(e));
  m.fixed.push_back(std::move(fixed));
}

}  // namespace

double mesh_size(const Mesh& m) {
  double h = 0.0;
  for (const auto& e : m.elements) h = std::max(h, diameter(e));
  return h;
}

Eigen::VectorXd simplex_blossom(const BernsteinField& f, const std::vector<Vec>& args) {
  const int d = f.kind.dim;
  int q = f.kind.simplex_degree();
  if (static_cast<int>(args.size()) != q) throw DomainError("blossom needs one argument per degree");
  Eigen::MatrixXd cur = f.coeffs;
  for (const Vec& u : args) {
    const IndexSet& hi = index_set(ElementKind::simplex(d, q));
    const IndexSet& lo = index_set(ElementKind::simplex(d, q - 1));
    Eigen::MatrixXd next(cur.rows(), static_cast<Eigen::Index>(lo.size()));
    const double rest = 1.0 - u.sum();
    for (std::size_t n = 0; n < lo.size(); ++n) {
      Eigen::VectorXd c = rest * cur.col(hi.position(lo[n]));
      for (int j = 0; j < d; ++j) c += u[j] * cur.col(hi.position(lo[n] + MultiIndex::unit(d, j)));
      next.col(static_cast<Eigen::Index>(n)) = c;
    }
    cur = std::move(next);
    --q;
  }
  return cur.col(0);
}

Eigen::VectorXd tensor_blossom(const BernsteinField& f, const std::vector<std::vector<double>>& args) {
  const int d = f.kind.dim;
  MultiIndex q = f.kind.degree;
  Eigen::MatrixXd cur = f.coeffs;
  for (int j = 0; j < d; ++j) {
    if (static_cast<int>(args[j].size()) != q[j]) throw DomainError("blossom needs one argument per degree");
    for (double t : args[j]) {
      MultiIndex ql = q;
      ql[j] -= 1;
      const IndexSet& hi = index_set(ElementKind::tensor(q));
      const IndexSet& lo = index_set(ElementKind::tensor(ql));
      Eigen::MatrixXd next(cur.rows(), static_cast<Eigen::Index>(lo.size()));
      for (std::size_t n = 0; n < lo.size(); ++n)
        next.col(static_cast<Eigen::Index>(n)) =
            (1.0 - t) * cur.col(hi.position(lo[n])) + t * cur.col(hi.position(lo[n] + MultiIndex::unit(d, j)));
      cur = std::move(next);
      q = ql;
    }
  }
  return cur.col(0);
}

RationalElement reparametrize(const RationalElement& e, const Eigen::MatrixXd& A, const Vec& b) {
  const BernsteinField net = lift(e);
  const ElementKind& k = e.kind;
  const int d = k.dim;
  BernsteinField out(k, d + 1);
  const IndexSet& set = index_set(k);
  if (k.is_simplex()) {
    const int p = k.simplex_degree();
    for (std::size_t n = 0; n < set.size(); ++n) {
      const MultiIndex bary = to_barycentric(set[n], p);
      std::vector<Vec> args;
      for (int j = 0; j < d; ++j)
        for (int t = 0; t < bary[j]; ++t) args.push_back(A.col(j) + b);
      for (int t = 0; t < bary[d]; ++t) args.push_back(b);
      out.coeffs.col(static_cast<Eigen::Index>(n)) = simplex_blossom(net, args);
    }
  } else {
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c)
        if (r != c && A(r, c) != 0.0) throw DomainError("tensor reparametrization must be axis aligned");
    for (std::size_t n = 0; n < set.size(); ++n) {
      std::vector<std::vector<double>> args(d);
      for (int j = 0; j < d; ++j) {
        const double lo = b[j], hi = b[j] + A(j, j);
        for (int t = 0; t < k.degree[j] - set[n][j]; ++t) args[j].push_back(lo);
        for (int t = 0; t < set[n][j]; ++t) args[j].push_back(hi);
      }
      out.coeffs.col(static_cast<Eigen::Index>(n)) = tensor_blossom(net, args);
    }
  }
  return project(out);
}

std::vector<ChildMap> subdivision_maps(const ElementKind& kind) {
  const int d = kind.dim;
  std::vector<ChildMap> out;
  const Eigen::MatrixXd half = 0.5 * Eigen::MatrixXd::Identity(d, d);
  if (!kind.is_simplex() || d == 1) {
    for (const Vec& c : reference_vertices(ElementKind::tensor(MultiIndex(d, 1)))) out.push_back({half, 0.5 * c});
    return out;
  }
  if (d == 3) throw UnsupportedError("tetrahedral subdivision is not supported");
  out.push_back({half, v2(0.0, 0.0)});
  out.push_back({half, v2(0.5, 0.0)});
  out.push_back({half, v2(0.0, 0.5)});
  out.push_back({-half, v2(0.5, 0.5)});
  return out;
}

Mesh subdivide_uniform(const Mesh& m) {
  const auto maps = subdivision_maps(m.kind);
  Mesh out;
  out.kind = m.kind;
  for (std::size_t n = 0; n < m.elements.size(); ++n)
    for (const ChildMap& cm : maps) {
      out.elements.push_back(reparametrize(m.elements[n], cm.A, cm.b));
      out.fixed.push_back(child_fixed(m.kind, m.fixed[n], m.kind, cm));
    }
  return out;
}

RationalElement degree_elevate(const RationalElement& e) {
  const BernsteinField net = lift(e);
  const ElementKind& k = e.kind;
  const int d = k.dim;
  if (k.is_simplex()) {
    const int p = k.simplex_degree();
    BernsteinField out(ElementKind::simplex(d, p + 1), d + 1);
    const IndexSet& lo = index_set(k);
    const IndexSet& hi = out.indices();
    for (std::size_t n = 0; n < hi.size(); ++n) {
      const MultiIndex& i = hi[n];
      auto col = out.coeffs.col(static_cast<Eigen::Index>(n));
      const int rest = p + 1 - i.order();
      if (rest > 0) col += (static_cast<double>(rest) / (p + 1)) * net.coeffs.col(lo.position(i));
      for (int j = 0; j < d; ++j)
        if (i[j] > 0) col += (static_cast<double>(i[j]) / (p + 1)) * net.coeffs.col(lo.position(i - MultiIndex::unit(d, j)));
    }
    return project(out);
  }
  BernsteinField cur = net;
  for (int j = 0; j < d; ++j) {
    MultiIndex q = cur.kind.degree;
    q[j] += 1;
    BernsteinField next(ElementKind::tensor(q), d + 1);
    const IndexSet& lo = cur.indices();
    const IndexSet& hi = next.indices();
    const double pj = q[j];
    for (std::size_t n = 0; n < hi.size(); ++n) {
      const MultiIndex& i = hi[n];
      auto col = next.coeffs.col(static_cast<Eigen::Index>(n));
      if (i[j] < q[j]) col += (1.0 - i[j] / pj) * cur.coeffs.col(lo.position(i));
      if (i[j] > 0) col += (i[j] / pj) * cur.coeffs.col(lo.position(i - MultiIndex::unit(d, j)));
    }
    cur = std::move(next);
  }
  return project(cur);
}

Mesh degree_elevate(const Mesh& m) {
  Mesh out;
  for (std::size_t n = 0; n < m.elements.size(); ++n) {
    out.elements.push_back(degree_elevate(m.elements[n]));
    const ElementKind& k = out.elements.back().kind;
    out.fixed.push_back(child_fixed(m.kind, m.fixed[n], k, {Eigen::MatrixXd::Identity(k.dim, k.dim), Vec::Zero(k.dim)}));
  }
  out.kind = out.elements.empty() ? m.kind : out.elements.front().kind;
  return out;
}

Mesh bisect_to_triangles(const Mesh& quads) {
  const ElementKind& qk = quads.kind;
  if (qk.is_simplex() || qk.dim != 2) throw InputError("bisection needs a two-dimensional tensor mesh");
  if (qk.degree[0] != qk.degree[1]) throw InputError("bisection needs equal degrees in both directions");
  const ElementKind tk = ElementKind::simplex(2, qk.degree[0]);
  const ChildMap halves[2] = {{Eigen::MatrixXd::Identity(2, 2), v2(0, 0)}, {-Eigen::MatrixXd::Identity(2, 2), v2(1, 1)}};
  Mesh out;
  out.kind = tk;
  for (std::size_t n = 0; n < quads.elements.size(); ++n) {
    const BernsteinField net = lift(quads.elements[n]);
    for (const ChildMap& cm : halves) {
      BernsteinField tri = interpolate_field(tk, 3, [&](const Vec& x) { return eval_field(net, Vec(cm.A * x + cm.b)); });
      out.elements.push_back(project(tri));
      out.fixed.push_back(child_fixed(qk, quads.fixed[n], tk, cm));
    }
  }
  return out;
}

double perturbation(PertScheme s, int level, double a, double x1, int i2) {
  const double m4 = 4.0 * level;
  const double c = s == PertScheme::pert1 ? 2.0 * a / std::pow(m4, 1.75) : 8.0 * a / std::pow(m4, 3.0);
  const double sign = (i2 % 2 == 0) ? 1.0 : -1.0;
  return sign * c * (a - std::abs(x1)) / a;
}

Mesh perturb(const Mesh& m, PertScheme s, int level, double a) {
  require_cubic(m.kind);
  Mesh out = m;
  const IndexSet& set = index_set(m.kind);
  for (std::size_t n = 0; n < out.elements.size(); ++n) {
    RationalElement& e = out.elements[n];
    for (std::size_t c = 0; c < set.size(); ++c) {
      const int i2 = set[c][1];
      if ((i2 != 1 && i2 != 2) || out.fixed[n][c]) continue;
      const auto col = static_cast<Eigen::Index>(c);
      e.points(0, col) += perturbation(s, level, a, e.points(0, col), i2);
    }
  }
  return out;
}

MeshFamily uniform_family(const Mesh& seed, int levels) {
  if (levels < 1) throw InputError("levels must be at least 1");
  MeshFamily f;
  f.generator = "uniform";
  f.meshes.push_back(seed);
  for (int l = 1; l < levels; ++l) f.meshes.push_back(subdivide_uniform(f.meshes.back()));
  for (const auto& m : f.meshes) f.h.push_back(mesh_size(m));
  return f;
}

MeshFamily perturb_family(const Mesh& seed, PertScheme s, int levels, double a, double b) {
  require_cubic(seed.kind);
  MeshFamily base = uniform_family(seed, levels);
  MeshFamily f;
  f.generator = s == PertScheme::pert1 ? "pert1" : "pert2";
  f.params = {{"a", a}, {"b", b}};
  for (int l = 0; l < levels; ++l) {
    f.meshes.push_back(perturb(base.meshes[l], s, l + 1, a));
    f.h.push_back(mesh_size(f.meshes.back()));
  }
  return f;
}

MeshFamily weight_family(const Mesh& seed, WeightScheme s, int levels) {
  bool any = false;
  for (const auto& row : seed.fixed)
    for (bool v : row) any = any || v;
  if (!any) throw InputError("weight families need boundary flags on the seed");
  MeshFamily f = uniform_family(seed, levels);
  f.generator = s == WeightScheme::subdivide_weights ? "weights1" : "weights2";
  if (s == WeightScheme::boundary_only) {
    // free points: control points subdivided alone, weight 1
    Mesh flat = seed;
    for (auto& e : flat.elements) e.weights.setOnes();
    const MeshFamily plain = uniform_family(flat, levels);
    for (std::size_t l = 0; l < f.meshes.size(); ++l) {
      Mesh& m = f.meshes[l];
      for (std::size_t n = 0; n < m.elements.size(); ++n)
        for (Eigen::Index c = 0; c < m.elements[n].weights.size(); ++c)
          if (!m.fixed[n][static_cast<std::size_t>(c)]) {
            m.elements[n].weights[c] = 1.0;
            m.elements[n].points.col(c) = plain.meshes[l].elements[n].points.col(c);
          }
    }
  }
  for (std::size_t l = 0; l < f.meshes.size(); ++l) f.h[l] = mesh_size(f.meshes[l]);
  return f;
}

MeshFamily elevate_family(const Mesh& seed, int levels) {
  if (levels < 1) throw InputError("levels must be at least 1");
  MeshFamily f;
  f.generator = "elevate";
  f.meshes.push_back(seed);
  for (int l = 1; l < levels; ++l) f.meshes.push_back(degree_elevate(f.meshes.back()));
  for (const auto& m : f.meshes) f.h.push_back(mesh_size(m));
  return f;
}

Mesh plate_seed(double a, double b, int nx, int ny, int p) {
  if (!(a > 0 && b > 0) || nx < 1 || ny < 1 || p < 1) throw InputError("invalid plate parameters");
  Mesh m;
  m.kind = ElementKind::tensor_uniform(2, p);
  const IndexSet& set = index_set(m.kind);
  const double dx = 2 * a / nx, dy = 2 * b / ny;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2, 2);
      A(0, 0) = dx;
      A(1, 1) = dy;
      m.elements.push_back(affine_element(m.kind, A, v2(-a + ix * dx, -b + iy * dy)));
      std::vector<bool> fixed;
      for (const auto& i : set)
        fixed.push_back((ix == 0 && i[0] == 0) || (ix == nx - 1 && i[0] == p) || (iy == 0 && i[1] == 0) ||
                        (iy == ny - 1 && i[1] == p));
      m.fixed.push_back(std::move(fixed));
    }
  return m;
}

Mesh annulus_seed(double ri, double ro) {
  if (!(ri > 0 && ro > ri)) throw InputError("invalid annulus radii");
  Mesh m;
  m.kind = ElementKind::tensor_uniform(2, 2);
  const IndexSet& set = index_set(m.kind);
  const double radii[3] = {ri, 0.5 * (ri + ro), ro};
  const double quarter = M_PI / 2;
  for (int ir = 0; ir < 2; ++ir)
    for (int it = 0; it < 2; ++it) {
      const double t0 = it * quarter / 2, t1 = (it + 1) * quarter / 2, c = std::cos((t1 - t0) / 2);
      const Vec q[3] = {v2(std::cos(t0), std::sin(t0)), v2(std::cos(0.5 * (t0 + t1)), std::sin(0.5 * (t0 + t1))) / c,
                        v2(std::cos(t1), std::sin(t1))};
      const double wq[3] = {1.0, c, 1.0};
      const double rho[3] = {radii[ir], 0.5 * (radii[ir] + radii[ir + 1]), radii[ir + 1]};
      RationalElement e;
      e.kind = m.kind;
      e.points.resize(2, static_cast<Eigen::Index>(set.size()));
      e.weights.resize(static_cast<Eigen::Index>(set.size()));
      std::vector<bool> fixed;
      for (std::size_t n = 0; n < set.size(); ++n) {
        const MultiIndex& i = set[n];  // i[0] radial, i[1] angular
        e.points.col(static_cast<Eigen::Index>(n)) = rho[i[0]] * q[i[1]];
        e.weights[static_cast<Eigen::Index>(n)] = wq[i[1]];
        fixed.push_back((ir == 0 && i[0] == 0) || (ir == 1 && i[0] == 2) || (it == 0 && i[1] == 0) ||
                        (it == 1 && i[1] == 2));
      }
      m.elements.push_back(std::move(e));
      m.fixed.push_back(std::move(fixed));
    }
  return m;
}

Mesh ring_seed(const std::vector<Vec>& outer, double r, int layers) {
  if (outer.size() < 3 || !(r > 0) || layers < 1) throw InputError("invalid ring mesh parameters");
  const std::size_t n = outer.size();
  std::vector<std::vector<Vec>> ring(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double t = std::atan2(outer[j][1], outer[j][0]);
    const Vec A = r * v2(std::cos(t), std::sin(t));
    if (outer[j].norm() <= r) throw InputError("outer boundary must enclose the hole");
    for (int l = 0; l <= layers; ++l) ring[j].push_back(A + (static_cast<double>(l) / layers) * (outer[j] - A));
  }
  Mesh m;
  m.kind = ElementKind::simplex(2, 3);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t k = (j + 1) % n;
    for (int l = 0; l < layers; ++l) {
      const bool inner = l == 0, outermost = l == layers - 1;
      add_triangle(m, ring[j][l], ring[k][l], ring[j][l + 1], inner, r, {inner, false, false});
      add_triangle(m, ring[k][l], ring[k][l + 1], ring[j][l + 1], false, r, {false, outermost, false});
    }
  }
  return m;
}

Mesh hole_seed(double a, double r, int layers) {
  if (!(a > r)) throw InputError("hole radius must be below the plate half width");
  std::vector<Vec> outer = {v2(a, 0), v2(a, a), v2(0, a), v2(-a, a), v2(-a, 0), v2(-a, -a), v2(0, -a), v2(a, -a)};
  return ring_seed(outer, r, layers);
}

Mesh chamfer_seed(double a, double r, double c, int layers) {
  if (!(c > 0 && c < a && a > r)) throw InputError("invalid chamfer parameters");
  const double s = a - c;
  std::vector<Vec> outer = {v2(a, 0),  v2(a, s),   v2(s, a),   v2(0, a),  v2(-s, a),  v2(-a, s),
                            v2(-a, 0), v2(-a, -s), v2(-s, -a), v2(0, -a), v2(s, -a), v2(a, -s)};
  return ring_seed(outer, r, layers);
}

}  // namespace rbez
