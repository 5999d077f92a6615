#include "rbez/approx.hpp"

#include <cmath>

#include "rbez/bernstein.hpp"
#include "rbez/element.hpp"
#include "rbez/errors.hpp"
#include "rbez/normalfield.hpp"

namespace rbez {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw DomainError("Gauss rule needs at least one point");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int k = 0; k < (n + 1) / 2; ++k) {
    double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= n; ++j) {
      const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[k] = 0.5 * (1.0 - x);
    nodes[n - 1 - k] = 0.5 * (1.0 + x);
    weights[k] = weights[n - 1 - k] = 0.5 * w;
  }
}

QuadratureRule quadrature(Topology topology, int dim, int order) {
  if (order < 0 || order > 30) throw DomainError("quadrature order must lie in [0, 30]");
  if (dim < 1 || dim > 3) throw UnsupportedError("dimension must be 1, 2 or 3");
  QuadratureRule q{topology, dim, order, {}, {}};
  const bool collapsed = topology == Topology::simplex && dim > 1;
  const int n = collapsed ? (order + dim + 2) / 2 : (order + 2) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  std::vector<int> idx(dim, 0);
  while (true) {
    Vec t(dim);
    double wt = 1.0;
    for (int j = 0; j < dim; ++j) {
      t[j] = x[idx[j]];
      wt *= w[idx[j]];
    }
    if (collapsed) {
      // last coordinate is the outermost collapse direction
      Vec xi(dim);
      double scale = 1.0;
      for (int j = dim - 1; j >= 0; --j) {
        xi[j] = t[j] * scale;
        wt *= scale;
        scale *= 1.0 - t[j];
      }
      // wt now carries prod_{j>=1} (1 - t_j)^{j}
      q.nodes.push_back(xi);
    } else {
      q.nodes.push_back(t);
    }
    q.weights.push_back(wt);
    int j = dim - 1;
    while (j >= 0 && ++idx[j] == n) idx[j--] = 0;
    if (j < 0) break;
  }
  return q;
}

ManufacturedSolution make_solution(const std::string& name, const std::map<std::string, double>& params) {
  auto get = [&](const char* k, double def) {
    auto it = params.find(k);
    return it == params.end() ? def : it->second;
  };
  ManufacturedSolution s;
  s.name = name;
  if (name == "plate") {
    const double a = get("a", 2.0), b = get("b", 1.0);
    s.params = {{"a", a}, {"b", b}};
    s.u = [a, b](const Vec& x) {
      return (x[0] - a) * (x[1] - b) * std::cos(x[1] / (2 * a) * M_PI) * std::sin(x[1] / b * M_PI);
    };
  } else if (name == "hole") {
    const double a = get("a", 1.0), r = get("r", 0.5);
    s.params = {{"a", a}, {"r", r}};
    s.u = [a, r](const Vec& x) {
      return (x[0] - a) * (x[0] + a) * (x[1] - a) * (x[1] + a) * (r - std::hypot(x[0], x[1]));
    };
  } else if (name == "annulus") {
    const double ri = get("ri", 1.0), ro = get("ro", 2.0);
    s.params = {{"ri", ri}, {"ro", ro}};
    s.u = [ri, ro](const Vec& x) {
      const double rho = std::hypot(x[0], x[1]);
      return (70.0 * std::log(rho / ri) - 200.0 * std::log(rho / ro)) / std::log(ro / ri);
    };
  } else if (name == "chamfer") {
    const double a = get("a", 1.0), r = get("r", 0.4), c = get("c", 0.3);
    s.params = {{"a", a}, {"r", r}, {"c", c}};
    s.u = [a, r, c](const Vec& x) {
      const double k = 2 * a - c, x1 = x[0], x2 = x[1];
      return (k - x1 - x2) * (k - x1 + x2) * (k + x1 - x2) * (k + x1 + x2) * (x1 - a) * (x1 + a) * (x2 - a) *
             (x2 + a) * (r - std::hypot(x1, x2));
    };
  } else {
    throw InputError("unknown manufactured solution '" + name + "'");
  }
  return s;
}

int default_quad_order(const ElementKind& kind) { return std::min(30, 2 * kind.max_degree() + 4); }

BestApproximation best_approx(const RationalElement& e, const std::function<double(const Vec&)>& u, int quad_order) {
  const QuadratureRule q = quadrature(e.kind.topology, e.dim(), quad_order);
  const DetEvaluator det(e);
  const auto n = static_cast<Eigen::Index>(e.size());
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  std::vector<Eigen::VectorXd> phi(q.nodes.size());
  std::vector<double> dm(q.nodes.size()), uv(q.nodes.size());
  Eigen::VectorXd b;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const Vec& xi = q.nodes[k];
    eval_basis_all(e.kind, xi, b);
    const double w = e.weights.dot(b);
    const Vec x = (e.points * e.weights.cwiseProduct(b)) / w;
    const double jd = det(xi);
    if (!(jd > 0.0)) throw InvalidElementError("non-positive Jacobian at a quadrature node");
    phi[k] = b / w;
    dm[k] = q.weights[k] * jd;
    uv[k] = u(x);
    G.noalias() += dm[k] * phi[k] * phi[k].transpose();
    rhs += dm[k] * uv[k] * phi[k];
  }
  Eigen::VectorXd scale = G.diagonal().cwiseSqrt();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(scale[i] > 0.0)) throw RankDeficientError("basis function vanishes at every quadrature node");
  const Eigen::VectorXd inv = scale.cwiseInverse();
  const Eigen::MatrixXd Gs = inv.asDiagonal() * G * inv.asDiagonal();
  Eigen::LDLT<Eigen::MatrixXd> ldlt(Gs);
  const Eigen::VectorXd D = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success || !(D.minCoeff() > 1e-12 * D.maxCoeff()))
    throw RankDeficientError("normal equations are rank deficient; raise the quadrature order");
  BestApproximation out;
  out.coeffs = inv.asDiagonal() * ldlt.solve(inv.asDiagonal() * rhs);
  double err2 = 0.0;
  for (std::size_t k = 0; k < q.nodes.size(); ++k) {
    const double r = uv[k] - phi[k].dot(out.coeffs);
    err2 += dm[k] * r * r;
  }
  out.error = std::sqrt(err2);
  return out;
}

double best_approx_error(const RationalElement& e, const ManufacturedSolution& u, int quad_order) {
  return best_approx(e, u.u, quad_order).error;
}

double mesh_error(const Mesh& m, const ManufacturedSolution& u, int quad_order) {
  double s = 0.0;
  for (const auto& e : m.elements) {
    const double v = best_approx_error(e, u, quad_order);
    s += v * v;
  }
  return std::sqrt(s);
}

double fit_loglog(const std::vector<double>& h, const std::vector<double>& values) {
  const std::size_t n = h.size();
  if (n < 2 || values.size() != n) throw InputError("slope fit needs at least two levels");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = std::log(h[k]), y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw InputError("slope fit needs distinct mesh sizes");
  return (n * sxy - sx * sy) / den;
}

double fit_slope_finest(const std::vector<double>& h, const std::vector<double>& values) {
  const std::size_t n = h.size();
  const std::size_t keep = std::max<std::size_t>(2, (n + 1) / 2);
  if (n < 2) throw InputError("slope fit needs at least two levels");
  const std::size_t from = n - std::min(n, keep);
  return fit_loglog({h.begin() + from, h.end()}, {values.begin() + from, values.end()});
}

ConvergenceTable family_convergence(const MeshFamily& family, const ManufacturedSolution& u, int quad_order) {
  ConvergenceTable t;
  for (std::size_t l = 0; l < family.meshes.size(); ++l) {
    const Mesh& m = family.meshes[l];
    const int q = quad_order > 0 ? quad_order : default_quad_order(m.kind);
    t.h.push_back(l < family.h.size() ? family.h[l] : mesh_size(m));
    t.error.push_back(mesh_error(m, u, q));
  }
  if (t.h.size() >= 2) t.slope = fit_slope_finest(t.h, t.error);
  return t;
}

}  // namespace rbez
