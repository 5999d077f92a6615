#include "rbez/optimize.hpp"

#include <cmath>
#include <limits>

#include "rbez/element.hpp"
#include "rbez/errors.hpp"
#include "rbez/normalfield.hpp"
#include "rbez/stencils.hpp"

namespace rbez {

namespace {

double checked_h(const RationalElement& e) {
  const double h = diameter(e);
  if (!(h > 0.0)) throw DegenerateElementError("element has coincident corners");
  return h;
}

// logsumexp of beta * v, divided by beta
double smooth_max(const std::vector<double>& v, double beta) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  double s = 0.0;
  for (double x : v) s += std::exp(beta * (x - m));
  return m + std::log(s) / beta;
}

struct Group {
  std::vector<std::pair<std::size_t, Eigen::Index>> members;  // (element, local index)
  std::vector<std::size_t> elements;                            // distinct touched elements
};

std::vector<Group> free_groups(const Mesh& m, double tol) {
  std::vector<Group> groups;
  std::vector<Vec> where;
  std::vector<bool> fixed;
  for (std::size_t e = 0; e < m.elements.size(); ++e) {
    const auto& el = m.elements[e];
    for (Eigen::Index i = 0; i < el.points.cols(); ++i) {
      const Vec x = el.points.col(i);
      const bool fx = !m.fixed.empty() && m.fixed[e][static_cast<std::size_t>(i)];
      std::size_t g = 0;
      while (g < where.size() && (where[g] - x).norm() > tol) ++g;
      if (g == where.size()) {
        where.push_back(x);
        fixed.push_back(false);
        groups.emplace_back();
      }
      fixed[g] = fixed[g] || fx;
      groups[g].members.emplace_back(e, i);
    }
  }
  std::vector<Group> out;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (fixed[g]) continue;
    for (const auto& [e, i] : groups[g].members) {
      (void)i;
      if (groups[g].elements.empty() || groups[g].elements.back() != e) groups[g].elements.push_back(e);
    }
    out.push_back(std::move(groups[g]));
  }
  return out;
}

void move_group(Mesh& m, const Group& g, const Vec& x) {
  for (const auto& [e, i] : g.members) m.elements[e].points.col(i) = x;
}

bool positive_jacobian(const RationalElement& e, const std::vector<Vec>& points) {
  const DetEvaluator det(e);
  for (const Vec& xi : points)
    if (!(det(xi) > 0.0)) return false;
  return true;
}

}  // namespace

ElementCost element_modified_cost(const RationalElement& e) {
  ElementCost c;
  c.h = checked_h(e);
  const int p = e.kind.max_degree();
  const BernsteinField net = lift(e);
  c.modified.assign(static_cast<std::size_t>(p) + 1, 0.0);
  for (int k = 1; k <= p; ++k) {
    double mx = 0.0;
    for (const auto& a : alphas_of_order(e.dim(), k)) mx = std::max(mx, coefficient_bound(derivative_field(net, a)));
    c.modified[k] = mx / std::pow(c.h, k);
  }
  return c;
}

double modified_cost_value(const Mesh& m) {
  double s = 0.0;
  for (const auto& e : m.elements) {
    const ElementCost c = element_modified_cost(e);
    for (double t : c.modified) s += t;
  }
  return s;
}

CostBreakdown modified_cost(const Mesh& m, bool with_sampled, const SampleOptions& opt) {
  validate(m);
  CostBreakdown out;
  for (const auto& e : m.elements) {
    proxy(e);
    ElementCost c = element_modified_cost(e);
    for (double t : c.modified) out.modified += t;
    if (with_sampled) {
      const auto points = sample_points(e.kind, opt);
      const BernsteinField net = lift(e);
      c.sampled.assign(c.modified.size(), 0.0);
      for (std::size_t k = 1; k < c.modified.size(); ++k) {
        double mx = 0.0;
        for (const auto& a : alphas_of_order(e.dim(), static_cast<int>(k)))
          mx = std::max(mx, sampled_sup(derivative_field(net, a), points));
        c.sampled[k] = mx / std::pow(c.h, static_cast<double>(k));
        out.cost += c.sampled[k];
      }
    }
    out.elements.push_back(std::move(c));
  }
  return out;
}

double element_surrogate(const RationalElement& e, double beta) {
  const double h = checked_h(e);
  const int p = e.kind.max_degree();
  const BernsteinField net = lift(e);
  double s = 0.0;
  std::vector<double> vals;
  for (int k = 1; k <= p; ++k) {
    vals.clear();
    const double scale = std::pow(h, -k);
    for (const auto& a : alphas_of_order(e.dim(), k)) {
      const BernsteinField f = derivative_field(net, a);
      for (Eigen::Index n = 0; n < f.coeffs.cols(); ++n) vals.push_back(scale * f.coeffs.col(n).norm());
    }
    s += smooth_max(vals, beta);
  }
  return s;
}

double surrogate_cost(const Mesh& m, double beta) {
  double s = 0.0;
  for (const auto& e : m.elements) s += element_surrogate(e, beta);
  return s;
}

OptimizeResult optimize_mesh(const Mesh& input, const OptimizeOptions& opt) {
  validate(input);
  if (opt.iters < 0 || !(opt.beta > 0.0)) throw DomainError("iters must be >= 0 and beta > 0");
  const double h0 = [&] {
    double h = 0.0;
    for (const auto& e : input.elements) h = std::max(h, checked_h(e));
    return h;
  }();
  const std::vector<Group> groups = free_groups(input, 1e-10 * h0);
  if (groups.empty()) throw NothingToOptimizeError("no free control points");

  const SampleOptions guard_samples{10, 0, 42};
  std::vector<std::vector<Vec>> guard_points;
  for (const auto& e : input.elements) guard_points.push_back(sample_points(e.kind, guard_samples));

  // m is the surrogate iterate; res.mesh keeps the best true cost seen
  OptimizeResult res;
  res.mesh = input;
  Mesh m = input;
  const int d = m.kind.dim;
  std::vector<double> sur(m.elements.size());
  for (std::size_t e = 0; e < m.elements.size(); ++e) sur[e] = element_surrogate(m.elements[e], opt.beta);
  auto total = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  };
  double best = modified_cost_value(m);
  res.trace.push_back({0, best, total(sur), 0.0});

  double rel_step = opt.initial_step;
  for (int it = 1; it <= opt.iters; ++it) {
    double h = 0.0;
    for (const auto& e : m.elements) h = std::max(h, checked_h(e));
    const double fd = opt.fd_step * h;

    // central-difference gradient, per group and coordinate
    Eigen::MatrixXd g(d, static_cast<Eigen::Index>(groups.size()));
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const Group& grp = groups[gi];
      const Vec x0 = m.elements[grp.members[0].first].points.col(grp.members[0].second);
      for (int c = 0; c < d; ++c) {
        double diff = 0.0;
        for (int sgn : {1, -1}) {
          Vec x = x0;
          x[c] += sgn * fd;
          move_group(m, grp, x);
          for (std::size_t e : grp.elements) diff += sgn * (element_surrogate(m.elements[e], opt.beta) - sur[e]);
        }
        move_group(m, grp, x0);
        g(c, static_cast<Eigen::Index>(gi)) = diff / (2.0 * fd);
      }
    }
    const double gmax = g.cwiseAbs().maxCoeff();
    const double gnorm2 = g.squaredNorm();
    if (!(gmax > 0.0)) break;

    const double base_sur = total(sur);
    double t = rel_step * h / gmax;
    bool moved = false;
    for (int tries = 0; tries <= opt.max_halvings; ++tries, t *= 0.5) {
      Mesh trial = m;
      for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const Group& grp = groups[gi];
        const Vec x0 = m.elements[grp.members[0].first].points.col(grp.members[0].second);
        move_group(trial, grp, x0 - t * g.col(static_cast<Eigen::Index>(gi)));
      }
      std::vector<double> trial_sur(trial.elements.size());
      bool ok = true;
      for (std::size_t e = 0; e < trial.elements.size() && ok; ++e) {
        if (!(diameter(trial.elements[e]) > 0.0)) ok = false;
        else trial_sur[e] = element_surrogate(trial.elements[e], opt.beta);
      }
      if (!ok) continue;
      const double ts = total(trial_sur);
      if (!(ts <= base_sur - opt.armijo * t * gnorm2)) continue;
      for (std::size_t e = 0; e < trial.elements.size() && ok; ++e)
        ok = positive_jacobian(trial.elements[e], guard_points[e]);
      if (!ok) continue;
      m = std::move(trial);
      sur = std::move(trial_sur);
      rel_step = std::min(1.0, 2.0 * t * gmax / h);
      moved = true;
      const double tc = modified_cost_value(m);
      if (tc <= best) {
        best = tc;
        res.mesh = m;
        res.trace.push_back({it, tc, ts, t * gmax});
      }
      break;
    }
    if (!moved) {
      if (it == 1) res.stalled = true;
      break;
    }
  }
  return res;
}

}  // namespace rbez
