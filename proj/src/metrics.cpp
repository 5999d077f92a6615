#include "rbez/metrics.hpp"

#include <cmath>
#include <limits>

#include "rbez/element.hpp"
#include "rbez/errors.hpp"
#include "rbez/multiindex.hpp"

namespace rbez {

namespace {

std::vector<MultiIndex> alphas_up_to(int d, int k) {
  return IndexSet(IndexSetSpec::simplex_cartesian(k, d)).members();
}

int highest_checked_order(const ElementKind& kind) { return kind.is_simplex() ? kind.simplex_degree() + 1 : kind.max_degree() + 1; }

BernsteinField weight_field(const RationalElement& e) {
  BernsteinField w(e.kind, 1);
  w.coeffs.row(0) = e.weights.transpose();
  return w;
}

}  // namespace

JacobianSample sample_jacobian(const RationalElement& e, const std::vector<Vec>& points) {
  DetEvaluator det(e);
  JacobianSample s;
  s.min_abs = std::numeric_limits<double>::infinity();
  bool pos = false, neg = false;
  for (const Vec& x : points) {
    const double v = det(x);
    if (v > 0) pos = true;
    if (v < 0) neg = true;
    if (v <= 0) s.nonpositive = true;
    s.min_abs = std::min(s.min_abs, std::abs(v));
    s.max_abs = std::max(s.max_abs, std::abs(v));
  }
  s.sign_change = pos && neg;
  return s;
}

double scaled_jacobian(const RationalElement& e, const SampleOptions& opt) {
  const JacobianSample s = sample_jacobian(e, sample_points(e.kind, opt));
  if (s.sign_change || s.max_abs == 0.0) return 0.0;
  return s.min_abs / s.max_abs;
}

BoundPair estimate_C_det(const RationalElement& e, const SampleOptions& opt) {
  const JacobianSample s = sample_jacobian(e, sample_points(e.kind, opt));
  BoundPair b;
  b.sampled = (s.sign_change || s.min_abs == 0.0) ? std::numeric_limits<double>::infinity() : std::sqrt(s.max_abs / s.min_abs);
  b.bound = det_ratio_bound(e).bound;
  return b;
}

RationalDerivatives::RationalDerivatives(const RationalElement& e, int max_order)
    : d_(e.dim()), set_(IndexSetSpec::simplex_cartesian(max_order, e.dim())), alphas_(set_.members()) {
  const BernsteinField net = lift(e);
  for (const auto& a : alphas_) fields_.push_back(derivative_field(net, a));
}

std::vector<Vec> RationalDerivatives::eval(const Vec& xi) const {
  const std::size_t n = alphas_.size();
  std::vector<Vec> xt(n), x(n);
  Eigen::VectorXd b;
  for (std::size_t a = 0; a < n; ++a) {
    eval_basis_all(fields_[a].kind, xi, b);
    xt[a] = fields_[a].coeffs * b;
  }
  const double w = xt[0][d_];
  for (std::size_t a = 0; a < n; ++a) {
    const MultiIndex& al = alphas_[a];
    Vec acc = xt[a].head(d_);
    for (const auto& beta : IndexSet(IndexSetSpec::box(al))) {
      if (beta.order() == 0) continue;
      const MultiIndex rest = al - beta;
      const auto ib = static_cast<std::size_t>(set_.position(beta));
      const auto ir = static_cast<std::size_t>(set_.position(rest));
      acc -= static_cast<double>(multichoose(al, beta)) * xt[ib][d_] * x[ir];
    }
    x[a] = acc / w;
  }
  return x;
}

std::vector<double> map_derivative_sup(const RationalElement& e, int max_order, const std::vector<Vec>& points) {
  RationalDerivatives rd(e, max_order);
  std::vector<double> sup(static_cast<std::size_t>(max_order) + 1, 0.0);
  for (const Vec& xi : points) {
    const auto v = rd.eval(xi);
    for (std::size_t a = 0; a < v.size(); ++a) {
      const auto m = static_cast<std::size_t>(rd.alphas()[a].order());
      sup[m] = std::max(sup[m], v[a].norm());
    }
  }
  return sup;
}

std::vector<std::vector<double>> alpha_prime_from_norms(const std::vector<double>& norms, int p) {
  const int top = p + 1;
  std::vector<std::vector<double>> t(static_cast<std::size_t>(top) + 1);
  for (int k = 0; k <= top; ++k) {
    t[k].assign(static_cast<std::size_t>(k) + 1, 0.0);
    for (int j = 0; j <= k; ++j) {
      double sum = 0.0;
      for (const auto& comp : composition_pairs(j, k)) {
        double prod = 1.0;
        for (std::size_t m = 0; m < comp.size(); ++m)
          if (comp[m] > 0) prod *= std::pow(norms.at(m + 1), comp[m]);
        sum += prod;
      }
      t[k][j] = sum;
    }
  }
  return t;
}

std::vector<std::vector<double>> alpha_prime_table(const RationalElement& e, int p, const SampleOptions& opt) {
  return alpha_prime_from_norms(map_derivative_sup(e, p + 1, sample_points(e.kind, opt)), p);
}

double nabla_bound(const RationalElement& e, int k) {
  const BernsteinField net = lift(e);
  double m = 0.0;
  for (const auto& a : alphas_of_order(e.dim(), k)) m = std::max(m, coefficient_bound(derivative_field(net, a)));
  return m;
}

double weight_nabla_bound(const RationalElement& e, int k) {
  const BernsteinField w = weight_field(e);
  double m = 0.0;
  for (const auto& a : alphas_of_order(e.dim(), k)) m = std::max(m, coefficient_bound(derivative_field(w, a)));
  return m;
}

double mesh_nabla_max(const Mesh& m, int k) {
  double r = 0.0;
  for (const auto& e : m.elements) r = std::max(r, nabla_bound(e, k));
  return r;
}

double mesh_weight_nabla_max(const Mesh& m, int k) {
  double r = 0.0;
  for (const auto& e : m.elements) r = std::max(r, weight_nabla_bound(e, k));
  return r;
}

MetricReport distortion_report(const RationalElement& e, int order, const SampleOptions& opt) {
  validate(e);
  if (order < 0) throw DomainError("negative metric order");
  MetricReport r;
  const LinearProxy px = proxy(e);
  r.h = px.h;
  r.rho = px.rho;
  r.sigma = px.sigma;
  const auto points = sample_points(e.kind, opt);

  const JacobianSample js = sample_jacobian(e, points);
  r.nonpositive_detected = js.nonpositive;
  r.scaled_jacobian = (js.sign_change || js.max_abs == 0.0) ? 0.0 : js.min_abs / js.max_abs;
  r.inv_scaled_jacobian_sampled =
      (js.sign_change || js.min_abs == 0.0) ? std::numeric_limits<double>::infinity() : std::sqrt(js.max_abs / js.min_abs);
  const DetRatioBound db = det_ratio_bound(e);
  r.inv_scaled_jacobian_bound = db.bound;
  r.inv_scaled_jacobian_valid = db.valid;
  r.c_det = {r.inv_scaled_jacobian_sampled, db.bound};

  double inv_w = 0.0;
  const BernsteinField wf = weight_field(e);
  Eigen::VectorXd b;
  for (const Vec& x : points) {
    eval_basis_all(e.kind, x, b);
    inv_w = std::max(inv_w, 1.0 / (wf.coeffs.row(0).dot(b)));
  }
  r.inv_weight = {inv_w, 1.0 / e.weights.minCoeff()};

  const BernsteinField net = lift(e);
  r.nabla_max.assign(static_cast<std::size_t>(order) + 1, 0.0);
  for (const auto& a : alphas_up_to(e.dim(), order)) {
    const BernsteinField f = derivative_field(net, a);
    const double s = std::pow(px.h, -a.order());
    const double bound = coefficient_bound(f);
    r.scaled_deriv.push_back({a, s * sampled_sup(f, points), s * bound});
    r.nabla_max[a.order()] = std::max(r.nabla_max[a.order()], bound);
  }

  const int p = e.kind.max_degree();
  for (int k = 0; k <= p + 1; ++k) r.weight_nabla_max.push_back(weight_nabla_bound(e, k));
  r.map_nabla_sup = map_derivative_sup(e, p + 1, points);
  r.alpha_prime = alpha_prime_from_norms(r.map_nabla_sup, p);
  return r;
}

ElementCertificate certify_element(const RationalElement& e, const Constants& c, const SampleOptions& opt) {
  ElementCertificate cert;
  const LinearProxy px = proxy(e);
  cert.sigma = px.sigma;
  const DetRatioBound db = det_ratio_bound(e);
  cert.det_bound = db.bound;
  const auto points = sample_points(e.kind, opt);
  const JacobianSample js = sample_jacobian(e, points);
  cert.det_sampled =
      (js.sign_change || js.min_abs == 0.0) ? std::numeric_limits<double>::infinity() : std::sqrt(js.max_abs / js.min_abs);
  cert.det_ratio_ok = db.valid && db.bound <= c.c_max;

  const BernsteinField net = lift(e);
  cert.proj_ratio = sampled_sup(net, points);
  cert.worst_alpha = MultiIndex(e.dim());
  for (const auto& a : alphas_up_to(e.dim(), highest_checked_order(e.kind))) {
    if (a.order() == 0) continue;
    const double ratio = coefficient_bound(derivative_field(net, a)) / std::pow(px.h, a.order());
    if (ratio > cert.proj_ratio) {
      cert.proj_ratio = ratio;
      cert.worst_alpha = a;
    }
  }
  cert.projective_ok = cert.proj_ratio <= c.c_proj;
  cert.inv_weight = 1.0 / e.weights.minCoeff();
  cert.weight_ok = cert.inv_weight <= c.c_weight;
  return cert;
}

FamilyCertificate certify_family(const std::vector<Mesh>& family, const Constants& c, double sigma0,
                                 const SampleOptions& opt) {
  if (family.empty()) throw InputError("empty mesh family");
  FamilyCertificate fc;
  fc.constants = c;
  fc.sigma0 = sigma0;
  fc.verdict = true;
  for (const Mesh& m : family) {
    auto& row = fc.meshes.emplace_back();
    for (const auto& e : m.elements) {
      ElementCertificate ec = certify_element(e, c, opt);
      ec.shape_ok = ec.sigma <= sigma0;
      fc.verdict = fc.verdict && ec.passes();
      row.push_back(ec);
    }
  }
  return fc;
}

Calibration calibrate(const Mesh& m, const SampleOptions& opt) {
  Calibration cal;
  const Constants none{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity()};
  for (const auto& e : m.elements) {
    const ElementCertificate ec = certify_element(e, none, opt);
    cal.constants.c_max = std::max(cal.constants.c_max, ec.det_bound);
    cal.constants.c_proj = std::max(cal.constants.c_proj, ec.proj_ratio);
    cal.constants.c_weight = std::max(cal.constants.c_weight, ec.inv_weight);
    cal.sigma0 = std::max(cal.sigma0, ec.sigma);
  }
  return cal;
}

}  // namespace rbez
