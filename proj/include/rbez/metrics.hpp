#pragma once

#include <string>
#include <vector>

#include "rbez/multiindex.hpp"
#include "rbez/normalfield.hpp"
#include "rbez/sampling.hpp"
#include "rbez/stencils.hpp"
#include "rbez/types.hpp"

namespace rbez {

struct JacobianSample {
  double min_abs = 0.0;
  double max_abs = 0.0;
  bool nonpositive = false;  // some sampled det <= 0
  bool sign_change = false;
};

JacobianSample sample_jacobian(const RationalElement& e, const std::vector<Vec>& points);

// inf|det| / sup|det| on the sample set; 0 when the determinant changes sign
double scaled_jacobian(const RationalElement& e, const SampleOptions& opt = {});

BoundPair estimate_C_det(const RationalElement& e, const SampleOptions& opt = {});

// Derivatives D^alpha x of the rational map for all |alpha| <= max_order,
// from the Bernstein derivative fields of the projective map and the
// Leibniz rule applied to x~_d = w x.
class RationalDerivatives {
 public:
  RationalDerivatives(const RationalElement& e, int max_order);
  const std::vector<MultiIndex>& alphas() const { return alphas_; }
  // values in the order of alphas()
  std::vector<Vec> eval(const Vec& xi) const;

 private:
  int d_;
  IndexSet set_;
  std::vector<MultiIndex> alphas_;
  std::vector<BernsteinField> fields_;
};

// sup over samples of max_{|alpha|=m} |D^alpha x|, m = 0..max_order
std::vector<double> map_derivative_sup(const RationalElement& e, int max_order, const std::vector<Vec>& points);

// alpha'_{j,k} for 0 <= j <= k <= p+1, indexed [k][j]
std::vector<std::vector<double>> alpha_prime_from_norms(const std::vector<double>& norms, int p);
std::vector<std::vector<double>> alpha_prime_table(const RationalElement& e, int p, const SampleOptions& opt = {});

// max over |alpha| = k of the stencil bound on x~, or on w alone
double nabla_bound(const RationalElement& e, int k);
double weight_nabla_bound(const RationalElement& e, int k);
double mesh_nabla_max(const Mesh& m, int k);
double mesh_weight_nabla_max(const Mesh& m, int k);

struct AlphaMetric {
  MultiIndex alpha;
  double sampled = 0.0;
  double bound = 0.0;
};

struct MetricReport {
  double h = 0.0, rho = 0.0, sigma = 0.0;
  double scaled_jacobian = 0.0;
  bool nonpositive_detected = false;
  double inv_scaled_jacobian_sampled = 0.0;
  double inv_scaled_jacobian_bound = 0.0;
  bool inv_scaled_jacobian_valid = false;
  BoundPair inv_weight;
  std::vector<AlphaMetric> scaled_deriv;  // all |alpha| <= order
  std::vector<double> nabla_max;          // k = 0..order
  std::vector<double> weight_nabla_max;   // k = 0..p+1
  BoundPair c_det;
  std::vector<double> map_nabla_sup;  // m = 0..p+1
  std::vector<std::vector<double>> alpha_prime;
};

MetricReport distortion_report(const RationalElement& e, int order, const SampleOptions& opt = {});

struct Constants {
  double c_max = 0.0;
  double c_proj = 0.0;
  double c_weight = 0.0;
};

struct ElementCertificate {
  bool det_ratio_ok = false, projective_ok = false, weight_ok = false, shape_ok = true;
  double det_bound = 0.0, det_sampled = 0.0;
  double proj_ratio = 0.0;  // max over alpha of |D^alpha x~| / h^|alpha|
  MultiIndex worst_alpha;
  double inv_weight = 0.0;
  double sigma = 0.0;
  bool passes() const { return det_ratio_ok && projective_ok && weight_ok && shape_ok; }
};

ElementCertificate certify_element(const RationalElement& e, const Constants& c, const SampleOptions& opt = {});

struct FamilyCertificate {
  Constants constants;
  double sigma0 = 0.0;
  std::vector<std::vector<ElementCertificate>> meshes;
  bool verdict = false;
};

FamilyCertificate certify_family(const std::vector<Mesh>& family, const Constants& c, double sigma0,
                                 const SampleOptions& opt = {});

// Smallest constants that a mesh satisfies (max over elements of each
// certified quantity), with sigma0 as the last entry.
struct Calibration {
  Constants constants;
  double sigma0 = 0.0;
};
Calibration calibrate(const Mesh& m, const SampleOptions& opt = {});

}  // namespace rbez
