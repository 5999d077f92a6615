#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "rbez/element.hpp"
#include "rbez/family.hpp"
#include "oracle.hpp"
#include "rbez/metrics.hpp"

using namespace rbez;
using testing::v;

TEST_SUITE("metrics") {
  TEST_CASE("scaled jacobian") {
    Eigen::MatrixXd A(2, 2);
    A << 1.0, 0.4, 0.0, 2.0;
    CHECK(scaled_jacobian(affine_element(ElementKind::simplex(2, 3), A, v({0, 0}))) == doctest::Approx(1.0));

    RationalElement fold = identity_element(ElementKind::tensor_uniform(2, 2));
    fold.points.col(index_set(fold.kind).position(MultiIndex{1, 1})) = v({1.6, 1.6});
    const JacobianSample s = sample_jacobian(fold, sample_points(fold.kind));
    CHECK(s.nonpositive);
    CHECK(scaled_jacobian(fold) == 0.0);
    CHECK(distortion_report(fold, 2).nonpositive_detected);
  }

  TEST_CASE("identity report") {
    const RationalElement e = identity_element(ElementKind::tensor_uniform(2, 3));
    const MetricReport r = distortion_report(e, 3);
    CHECK(r.scaled_jacobian == doctest::Approx(1.0));
    CHECK(r.inv_scaled_jacobian_valid);
    CHECK(r.inv_scaled_jacobian_bound == doctest::Approx(1.0));
    CHECK(r.inv_scaled_jacobian_sampled == doctest::Approx(1.0));
    CHECK(r.inv_weight.bound == doctest::Approx(1.0));
    CHECK(r.inv_weight.sampled == doctest::Approx(1.0));
    // h is the corner diameter sqrt 2, so first derivatives scale to 1/sqrt 2
    for (const auto& a : r.scaled_deriv) {
      if (a.alpha.order() == 1)
        CHECK(a.bound == doctest::Approx(std::sqrt(0.5)));
      else if (a.alpha.order() >= 2)
        CHECK(a.bound < 1e-14);
    }
  }

  TEST_CASE("weights and projective invariance") {
    RationalElement e = identity_element(ElementKind::simplex(2, 3));
    const MetricReport a = distortion_report(e, 3);
    e.weights.setConstant(0.5);
    const MetricReport b = distortion_report(e, 3);
    CHECK(b.inv_weight.bound == doctest::Approx(2.0));
    CHECK(a.scaled_jacobian == doctest::Approx(b.scaled_jacobian));
    CHECK(a.inv_scaled_jacobian_bound == doctest::Approx(b.inv_scaled_jacobian_bound));
    CHECK(a.c_det.bound == doctest::Approx(b.c_det.bound));
    CHECK(a.c_det.bound == doctest::Approx(1.0));
  }

  TEST_CASE("bounds dominate samples") {
    std::mt19937_64 rng(31);
    for (int n = 0; n < 5; ++n) {
      const RationalElement e = testing::random_element(ElementKind::tensor_uniform(2, 3), rng, 0.1);
      const MetricReport r = distortion_report(e, 3);
      CHECK(r.scaled_jacobian >= 0.0);
      CHECK(r.scaled_jacobian <= 1.0);
      CHECK(r.inv_weight.bound >= r.inv_weight.sampled * (1 - 1e-12));
      if (r.inv_scaled_jacobian_valid) {
        CHECK(r.inv_scaled_jacobian_sampled >= 1.0);
        CHECK(r.inv_scaled_jacobian_bound >= r.inv_scaled_jacobian_sampled * (1 - 1e-12));
      }
      for (const auto& a : r.scaled_deriv) CHECK(a.bound >= a.sampled * (1 - 1e-12));
      if (r.c_det.bound < INFINITY) CHECK(r.c_det.bound >= r.c_det.sampled * (1 - 1e-12));
    }
  }

  TEST_CASE("composition coefficients") {
    const auto id = alpha_prime_from_norms({1.0, 1.0, 0.0, 0.0, 0.0}, 3);
    for (int k = 0; k <= 4; ++k)
      for (int j = 0; j <= k; ++j) CHECK(id[k][j] == doctest::Approx(j == k ? 1.0 : 0.0));
    const auto aff = alpha_prime_from_norms({1.0, 2.0, 0.0, 0.0, 0.0}, 3);
    for (int k = 0; k <= 4; ++k) CHECK(aff[k][k] == doctest::Approx(std::pow(2.0, k)));
    const auto tab = alpha_prime_table(identity_element(ElementKind::simplex(2, 2)), 2);
    CHECK(tab[0][0] == 1.0);
    CHECK(tab[2][2] == doctest::Approx(1.0));
    CHECK(tab[2][1] == doctest::Approx(0.0));
  }

  TEST_CASE("determinant constant") {
    CHECK(estimate_C_det(identity_element(ElementKind::simplex(2, 3))).bound == doctest::Approx(1.0));
    Eigen::MatrixXd A(2, 2);
    A << 3.0, 1.0, 0.0, 0.5;
    CHECK(estimate_C_det(affine_element(ElementKind::tensor_uniform(2, 2), A, v({1, 1}))).bound ==
          doctest::Approx(1.0));
  }

  TEST_CASE("element certificates") {
    const Constants generous{2.0, 2.0, 2.0};
    CHECK(certify_element(identity_element(ElementKind::simplex(2, 3)), generous).passes());
    RationalElement light = identity_element(ElementKind::simplex(2, 3));
    light.weights[0] = 0.25;
    const ElementCertificate c = certify_element(light, generous);
    CHECK_FALSE(c.weight_ok);
    CHECK(c.inv_weight == doctest::Approx(4.0));
  }

  TEST_CASE("family certificates") {
    const Mesh seed = testing::single(identity_element(ElementKind::tensor_uniform(2, 3)));
    const MeshFamily f = uniform_family(seed, 3);
    CHECK(certify_family(f.meshes, {1.01, 2.0, 1.01}, 1.5).verdict);
    const FamilyCertificate tight = certify_family(f.meshes, {1.01, 2.0, 1.01}, 1.2);
    CHECK_FALSE(tight.verdict);
    CHECK_FALSE(tight.meshes[0][0].shape_ok);
    CHECK(tight.meshes[0][0].det_ratio_ok);
  }

  TEST_CASE("pert2 loses the projective bound") {
    const MeshFamily f = perturb_family(plate_seed(), PertScheme::pert2, 4, 2.0, 1.0);
    const Calibration cal = calibrate(f.meshes[0]);
    Constants c = cal.constants;
    c.c_max *= 1.5;
    c.c_weight *= 1.5;
    c.c_proj *= 1.5;
    const FamilyCertificate cert = certify_family(f.meshes, c, 1.5 * cal.sigma0);
    CHECK_FALSE(cert.verdict);
    bool proj = true;
    for (const auto& e : cert.meshes[3]) proj = proj && e.projective_ok;
    CHECK_FALSE(proj);
    bool first = true;
    for (const auto& e : cert.meshes[0]) first = first && e.passes();
    CHECK(first);
  }

  TEST_CASE("rational derivatives match finite differences") {
    std::mt19937_64 rng(33);
    const RationalElement e = testing::random_element(ElementKind::simplex(2, 3), rng);
    const RationalDerivatives rd(e, 2);
    const Vec xi = v({0.3, 0.25});
    const auto vals = rd.eval(xi);
    for (std::size_t n = 0; n < rd.alphas().size(); ++n) {
      if (rd.alphas()[n].order() == 0) continue;
      const Vec ref = oracle::fd_partial(e, rd.alphas()[n], xi, 1e-3, false);
      CHECK((vals[n] - ref).norm() <= 1e-5 * (1 + ref.norm()));
    }
  }
}
