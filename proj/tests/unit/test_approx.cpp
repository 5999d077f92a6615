#include <cmath>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracle.hpp"
#include "rbez/approx.hpp"
#include "rbez/element.hpp"
#include "rbez/errors.hpp"
#include "rbez/family.hpp"

using namespace rbez;
using testing::v;

namespace {

double integrate(const QuadratureRule& q, const std::function<double(const Vec&)>& f) {
  double s = 0.0;
  for (std::size_t n = 0; n < q.nodes.size(); ++n) s += q.weights[n] * f(q.nodes[n]);
  return s;
}

double fact(int n) { return n <= 1 ? 1.0 : n * fact(n - 1); }

}  // namespace

TEST_SUITE("approx") {
  TEST_CASE("gauss legendre") {
    const QuadratureRule one = quadrature(Topology::tensor, 2, 1);
    REQUIRE(one.nodes.size() == 1);
    CHECK(one.nodes[0].isApprox(v({0.5, 0.5})));
    CHECK(one.weights[0] == doctest::Approx(1.0));
    const QuadratureRule q5 = quadrature(Topology::tensor, 2, 5);
    CHECK(integrate(q5, [](const Vec& x) { return x[0] * x[0] * x[1] * x[1]; }) ==
          doctest::Approx(1.0 / 9).epsilon(1e-14));
  }

  TEST_CASE("simplex rules") {
    for (int d = 1; d <= 3; ++d) {
      const QuadratureRule q = quadrature(Topology::simplex, d, 6);
      double s = 0.0;
      for (double w : q.weights) s += w;
      CHECK(s == doctest::Approx(1.0 / fact(d)).epsilon(1e-13));
    }
  }

  TEST_CASE("exactness up to the stated order") {
    for (int d = 1; d <= 3; ++d)
      for (int order : {0, 3, 8, 13}) {
        const QuadratureRule s = quadrature(Topology::simplex, d, order);
        const QuadratureRule t = quadrature(Topology::tensor, d, order);
        // monomials x^a with |a| <= order on the simplex: prod a_j! / (|a| + d)!
        std::vector<int> a(d, 0);
        while (true) {
          int tot = 0;
          double ref = 1.0;
          for (int j = 0; j < d; ++j) {
            tot += a[j];
            ref *= fact(a[j]);
          }
          auto mono = [&](const Vec& x) {
            double m = 1.0;
            for (int j = 0; j < d; ++j) m *= std::pow(x[j], a[j]);
            return m;
          };
          if (tot <= order)
            CHECK(integrate(s, mono) == doctest::Approx(ref / fact(tot + d)).epsilon(1e-13));
          double tref = 1.0;
          for (int j = 0; j < d; ++j) tref /= a[j] + 1;
          CHECK(integrate(t, mono) == doctest::Approx(tref).epsilon(1e-13));
          int j = d - 1;
          while (j >= 0 && ++a[j] > order) a[j--] = 0;
          if (j < 0) break;
        }
      }
    CHECK_THROWS_AS(quadrature(Topology::tensor, 2, 31), DomainError);
    CHECK_THROWS_AS(quadrature(Topology::tensor, 2, -1), DomainError);
  }

  TEST_CASE("solutions") {
    const ManufacturedSolution plate = make_solution("plate");
    CHECK(plate.u(v({2.0, 0.3})) == doctest::Approx(0.0));
    CHECK(plate.u(v({0.5, 1.0})) == doctest::Approx(0.0));
    const ManufacturedSolution hole = make_solution("hole", {{"r", 0.25}});
    CHECK(hole.params.at("r") == 0.25);
    CHECK(hole.u(v({0.25, 0.0})) == doctest::Approx(0.0));
    CHECK(hole.u(v({1.0, 0.3})) == doctest::Approx(0.0));
    const ManufacturedSolution ann = make_solution("annulus");
    CHECK(ann.u(v({1.0, 0.0})) == doctest::Approx(200.0 * std::log(2.0) / std::log(2.0)));
    CHECK(ann.u(v({0.0, 2.0})) == doctest::Approx(70.0));
    const ManufacturedSolution ch = make_solution("chamfer");
    CHECK(ch.u(v({1.0, 0.2})) == doctest::Approx(0.0));
    CHECK(ch.u(v({0.85, 0.85})) == doctest::Approx(0.0));
    CHECK_THROWS_AS(make_solution("disk"), InputError);
  }

  TEST_CASE("representable functions") {
    std::mt19937_64 rng(51);
    const RationalElement e = testing::random_element(ElementKind::simplex(2, 3), rng);
    CHECK(best_approx(e, [](const Vec&) { return 3.0; }, 12).error <= 1e-12);
    const RationalElement f = testing::random_element(ElementKind::tensor_uniform(3, 2), rng);
    CHECK(best_approx(f, [](const Vec&) { return -1.5; }, 10).error <= 1e-12);

    Eigen::MatrixXd A(2, 2);
    A << 1.2, 0.3, -0.2, 0.9;
    const RationalElement aff = affine_element(ElementKind::simplex(2, 3), A, v({0.5, 0.1}));
    auto cubic = [](const Vec& x) { return x[0] * x[0] * x[1] - 2 * x[1] * x[1] * x[1] + x[0] - 4; };
    CHECK(best_approx(aff, cubic, 10).error <= 1e-10);
  }

  TEST_CASE("dense grid oracle") {
    const RationalElement sq = identity_element(ElementKind::tensor_uniform(2, 1));
    auto u = [](const Vec& x) { return x[0] * x[0]; };
    const double ours = best_approx(sq, u, 8).error;
    const double ref = oracle::dense_l2_project(sq, u, 200);
    CHECK(ours == doctest::Approx(ref).epsilon(1e-4));
    // best bilinear error of x^2 on the unit square is 1 / sqrt(180)
    CHECK(ours == doctest::Approx(1.0 / std::sqrt(180.0)).epsilon(1e-12));

    std::mt19937_64 rng(52);
    const RationalElement r = testing::random_element(ElementKind::simplex(2, 2), rng, 0.1);
    auto s = [](const Vec& x) { return std::sin(x[0]) * std::exp(0.5 * x[1]); };
    CHECK(best_approx(r, s, 20).error == doctest::Approx(oracle::dense_l2_project(r, s, 300)).epsilon(2e-3));
  }

  TEST_CASE("invalid elements") {
    RationalElement flip = identity_element(ElementKind::tensor_uniform(2, 2));
    flip.points.row(0) *= -1.0;
    CHECK_THROWS_AS(best_approx(flip, [](const Vec&) { return 1.0; }, 8), InvalidElementError);
    CHECK_THROWS_AS(best_approx(identity_element(ElementKind::simplex(2, 3)), [](const Vec&) { return 1.0; }, 1),
                    RankDeficientError);
  }

  TEST_CASE("slope fits") {
    const std::vector<double> h = {1, 0.5, 0.25, 0.125};
    std::vector<double> e;
    for (double x : h) e.push_back(3 * std::pow(x, 4));
    CHECK(fit_loglog(h, e) == doctest::Approx(4.0));
    e[0] = 100;
    CHECK(fit_slope_finest(h, e) == doctest::Approx(4.0));
    CHECK_THROWS_AS(fit_loglog({1.0}, {1.0}), InputError);
  }

  TEST_CASE("convergence rates") {
    const ManufacturedSolution u = make_solution("plate");
    const ConvergenceTable uni = family_convergence(uniform_family(plate_seed(), 4), u);
    CHECK(uni.slope == doctest::Approx(4.0).epsilon(0.05));
    const ConvergenceTable pert = family_convergence(perturb_family(plate_seed(), PertScheme::pert2, 4, 2.0, 1.0), u);
    CHECK(pert.slope < 3.5);
  }

  TEST_CASE("weight family rates") {
    const ManufacturedSolution u = make_solution("hole");
    const ConvergenceTable a = family_convergence(weight_family(hole_seed(), WeightScheme::subdivide_weights, 6), u, 10);
    const ConvergenceTable b = family_convergence(weight_family(hole_seed(), WeightScheme::boundary_only, 6), u, 10);
    CHECK(a.slope - b.slope >= 0.5);
  }
}
