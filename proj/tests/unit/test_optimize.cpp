#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "rbez/approx.hpp"
#include "rbez/element.hpp"
#include "rbez/errors.hpp"
#include "rbez/family.hpp"
#include "rbez/optimize.hpp"

using namespace rbez;
using testing::v;

namespace {

bool same_fixed_data(const Mesh& a, const Mesh& b) {
  for (std::size_t n = 0; n < a.elements.size(); ++n)
    for (Eigen::Index c = 0; c < a.elements[n].weights.size(); ++c) {
      if (a.elements[n].weights[c] != b.elements[n].weights[c]) return false;
      if (a.fixed[n][static_cast<std::size_t>(c)] &&
          !(a.elements[n].points.col(c).array() == b.elements[n].points.col(c).array()).all())
        return false;
    }
  return true;
}

}  // namespace

TEST_SUITE("optimize") {
  TEST_CASE("affine elements") {
    Eigen::MatrixXd A(2, 2);
    A << 2, 1, 0, 1;
    const RationalElement e = testing::integer_affine(ElementKind::simplex(2, 3), A, v({0, 0}));
    const ElementCost c = element_modified_cost(e);
    REQUIRE(c.modified.size() == 4);
    CHECK(c.modified[2] == 0.0);
    CHECK(c.modified[3] == 0.0);
    const double first = 3 * std::max(A.col(0).norm(), A.col(1).norm());
    CHECK(c.modified[1] == doctest::Approx(first / diameter(e)));
  }

  TEST_CASE("identity square") {
    const ElementCost c = element_modified_cost(identity_element(ElementKind::tensor_uniform(2, 3)));
    // corner diameter is sqrt 2
    CHECK(c.modified[1] == doctest::Approx(std::sqrt(0.5)));
    CHECK(c.modified[2] < 1e-14);
    CHECK(c.modified[3] < 1e-14);
    const Mesh m = uniform_family(testing::single(identity_element(ElementKind::tensor_uniform(2, 3))), 2).meshes[1];
    CHECK(modified_cost_value(m) == doctest::Approx(4 * std::sqrt(0.5)));
  }

  TEST_CASE("uniform scaling") {
    // parametric derivatives are linear in the points, so term k scales as s^(1-k)
    Mesh m = perturb(plate_seed(), PertScheme::pert1, 1, 2.0);
    const CostBreakdown a = modified_cost(m);
    for (auto& e : m.elements) e.points *= 3.0;
    const CostBreakdown b = modified_cost(m);
    for (std::size_t n = 0; n < a.elements.size(); ++n)
      for (std::size_t k = 1; k < a.elements[n].modified.size(); ++k)
        CHECK(b.elements[n].modified[k] ==
              doctest::Approx(a.elements[n].modified[k] * std::pow(3.0, 1.0 - k)).epsilon(1e-12));
  }

  TEST_CASE("bound dominates the sampled cost") {
    const Mesh m = annulus_seed();
    const CostBreakdown c = modified_cost(m, true);
    CHECK(c.modified >= c.cost);
    for (const auto& e : c.elements)
      for (std::size_t k = 1; k < e.modified.size(); ++k) {
        CHECK(e.sampled[k] >= 0.0);
        CHECK(e.modified[k] >= e.sampled[k] * (1 - 1e-12));
      }
  }

  TEST_CASE("smoothed cost") {
    const Mesh m = perturb(plate_seed(), PertScheme::pert1, 1, 2.0);
    const double exact = modified_cost_value(m);
    CHECK(surrogate_cost(m, 10.0) >= exact);
    CHECK(surrogate_cost(m, 1e6) == doctest::Approx(exact).epsilon(1e-3));
  }

  TEST_CASE("affine mesh is stationary") {
    const Mesh m = plate_seed();
    OptimizeOptions o;
    o.iters = 10;
    const OptimizeResult r = optimize_mesh(m, o);
    CHECK(r.trace.size() <= 2);
    CHECK(r.trace.back().true_cost == doctest::Approx(r.trace.front().true_cost).epsilon(1e-12));
  }

  TEST_CASE("perturbed plate improves") {
    const Mesh m = perturb(plate_seed(), PertScheme::pert1, 1, 2.0);
    OptimizeOptions o;
    o.iters = 10;
    const OptimizeResult r = optimize_mesh(m, o);
    CHECK_FALSE(r.stalled);
    CHECK(r.trace.back().true_cost < r.trace.front().true_cost);
    for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k].true_cost <= r.trace[k - 1].true_cost);
    CHECK(modified_cost_value(r.mesh) == doctest::Approx(r.trace.back().true_cost));
    CHECK(same_fixed_data(m, r.mesh));
  }

  TEST_CASE("nothing to move") {
    const Mesh m = testing::single(identity_element(ElementKind::simplex(2, 3)), true);
    CHECK_THROWS_AS(optimize_mesh(m), NothingToOptimizeError);
    OptimizeOptions bad;
    bad.beta = 0.0;
    CHECK_THROWS_AS(optimize_mesh(plate_seed(), bad), DomainError);
  }
}

TEST_SUITE("optimize_chamfer") {
  TEST_CASE("optimized chamfer family is no worse") {
    const Mesh seed = chamfer_seed();
    OptimizeOptions o;
    o.iters = 50;
    const Mesh opt = optimize_mesh(seed, o).mesh;
    const ManufacturedSolution u = make_solution("chamfer");
    const ConvergenceTable a = family_convergence(uniform_family(seed, 3), u);
    const ConvergenceTable b = family_convergence(uniform_family(opt, 3), u);
    for (std::size_t l = 0; l < a.error.size(); ++l) CHECK(b.error[l] <= a.error[l]);
  }
}
