#include "rbez/sampling.hpp"

#include <cmath>

#include "rbez/multiindex.hpp"

namespace rbez {

Vec random_reference_point(int dim, Topology topology, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec x(dim);
  if (topology == Topology::tensor) {
    for (int j = 0; j < dim; ++j) x[j] = u(rng);
    return x;
  }
  // flat Dirichlet via normalized exponentials
  double e[4], s = 0.0;
  for (int j = 0; j <= dim; ++j) {
    e[j] = -std::log(1.0 - u(rng));
    s += e[j];
  }
  for (int j = 0; j < dim; ++j) x[j] = e[j] / s;
  return x;
}

std::vector<Vec> sample_points(const ElementKind& kind, const SampleOptions& opt) {
  std::vector<Vec> out;
  const int n = std::max(1, opt.lattice);
  const IndexSet lat = kind.is_simplex() ? IndexSet(IndexSetSpec::simplex_cartesian(n, kind.dim))
                                         : IndexSet(IndexSetSpec::tensor(MultiIndex(kind.dim, n)));
  for (const auto& i : lat) {
    Vec x(kind.dim);
    for (int j = 0; j < kind.dim; ++j) x[j] = static_cast<double>(i[j]) / n;
    out.push_back(x);
  }
  std::mt19937_64 rng(opt.seed);
  for (int r = 0; r < opt.random; ++r) out.push_back(random_reference_point(kind.dim, kind.topology, rng));
  return out;
}

}  // namespace rbez
