#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rbez/types.hpp"

namespace rbez {

struct SampleOptions {
  int lattice = 20;  // lattice order per direction
  int random = 500;  // extra pseudo-random interior points
  std::uint64_t seed = 42;
};

// Closed lattice of the reference element plus random interior points.
std::vector<Vec> sample_points(const ElementKind& kind, const SampleOptions& opt = {});

// Uniform random point in the open reference element.
Vec random_reference_point(int dim, Topology topology, std::mt19937_64& rng);

}  // namespace rbez
