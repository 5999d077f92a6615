#pragma once

#include <vector>

#include "rbez/sampling.hpp"
#include "rbez/types.hpp"

namespace rbez {

struct ElementCost {
  double h = 0.0;
  std::vector<double> modified;  // index k = 1..p, entry 0 unused
  std::vector<double> sampled;   // empty unless requested
};

struct CostBreakdown {
  std::vector<ElementCost> elements;
  double modified = 0.0;
  double cost = 0.0;  // sampled-sup flavor; 0 unless requested
};

// Per-element Modified terms h^-k max_{|alpha|=k} |D^alpha x~| (coefficient bound).
ElementCost element_modified_cost(const RationalElement& e);
double modified_cost_value(const Mesh& m);
CostBreakdown modified_cost(const Mesh& m, bool with_sampled = false, const SampleOptions& opt = {});

// Log-sum-exp smoothing of every max in the Modified cost, temperature 1/beta.
double element_surrogate(const RationalElement& e, double beta);
double surrogate_cost(const Mesh& m, double beta);

struct OptimizeOptions {
  int iters = 50;
  double beta = 100.0;
  double fd_step = 1e-6;       // relative to h
  double armijo = 1e-4;
  double initial_step = 0.1;   // max displacement of the first trial, relative to h
  int max_halvings = 40;
};

struct TraceRow {
  int iter = 0;
  double true_cost = 0.0;
  double surrogate_cost = 0.0;
  double step = 0.0;
};

struct OptimizeResult {
  Mesh mesh;
  std::vector<TraceRow> trace;  // row 0 is the input mesh
  bool stalled = false;
};

// Moves free control points (welded across elements by position); weights
// and fixed points are never touched.
OptimizeResult optimize_mesh(const Mesh& m, const OptimizeOptions& opt = {});

}  // namespace rbez
