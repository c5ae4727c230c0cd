#pragma once

// Parameter sweeps: evaluate one scalar metric over a 1-D or 2-D grid of
// model/driving parameters, with per-point failure isolation and optional
// parallel evaluation (bit-identical to serial). Presets reproduce the
// figure panels fig1a..fig7b.

#include <string>
#include <vector>

#include "dephasim/model.hpp"
#include "dephasim/qsl.hpp"

namespace dephasim {

enum class SweepMetric {
  non_markovianity,
  qsl_correlated,
  coherence_initial,
  trace_distance_pair,
};

enum class AxisScale { linear, log };

struct SweepAxis {
  std::string name;  // alpha, mu, v, omega_c, omega_0, lambda, tau, horizon
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  AxisScale scale = AxisScale::linear;
};

struct SweepOptions {
  double tau = 1.0;       // driving time for qsl/trace-distance metrics
  double horizon = 100.0; // scan horizon for the backflow metric
  double tol = 1e-6;      // backflow convergence tolerance
  int exponent = 2;
  Convention convention = Convention::as_printed;
  bool parallel = true;
};

struct SweepSpec {
  SweepMetric metric = SweepMetric::non_markovianity;
  std::vector<SweepAxis> axes;  // one or two
  ModelParams base;
  SweepOptions options;

  // Throws std::invalid_argument: axis count in {1,2}, known distinct axis
  // names, count >= 2, min < max, log scale needs min > 0.
  void validate() const;
};

struct SweepRow {
  double axis1_value = 0.0;
  double axis2_value = 0.0;  // NaN for 1-D sweeps
  double value = 0.0;        // NaN when the point failed
  bool converged = true;     // false on failure or non-converged backflow
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;  // lexicographic: axis1 outer, axis2 inner
};

// Grid of an axis; endpoints land exactly on min and max.
std::vector<double> axis_values(const SweepAxis& axis);

SweepResult run_sweep(const SweepSpec& spec);

// Preset grids for the figure panels fig1a..fig7b; throws
// std::invalid_argument for an unknown id.
SweepSpec figure_preset(const std::string& figure_id);

}  // namespace dephasim
