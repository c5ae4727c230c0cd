#pragma once

// Run configuration (flat key = value files), and serialization of sweep
// results to CSV, JSON, and SVG. CSV and SVG output is byte-identical
// across runs; JSON additionally carries a generation timestamp.

#include <string>

#include "dephasim/model.hpp"
#include "dephasim/qsl.hpp"
#include "dephasim/sweep.hpp"

namespace dephasim {

struct RunConfig {
  ModelParams params;
  double tau = 1.0;
  double horizon = 100.0;
  double tol = 1e-6;
  int exponent = 2;
  Convention convention = Convention::as_printed;
  std::string format = "csv";  // csv | json
  std::string out;             // output path ("" = stdout)
  bool strict = false;
};

// Parses a flat config file: `key = value` lines, # comments, quoted or
// bare strings, numbers, booleans. Unknown keys, malformed values, and
// out-of-range values raise std::invalid_argument naming the key and the
// 1-based line number. Applies onto defaults and returns the result.
RunConfig parse_config(const std::string& text);

// Shortest round-trip-exact decimal form (17 significant digits).
std::string format_double(double x);

std::string metric_name(SweepMetric metric);
SweepMetric metric_from_name(const std::string& name);
std::string convention_name(Convention convention);
Convention convention_from_name(const std::string& name);

// CSV: header axis1,axis1_value[,axis2,axis2_value],metric,value,converged;
// 17-significant-digit values.
std::string to_csv(const SweepResult& result);

// JSON document with the sweep definition, fixed parameters, options,
// generation timestamp, and rows.
std::string to_json(const SweepResult& result);

// Self-contained SVG: polyline chart for 1-D sweeps (and 2-D sweeps whose
// second axis has at most 4 values, one polyline per value), grayscale cell
// map otherwise; includes axis tick labels.
std::string to_svg(const SweepResult& result);

}  // namespace dephasim
