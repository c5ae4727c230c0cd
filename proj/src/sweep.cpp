#include "dephasim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

#include "dephasim/distinguishability.hpp"
#include "dephasim/dynamics.hpp"

namespace dephasim {

namespace {

constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

const char* const axis_names[] = {"alpha",   "mu",     "v",   "omega_c",
                                  "omega_0", "lambda", "tau", "horizon"};

bool known_axis(const std::string& name) {
  for (const char* n : axis_names)
    if (name == n) return true;
  return false;
}

void apply_axis(const std::string& name, double value, ModelParams* params,
                SweepOptions* options) {
  if (name == "alpha") params->alpha = value;
  else if (name == "mu") params->mu = value;
  else if (name == "v") params->v = value;
  else if (name == "omega_c") params->omega_c = value;
  else if (name == "omega_0") params->omega_0 = value;
  else if (name == "lambda") params->lambda = value;
  else if (name == "tau") options->tau = value;
  else if (name == "horizon") options->horizon = value;
  else throw std::invalid_argument("sweep: unknown axis '" + name + "'");
}

SweepRow eval_point(const SweepSpec& spec, double v1, double v2) {
  SweepRow row;
  row.axis1_value = v1;
  row.axis2_value = v2;
  try {
    ModelParams p = spec.base;
    SweepOptions opt = spec.options;
    bool tau_axis = spec.axes[0].name == "tau";
    apply_axis(spec.axes[0].name, v1, &p, &opt);
    if (spec.axes.size() == 2) {
      tau_axis = tau_axis || spec.axes[1].name == "tau";
      apply_axis(spec.axes[1].name, v2, &p, &opt);
    }
    switch (spec.metric) {
      case SweepMetric::non_markovianity:
        if (tau_axis) {
          // A tau axis asks for the running (partial) backflow.
          row.value = non_markovianity_partial(p, opt.tau, opt.exponent);
          row.converged = true;
        } else {
          const NonMarkovReport rep =
              non_markovianity(p, opt.horizon, opt.exponent, opt.tol);
          row.value = rep.n_value;
          row.converged = rep.converged;
        }
        break;
      case SweepMetric::qsl_correlated:
        row.value = qsl_correlated(p, opt.tau, opt.convention);
        row.converged = true;
        break;
      case SweepMetric::coherence_initial:
        row.value = coherence_l1(p, 0.0);
        row.converged = true;
        break;
      case SweepMetric::trace_distance_pair:
        row.value = optimal_pair_distance(p, opt.tau, opt.exponent);
        row.converged = true;
        break;
    }
  } catch (const std::exception&) {
    row.value = quiet_nan;
    row.converged = false;
  }
  return row;
}

}  // namespace

void SweepSpec::validate() const {
  const auto fail = [](const std::string& msg) {
    throw std::invalid_argument("SweepSpec: " + msg);
  };
  if (axes.empty() || axes.size() > 2) fail("need one or two axes");
  for (const SweepAxis& ax : axes) {
    if (!known_axis(ax.name)) fail("unknown axis '" + ax.name + "'");
    if (ax.count < 2) fail("axis '" + ax.name + "' needs count >= 2");
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max) || !(ax.min < ax.max))
      fail("axis '" + ax.name + "' needs min < max");
    if (ax.scale == AxisScale::log && !(ax.min > 0.0))
      fail("axis '" + ax.name + "' is log-scaled and needs min > 0");
  }
  if (axes.size() == 2 && axes[0].name == axes[1].name)
    fail("axes must have distinct names");
  base.validate();
}

std::vector<double> axis_values(const SweepAxis& axis) {
  std::vector<double> values(static_cast<std::size_t>(axis.count));
  const int last = axis.count - 1;
  for (int i = 0; i <= last; ++i) {
    double x;
    if (i == 0) {
      x = axis.min;
    } else if (i == last) {
      x = axis.max;
    } else if (axis.scale == AxisScale::log) {
      const double lg = std::log(axis.min) +
                        (std::log(axis.max) - std::log(axis.min)) *
                            static_cast<double>(i) / static_cast<double>(last);
      x = std::exp(lg);
    } else {
      x = axis.min + (axis.max - axis.min) * static_cast<double>(i) /
                         static_cast<double>(last);
    }
    values[static_cast<std::size_t>(i)] = x;
  }
  return values;
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> v1 = axis_values(spec.axes[0]);
  const bool two = spec.axes.size() == 2;
  const std::vector<double> v2 =
      two ? axis_values(spec.axes[1]) : std::vector<double>{};
  const std::size_t inner = two ? v2.size() : 1;
  const std::size_t total = v1.size() * inner;

  SweepResult result;
  result.spec = spec;
  result.rows.resize(total);
  const auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double a1 = v1[i / inner];
      const double a2 = two ? v2[i % inner] : quiet_nan;
      result.rows[i] = eval_point(spec, a1, a2);
    }
  };

  if (!spec.options.parallel || total < 2) {
    work(0, total);
    return result;
  }
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const std::size_t n_tasks = std::min<std::size_t>(hw, total);
  std::vector<std::future<void>> futures;
  futures.reserve(n_tasks);
  for (std::size_t k = 0; k < n_tasks; ++k) {
    const std::size_t begin = total * k / n_tasks;
    const std::size_t end = total * (k + 1) / n_tasks;
    futures.push_back(std::async(std::launch::async, work, begin, end));
  }
  for (auto& f : futures) f.get();
  return result;
}

SweepSpec figure_preset(const std::string& figure_id) {
  const auto lin = [](const char* name, double lo, double hi, int n) {
    return SweepAxis{name, lo, hi, n, AxisScale::linear};
  };
  const auto logax = [](const char* name, double lo, double hi, int n) {
    return SweepAxis{name, lo, hi, n, AxisScale::log};
  };

  SweepSpec spec;
  if (figure_id == "fig1a") {
    spec.metric = SweepMetric::non_markovianity;
    spec.axes = {logax("alpha", 1e-3, 0.2, 61), lin("mu", 1.0, 8.0, 61)};
  } else if (figure_id == "fig1b") {
    spec.metric = SweepMetric::non_markovianity;
    spec.axes = {logax("alpha", 1e-3, 0.2, 61), lin("v", 0.01, 2.0, 61)};
  } else if (figure_id == "fig2a") {
    spec.metric = SweepMetric::qsl_correlated;
    spec.axes = {lin("mu", 1.0, 8.0, 101)};
  } else if (figure_id == "fig2b") {
    spec.metric = SweepMetric::non_markovianity;
    spec.axes = {lin("mu", 1.0, 8.0, 101)};
  } else if (figure_id == "fig3a") {
    spec.metric = SweepMetric::qsl_correlated;
    spec.axes = {lin("tau", 0.03, 3.0, 101), lin("mu", 5.0, 8.0, 2)};
    spec.base.lambda = 0.25;
  } else if (figure_id == "fig3b") {
    spec.metric = SweepMetric::non_markovianity;
    spec.axes = {lin("tau", 0.03, 3.0, 101), lin("mu", 5.0, 8.0, 2)};
  } else if (figure_id == "fig4a") {
    spec.metric = SweepMetric::qsl_correlated;
    spec.axes = {lin("tau", 0.03, 3.0, 101), lin("lambda", 0.0, 1.0, 3)};
  } else if (figure_id == "fig4b") {
    spec.metric = SweepMetric::coherence_initial;
    spec.axes = {lin("lambda", 0.0, 1.0, 101)};
  } else if (figure_id == "fig5a") {
    spec.metric = SweepMetric::qsl_correlated;
    spec.axes = {lin("lambda", 0.0, 1.0, 101)};
  } else if (figure_id == "fig5b") {
    spec.metric = SweepMetric::qsl_correlated;
    spec.axes = {logax("alpha", 1e-3, 0.2, 101)};
    spec.base.lambda = 0.25;
  } else if (figure_id == "fig6a") {
    spec.metric = SweepMetric::qsl_correlated;
    spec.axes = {lin("v", 0.01, 2.0, 101)};
    spec.base.lambda = 0.25;
  } else if (figure_id == "fig6b") {
    spec.metric = SweepMetric::non_markovianity;
    spec.axes = {lin("v", 0.01, 2.0, 101)};
  } else if (figure_id == "fig7a") {
    spec.metric = SweepMetric::qsl_correlated;
    spec.axes = {logax("alpha", 1e-3, 0.2, 61), lin("mu", 1.0, 8.0, 61)};
    spec.base.lambda = 0.25;
  } else if (figure_id == "fig7b") {
    spec.metric = SweepMetric::qsl_correlated;
    spec.axes = {lin("lambda", 0.0, 1.0, 61), lin("v", 0.01, 2.0, 61)};
  } else {
    throw std::invalid_argument("unknown figure id '" + figure_id + "'");
  }
  return spec;
}

}  // namespace dephasim
