// Command-line interface: kernel tables, decoherence factor, backflow
// measure, speed-limit reports, parameter sweeps, and figure reproduction.
// Exit codes: 0 success, 2 invalid usage/configuration, 3 numerical
// non-convergence.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dephasim/distinguishability.hpp"
#include "dephasim/dynamics.hpp"
#include "dephasim/io.hpp"
#include "dephasim/kernels.hpp"
#include "dephasim/qsl.hpp"
#include "dephasim/sweep.hpp"

namespace {

using dephasim::RunConfig;

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f)
    throw std::invalid_argument("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::invalid_argument("cannot open output file '" + path + "'");
  f << text;
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  write_file(cfg.out, text);
}

// The config path is consumed by a pre-scan of argv; this sink only makes
// the flag parseable wherever it appears.
std::string g_config_sink;

// Shared model/global flags, added to every subcommand. Values land in cfg
// only when the flag is actually given, so config-file settings survive.
void add_common_options(CLI::App* sub, RunConfig* cfg) {
  sub->add_option("--config", g_config_sink, "path to a key = value config file")
      ->type_name("FILE");
  sub->add_option("--alpha", cfg->params.alpha, "coupling strength (>= 0)");
  sub->add_option("--mu", cfg->params.mu, "Ohmicity exponent (> 0)");
  sub->add_option("--v", cfg->params.v, "packet smearing exponent (> 0)");
  sub->add_option("--omega-c,--omega_c", cfg->params.omega_c,
                  "spectral cutoff (> 0)");
  sub->add_option("--omega-0,--omega_0", cfg->params.omega_0,
                  "half level splitting (>= 0)");
  sub->add_option("--lambda", cfg->params.lambda,
                  "initial correlation weight in [0, 1]");
  sub->add_option("--format", cfg->format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg->out, "output path (default stdout)");
  sub->add_flag("--strict", cfg->strict,
                "exit 3 when any sweep row failed to converge");
}

dephasim::SweepAxis parse_axis_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::string token;
  std::istringstream ss(spec);
  while (std::getline(ss, token, ':')) parts.push_back(token);
  if (parts.size() != 4 && parts.size() != 5)
    throw std::invalid_argument(
        "axis spec must be name:min:max:count[:linear|log], got '" + spec +
        "'");
  const auto number = [&](const std::string& s, const char* what) {
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
      throw std::invalid_argument("axis spec '" + spec + "': bad " +
                                  std::string(what) + " '" + s + "'");
    return x;
  };
  dephasim::SweepAxis axis;
  axis.name = parts[0];
  axis.min = number(parts[1], "min");
  axis.max = number(parts[2], "max");
  const double count = number(parts[3], "count");
  if (count != std::floor(count))
    throw std::invalid_argument("axis spec '" + spec +
                                "': count must be an integer");
  axis.count = static_cast<int>(count);
  axis.scale = dephasim::AxisScale::linear;
  if (parts.size() == 5) {
    if (parts[4] == "log") axis.scale = dephasim::AxisScale::log;
    else if (parts[4] == "linear") axis.scale = dephasim::AxisScale::linear;
    else
      throw std::invalid_argument("axis spec '" + spec +
                                  "': scale must be linear or log");
  }
  return axis;
}

// ---- subcommand bodies ----

int do_kernels(const RunConfig& cfg, const std::vector<double>& times) {
  cfg.params.validate();
  const char* const fields[] = {"t",     "r",     "s",       "phi",
                                "r_dot", "s_dot", "phi_dot", "residual"};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::string csv;
  for (const char* f : fields) {
    if (!csv.empty()) csv += ',';
    csv += f;
  }
  csv += '\n';
  for (double t : times) {
    const dephasim::KernelValues c = dephasim::kernel_closed_form(cfg.params, t);
    const dephasim::KernelValues q = dephasim::kernel_quadrature(cfg.params, t);
    double residual = 0.0;
    for (double d : {c.r - q.r, c.s - q.s, c.phi - q.phi, c.r_dot - q.r_dot,
                     c.s_dot - q.s_dot, c.phi_dot - q.phi_dot})
      residual = std::max(residual, std::abs(d));
    const double values[] = {c.t,     c.r,     c.s,       c.phi,
                             c.r_dot, c.s_dot, c.phi_dot, residual};
    nlohmann::ordered_json row;
    std::string line;
    for (std::size_t i = 0; i < 8; ++i) {
      row[fields[i]] = values[i];
      if (!line.empty()) line += ',';
      line += dephasim::format_double(values[i]);
    }
    rows.push_back(std::move(row));
    csv += line + '\n';
  }
  emit(cfg, cfg.format == "json" ? rows.dump(2) + "\n" : csv);
  return 0;
}

int do_kappa(const RunConfig& cfg, const std::vector<double>& times) {
  cfg.params.validate();
  const char* const fields[] = {"t",           "kappa_re",     "kappa_im",
                                "kappa_abs",   "kappa_dot_re", "kappa_dot_im",
                                "kappa_dot_abs"};
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::string csv;
  for (const char* f : fields) {
    if (!csv.empty()) csv += ',';
    csv += f;
  }
  csv += '\n';
  for (double t : times) {
    const dephasim::complex k = dephasim::kappa(cfg.params, t);
    const dephasim::complex kd = dephasim::kappa_dot(cfg.params, t);
    const double values[] = {t,         k.real(),  k.imag(), std::abs(k),
                             kd.real(), kd.imag(), std::abs(kd)};
    nlohmann::ordered_json row;
    std::string line;
    for (std::size_t i = 0; i < 7; ++i) {
      row[fields[i]] = values[i];
      if (!line.empty()) line += ',';
      line += dephasim::format_double(values[i]);
    }
    rows.push_back(std::move(row));
    csv += line + '\n';
  }
  emit(cfg, cfg.format == "json" ? rows.dump(2) + "\n" : csv);
  return 0;
}

int do_nonmarkov(const RunConfig& cfg) {
  cfg.params.validate();
  const dephasim::NonMarkovReport rep = dephasim::non_markovianity(
      cfg.params, cfg.horizon, cfg.exponent, cfg.tol);
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["n_value"] = rep.n_value;
    j["horizon"] = rep.horizon;
    j["exponent"] = rep.exponent;
    j["converged"] = rep.converged;
    j["intervals"] = nlohmann::ordered_json::array();
    for (const auto& iv : rep.intervals)
      j["intervals"].push_back({iv.first, iv.second});
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string out;
    out += "n_value," + dephasim::format_double(rep.n_value) + "\n";
    out += "horizon," + dephasim::format_double(rep.horizon) + "\n";
    out += "exponent," + std::to_string(rep.exponent) + "\n";
    out += std::string("converged,") + (rep.converged ? "true" : "false") + "\n";
    out += "intervals," + std::to_string(rep.intervals.size()) + "\n";
    for (std::size_t i = 0; i < rep.intervals.size(); ++i) {
      out += "interval_" + std::to_string(i + 1) + "_start," +
             dephasim::format_double(rep.intervals[i].first) + "\n";
      out += "interval_" + std::to_string(i + 1) + "_end," +
             dephasim::format_double(rep.intervals[i].second) + "\n";
    }
    emit(cfg, out);
  }
  return rep.converged ? 0 : 3;
}

int do_qsl(const RunConfig& cfg) {
  cfg.params.validate();
  const dephasim::QslReport rep =
      dephasim::make_qsl_report(cfg.params, cfg.tau, cfg.convention);
  const dephasim::QslConsistency con =
      dephasim::qsl_consistency_check(cfg.params, cfg.tau);
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["tau"] = rep.tau;
    j["theta"] = rep.theta;
    j["lambda_op"] = rep.lambda_op;
    j["lambda_tr"] = rep.lambda_tr;
    j["lambda_hs"] = rep.lambda_hs;
    j["tau_ml"] = rep.tau_ml;
    j["tau_mt"] = rep.tau_mt;
    j["tau_unified"] = rep.tau_unified;
    j["tau_correlated"] = rep.tau_correlated;
    j["convention"] = dephasim::convention_name(rep.convention);
    j["coherence_initial"] = rep.coherence_initial;
    j["consistency"] = {{"specialized", con.specialized},
                        {"generic", con.generic},
                        {"rel_diff", con.rel_diff},
                        {"consistent", con.consistent}};
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::string out;
    const auto kv = [&out](const char* k, double x) {
      out += std::string(k) + "," + dephasim::format_double(x) + "\n";
    };
    kv("tau", rep.tau);
    kv("theta", rep.theta);
    kv("lambda_op", rep.lambda_op);
    kv("lambda_tr", rep.lambda_tr);
    kv("lambda_hs", rep.lambda_hs);
    kv("tau_ml", rep.tau_ml);
    kv("tau_mt", rep.tau_mt);
    kv("tau_unified", rep.tau_unified);
    kv("tau_correlated", rep.tau_correlated);
    out += "convention," + dephasim::convention_name(rep.convention) + "\n";
    kv("coherence_initial", rep.coherence_initial);
    kv("consistency_specialized", con.specialized);
    kv("consistency_generic", con.generic);
    kv("consistency_rel_diff", con.rel_diff);
    out += std::string("consistent,") + (con.consistent ? "true" : "false") +
           "\n";
    emit(cfg, out);
  }
  return 0;
}

int sweep_exit_code(const RunConfig& cfg, const dephasim::SweepResult& res) {
  if (!cfg.strict) return 0;
  for (const dephasim::SweepRow& row : res.rows)
    if (!row.converged) return 3;
  return 0;
}

int do_sweep(const RunConfig& cfg, const std::string& metric,
             const std::vector<std::string>& axis_specs, bool serial) {
  dephasim::SweepSpec spec;
  spec.metric = dephasim::metric_from_name(metric);
  if (axis_specs.empty() || axis_specs.size() > 2)
    throw std::invalid_argument("sweep needs one or two --axis specs");
  for (const std::string& s : axis_specs)
    spec.axes.push_back(parse_axis_spec(s));
  spec.base = cfg.params;
  spec.options.tau = cfg.tau;
  spec.options.horizon = cfg.horizon;
  spec.options.tol = cfg.tol;
  spec.options.exponent = cfg.exponent;
  spec.options.convention = cfg.convention;
  spec.options.parallel = !serial;
  const dephasim::SweepResult res = dephasim::run_sweep(spec);
  emit(cfg, cfg.format == "json" ? dephasim::to_json(res)
                                 : dephasim::to_csv(res));
  return sweep_exit_code(cfg, res);
}

int do_reproduce(const RunConfig& cfg, const std::string& figure_id,
                 const std::string& out_dir) {
  dephasim::SweepSpec spec = dephasim::figure_preset(figure_id);
  const dephasim::SweepResult res = dephasim::run_sweep(spec);

  std::filesystem::create_directories(out_dir);
  const std::string base = out_dir + "/" + figure_id;
  write_file(base + ".csv", dephasim::to_csv(res));
  write_file(base + ".svg", dephasim::to_svg(res));

  // summary: rows, min, max, argmax
  double lo = 0.0, hi = 0.0;
  std::size_t argmax = 0;
  bool any = false;
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const double x = res.rows[i].value;
    if (!std::isfinite(x)) continue;
    if (!any || x < lo) lo = x;
    if (!any || x > hi) {
      hi = x;
      argmax = i;
    }
    any = true;
  }
  std::ostringstream line;
  line << figure_id << ": rows=" << res.rows.size();
  if (any) {
    const auto g6 = [](double x) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", x);
      return std::string(buf);
    };
    line << " min=" << g6(lo) << " max=" << g6(hi) << " argmax=("
         << spec.axes[0].name << "=" << g6(res.rows[argmax].axis1_value);
    if (spec.axes.size() == 2)
      line << ", " << spec.axes[1].name << "="
           << g6(res.rows[argmax].axis2_value);
    line << ")";
  } else {
    line << " no finite rows";
  }
  std::cout << line.str() << "\n";
  return sweep_exit_code(cfg, res);
}

int run(int argc, char** argv) {
  RunConfig cfg;

  // Pre-scan for --config so file values become the defaults that explicit
  // flags then override, regardless of flag order.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    else if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
    if (!path.empty()) cfg = dephasim::parse_config(read_file(path));
  }

  CLI::App app{
      "Exact dephasing-qubit dynamics with correlated initial states: "
      "kernels, decoherence factor, backflow measure, and quantum "
      "speed limits."};
  app.require_subcommand(1);
  add_common_options(&app, &cfg);

  // kernels
  CLI::App* kernels = app.add_subcommand(
      "kernels", "closed-form kernel table with quadrature residuals");
  std::vector<double> kernel_times{0.0, 0.5, 1.0, 2.0, 5.0};
  kernels->add_option("--t", kernel_times, "evaluation times")
      ->delimiter(',');
  add_common_options(kernels, &cfg);

  // kappa
  CLI::App* kap = app.add_subcommand(
      "kappa", "decoherence factor and its derivative");
  std::vector<double> kappa_times{0.0, 0.5, 1.0, 2.0, 5.0};
  kap->add_option("--t", kappa_times, "evaluation times")->delimiter(',');
  add_common_options(kap, &cfg);

  // nonmarkov
  CLI::App* nm = app.add_subcommand(
      "nonmarkov", "backflow measure over a scan horizon");
  nm->add_option("--horizon", cfg.horizon, "scan horizon (> 0)");
  nm->add_option("--exponent", cfg.exponent, "distance exponent: 1 or 2");
  nm->add_option("--tol", cfg.tol, "horizon-doubling convergence tolerance");
  add_common_options(nm, &cfg);

  // qsl
  CLI::App* qsl = app.add_subcommand(
      "qsl", "speed-limit report at driving time tau");
  std::string convention_str;
  qsl->add_option("--tau", cfg.tau, "driving time (> 0)");
  qsl->add_option("--convention", convention_str,
                  "as-printed or with-tau-factor")
      ->check(CLI::IsMember({"as-printed", "with-tau-factor"}));
  add_common_options(qsl, &cfg);

  // sweep
  CLI::App* sweep = app.add_subcommand(
      "sweep", "evaluate a metric over a 1-D or 2-D parameter grid");
  std::string metric_str = "non_markovianity";
  std::vector<std::string> axis_specs;
  bool serial = false;
  sweep->add_option("--metric", metric_str,
                    "non_markovianity | qsl_correlated | coherence_initial | "
                    "trace_distance_pair");
  sweep->add_option("--axis", axis_specs,
                    "axis spec name:min:max:count[:linear|log] (1 or 2)");
  sweep->add_flag("--serial", serial, "disable parallel evaluation");
  sweep->add_option("--tau", cfg.tau, "driving time for qsl metrics");
  sweep->add_option("--horizon", cfg.horizon, "backflow scan horizon");
  sweep->add_option("--exponent", cfg.exponent, "distance exponent: 1 or 2");
  sweep->add_option("--tol", cfg.tol, "backflow convergence tolerance");
  std::string sweep_convention;
  sweep->add_option("--convention", sweep_convention,
                    "as-printed or with-tau-factor")
      ->check(CLI::IsMember({"as-printed", "with-tau-factor"}));
  add_common_options(sweep, &cfg);

  // reproduce
  CLI::App* rep = app.add_subcommand(
      "reproduce", "write <figure-id>.csv and .svg for a preset panel");
  std::string figure_id;
  std::string out_dir = ".";
  rep->add_option("figure", figure_id, "figure id (fig1a .. fig7b)")
      ->required();
  rep->add_option("--out-dir", out_dir, "output directory (default .)");
  add_common_options(rep, &cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (!convention_str.empty())
    cfg.convention = dephasim::convention_from_name(convention_str);
  if (!sweep_convention.empty())
    cfg.convention = dephasim::convention_from_name(sweep_convention);

  if (kernels->parsed()) return do_kernels(cfg, kernel_times);
  if (kap->parsed()) return do_kappa(cfg, kappa_times);
  if (nm->parsed()) return do_nonmarkov(cfg);
  if (qsl->parsed()) return do_qsl(cfg);
  if (sweep->parsed()) return do_sweep(cfg, metric_str, axis_specs, serial);
  if (rep->parsed()) return do_reproduce(cfg, figure_id, out_dir);
  return 2;  // unreachable: require_subcommand enforces one
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const dephasim::QuadratureError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
