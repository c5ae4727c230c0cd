#include "dephasim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace dephasim {

namespace {

// ---- config parsing ----

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void config_fail(int line_no, const std::string& msg) {
  throw std::invalid_argument("config line " + std::to_string(line_no) + ": " +
                              msg);
}

std::string strip_comment(const std::string& line) {
  bool in_quote = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_quote = !in_quote;
    else if (line[i] == '#' && !in_quote) return line.substr(0, i);
  }
  return line;
}

double parse_number(int line_no, const std::string& key,
                    const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(x))
    config_fail(line_no, "value for " + key + " is not a number");
  return x;
}

bool parse_bool(int line_no, const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  config_fail(line_no, "value for " + key + " must be true or false");
}

std::string parse_string(int line_no, const std::string& key,
                         const std::string& value) {
  if (!value.empty() && value.front() == '"') {
    if (value.size() < 2 || value.back() != '"')
      config_fail(line_no, "unterminated string for " + key);
    return value.substr(1, value.size() - 2);
  }
  return value;
}

void apply_key(RunConfig* cfg, int line_no, const std::string& key,
               const std::string& raw) {
  const auto range_fail = [&](const std::string& msg) {
    config_fail(line_no, key + " " + msg);
  };
  if (key == "alpha") {
    const double x = parse_number(line_no, key, raw);
    if (x < 0.0) range_fail("must be non-negative");
    cfg->params.alpha = x;
  } else if (key == "mu") {
    const double x = parse_number(line_no, key, raw);
    if (x <= 0.0) range_fail("must be positive");
    cfg->params.mu = x;
  } else if (key == "v") {
    const double x = parse_number(line_no, key, raw);
    if (x <= 0.0) range_fail("must be positive");
    cfg->params.v = x;
  } else if (key == "omega_c") {
    const double x = parse_number(line_no, key, raw);
    if (x <= 0.0) range_fail("must be positive");
    cfg->params.omega_c = x;
  } else if (key == "omega_0") {
    const double x = parse_number(line_no, key, raw);
    if (x < 0.0) range_fail("must be non-negative");
    cfg->params.omega_0 = x;
  } else if (key == "lambda") {
    const double x = parse_number(line_no, key, raw);
    if (x < 0.0 || x > 1.0) range_fail("must be in [0, 1]");
    cfg->params.lambda = x;
  } else if (key == "tau") {
    const double x = parse_number(line_no, key, raw);
    if (x <= 0.0) range_fail("must be positive");
    cfg->tau = x;
  } else if (key == "horizon") {
    const double x = parse_number(line_no, key, raw);
    if (x <= 0.0) range_fail("must be positive");
    cfg->horizon = x;
  } else if (key == "tol") {
    const double x = parse_number(line_no, key, raw);
    if (x <= 0.0) range_fail("must be positive");
    cfg->tol = x;
  } else if (key == "exponent") {
    const double x = parse_number(line_no, key, raw);
    if (x != 1.0 && x != 2.0) range_fail("must be 1 or 2");
    cfg->exponent = static_cast<int>(x);
  } else if (key == "convention") {
    const std::string s = parse_string(line_no, key, raw);
    try {
      cfg->convention = convention_from_name(s);
    } catch (const std::invalid_argument& e) {
      config_fail(line_no, e.what());
    }
  } else if (key == "format") {
    const std::string s = parse_string(line_no, key, raw);
    if (s != "csv" && s != "json")
      range_fail("must be csv or json");
    cfg->format = s;
  } else if (key == "out") {
    cfg->out = parse_string(line_no, key, raw);
  } else if (key == "strict") {
    cfg->strict = parse_bool(line_no, key, raw);
  } else {
    config_fail(line_no, "unknown key '" + key + "'");
  }
}

// ---- svg helpers ----

std::string fmt_coord(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string fmt_tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;
  bool any = false;
};

ValueRange value_range(const SweepResult& result) {
  ValueRange r;
  r.lo = std::numeric_limits<double>::infinity();
  r.hi = -std::numeric_limits<double>::infinity();
  for (const SweepRow& row : result.rows) {
    if (!std::isfinite(row.value)) continue;
    r.any = true;
    r.lo = std::min(r.lo, row.value);
    r.hi = std::max(r.hi, row.value);
  }
  if (!r.any) {
    r.lo = 0.0;
    r.hi = 1.0;
  } else if (r.lo == r.hi) {
    r.lo -= 0.5;
    r.hi += 0.5;
  }
  return r;
}

// Fraction in [0,1] of a value along an axis, honoring its scale.
double axis_fraction(const SweepAxis& axis, double value) {
  if (axis.scale == AxisScale::log)
    return (std::log(value) - std::log(axis.min)) /
           (std::log(axis.max) - std::log(axis.min));
  return (value - axis.min) / (axis.max - axis.min);
}

double axis_value_at(const SweepAxis& axis, double fraction) {
  if (axis.scale == AxisScale::log)
    return std::exp(std::log(axis.min) +
                    fraction * (std::log(axis.max) - std::log(axis.min)));
  return axis.min + fraction * (axis.max - axis.min);
}

const char* const polyline_palette[4] = {"#1f77b4", "#d62728", "#2ca02c",
                                         "#9467bd"};

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(strip_comment(line));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      config_fail(line_no, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) config_fail(line_no, "missing key before '='");
    if (value.empty()) config_fail(line_no, "missing value for " + key);
    apply_key(&cfg, line_no, key, value);
  }
  return cfg;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string metric_name(SweepMetric metric) {
  switch (metric) {
    case SweepMetric::non_markovianity: return "non_markovianity";
    case SweepMetric::qsl_correlated: return "qsl_correlated";
    case SweepMetric::coherence_initial: return "coherence_initial";
    case SweepMetric::trace_distance_pair: return "trace_distance_pair";
  }
  throw std::logic_error("unknown metric");
}

SweepMetric metric_from_name(const std::string& name) {
  if (name == "non_markovianity") return SweepMetric::non_markovianity;
  if (name == "qsl_correlated") return SweepMetric::qsl_correlated;
  if (name == "coherence_initial") return SweepMetric::coherence_initial;
  if (name == "trace_distance_pair") return SweepMetric::trace_distance_pair;
  throw std::invalid_argument(
      "unknown metric '" + name +
      "' (expected non_markovianity, qsl_correlated, coherence_initial, or "
      "trace_distance_pair)");
}

std::string convention_name(Convention convention) {
  return convention == Convention::as_printed ? "as-printed"
                                              : "with-tau-factor";
}

Convention convention_from_name(const std::string& name) {
  if (name == "as-printed") return Convention::as_printed;
  if (name == "with-tau-factor") return Convention::with_tau_factor;
  throw std::invalid_argument("unknown convention '" + name +
                              "' (expected as-printed or with-tau-factor)");
}

std::string to_csv(const SweepResult& result) {
  const bool two = result.spec.axes.size() == 2;
  std::string out = two
                        ? "axis1,axis1_value,axis2,axis2_value,metric,value,"
                          "converged\n"
                        : "axis1,axis1_value,metric,value,converged\n";
  const std::string metric = metric_name(result.spec.metric);
  for (const SweepRow& row : result.rows) {
    out += result.spec.axes[0].name;
    out += ',';
    out += format_double(row.axis1_value);
    out += ',';
    if (two) {
      out += result.spec.axes[1].name;
      out += ',';
      out += format_double(row.axis2_value);
      out += ',';
    }
    out += metric;
    out += ',';
    out += format_double(row.value);
    out += ',';
    out += row.converged ? "true" : "false";
    out += '\n';
  }
  return out;
}

std::string to_json(const SweepResult& result) {
  nlohmann::ordered_json j;
  j["metric"] = metric_name(result.spec.metric);
  j["axes"] = nlohmann::ordered_json::array();
  for (const SweepAxis& ax : result.spec.axes) {
    j["axes"].push_back({{"name", ax.name},
                         {"min", ax.min},
                         {"max", ax.max},
                         {"count", ax.count},
                         {"scale", ax.scale == AxisScale::log ? "log"
                                                              : "linear"}});
  }
  const ModelParams& p = result.spec.base;
  j["fixed"] = {{"alpha", p.alpha},     {"mu", p.mu},
                {"v", p.v},             {"omega_c", p.omega_c},
                {"omega_0", p.omega_0}, {"lambda", p.lambda}};
  const SweepOptions& o = result.spec.options;
  j["options"] = {{"tau", o.tau},
                  {"horizon", o.horizon},
                  {"tol", o.tol},
                  {"exponent", o.exponent},
                  {"convention", convention_name(o.convention)}};
  std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  j["generated_at"] = stamp;
  j["rows"] = nlohmann::ordered_json::array();
  const bool two = result.spec.axes.size() == 2;
  for (const SweepRow& row : result.rows) {
    nlohmann::ordered_json r;
    r["axis1"] = row.axis1_value;
    if (two) r["axis2"] = row.axis2_value;
    if (std::isfinite(row.value)) r["value"] = row.value;
    else r["value"] = nullptr;
    r["converged"] = row.converged;
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string to_svg(const SweepResult& result) {
  const double width = 800.0, height = 600.0;
  const double px0 = 80.0, px1 = 760.0;   // plot x extent
  const double py0 = 50.0, py1 = 540.0;   // plot y extent
  const SweepAxis& ax1 = result.spec.axes[0];
  const bool two = result.spec.axes.size() == 2;
  const bool family = two && result.spec.axes[1].count <= 4;
  const bool cellmap = two && !family;
  const ValueRange vr = value_range(result);

  const auto x_of = [&](double v) {
    return px0 + axis_fraction(ax1, v) * (px1 - px0);
  };
  const auto y_of_value = [&](double v) {
    return py1 - (v - vr.lo) / (vr.hi - vr.lo) * (py1 - py0);
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " +
         fmt_tick(width) + " " + fmt_tick(height) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"400\" y=\"28\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">" +
         metric_name(result.spec.metric) + "</text>\n";

  // frame
  svg += "<rect x=\"" + fmt_coord(px0) + "\" y=\"" + fmt_coord(py0) +
         "\" width=\"" + fmt_coord(px1 - px0) + "\" height=\"" +
         fmt_coord(py1 - py0) + "\" fill=\"none\" stroke=\"#000000\"/>\n";

  // x ticks
  for (int i = 0; i <= 4; ++i) {
    const double f = static_cast<double>(i) / 4.0;
    const double x = px0 + f * (px1 - px0);
    svg += "<line x1=\"" + fmt_coord(x) + "\" y1=\"" + fmt_coord(py1) +
           "\" x2=\"" + fmt_coord(x) + "\" y2=\"" + fmt_coord(py1 + 6.0) +
           "\" stroke=\"#000000\"/>\n";
    svg += "<text x=\"" + fmt_coord(x) + "\" y=\"" + fmt_coord(py1 + 22.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">" +
           fmt_tick(axis_value_at(ax1, f)) + "</text>\n";
  }
  svg += "<text x=\"" + fmt_coord(0.5 * (px0 + px1)) + "\" y=\"" +
         fmt_coord(py1 + 45.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"14\">" +
         ax1.name + "</text>\n";

  if (cellmap) {
    const SweepAxis& ax2 = result.spec.axes[1];
    // y ticks in axis2 space
    for (int i = 0; i <= 4; ++i) {
      const double f = static_cast<double>(i) / 4.0;
      const double y = py1 - f * (py1 - py0);
      svg += "<line x1=\"" + fmt_coord(px0 - 6.0) + "\" y1=\"" + fmt_coord(y) +
             "\" x2=\"" + fmt_coord(px0) + "\" y2=\"" + fmt_coord(y) +
             "\" stroke=\"#000000\"/>\n";
      svg += "<text x=\"" + fmt_coord(px0 - 10.0) + "\" y=\"" +
             fmt_coord(y + 4.0) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"12\">" +
             fmt_tick(axis_value_at(ax2, f)) + "</text>\n";
    }
    svg += "<text x=\"20\" y=\"" + fmt_coord(0.5 * (py0 + py1)) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\" transform=\"rotate(-90 20 " +
           fmt_coord(0.5 * (py0 + py1)) + ")\">" + ax2.name + "</text>\n";

    const int n1 = ax1.count;
    const int n2 = ax2.count;
    const double cw = (px1 - px0) / static_cast<double>(n1);
    const double ch = (py1 - py0) / static_cast<double>(n2);
    for (std::size_t idx = 0; idx < result.rows.size(); ++idx) {
      const int i1 = static_cast<int>(idx) / n2;
      const int i2 = static_cast<int>(idx) % n2;
      const SweepRow& row = result.rows[idx];
      std::string fill = "#ffcccc";  // failed point
      if (std::isfinite(row.value)) {
        const double norm = (row.value - vr.lo) / (vr.hi - vr.lo);
        const int g = 255 - static_cast<int>(std::lround(norm * 255.0));
        char buf[24];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", g, g, g);
        fill = buf;
      }
      svg += "<rect x=\"" + fmt_coord(px0 + i1 * cw) + "\" y=\"" +
             fmt_coord(py1 - (i2 + 1) * ch) + "\" width=\"" +
             fmt_coord(cw + 0.5) + "\" height=\"" + fmt_coord(ch + 0.5) +
             "\" fill=\"" + fill + "\"/>\n";
    }
  } else {
    // y ticks in value space
    for (int i = 0; i <= 4; ++i) {
      const double f = static_cast<double>(i) / 4.0;
      const double y = py1 - f * (py1 - py0);
      svg += "<line x1=\"" + fmt_coord(px0 - 6.0) + "\" y1=\"" + fmt_coord(y) +
             "\" x2=\"" + fmt_coord(px0) + "\" y2=\"" + fmt_coord(y) +
             "\" stroke=\"#000000\"/>\n";
      svg += "<text x=\"" + fmt_coord(px0 - 10.0) + "\" y=\"" +
             fmt_coord(y + 4.0) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"12\">" +
             fmt_tick(vr.lo + f * (vr.hi - vr.lo)) + "</text>\n";
    }

    const std::size_t inner =
        two ? static_cast<std::size_t>(result.spec.axes[1].count) : 1;
    for (std::size_t i2 = 0; i2 < inner; ++i2) {
      std::string points;
      double family_value = 0.0;
      for (std::size_t idx = i2; idx < result.rows.size(); idx += inner) {
        const SweepRow& row = result.rows[idx];
        family_value = row.axis2_value;
        if (!std::isfinite(row.value)) continue;
        if (!points.empty()) points += ' ';
        points += fmt_coord(x_of(row.axis1_value)) + "," +
                  fmt_coord(y_of_value(row.value));
      }
      const char* color = polyline_palette[i2 % 4];
      svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
             "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
      if (two) {
        svg += "<text x=\"" + fmt_coord(px1 - 8.0) + "\" y=\"" +
               fmt_coord(py0 + 18.0 + 16.0 * static_cast<double>(i2)) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"12\" fill=\"" +
               color + "\">" + result.spec.axes[1].name + " = " +
               fmt_tick(family_value) + "</text>\n";
      }
    }
  }

  svg += "</svg>\n";
  return svg;
}

}  // namespace dephasim
