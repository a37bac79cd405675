#pragma once

// Scenario presets and the flat `key = value` configuration format.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "kdvsat/error.hpp"
#include "kdvsat/stepper.hpp"

namespace kdvsat {

/// Shortest-round-trip-safe decimal form, 17 significant digits.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig7", "fig8", "stationary",
                                                 "free"};
  return names;
}

inline ScenarioConfig preset(const std::string& name) {
  constexpr double L = 2.0 * std::numbers::pi;
  ScenarioConfig c;
  c.L = L;
  c.nx = 200;
  c.t_final = 6.0;
  c.nt = 6000;
  c.initial = OneMinusCos{};
  c.a0 = 1.0;
  c.omega = {0.0, L};
  c.sat = {SatKind::none, 0.5};
  if (name == "fig1") return c;
  if (name == "fig2") {
    c.sat.kind = SatKind::l2;
    return c;
  }
  if (name == "fig7" || name == "fig8") {
    c.omega = {L / 3.0, 2.0 * L / 3.0};
    if (name == "fig8") c.sat.kind = SatKind::localized;
    return c;
  }
  if (name == "stationary") {
    c.linearized = true;
    c.control = false;
    return c;
  }
  if (name == "free") {
    c.control = false;
    return c;
  }
  std::string valid;
  for (const auto& n : preset_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InvalidParameter("preset", "unknown preset '" + name + "' (valid: " + valid + ")");
}

// ---------------------------------------------------------------------------

inline std::string initial_to_string(const InitialCondition& ic) {
  if (std::holds_alternative<OneMinusCos>(ic)) return "one_minus_cos";
  if (const auto* g = std::get_if<Gaussian>(&ic))
    return "gaussian:" + format_number(g->center) + "," + format_number(g->width) + "," +
           format_number(g->amplitude);
  return "file:" + std::get<Tabulated>(ic).path;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* first = v.data();
  const char* last = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last)
    throw InvalidParameter(key, "expected a number, got '" + v + "'");
  return out;
}

inline int parse_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw InvalidParameter(key, "expected an integer, got '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw InvalidParameter(key, "expected true|false, got '" + v + "'");
}

}  // namespace detail

inline InitialCondition initial_from_string(const std::string& s) {
  if (s == "one_minus_cos") return OneMinusCos{};
  if (s.rfind("gaussian:", 0) == 0) {
    std::vector<double> parts;
    std::stringstream ss(s.substr(9));
    std::string item;
    while (std::getline(ss, item, ','))
      parts.push_back(detail::parse_double("initial", detail::trim(item)));
    if (parts.size() != 3)
      throw InvalidParameter("initial", "gaussian needs center,width,amplitude");
    return Gaussian{parts[0], parts[1], parts[2]};
  }
  if (s.rfind("file:", 0) == 0 && s.size() > 5) return Tabulated{s.substr(5)};
  throw InvalidParameter("initial",
                         "expected one_minus_cos | gaussian:c,w,amp | file:PATH, got '" + s + "'");
}

/// Applies one `key = value` assignment.
inline void apply_setting(ScenarioConfig& c, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "L") c.L = parse_double(key, value);
  else if (key == "nx") c.nx = parse_int(key, value);
  else if (key == "t_final") c.t_final = parse_double(key, value);
  else if (key == "nt") c.nt = parse_int(key, value);
  else if (key == "u0") c.sat.u0 = parse_double(key, value);
  else if (key == "sat_kind") c.sat.kind = sat_kind_from_string(value);
  else if (key == "a0") c.a0 = parse_double(key, value);
  else if (key == "omega_lo") c.omega.lo = parse_double(key, value);
  else if (key == "omega_hi") c.omega.hi = parse_double(key, value);
  else if (key == "initial") c.initial = initial_from_string(value);
  else if (key == "n_iter") c.n_iter = parse_int(key, value);
  else if (key == "linearized") c.linearized = parse_bool(key, value);
  else if (key == "control") c.control = parse_bool(key, value);
  else if (key == "record_stride") c.record_stride = parse_int(key, value);
  else if (key == "snapshot_stride") c.snapshot_stride = parse_int(key, value);
  else if (key == "early_exit") c.early_exit = parse_bool(key, value);
  else throw InvalidParameter(key, "unknown configuration key");
}

/// Parses config text on top of `base`; keys absent from the text keep the
/// base value. Blank lines and `#` comments are ignored.
inline ScenarioConfig parse_config(const std::string& text, ScenarioConfig base = {}) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DataError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_setting(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return base;
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

inline std::string emit_config(const ScenarioConfig& c) {
  std::ostringstream os;
  auto b = [](bool v) { return v ? "true" : "false"; };
  os << "L = " << format_number(c.L) << '\n'
     << "nx = " << c.nx << '\n'
     << "t_final = " << format_number(c.t_final) << '\n'
     << "nt = " << c.nt << '\n'
     << "u0 = " << format_number(c.sat.u0) << '\n'
     << "sat_kind = " << to_string(c.sat.kind) << '\n'
     << "a0 = " << format_number(c.a0) << '\n'
     << "omega_lo = " << format_number(c.omega.lo) << '\n'
     << "omega_hi = " << format_number(c.omega.hi) << '\n'
     << "initial = " << initial_to_string(c.initial) << '\n'
     << "n_iter = " << c.n_iter << '\n'
     << "linearized = " << b(c.linearized) << '\n'
     << "control = " << b(c.control) << '\n'
     << "record_stride = " << c.record_stride << '\n'
     << "snapshot_stride = " << c.snapshot_stride << '\n'
     << "early_exit = " << b(c.early_exit) << '\n';
  return os.str();
}

}  // namespace kdvsat
