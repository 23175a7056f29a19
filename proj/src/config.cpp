#include "speclab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace speclab {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("config line " + std::to_string(line) + ": key '" + key +
                          "': cannot parse '" + v + "' as a number");
  }
}

long to_long(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ValidationError("config line " + std::to_string(line) + ": key '" + key +
                          "': cannot parse '" + v + "' as an integer");
  }
}

std::map<int, cplx> to_coeffs(const std::string& v, const std::string& key, int line) {
  const auto parts = split_commas(v);
  if (parts.size() % 3 != 0)
    throw ValidationError("config line " + std::to_string(line) + ": key '" + key +
                          "': coefficient list must be flattened (m, re, im) triples");
  std::map<int, cplx> out;
  for (std::size_t i = 0; i < parts.size(); i += 3) {
    const int m = static_cast<int>(to_long(parts[i], key, line));
    const double re = to_double(parts[i + 1], key, line);
    const double im = to_double(parts[i + 2], key, line);
    out[m] = cplx(re, im);
  }
  return out;
}

Parity to_parity(const std::string& v, const std::string& key, int line) {
  if (v == "even_harmonic") return Parity::EvenHarmonic;
  if (v == "odd_harmonic") return Parity::OddHarmonic;
  if (v == "none") return Parity::None;
  throw ValidationError("config line " + std::to_string(line) + ": key '" + key +
                        "': unknown parity '" + v + "'");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void require_positive(double v, const std::string& field) {
  if (!(v > 0.0)) throw ValidationError("config: field '" + field + "' must be positive");
}

}  // namespace

PeriodicFunction RunConfig::make_V() const { return PeriodicFunction::make(v_coeffs, v_parity); }
PeriodicFunction RunConfig::make_W() const { return PeriodicFunction::make(w_coeffs, w_parity); }

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  bool saw_formats = false;

  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    const auto hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ValidationError("config line " + std::to_string(line) + ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(line) +
                            ": expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;

    if (full == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(val, full, line));
    else if (full == "model.v_coeffs") cfg.v_coeffs = to_coeffs(val, full, line);
    else if (full == "model.w_coeffs") cfg.w_coeffs = to_coeffs(val, full, line);
    else if (full == "model.v_parity") cfg.v_parity = to_parity(val, full, line);
    else if (full == "model.w_parity") cfg.w_parity = to_parity(val, full, line);
    else if (full == "model.wall_shape") {
      if (val == "tanh") cfg.wall_shape = DomainWall::Shape::Tanh;
      else if (val == "smoothstep") cfg.wall_shape = DomainWall::Shape::Smoothstep;
      else
        throw ValidationError("config line " + std::to_string(line) +
                              ": unknown wall_shape '" + val + "'");
    }
    else if (full == "model.wall_scale_rel") cfg.wall_scale_rel = to_double(val, full, line);
    else if (full == "numerics.K") cfg.K = static_cast<int>(to_long(val, full, line));
    else if (full == "numerics.xi_points") cfg.xi_points = static_cast<int>(to_long(val, full, line));
    else if (full == "numerics.h") cfg.h = to_double(val, full, line);
    else if (full == "numerics.n_bands") cfg.n_bands = static_cast<int>(to_long(val, full, line));
    else if (full == "numerics.evans_steps") cfg.evans_steps = static_cast<int>(to_long(val, full, line));
    else if (full == "numerics.evans_scan") cfg.evans_scan = static_cast<int>(to_long(val, full, line));
    else if (full == "numerics.grid_n") cfg.grid_n = static_cast<int>(to_long(val, full, line));
    else if (full == "numerics.max_energy") cfg.max_energy = to_double(val, full, line);
    else if (full == "numerics.degeneracy_tol") cfg.degeneracy_tol = to_double(val, full, line);
    else if (full == "numerics.margin") cfg.margin = to_double(val, full, line);
    else if (full == "bands.delta") cfg.bands_delta = to_double(val, full, line);
    else if (full == "dislocated.delta") cfg.dislocated_delta = to_double(val, full, line);
    else if (full == "sweep.deltas") {
      cfg.deltas.clear();
      for (const auto& p : split_commas(val)) cfg.deltas.push_back(to_double(p, full, line));
    }
    else if (full == "sweep.theta_sharp") cfg.theta_sharp = to_double(val, full, line);
    else if (full == "output.directory") cfg.out_dir = val;
    else if (full == "output.formats") {
      cfg.formats = split_commas(val);
      saw_formats = true;
    }
    else
      throw ValidationError("config line " + std::to_string(line) + ": unknown key '" + full +
                            "'");
  }

  // validation
  require_positive(cfg.h, "numerics.h");
  require_positive(cfg.wall_scale_rel, "model.wall_scale_rel");
  require_positive(cfg.max_energy, "numerics.max_energy");
  require_positive(cfg.degeneracy_tol, "numerics.degeneracy_tol");
  require_positive(static_cast<double>(cfg.K), "numerics.K");
  require_positive(static_cast<double>(cfg.xi_points), "numerics.xi_points");
  require_positive(static_cast<double>(cfg.n_bands), "numerics.n_bands");
  require_positive(static_cast<double>(cfg.evans_steps), "numerics.evans_steps");
  require_positive(static_cast<double>(cfg.evans_scan), "numerics.evans_scan");
  require_positive(static_cast<double>(cfg.grid_n), "numerics.grid_n");
  require_positive(cfg.theta_sharp, "sweep.theta_sharp");
  if (cfg.bands_delta < 0.0)
    throw ValidationError("config: field 'bands.delta' must be >= 0");
  require_positive(cfg.dislocated_delta, "dislocated.delta");
  if (!(cfg.margin >= 0.0 && cfg.margin < 0.5))
    throw ValidationError("config: field 'numerics.margin' must lie in [0, 0.5)");
  for (double d : cfg.deltas) require_positive(d, "sweep.deltas");
  if (saw_formats && cfg.formats.empty())
    throw ValidationError("config: field 'output.formats' must not be empty");
  for (const auto& f : cfg.formats)
    if (f != "json" && f != "csv" && f != "svg")
      throw ValidationError("config: unknown output format '" + f + "'");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "seed=" << seed << "\n";
  auto coeffs = [&](const char* name, const std::map<int, cplx>& m) {
    os << name << "=";
    for (const auto& [k, c] : m)
      os << k << ":" << fmt17(c.real()) << ":" << fmt17(c.imag()) << ";";
    os << "\n";
  };
  coeffs("v_coeffs", v_coeffs);
  coeffs("w_coeffs", w_coeffs);
  os << "v_parity=" << static_cast<int>(v_parity) << "\n";
  os << "w_parity=" << static_cast<int>(w_parity) << "\n";
  os << "wall_shape=" << static_cast<int>(wall_shape) << "\n";
  os << "wall_scale_rel=" << fmt17(wall_scale_rel) << "\n";
  os << "K=" << K << "\nxi_points=" << xi_points << "\nh=" << fmt17(h) << "\n";
  os << "n_bands=" << n_bands << "\nevans_steps=" << evans_steps << "\n";
  os << "evans_scan=" << evans_scan << "\ngrid_n=" << grid_n << "\n";
  os << "max_energy=" << fmt17(max_energy) << "\ndegeneracy_tol=" << fmt17(degeneracy_tol)
     << "\n";
  os << "margin=" << fmt17(margin) << "\n";
  os << "bands_delta=" << fmt17(bands_delta) << "\n";
  os << "dislocated_delta=" << fmt17(dislocated_delta) << "\n";
  os << "deltas=";
  for (double d : deltas) os << fmt17(d) << ";";
  os << "\ntheta_sharp=" << fmt17(theta_sharp) << "\n";
  os << "out_dir=" << out_dir << "\nformats=";
  for (const auto& f : formats) os << f << ";";
  os << "\n";
  return os.str();
}

std::string config_hash(const RunConfig& cfg) {
  const std::string s = cfg.canonical();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace speclab
