#include "focklab/config.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "focklab/error.hpp"
#include "focklab/symbols.hpp"

namespace focklab {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
  });
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::validation, key + ": " + what);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) bad(key, "expected a number, got '" + text + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::vector<std::string> s;
  for (double x : xs) s.push_back(format_double(x));
  return join(s);
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config c;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::validation, origin + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key))
      throw Error(ErrorCode::validation, origin + ":" + std::to_string(lineno) + ": bad key '" + key + "'");
    c.values_[key] = trim(line.substr(eq + 1));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) bad(key, "invalid key");
  if (value.find('\n') != std::string::npos || value.find('#') != std::string::npos) bad(key, "invalid value");
  values_[key] = trim(value);
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw Error(ErrorCode::validation, "override '" + assignment + "' is not key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_double(key, it->second);
}

long Config::get_int(const std::string& key, long fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  long v = 0;
  const std::string& t = it->second;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) bad(key, "expected an integer, got '" + t + "'");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  bad(key, "expected true or false, got '" + it->second + "'");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::string> Config::get_strings(const std::string& key, const std::vector<std::string>& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : split_list(it->second);
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::io, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

ExperimentConfig ExperimentConfig::from(const Config& c) {
  static const std::vector<std::string> known = {
      "weight.kind", "weight.alpha", "weight.epsilon", "basis.degree", "basis.margin", "basis.radial_order",
      "basis.angular", "lattice.base_re", "lattice.base_im", "lattice.r", "lattice.modulus", "lattice.window",
      "lattice.support_factor", "symbol.families", "symbol.coeffs_re", "symbol.coeffs_im", "symbol.beta",
      "symbol.radius", "symbol.amplitude", "functional.q", "functional.r", "functional.d", "functional.shells",
      "functional.angles", "functional.s", "functional.ball_order", "functional.kernel_degree", "gauge.families",
      "gauge.powers", "gauge.ts", "gauge.hs", "gauge.c_grid", "dbar.inner_order", "dbar.outer_order",
      "dbar.angular", "dbar.inner_radius", "dbar.outer_radius", "dbar.fd_step", "dbar.test_forms", "approx.t",
      "approx.lattice_r", "approx.margin", "berezin.measure", "berezin.r", "berezin.probes", "run.out",
      "run.seed"};
  for (const auto& [k, v] : c.values())
    if (std::find(known.begin(), known.end(), k) == known.end()) bad(k, "unknown key");

  ExperimentConfig e;
  e.weight.kind = c.get_string("weight.kind", e.weight.kind);
  e.weight.alpha = c.get_double("weight.alpha", e.weight.alpha);
  e.weight.epsilon = c.get_double("weight.epsilon", e.weight.epsilon);
  e.basis.degree = static_cast<int>(c.get_int("basis.degree", e.basis.degree));
  e.basis.margin = static_cast<int>(c.get_int("basis.margin", e.basis.margin));
  e.basis.radial_order = static_cast<int>(c.get_int("basis.radial_order", e.basis.radial_order));
  e.basis.angular = static_cast<int>(c.get_int("basis.angular", e.basis.angular));
  e.lattice.base_re = c.get_double("lattice.base_re", e.lattice.base_re);
  e.lattice.base_im = c.get_double("lattice.base_im", e.lattice.base_im);
  e.lattice.r = c.get_double("lattice.r", e.lattice.r);
  e.lattice.modulus = static_cast<int>(c.get_int("lattice.modulus", e.lattice.modulus));
  e.lattice.window = c.get_doubles("lattice.window", e.lattice.window);
  e.lattice.support_factor = c.get_double("lattice.support_factor", e.lattice.support_factor);
  e.symbol.families = c.get_strings("symbol.families", e.symbol.families);
  e.symbol.coeffs_re = c.get_doubles("symbol.coeffs_re", e.symbol.coeffs_re);
  e.symbol.coeffs_im = c.get_doubles("symbol.coeffs_im", e.symbol.coeffs_im);
  e.symbol.beta = c.get_double("symbol.beta", e.symbol.beta);
  e.symbol.radius = c.get_double("symbol.radius", e.symbol.radius);
  e.symbol.amplitude = c.get_double("symbol.amplitude", e.symbol.amplitude);
  e.functional.q = c.get_double("functional.q", e.functional.q);
  e.functional.r = c.get_double("functional.r", e.functional.r);
  e.functional.d = static_cast<int>(c.get_int("functional.d", e.functional.d));
  e.functional.shells = c.get_doubles("functional.shells", e.functional.shells);
  e.functional.angles = static_cast<int>(c.get_int("functional.angles", e.functional.angles));
  e.functional.s = c.get_double("functional.s", e.functional.s);
  e.functional.ball_order = static_cast<int>(c.get_int("functional.ball_order", e.functional.ball_order));
  e.functional.kernel_degree = static_cast<int>(c.get_int("functional.kernel_degree", e.functional.kernel_degree));
  e.gauge.families = c.get_strings("gauge.families", e.gauge.families);
  e.gauge.powers = c.get_doubles("gauge.powers", e.gauge.powers);
  e.gauge.ts = c.get_doubles("gauge.ts", e.gauge.ts);
  e.gauge.hs = c.get_doubles("gauge.hs", e.gauge.hs);
  e.gauge.c_grid = c.get_doubles("gauge.c_grid", e.gauge.c_grid);
  e.dbar.inner_order = static_cast<int>(c.get_int("dbar.inner_order", e.dbar.inner_order));
  e.dbar.outer_order = static_cast<int>(c.get_int("dbar.outer_order", e.dbar.outer_order));
  e.dbar.angular = static_cast<int>(c.get_int("dbar.angular", e.dbar.angular));
  e.dbar.inner_radius = c.get_double("dbar.inner_radius", e.dbar.inner_radius);
  e.dbar.outer_radius = c.get_double("dbar.outer_radius", e.dbar.outer_radius);
  e.dbar.fd_step = c.get_double("dbar.fd_step", e.dbar.fd_step);
  e.dbar.test_forms = static_cast<int>(c.get_int("dbar.test_forms", e.dbar.test_forms));
  e.approx.t = c.get_doubles("approx.t", e.approx.t);
  e.approx.lattice_r = c.get_double("approx.lattice_r", e.approx.lattice_r);
  e.approx.margin = static_cast<int>(c.get_int("approx.margin", e.approx.margin));
  e.berezin.measure = c.get_string("berezin.measure", e.berezin.measure);
  e.berezin.r = c.get_double("berezin.r", e.berezin.r);
  e.berezin.probes = static_cast<int>(c.get_int("berezin.probes", e.berezin.probes));
  e.out = c.get_string("run.out", e.out);
  const std::string seed = c.get_string("run.seed", "0");
  const auto res = std::from_chars(seed.data(), seed.data() + seed.size(), e.seed);
  if (res.ec != std::errc() || res.ptr != seed.data() + seed.size()) bad("run.seed", "expected an unsigned 64-bit integer");
  e.validate();
  return e;
}

void ExperimentConfig::validate() const {
  auto need = [](bool ok, const char* key, const std::string& what) {
    if (!ok) bad(key, what);
  };
  need(weight.kind == "gaussian" || weight.kind == "perturbed-gaussian", "weight.kind",
       "must be gaussian or perturbed-gaussian, got '" + weight.kind + "'");
  need(weight.alpha > 0.0, "weight.alpha", "must be > 0");
  need(std::abs(weight.epsilon) < weight.alpha, "weight.epsilon", "must satisfy |epsilon| < alpha");
  need(basis.degree >= 0 && basis.degree <= 400, "basis.degree", "must lie in [0, 400]");
  need(basis.margin >= 0 && basis.margin <= 200, "basis.margin", "must lie in [0, 200]");
  need(basis.radial_order >= 0, "basis.radial_order", "must be >= 0");
  need(basis.angular >= 0, "basis.angular", "must be >= 0");
  need(lattice.r > 0.0, "lattice.r", "must be > 0");
  need(lattice.modulus >= 1, "lattice.modulus", "must be >= 1");
  need(lattice.window.size() == 4 && lattice.window[0] < lattice.window[1] && lattice.window[2] < lattice.window[3],
       "lattice.window", "must be x_min,x_max,y_min,y_max with x_min < x_max and y_min < y_max");
  need(lattice.support_factor > 1.0, "lattice.support_factor", "must be > 1");
  need(!symbol.families.empty(), "symbol.families", "must name at least one family");
  const auto& ids = symbol_families();
  for (const auto& f : symbol.families)
    need(std::find(ids.begin(), ids.end(), f) != ids.end(), "symbol.families", "unknown family '" + f + "'");
  need(symbol.coeffs_re.size() == symbol.coeffs_im.size(), "symbol.coeffs_im", "must match symbol.coeffs_re in length");
  need(symbol.beta > 0.0, "symbol.beta", "must be > 0");
  need(symbol.radius > 0.0, "symbol.radius", "must be > 0");
  need(functional.q >= 1.0 && std::isfinite(functional.q), "functional.q", "must be >= 1");
  need(functional.r > 0.0, "functional.r", "must be > 0");
  need(functional.d >= 0 && functional.d <= 30, "functional.d", "must lie in [0, 30]");
  need(!functional.shells.empty(), "functional.shells", "must be nonempty");
  for (std::size_t i = 0; i < functional.shells.size(); ++i)
    need(functional.shells[i] >= 0.0 && (i == 0 || functional.shells[i] > functional.shells[i - 1]),
         "functional.shells", "must be nonnegative and increasing");
  need(functional.angles >= 1, "functional.angles", "must be >= 1");
  need(functional.s >= 1.0, "functional.s", "must be >= 1 or inf");
  need(functional.ball_order >= 2, "functional.ball_order", "must be >= 2");
  need(functional.kernel_degree >= 1 && functional.kernel_degree <= 400, "functional.kernel_degree",
       "must lie in [1, 400]");
  need(!gauge.families.empty(), "gauge.families", "must be nonempty");
  for (const auto& g : gauge.families)
    need(g == "power" || g == "exp-minus-one" || g == "custom-grid", "gauge.families",
         "unknown gauge '" + g + "'");
  for (double p : gauge.powers) need(p > 0.0, "gauge.powers", "must be > 0");
  need(gauge.ts.size() == gauge.hs.size(), "gauge.hs", "must match gauge.ts in length");
  need(!gauge.c_grid.empty(), "gauge.c_grid", "must be nonempty");
  for (double c : gauge.c_grid) need(c > 0.0, "gauge.c_grid", "must be > 0");
  need(dbar.inner_order >= 2 && dbar.outer_order >= 2 && dbar.angular >= 4, "dbar.inner_order",
       "orders must be >= 2 and angular >= 4");
  need(dbar.inner_radius > 0.0, "dbar.inner_radius", "must be > 0");
  need(dbar.outer_radius == 0.0 || dbar.outer_radius > dbar.inner_radius, "dbar.outer_radius",
       "must be 0 or exceed dbar.inner_radius");
  need(dbar.fd_step > 0.0, "dbar.fd_step", "must be > 0");
  need(dbar.test_forms >= 1 && dbar.test_forms <= 5, "dbar.test_forms", "must lie in [1, 5]");
  need(!approx.t.empty(), "approx.t", "must be nonempty");
  for (double t : approx.t) need(t > 0.0, "approx.t", "must be > 0");
  need(approx.lattice_r > 0.0, "approx.lattice_r", "must be > 0");
  need(approx.margin >= 0, "approx.margin", "must be >= 0");
  need(berezin.measure == "lebesgue" || berezin.measure == "gaussian-density" || berezin.measure == "atomic",
       "berezin.measure", "must be lebesgue, gaussian-density or atomic");
  need(berezin.r > 0.0, "berezin.r", "must be > 0");
  need(berezin.probes >= 1, "berezin.probes", "must be >= 1");
  need(!out.empty(), "run.out", "must be nonempty");
}

Config ExperimentConfig::to_config() const {
  Config c;
  c.set("weight.kind", weight.kind);
  c.set("weight.alpha", format_double(weight.alpha));
  c.set("weight.epsilon", format_double(weight.epsilon));
  c.set("basis.degree", std::to_string(basis.degree));
  c.set("basis.margin", std::to_string(basis.margin));
  c.set("basis.radial_order", std::to_string(basis.radial_order));
  c.set("basis.angular", std::to_string(basis.angular));
  c.set("lattice.base_re", format_double(lattice.base_re));
  c.set("lattice.base_im", format_double(lattice.base_im));
  c.set("lattice.r", format_double(lattice.r));
  c.set("lattice.modulus", std::to_string(lattice.modulus));
  c.set("lattice.window", join(lattice.window));
  c.set("lattice.support_factor", format_double(lattice.support_factor));
  c.set("symbol.families", join(symbol.families));
  c.set("symbol.coeffs_re", join(symbol.coeffs_re));
  c.set("symbol.coeffs_im", join(symbol.coeffs_im));
  c.set("symbol.beta", format_double(symbol.beta));
  c.set("symbol.radius", format_double(symbol.radius));
  c.set("symbol.amplitude", format_double(symbol.amplitude));
  c.set("functional.q", format_double(functional.q));
  c.set("functional.r", format_double(functional.r));
  c.set("functional.d", std::to_string(functional.d));
  c.set("functional.shells", join(functional.shells));
  c.set("functional.angles", std::to_string(functional.angles));
  c.set("functional.s", format_double(functional.s));
  c.set("functional.ball_order", std::to_string(functional.ball_order));
  c.set("functional.kernel_degree", std::to_string(functional.kernel_degree));
  c.set("gauge.families", join(gauge.families));
  c.set("gauge.powers", join(gauge.powers));
  c.set("gauge.ts", join(gauge.ts));
  c.set("gauge.hs", join(gauge.hs));
  c.set("gauge.c_grid", join(gauge.c_grid));
  c.set("dbar.inner_order", std::to_string(dbar.inner_order));
  c.set("dbar.outer_order", std::to_string(dbar.outer_order));
  c.set("dbar.angular", std::to_string(dbar.angular));
  c.set("dbar.inner_radius", format_double(dbar.inner_radius));
  c.set("dbar.outer_radius", format_double(dbar.outer_radius));
  c.set("dbar.fd_step", format_double(dbar.fd_step));
  c.set("dbar.test_forms", std::to_string(dbar.test_forms));
  c.set("approx.t", join(approx.t));
  c.set("approx.lattice_r", format_double(approx.lattice_r));
  c.set("approx.margin", std::to_string(approx.margin));
  c.set("berezin.measure", berezin.measure);
  c.set("berezin.r", format_double(berezin.r));
  c.set("berezin.probes", std::to_string(berezin.probes));
  c.set("run.out", out);
  c.set("run.seed", std::to_string(seed));
  return c;
}

}  // namespace focklab
