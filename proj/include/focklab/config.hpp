#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "focklab/numeric.hpp"

namespace focklab {

// Flat key=value text with dotted section prefixes. '#' starts a comment.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "<config>");
  static Config load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  // "key=value"; raises validation on malformed input.
  void apply_override(const std::string& assignment);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> get_strings(const std::string& key, const std::vector<std::string>& fallback) const;

  // Sorted "key=value" lines; parse(serialize()) reproduces the config.
  std::string serialize() const;

 private:
  std::map<std::string, std::string> values_;
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

std::string format_double(double v);  // shortest round-trip decimal form

struct WeightSpec {
  std::string kind = "gaussian";
  double alpha = 1.0;
  double epsilon = 0.0;
};

struct BasisSpec {
  int degree = 40;
  int margin = 10;
  int radial_order = 0;  // 0 selects the automatic rule
  int angular = 0;
};

struct LatticeSpec {
  double base_re = 0.0, base_im = 0.0;
  double r = 1.0;
  int modulus = 1;
  std::vector<double> window{-3.0, 3.0, -3.0, 3.0};
  double support_factor = 2.0;
};

struct SymbolSpec {
  std::vector<std::string> families{"conj-linear"};
  std::vector<double> coeffs_re{0.0, 1.0};
  std::vector<double> coeffs_im{0.0, 0.0};
  double beta = 1.0;
  double radius = 1.0;
  double amplitude = 1.0;
};

struct FunctionalSpec {
  double q = 2.0;
  double r = 1.0;
  int d = 6;
  std::vector<double> shells{1.0, 2.0, 3.0, 4.0, 5.0};
  int angles = 8;
  double s = 2.0;  // ida-norm exponent; "inf" allowed
  int ball_order = 12;
  int kernel_degree = 90;
};

struct GaugeSpec {
  std::vector<std::string> families{"power"};
  std::vector<double> powers{2.0};
  std::vector<double> ts;
  std::vector<double> hs;
  std::vector<double> c_grid{0.5, 1.0, 2.0};
};

struct DbarSpec {
  int inner_order = 12;
  int outer_order = 40;
  int angular = 64;
  double inner_radius = 0.5;
  double outer_radius = 0.0;
  double fd_step = 1e-3;
  int test_forms = 3;
};

struct ApproxSpec {
  std::vector<double> t{4.0};
  double lattice_r = 0.5;
  int margin = 30;
};

struct BerezinSpec {
  std::string measure = "gaussian-density";
  double r = 1.0;
  int probes = 12;
};

struct ExperimentConfig {
  WeightSpec weight;
  BasisSpec basis;
  LatticeSpec lattice;
  SymbolSpec symbol;
  FunctionalSpec functional;
  GaugeSpec gauge;
  DbarSpec dbar;
  ApproxSpec approx;
  BerezinSpec berezin;
  std::string out = "out";
  std::uint64_t seed = 0;

  // Field-level validation; raises ErrorCode::validation naming the key.
  static ExperimentConfig from(const Config& c);
  Config to_config() const;
  void validate() const;
};

}  // namespace focklab
