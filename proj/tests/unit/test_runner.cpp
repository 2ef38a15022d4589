#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "doctest.h"
#include "focklab/error.hpp"
#include "focklab/focklab.h"
#include "focklab/runner.hpp"

using namespace focklab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("focklab_unit_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("lattice subcommand writes one row per point") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.out = tmp.path.string();
  const auto m = run("lattice", cfg);
  CHECK(m.directory.find(m.config_hash.substr(0, 16)) != std::string::npos);
  const auto rows = lines(slurp(fs::path(m.directory) / "points.csv"));
  CHECK(rows.size() == 50);
  CHECK(rows[0] == "index,m,s,x,y,sublattice");
  CHECK(verify_manifest(m.directory).empty());
}

TEST_CASE("hankel-svd of conj(w) has leading singular value one") {
  TempDir tmp;
  ExperimentConfig cfg;
  cfg.out = tmp.path.string();
  cfg.basis.degree = 20;
  const auto m = run("hankel-svd", cfg);
  const auto rows = lines(slurp(fs::path(m.directory) / "spectrum.csv"));
  REQUIRE(rows.size() == 22);
  const double s1 = std::stod(rows[1].substr(rows[1].rfind(',') + 1));
  CHECK(s1 >= 0.999);
  CHECK(s1 <= 1.001);
}

TEST_CASE("manifest detects tampering and runs are reproducible") {
  TempDir a, b;
  ExperimentConfig cfg;
  cfg.out = a.path.string();
  const auto m1 = run("ida-norm", cfg);
  cfg.out = b.path.string();
  const auto m2 = run("ida-norm", cfg);
  CHECK(m1.config_hash == m2.config_hash);
  REQUIRE(m1.files.size() == m2.files.size());
  for (std::size_t i = 0; i < m1.files.size(); ++i) CHECK(m1.files[i].sha256 == m2.files[i].sha256);
  std::ofstream(fs::path(m1.directory) / m1.files[0].name, std::ios::app) << "x";
  CHECK_FALSE(verify_manifest(m1.directory).empty());
  CHECK(verify_manifest(m2.directory).empty());
}

TEST_CASE("config hash ignores the output directory but not the numerics") {
  ExperimentConfig a, b;
  b.out = "/elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  b.functional.q = 3.0;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("unknown subcommands and failing runs raise") {
  ExperimentConfig cfg;
  CHECK_THROWS_AS(run("nope", cfg), Error);
  TempDir tmp;
  cfg.out = tmp.path.string();
  cfg.lattice.window = {-1, 1, -1, 1};
  try {
    run("decompose", cfg);
    FAIL("expected a window error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::window);
    CHECK(std::string(e.what()).find("decompose") != std::string::npos);
  }
  CHECK(std::count(subcommands().begin(), subcommands().end(), "thm13-report") == 1);
}

TEST_CASE("C API round trip") {
  fl_config* cfg = nullptr;
  REQUIRE(fl_config_new(&cfg) == FL_OK);
  CHECK(fl_config_set(cfg, "functional.q", "0.5") == FL_OK);
  char dir[1024];
  CHECK(fl_run("ida-norm", cfg, dir, sizeof dir) == FL_VALIDATION);
  CHECK(std::string(fl_last_error()).find("functional.q") != std::string::npos);
  CHECK(fl_config_set(cfg, "functional.q", "2") == FL_OK);
  TempDir tmp;
  CHECK(fl_config_set(cfg, "run.out", tmp.path.c_str()) == FL_OK);
  REQUIRE(fl_run("lattice", cfg, dir, sizeof dir) == FL_OK);
  CHECK(fl_verify_manifest(dir) == FL_OK);
  char hash[65];
  CHECK(fl_config_hash(cfg, hash, sizeof hash) == FL_OK);
  CHECK(std::string(dir).find(std::string(hash, 16)) != std::string::npos);
  size_t needed = 0;
  CHECK(fl_config_serialize(cfg, nullptr, 0, &needed) == FL_OK);
  CHECK(needed > 0);
  fl_config_free(cfg);

  fl_basis* b = nullptr;
  REQUIRE(fl_basis_new(1.0, 0.0, 30, 10, &b) == FL_OK);
  double re = 0, im = 0;
  CHECK(fl_basis_kernel(b, 1, 0, 1, 0, &re, &im) == FL_OK);
  CHECK(re == doctest::Approx(std::exp(1.0) / 3.14159265358979323846).epsilon(1e-12));
  fl_symbol* s = nullptr;
  REQUIRE(fl_symbol_new("conj-linear", 1.0, 1.0, &s) == FL_OK);
  double vals[64];
  size_t count = 0;
  double shift = -1;
  CHECK(fl_hankel_spectrum(s, b, vals, 64, &count, &shift) == FL_OK);
  CHECK(shift >= 0.0);
  CHECK(count == 31);
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-4));
  double g = 0;
  CHECK(fl_ida_distance(s, 0, 0, 1.0, 2.0, 3, &g) == FL_OK);
  CHECK(g == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-8));
  CHECK(fl_symbol_new("nope", 1, 1, &s) != FL_OK);
  fl_symbol_free(s);
  fl_basis_free(b);
  CHECK(fl_subcommand_count() == subcommands().size());
  CHECK(fl_basis_new(-1.0, 0.0, 30, 10, &b) == FL_INVALID_ARGUMENT);
}
