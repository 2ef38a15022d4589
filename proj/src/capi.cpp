#include "focklab/focklab.h"

#include <cstring>
#include <memory>
#include <string>

#include "focklab/config.hpp"
#include "focklab/error.hpp"
#include "focklab/fock.hpp"
#include "focklab/hankel.hpp"
#include "focklab/oscillation.hpp"
#include "focklab/parallel.hpp"
#include "focklab/runner.hpp"
#include "focklab/symbols.hpp"

struct fl_config {
  focklab::Config config;
};

struct fl_basis {
  focklab::FockBasis basis;
  int margin;
};

struct fl_symbol {
  focklab::Symbol symbol;
};

namespace {

thread_local std::string last_error;

template <class F>
fl_status guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return FL_OK;
  } catch (const focklab::Error& e) {
    last_error = e.what();
    return static_cast<fl_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return FL_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FL_INTERNAL;
  }
}

void need(bool ok, const char* what) {
  if (!ok) throw focklab::Error(focklab::ErrorCode::invalid_argument, what);
}

void copy_out(const std::string& s, char* buf, size_t cap) {
  need(buf != nullptr && cap > s.size(), "output buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

}  // namespace

extern "C" {

const char* fl_version(void) { return "0.1.0"; }

const char* fl_last_error(void) { return last_error.c_str(); }

const char* fl_status_name(fl_status s) {
  if (s == FL_OK) return "ok";
  if (s == FL_INTERNAL) return "internal";
  if (s >= FL_INVALID_ARGUMENT && s <= FL_IO) return focklab::to_string(static_cast<focklab::ErrorCode>(s));
  return "unknown";
}

fl_status fl_set_workers(int workers) {
  return guarded([&] {
    need(workers >= 1, "worker count must be >= 1");
    focklab::set_worker_count(workers);
  });
}

fl_status fl_config_new(fl_config** out) {
  return guarded([&] {
    need(out != nullptr, "null output handle");
    *out = new fl_config{};
  });
}

fl_status fl_config_load(const char* path, fl_config** out) {
  return guarded([&] {
    need(path != nullptr && out != nullptr, "null argument");
    auto c = std::make_unique<fl_config>(fl_config{focklab::Config::load(path)});
    focklab::ExperimentConfig::from(c->config);
    *out = c.release();
  });
}

fl_status fl_config_set(fl_config* cfg, const char* key, const char* value) {
  return guarded([&] {
    need(cfg != nullptr && key != nullptr && value != nullptr, "null argument");
    cfg->config.set(key, value);
  });
}

fl_status fl_config_serialize(const fl_config* cfg, char* buf, size_t cap, size_t* needed) {
  return guarded([&] {
    need(cfg != nullptr, "null config");
    const std::string s = cfg->config.serialize();
    if (needed) *needed = s.size() + 1;
    if (buf) copy_out(s, buf, cap);
  });
}

fl_status fl_config_hash(const fl_config* cfg, char* buf, size_t cap) {
  return guarded([&] {
    need(cfg != nullptr, "null config");
    copy_out(focklab::config_hash(focklab::ExperimentConfig::from(cfg->config)), buf, cap);
  });
}

void fl_config_free(fl_config* cfg) { delete cfg; }

fl_status fl_run(const char* subcommand, const fl_config* cfg, char* dir_buf, size_t cap) {
  return guarded([&] {
    need(subcommand != nullptr && cfg != nullptr, "null argument");
    const auto m = focklab::run(subcommand, focklab::ExperimentConfig::from(cfg->config));
    if (dir_buf) copy_out(m.directory, dir_buf, cap);
  });
}

fl_status fl_verify_manifest(const char* directory) {
  return guarded([&] {
    need(directory != nullptr, "null directory");
    const std::string problem = focklab::verify_manifest(directory);
    if (!problem.empty()) throw focklab::Error(focklab::ErrorCode::io, problem);
  });
}

size_t fl_subcommand_count(void) { return focklab::subcommands().size(); }

const char* fl_subcommand_name(size_t index) {
  const auto& s = focklab::subcommands();
  return index < s.size() ? s[index].c_str() : nullptr;
}

fl_status fl_basis_new(double alpha, double epsilon, int degree, int margin, fl_basis** out) {
  return guarded([&] {
    need(out != nullptr, "null output handle");
    need(margin >= 0, "margin must be >= 0");
    const auto w = epsilon == 0.0 ? focklab::WeightModel::gaussian(alpha)
                                  : focklab::WeightModel::perturbed_gaussian(alpha, epsilon);
    *out = new fl_basis{focklab::FockBasis(w, degree, focklab::hankel_plane_rule(w, degree, margin)), margin};
  });
}

fl_status fl_basis_kernel(const fl_basis* b, double zr, double zi, double wr, double wi, double* re, double* im) {
  return guarded([&] {
    need(b != nullptr && re != nullptr && im != nullptr, "null argument");
    const focklab::KernelEval K(b->basis, focklab::KernelMode::basis_sum);
    const auto v = K({zr, zi}, {wr, wi});
    *re = v.real();
    *im = v.imag();
  });
}

void fl_basis_free(fl_basis* b) { delete b; }

fl_status fl_symbol_new(const char* family, double beta, double radius, fl_symbol** out) {
  return guarded([&] {
    need(family != nullptr && out != nullptr, "null argument");
    focklab::SymbolParams p;
    p.beta = beta;
    p.radius = radius;
    *out = new fl_symbol{focklab::make_symbol(family, p)};
  });
}

fl_status fl_symbol_eval(const fl_symbol* s, double zr, double zi, double* re, double* im) {
  return guarded([&] {
    need(s != nullptr && re != nullptr && im != nullptr, "null argument");
    const auto v = s->symbol({zr, zi});
    *re = v.real();
    *im = v.imag();
  });
}

void fl_symbol_free(fl_symbol* s) { delete s; }

fl_status fl_ida_distance(const fl_symbol* s, double zr, double zi, double r, double q, int d, double* out) {
  return guarded([&] {
    need(s != nullptr && out != nullptr, "null argument");
    *out = focklab::ida_distance(s->symbol, {zr, zi}, r, q, d).residual;
  });
}

fl_status fl_hankel_spectrum(const fl_symbol* s, const fl_basis* b, double* values, size_t cap, size_t* count,
                             double* certificate_shift) {
  return guarded([&] {
    need(s != nullptr && b != nullptr && count != nullptr, "null argument");
    const auto S = focklab::hankel_spectrum(s->symbol, b->basis, b->margin);
    *count = S.values.size();
    if (certificate_shift) *certificate_shift = S.certificate_shift;
    if (values) {
      need(cap >= S.values.size(), "value buffer too small");
      std::memcpy(values, S.values.data(), S.values.size() * sizeof(double));
    }
  });
}

}  // extern "C"
