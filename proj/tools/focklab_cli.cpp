// Command-line front end. Talks to the numerical core only through the C API.
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "focklab/focklab.h"

namespace {

int fail(fl_status s) {
  std::fprintf(stderr, "error: %s\n", fl_last_error());
  return static_cast<int>(s);
}

struct RunArgs {
  std::string config;
  std::string out;
  std::string seed;
  std::vector<std::string> overrides;
};

int run_subcommand(const std::string& name, const RunArgs& a) {
  fl_config* cfg = nullptr;
  fl_status s = a.config.empty() ? fl_config_new(&cfg) : fl_config_load(a.config.c_str(), &cfg);
  if (s != FL_OK) return fail(s);
  auto set = [&](const std::string& k, const std::string& v) {
    if (s == FL_OK) s = fl_config_set(cfg, k.c_str(), v.c_str());
  };
  if (!a.out.empty()) set("run.out", a.out);
  if (!a.seed.empty()) set("run.seed", a.seed);
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error [validation]: override '%s' is not key=value\n", kv.c_str());
      fl_config_free(cfg);
      return FL_VALIDATION;
    }
    set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  char dir[4096];
  if (s == FL_OK) s = fl_run(name.c_str(), cfg, dir, sizeof dir);
  fl_config_free(cfg);
  if (s != FL_OK) return fail(s);
  std::printf("%s\n", dir);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* w = std::getenv("FOCKLAB_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(w, &end, 10);
    if (end == w || *end != '\0' || n < 1) {
      std::fprintf(stderr, "error [validation]: FOCKLAB_WORKERS must be a positive integer\n");
      return FL_VALIDATION;
    }
    fl_set_workers(static_cast<int>(n));
  }

  CLI::App app{"Numerical experiments on weighted Fock spaces and Hankel operators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fl_version());

  RunArgs args;
  std::string selected;
  for (size_t i = 0; i < fl_subcommand_count(); ++i) {
    const std::string name = fl_subcommand_name(i);
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", args.config, "experiment config file (key=value lines)")->check(CLI::ExistingFile);
    sub->add_option("--out", args.out, "output root directory");
    sub->add_option("--seed", args.seed, "random seed (unsigned 64-bit)");
    sub->add_option("overrides", args.overrides, "key=value overrides applied after the file");
    sub->callback([&selected, name] { selected = name; });
  }
  std::string verify_dir;
  CLI::App* verify = app.add_subcommand("verify", "re-check the checksums in a run manifest");
  verify->add_option("directory", verify_dir, "run output directory")->required();
  app.add_subcommand("list", "print the available subcommands")->callback([] {
    for (size_t i = 0; i < fl_subcommand_count(); ++i) std::printf("%s\n", fl_subcommand_name(i));
  });

  CLI11_PARSE(app, argc, argv);

  if (verify->parsed()) {
    const fl_status s = fl_verify_manifest(verify_dir.c_str());
    if (s != FL_OK) return fail(s);
    std::printf("ok\n");
    return 0;
  }
  if (selected.empty()) return 0;
  return run_subcommand(selected, args);
}
