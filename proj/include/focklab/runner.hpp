#pragma once

#include <string>
#include <utility>
#include <vector>

#include "focklab/config.hpp"

namespace focklab {

struct OutputFile {
  std::string name;
  std::string sha256;
  std::size_t bytes = 0;
};

struct RunManifest {
  std::string subcommand;
  std::string config_hash;
  std::string config_text;
  std::string directory;
  std::vector<std::pair<std::string, std::string>> module_versions;
  std::vector<std::pair<std::string, std::string>> calibration;
  std::vector<std::pair<std::string, double>> wall_times;
  std::vector<OutputFile> files;
};

const std::vector<std::string>& subcommands();

// Hash of the canonical config, excluding the output directory.
std::string config_hash(const ExperimentConfig& cfg);

// Writes <out>/<subcommand>/<hash16>/ and returns the manifest, which is written last.
RunManifest run(const std::string& subcommand, const ExperimentConfig& cfg);

std::string render_manifest(const RunManifest& m);

// Re-hashes every listed file. Returns an empty string when all match.
std::string verify_manifest(const std::string& directory);

}  // namespace focklab
