#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "senti/model.hpp"
#include "senti/nadam.hpp"
#include "senti/trainer.hpp"

namespace senti::cli {

/// Flat key=value run configuration. Defaults are the paper-scale
/// values; every key can come from the config file or a --key value
/// override. The exhaustive key list is in known_keys() and the README.
struct RunConfig {
  model::Hyperparams hyper;
  opt::NadamConfig nadam;
  train::TrainConfig train_config;

  std::size_t ensemble_k = 10;
  std::size_t n_candidates = 100;
  double agreement_threshold = 0.95;
  std::uint64_t seed_base = 1;
  std::uint64_t init_seed = 1;
  std::uint64_t oov_seed = 1234;
  std::size_t jobs = 1;

  std::filesystem::path embeddings_path;
  std::filesystem::path train_path;
  std::filesystem::path dev_path;
  std::filesystem::path output_dir;

  static const std::vector<std::string>& known_keys();

  /// Throws DataError on unknown keys or unparseable values.
  void set(const std::string& key, const std::string& value);

  /// Every key with its effective value, canonically formatted. Echoed
  /// into output artifacts for provenance.
  std::map<std::string, std::string> to_map() const;

  /// Parses a "key=value" file ("#" comments, blank lines allowed).
  static RunConfig from_file(const std::filesystem::path& path);
};

}  // namespace senti::cli
