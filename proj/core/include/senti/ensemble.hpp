#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "senti/embeddings.hpp"
#include "senti/model.hpp"
#include "senti/nadam.hpp"
#include "senti/trainer.hpp"
#include "senti/types.hpp"

namespace senti::ens {

/// One trained network awaiting selection.
struct Candidate {
  std::string model_path;  // relative to the run's output directory
  std::uint64_t init_seed = 0;
  double dev_recall = 0.0;
  std::vector<Label> dev_predictions;
};

struct MemberInfo {
  std::string model_path;
  std::uint64_t init_seed = 0;
  double dev_recall = 0.0;
  double max_prior_agreement = 0.0;  // vs. members accepted before it
};

struct EnsembleManifest {
  std::uint32_t version = 1;
  std::size_t k = 0;
  double agreement_threshold = 0.95;
  bool even_k_warning = false;  // odd k recommended for 3-way voting
  std::vector<MemberInfo> members;
  std::map<std::string, std::string> provenance;
};

/// Fraction of positions where a and b carry the same label. Throws on
/// length mismatch or empty input.
double agreement(std::span<const Label> a, std::span<const Label> b);

/// Greedy selection: candidates sorted by dev_recall descending (ties by
/// lower init_seed), accepted iff agreement with every prior member is
/// <= threshold, stopping at k. Throws DataError when fewer than k
/// diverse candidates exist, reporting how many were selectable.
EnsembleManifest select_members(std::vector<Candidate> candidates,
                                std::size_t k, double threshold);

/// Vote with the strictly highest count; ties resolved by the greatest
/// probability mass summed over all members, then by the fixed class
/// order negative < neutral < positive.
Label majority_vote(std::span<const Label> labels,
                    std::span<const std::array<double, kNumClasses>> probs);

struct EnsemblePrediction {
  std::vector<Label> labels;
  std::vector<std::array<int, kNumClasses>> vote_tallies;
};

/// Runs every member on every token sequence and votes. Members must
/// share hyperparameters (checked before any prediction).
EnsemblePrediction ensemble_predict(
    std::span<const model::NetworkParams> members,
    const embed::EmbeddingTable& table,
    std::span<const std::vector<std::string>> token_seqs);

/// Loads the manifest's member models, resolving relative paths against
/// base_dir, and verifies they share hyperparameters.
std::vector<model::NetworkParams> load_members(
    const EnsembleManifest& manifest, const std::filesystem::path& base_dir);

void save_manifest(const EnsembleManifest& manifest,
                   const std::filesystem::path& path);
EnsembleManifest load_manifest(const std::filesystem::path& path);

struct GenerateConfig {
  std::size_t n_candidates = 100;
  std::uint64_t seed_base = 1;
  train::TrainConfig train_config;
  opt::NadamConfig nadam_config;
  std::filesystem::path output_dir;  // candidate models land here
  std::size_t jobs = 1;
};

/// Trains n_candidates networks with init seeds seed_base..seed_base+n-1
/// (per-candidate shuffle seeds derived deterministically), evaluates
/// each on dev with its persisted 32-bit precision, saves each model as
/// candidate_NNN.svt, and returns candidates sorted by dev_recall
/// descending (ties by lower init_seed). Candidate trainings run on up
/// to `jobs` threads; results do not depend on the schedule.
std::vector<Candidate> generate_candidates(
    const model::Hyperparams& hyper, const embed::EmbeddingTable& table,
    std::span<const LabeledExample> train_data,
    std::span<const LabeledExample> dev_data, const GenerateConfig& config,
    const std::map<std::string, std::string>& provenance = {});

}  // namespace senti::ens
