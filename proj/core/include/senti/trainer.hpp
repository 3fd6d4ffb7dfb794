#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "senti/embeddings.hpp"
#include "senti/metrics.hpp"
#include "senti/model.hpp"
#include "senti/nadam.hpp"
#include "senti/types.hpp"

namespace senti::train {

struct TrainConfig {
  std::size_t batch_size = 50;
  std::size_t max_epochs = 20;
  std::uint64_t shuffle_seed = 0;
};

struct EpochStats {
  double train_loss = 0.0;       // mean cross-entropy over the epoch
  double dev_avg_recall = 0.0;
  double dev_accuracy = 0.0;
};

struct TrainResult {
  model::NetworkParams best_params;
  std::size_t best_epoch = 0;    // 1-based
  double best_dev_recall = 0.0;
  std::vector<EpochStats> history;
  bool dev_class_missing = false;
};

/// A permutation of 0..n-1 determined by (shuffle_seed, epoch_index),
/// chunked into ceil(n/batch_size) batches; the last may be short.
std::vector<std::vector<std::size_t>> make_epoch_batches(
    std::size_t n, std::size_t batch_size, std::size_t epoch_index,
    std::uint64_t shuffle_seed);

/// Labels every example with the model (inference mode).
std::vector<Label> predict_dataset(const model::NetworkParams& params,
                                   const embed::EmbeddingTable& table,
                                   std::span<const LabeledExample> examples);

/// Mini-batch Nadam on mean cross-entropy per batch, examples reshuffled
/// every epoch, dev macro-average recall evaluated after each epoch.
/// Returns the snapshot with the highest dev recall (earliest epoch wins
/// ties) and the full history. Deterministic given the seeds.
TrainResult train_network(const model::Hyperparams& hyper,
                          const embed::EmbeddingTable& table,
                          std::span<const LabeledExample> train_data,
                          std::span<const LabeledExample> dev_data,
                          std::uint64_t init_seed, const TrainConfig& config,
                          const opt::NadamConfig& nadam_config);

}  // namespace senti::train
