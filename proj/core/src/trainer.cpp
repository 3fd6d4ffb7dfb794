#include "senti/trainer.hpp"

#include <numeric>
#include <stdexcept>

#include "senti/nn.hpp"
#include "senti/rng.hpp"

namespace senti::train {
namespace {

constexpr std::uint64_t kDropoutStream = 0x64726f70;  // distinct rng stream

}  // namespace

std::vector<std::vector<std::size_t>> make_epoch_batches(
    std::size_t n, std::size_t batch_size, std::size_t epoch_index,
    std::uint64_t shuffle_seed) {
  if (n == 0) throw std::invalid_argument("make_epoch_batches: n must be >= 1");
  if (batch_size == 0) {
    throw std::invalid_argument("make_epoch_batches: batch_size must be >= 1");
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  auto eng = rng::make_engine(rng::mix_seed(shuffle_seed, epoch_index));
  rng::shuffle(std::span<std::size_t>(perm), eng);

  std::vector<std::vector<std::size_t>> batches;
  batches.reserve((n + batch_size - 1) / batch_size);
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t end = std::min(start + batch_size, n);
    batches.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(start),
                         perm.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return batches;
}

std::vector<Label> predict_dataset(const model::NetworkParams& params,
                                   const embed::EmbeddingTable& table,
                                   std::span<const LabeledExample> examples) {
  std::vector<Label> preds;
  preds.reserve(examples.size());
  std::mt19937_64 unused_rng(0);
  for (const auto& example : examples) {
    const auto input =
        embed::build_input_matrix(table, example.tokens, params.hyper().maxl);
    const auto probs = model::forward(params, input, /*train_mode=*/false,
                                      unused_rng);
    preds.push_back(model::predict_label(probs));
  }
  return preds;
}

TrainResult train_network(const model::Hyperparams& hyper,
                          const embed::EmbeddingTable& table,
                          std::span<const LabeledExample> train_data,
                          std::span<const LabeledExample> dev_data,
                          std::uint64_t init_seed, const TrainConfig& config,
                          const opt::NadamConfig& nadam_config) {
  if (train_data.empty() || dev_data.empty()) {
    throw DataError("train_network: datasets must be non-empty");
  }
  if (config.batch_size == 0 || config.max_epochs == 0) {
    throw std::invalid_argument("train_network: batch_size and max_epochs must be >= 1");
  }
  hyper.validate();
  nadam_config.validate();
  if (table.dim() != hyper.d) {
    throw DataError("train_network: embedding dimension does not match d");
  }

  TrainResult result;
  std::array<std::size_t, kNumClasses> dev_gold_counts{};
  std::vector<Label> dev_gold;
  dev_gold.reserve(dev_data.size());
  for (const auto& example : dev_data) {
    dev_gold.push_back(example.label);
    ++dev_gold_counts[static_cast<std::size_t>(example.label)];
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (dev_gold_counts[c] == 0) result.dev_class_missing = true;
  }

  model::NetworkParams params = model::NetworkParams::init(hyper, init_seed);
  model::NetworkParams example_grads(hyper, init_seed);
  model::NetworkParams batch_grads(hyper, init_seed);
  opt::NadamState state(params.flat().size());
  auto dropout_rng =
      rng::make_engine(rng::mix_seed(init_seed, kDropoutStream));

  double best_recall = -1.0;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto batches = make_epoch_batches(
        train_data.size(), config.batch_size, epoch - 1, config.shuffle_seed);

    double loss_sum = 0.0;
    model::ForwardCache cache;
    for (const auto& batch : batches) {
      batch_grads.zero();
      for (std::size_t idx : batch) {
        const auto& example = train_data[idx];
        const auto input =
            embed::build_input_matrix(table, example.tokens, hyper.maxl);
        const auto probs = model::forward(params, input, /*train_mode=*/true,
                                          dropout_rng, &cache);
        const std::size_t gold = static_cast<std::size_t>(example.label);
        loss_sum += nn::cross_entropy(probs, gold);
        model::backward(params, cache, gold, example_grads);
        auto acc = batch_grads.flat();
        const auto g = example_grads.flat();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += g[i];
      }
      const double inv = 1.0 / static_cast<double>(batch.size());
      for (double& g : batch_grads.flat()) g *= inv;
      opt::nadam_step(nadam_config, state, params.flat(), batch_grads.flat());
    }

    const auto dev_pred = predict_dataset(params, table, dev_data);
    const auto cm = metrics::confusion(dev_gold, dev_pred);
    EpochStats stats;
    stats.train_loss = loss_sum / static_cast<double>(train_data.size());
    stats.dev_avg_recall = metrics::avg_recall(cm);
    stats.dev_accuracy = metrics::accuracy(cm);
    result.history.push_back(stats);

    if (stats.dev_avg_recall > best_recall) {
      best_recall = stats.dev_avg_recall;
      result.best_params = params;
      result.best_epoch = epoch;
      result.best_dev_recall = best_recall;
    }
  }
  return result;
}

}  // namespace senti::train
