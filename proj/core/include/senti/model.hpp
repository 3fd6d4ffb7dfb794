#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "senti/embeddings.hpp"
#include "senti/nn.hpp"
#include "senti/tensor.hpp"
#include "senti/types.hpp"

namespace senti::model {

/// Paper-scale defaults; every field is configurable.
struct Hyperparams {
  std::size_t d = 200;
  std::size_t maxl = 99;
  std::vector<std::size_t> filter_sizes{1, 2, 3, 4, 5, 2, 3, 4};
  std::size_t feature_maps = 50;  // f, per bank
  double dropout_p = 0.3;
  std::size_t fc_units = 64;

  static constexpr std::size_t kClasses = kNumClasses;

  /// Width of the concatenated pooled vector: banks * f.
  std::size_t pooled_width() const { return filter_sizes.size() * feature_maps; }

  /// Throws std::invalid_argument on inconsistent values.
  void validate() const;

  bool operator==(const Hyperparams&) const = default;
};

/// All learnable tensors of one network instance, stored as one flat
/// double buffer with named views. Duplicated filter sizes are distinct
/// banks with independent parameters.
class NetworkParams {
 public:
  struct TensorInfo {
    std::string name;
    std::vector<std::size_t> dims;
    std::size_t offset = 0;
    std::size_t size = 0;
  };

  NetworkParams() = default;

  /// Zero-valued parameters of the given shape.
  NetworkParams(const Hyperparams& hyper, std::uint64_t init_seed);

  /// Glorot-uniform weights (per tensor, a = sqrt(6/(fan_in+fan_out))),
  /// zero biases; fully determined by seed.
  static NetworkParams init(const Hyperparams& hyper, std::uint64_t seed);

  const Hyperparams& hyper() const { return hyper_; }
  std::uint64_t init_seed() const { return init_seed_; }

  std::size_t num_banks() const { return hyper_.filter_sizes.size(); }
  nn::ConvBankView bank(std::size_t i) const;
  nn::ConvBankGrad bank_mut(std::size_t i);
  nn::DenseView fc() const;
  nn::DenseGrad fc_mut();
  nn::DenseView out() const;
  nn::DenseGrad out_mut();

  std::span<double> flat() { return flat_; }
  std::span<const double> flat() const { return flat_; }

  /// Canonical serialization order: bank0.weights, bank0.biases, ...,
  /// fc.weights, fc.biases, out.weights, out.biases.
  const std::vector<TensorInfo>& tensors() const { return tensors_; }

  void zero() { std::fill(flat_.begin(), flat_.end(), 0.0); }
  bool same_shape(const NetworkParams& other) const {
    return hyper_ == other.hyper_;
  }

  /// Rounds every parameter through 32-bit floats, the precision the
  /// model file stores. Keeps in-memory evaluation consistent with a
  /// saved-and-reloaded model.
  void round_to_f32();

 private:
  Hyperparams hyper_;
  std::uint64_t init_seed_ = 0;
  std::vector<double> flat_;
  std::vector<TensorInfo> tensors_;
  // offsets into flat_, aligned with tensors_: 2 per bank, then fc w/b,
  // out w/b
  std::span<double> tensor_span(std::size_t index);
  std::span<const double> tensor_span(std::size_t index) const;
};

/// Everything backward needs from one training-mode forward pass.
struct ForwardCache {
  Matrix input;                                   // d x maxl copy
  std::vector<Matrix> conv_out;                   // per bank, f x width
  std::vector<std::vector<double>> relu_out;      // per bank, f * width
  std::vector<std::vector<std::size_t>> argmax;   // per bank, f
  std::vector<double> concat;                     // pooled_width
  std::vector<std::uint8_t> mask;                 // dropout mask
  std::vector<double> dropped;                    // concat after dropout
  std::vector<double> fc_pre;                     // fc_units, pre-ReLU
  std::vector<double> fc_act;                     // fc_units
  std::array<double, kNumClasses> logits{};
  std::array<double, kNumClasses> probs{};
  bool train_mode = false;
};

/// Full forward pass: per bank conv -> ReLU -> global max pool, pooled
/// vectors concatenated in bank order, dropout, dense + ReLU, dense,
/// softmax. rng is only consumed in train_mode (dropout draws).
std::array<double, kNumClasses> forward(const NetworkParams& params,
                                        ConstMatView input, bool train_mode,
                                        std::mt19937_64& rng,
                                        ForwardCache* cache = nullptr);

inline std::array<double, kNumClasses> forward(
    const NetworkParams& params, const embed::InputMatrix& input,
    bool train_mode, std::mt19937_64& rng, ForwardCache* cache = nullptr) {
  return forward(params, input.view(), train_mode, rng, cache);
}

/// Exact gradients of the cross-entropy loss w.r.t. every parameter,
/// overwriting grads (same shape as params). When grad_input is
/// non-null it receives the loss gradient w.r.t. the input matrix
/// (frozen embeddings skip this).
void backward(const NetworkParams& params, const ForwardCache& cache,
              std::size_t gold, NetworkParams& grads,
              Matrix* grad_input = nullptr);

/// Argmax over the class order negative/neutral/positive. Ties prefer
/// neutral, then the earlier class in that fixed order.
Label predict_label(std::span<const double> probs);

}  // namespace senti::model
