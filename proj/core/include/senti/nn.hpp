#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "senti/tensor.hpp"

namespace senti::nn {

/// f filters, each m tokens wide spanning the full embedding depth d.
/// weights: f x m x d (row-major), biases: f.
template <class T>
struct ConvBankT {
  std::size_t f = 0;
  std::size_t m = 0;
  std::size_t d = 0;
  std::span<T> weights;
  std::span<T> biases;

  T& weight(std::size_t k, std::size_t a, std::size_t b) const {
    return weights[(k * m + a) * d + b];
  }
};

using ConvBankView = ConvBankT<const double>;
using ConvBankGrad = ConvBankT<double>;

/// weights: out_dim x in_dim (row-major), biases: out_dim.
template <class T>
struct DenseT {
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  std::span<T> weights;
  std::span<T> biases;

  T& weight(std::size_t r, std::size_t c) const {
    return weights[r * in_dim + c];
  }
};

using DenseView = DenseT<const double>;
using DenseGrad = DenseT<double>;

/// Output width of a valid convolution. Throws std::invalid_argument
/// ("filter wider than input") when m > cols.
std::size_t conv_out_width(std::size_t cols, std::size_t m);

/// out[k][j] = bias_k + sum_{a<m,b<d} w[k][a][b] * input[b][j+a].
/// out must be f x (cols - m + 1).
void conv_forward(const ConvBankView& bank, ConstMatView input, MatView out);

/// Exact gradients of conv_forward. grad_input may have data == nullptr
/// to skip the input gradient (frozen embeddings). Gradient buffers are
/// overwritten, not accumulated.
void conv_backward(const ConvBankView& bank, ConstMatView input,
                   ConstMatView upstream, ConvBankGrad grad_bank,
                   MatView grad_input);

/// Elementwise max(0, x). out may alias x.
void relu_forward(std::span<const double> x, std::span<double> out);

/// Passes upstream where x > 0; zero where x <= 0 (subgradient 0 at 0).
void relu_backward(std::span<const double> x, std::span<const double> upstream,
                   std::span<double> grad);

/// Per row: max value and the smallest index attaining it.
void global_max_pool(ConstMatView rows, std::span<double> values,
                     std::span<std::size_t> argmax);

/// Routes upstream[k] to (k, argmax[k]); everything else zero.
void global_max_pool_backward(std::span<const double> upstream,
                              std::span<const std::size_t> argmax,
                              MatView grad);

/// Inverted dropout. Training: each unit dropped with probability p,
/// survivors scaled by 1/(1-p), mask[i] records survival. Inference:
/// out = x bit-for-bit and the mask is all ones.
void dropout_forward(double p, bool train_mode, std::mt19937_64& rng,
                     std::span<const double> x, std::span<double> out,
                     std::span<std::uint8_t> mask);

void dropout_backward(double p, std::span<const std::uint8_t> mask,
                      std::span<const double> upstream,
                      std::span<double> grad);

/// out = W x + b.
void dense_forward(const DenseView& layer, std::span<const double> x,
                   std::span<double> out);

/// grad_weights = upstream outer x, grad_biases = upstream,
/// grad_input = W^T upstream. Buffers are overwritten.
void dense_backward(const DenseView& layer, std::span<const double> x,
                    std::span<const double> upstream, DenseGrad grad,
                    std::span<double> grad_input);

/// Max-subtracted softmax; strictly positive, sums to 1.
void softmax(std::span<const double> z, std::span<double> out);

/// -log(probs[gold] + 1e-12).
double cross_entropy(std::span<const double> probs, std::size_t gold);

/// Gradient of cross-entropy w.r.t. pre-softmax logits: probs - onehot.
void cross_entropy_logit_grad(std::span<const double> probs, std::size_t gold,
                              std::span<double> grad_logits);

}  // namespace senti::nn
