#include "senti/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "senti/rng.hpp"

namespace senti::nn {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::size_t conv_out_width(std::size_t cols, std::size_t m) {
  require(m >= 1, "filter width must be positive");
  if (m > cols) throw std::invalid_argument("filter wider than input");
  return cols - m + 1;
}

void conv_forward(const ConvBankView& bank, ConstMatView input, MatView out) {
  require(input.rows == bank.d, "conv_forward: input depth mismatch");
  const std::size_t width = conv_out_width(input.cols, bank.m);
  require(out.rows == bank.f && out.cols == width,
          "conv_forward: output shape mismatch");

  for (std::size_t k = 0; k < bank.f; ++k) {
    for (std::size_t j = 0; j < width; ++j) {
      double acc = bank.biases[k];
      for (std::size_t a = 0; a < bank.m; ++a) {
        const double* wrow = &bank.weight(k, a, 0);
        const double* icol = &input.at(0, j + a);
        // input is row-major d x cols, so depth advances by the stride.
        for (std::size_t b = 0; b < bank.d; ++b) {
          acc += wrow[b] * icol[b * input.cols];
        }
      }
      out.at(k, j) = acc;
    }
  }
}

void conv_backward(const ConvBankView& bank, ConstMatView input,
                   ConstMatView upstream, ConvBankGrad grad_bank,
                   MatView grad_input) {
  require(input.rows == bank.d, "conv_backward: input depth mismatch");
  const std::size_t width = conv_out_width(input.cols, bank.m);
  require(upstream.rows == bank.f && upstream.cols == width,
          "conv_backward: upstream shape mismatch");
  require(grad_bank.f == bank.f && grad_bank.m == bank.m &&
              grad_bank.d == bank.d,
          "conv_backward: gradient bank shape mismatch");

  std::fill(grad_bank.weights.begin(), grad_bank.weights.end(), 0.0);
  for (std::size_t k = 0; k < bank.f; ++k) {
    double bias_acc = 0.0;
    for (std::size_t j = 0; j < width; ++j) {
      const double up = upstream.at(k, j);
      bias_acc += up;
      if (up == 0.0) continue;
      for (std::size_t a = 0; a < bank.m; ++a) {
        double* gw = &grad_bank.weight(k, a, 0);
        const double* icol = &input.at(0, j + a);
        for (std::size_t b = 0; b < bank.d; ++b) {
          gw[b] += up * icol[b * input.cols];
        }
      }
    }
    grad_bank.biases[k] = bias_acc;
  }

  if (grad_input.data == nullptr) return;
  require(grad_input.rows == input.rows && grad_input.cols == input.cols,
          "conv_backward: grad_input shape mismatch");
  std::fill(grad_input.flat().begin(), grad_input.flat().end(), 0.0);
  for (std::size_t k = 0; k < bank.f; ++k) {
    for (std::size_t j = 0; j < width; ++j) {
      const double up = upstream.at(k, j);
      if (up == 0.0) continue;
      for (std::size_t a = 0; a < bank.m; ++a) {
        const double* wrow = &bank.weight(k, a, 0);
        for (std::size_t b = 0; b < bank.d; ++b) {
          grad_input.at(b, j + a) += up * wrow[b];
        }
      }
    }
  }
}

void relu_forward(std::span<const double> x, std::span<double> out) {
  require(x.size() == out.size(), "relu: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] > 0.0 ? x[i] : 0.0;
  }
}

void relu_backward(std::span<const double> x, std::span<const double> upstream,
                   std::span<double> grad) {
  require(x.size() == upstream.size() && x.size() == grad.size(),
          "relu_backward: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) {
    grad[i] = x[i] > 0.0 ? upstream[i] : 0.0;
  }
}

void global_max_pool(ConstMatView rows, std::span<double> values,
                     std::span<std::size_t> argmax) {
  require(rows.cols >= 1, "global_max_pool: empty rows");
  require(values.size() == rows.rows && argmax.size() == rows.rows,
          "global_max_pool: output size mismatch");
  for (std::size_t k = 0; k < rows.rows; ++k) {
    double best = rows.at(k, 0);
    std::size_t best_j = 0;
    for (std::size_t j = 1; j < rows.cols; ++j) {
      if (rows.at(k, j) > best) {
        best = rows.at(k, j);
        best_j = j;
      }
    }
    values[k] = best;
    argmax[k] = best_j;
  }
}

void global_max_pool_backward(std::span<const double> upstream,
                              std::span<const std::size_t> argmax,
                              MatView grad) {
  require(upstream.size() == grad.rows && argmax.size() == grad.rows,
          "global_max_pool_backward: size mismatch");
  std::fill(grad.flat().begin(), grad.flat().end(), 0.0);
  for (std::size_t k = 0; k < grad.rows; ++k) {
    grad.at(k, argmax[k]) = upstream[k];
  }
}

void dropout_forward(double p, bool train_mode, std::mt19937_64& rng,
                     std::span<const double> x, std::span<double> out,
                     std::span<std::uint8_t> mask) {
  require(p >= 0.0 && p < 1.0, "dropout: p must be in [0, 1)");
  require(x.size() == out.size() && x.size() == mask.size(),
          "dropout: size mismatch");
  if (!train_mode) {
    std::copy(x.begin(), x.end(), out.begin());
    std::fill(mask.begin(), mask.end(), std::uint8_t{1});
    return;
  }
  const double scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool keep = rng::uniform_unit(rng) >= p;
    mask[i] = keep ? 1 : 0;
    out[i] = keep ? x[i] * scale : 0.0;
  }
}

void dropout_backward(double p, std::span<const std::uint8_t> mask,
                      std::span<const double> upstream,
                      std::span<double> grad) {
  require(mask.size() == upstream.size() && mask.size() == grad.size(),
          "dropout_backward: size mismatch");
  const double scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    grad[i] = mask[i] ? upstream[i] * scale : 0.0;
  }
}

void dense_forward(const DenseView& layer, std::span<const double> x,
                   std::span<double> out) {
  require(x.size() == layer.in_dim, "dense_forward: input size mismatch");
  require(out.size() == layer.out_dim, "dense_forward: output size mismatch");
  for (std::size_t r = 0; r < layer.out_dim; ++r) {
    double acc = layer.biases[r];
    const double* wrow = &layer.weight(r, 0);
    for (std::size_t c = 0; c < layer.in_dim; ++c) {
      acc += wrow[c] * x[c];
    }
    out[r] = acc;
  }
}

void dense_backward(const DenseView& layer, std::span<const double> x,
                    std::span<const double> upstream, DenseGrad grad,
                    std::span<double> grad_input) {
  require(x.size() == layer.in_dim, "dense_backward: input size mismatch");
  require(upstream.size() == layer.out_dim,
          "dense_backward: upstream size mismatch");
  require(grad.in_dim == layer.in_dim && grad.out_dim == layer.out_dim,
          "dense_backward: gradient shape mismatch");
  require(grad_input.size() == layer.in_dim,
          "dense_backward: grad_input size mismatch");

  for (std::size_t r = 0; r < layer.out_dim; ++r) {
    const double up = upstream[r];
    grad.biases[r] = up;
    double* gw = &grad.weight(r, 0);
    for (std::size_t c = 0; c < layer.in_dim; ++c) {
      gw[c] = up * x[c];
    }
  }
  for (std::size_t c = 0; c < layer.in_dim; ++c) grad_input[c] = 0.0;
  for (std::size_t r = 0; r < layer.out_dim; ++r) {
    const double up = upstream[r];
    if (up == 0.0) continue;
    const double* wrow = &layer.weight(r, 0);
    for (std::size_t c = 0; c < layer.in_dim; ++c) {
      grad_input[c] += wrow[c] * up;
    }
  }
}

void softmax(std::span<const double> z, std::span<double> out) {
  require(z.size() >= 2, "softmax: need at least two logits");
  require(z.size() == out.size(), "softmax: size mismatch");
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - zmax);
    sum += out[i];
  }
  for (std::size_t i = 0; i < z.size(); ++i) out[i] /= sum;
}

double cross_entropy(std::span<const double> probs, std::size_t gold) {
  require(gold < probs.size(), "cross_entropy: gold index out of range");
  return -std::log(probs[gold] + 1e-12);
}

void cross_entropy_logit_grad(std::span<const double> probs, std::size_t gold,
                              std::span<double> grad_logits) {
  require(gold < probs.size(), "cross_entropy: gold index out of range");
  require(probs.size() == grad_logits.size(),
          "cross_entropy: gradient size mismatch");
  for (std::size_t i = 0; i < probs.size(); ++i) {
    grad_logits[i] = probs[i] - (i == gold ? 1.0 : 0.0);
  }
}

}  // namespace senti::nn
