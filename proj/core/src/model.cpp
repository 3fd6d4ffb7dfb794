#include "senti/model.hpp"

#include <cmath>
#include <stdexcept>

#include "senti/rng.hpp"

namespace senti::model {

void Hyperparams::validate() const {
  if (d == 0) throw std::invalid_argument("d must be positive");
  if (maxl == 0) throw std::invalid_argument("maxl must be positive");
  if (feature_maps == 0) throw std::invalid_argument("f must be positive");
  if (fc_units == 0) throw std::invalid_argument("fc_units must be positive");
  if (filter_sizes.empty()) {
    throw std::invalid_argument("at least one filter size required");
  }
  for (std::size_t m : filter_sizes) {
    if (m == 0 || m > maxl) {
      throw std::invalid_argument("filter sizes must be in [1, maxl]");
    }
  }
  if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
    throw std::invalid_argument("dropout_p must be in [0, 1)");
  }
}

NetworkParams::NetworkParams(const Hyperparams& hyper, std::uint64_t init_seed)
    : hyper_(hyper), init_seed_(init_seed) {
  hyper_.validate();
  std::size_t offset = 0;
  auto add = [&](std::string name, std::vector<std::size_t> dims) {
    std::size_t size = 1;
    for (std::size_t d : dims) size *= d;
    tensors_.push_back({std::move(name), std::move(dims), offset, size});
    offset += size;
  };
  for (std::size_t i = 0; i < hyper_.filter_sizes.size(); ++i) {
    const std::size_t m = hyper_.filter_sizes[i];
    add("bank" + std::to_string(i) + ".weights",
        {hyper_.feature_maps, m, hyper_.d});
    add("bank" + std::to_string(i) + ".biases", {hyper_.feature_maps});
  }
  add("fc.weights", {hyper_.fc_units, hyper_.pooled_width()});
  add("fc.biases", {hyper_.fc_units});
  add("out.weights", {Hyperparams::kClasses, hyper_.fc_units});
  add("out.biases", {Hyperparams::kClasses});
  flat_.assign(offset, 0.0);
}

std::span<double> NetworkParams::tensor_span(std::size_t index) {
  const TensorInfo& t = tensors_[index];
  return {flat_.data() + t.offset, t.size};
}

std::span<const double> NetworkParams::tensor_span(std::size_t index) const {
  const TensorInfo& t = tensors_[index];
  return {flat_.data() + t.offset, t.size};
}

nn::ConvBankView NetworkParams::bank(std::size_t i) const {
  return {hyper_.feature_maps, hyper_.filter_sizes[i], hyper_.d,
          tensor_span(2 * i), tensor_span(2 * i + 1)};
}

nn::ConvBankGrad NetworkParams::bank_mut(std::size_t i) {
  return {hyper_.feature_maps, hyper_.filter_sizes[i], hyper_.d,
          tensor_span(2 * i), tensor_span(2 * i + 1)};
}

nn::DenseView NetworkParams::fc() const {
  const std::size_t base = 2 * num_banks();
  return {hyper_.pooled_width(), hyper_.fc_units, tensor_span(base),
          tensor_span(base + 1)};
}

nn::DenseGrad NetworkParams::fc_mut() {
  const std::size_t base = 2 * num_banks();
  return {hyper_.pooled_width(), hyper_.fc_units, tensor_span(base),
          tensor_span(base + 1)};
}

nn::DenseView NetworkParams::out() const {
  const std::size_t base = 2 * num_banks() + 2;
  return {hyper_.fc_units, Hyperparams::kClasses, tensor_span(base),
          tensor_span(base + 1)};
}

nn::DenseGrad NetworkParams::out_mut() {
  const std::size_t base = 2 * num_banks() + 2;
  return {hyper_.fc_units, Hyperparams::kClasses, tensor_span(base),
          tensor_span(base + 1)};
}

namespace {

// Fan counts follow the usual convention: a conv filter sees m*d inputs
// and fans out over f*m positions; a dense tensor uses its two dims.
std::pair<std::size_t, std::size_t> fan_of(const Hyperparams& hyper,
                                           const NetworkParams::TensorInfo& t) {
  if (t.dims.size() == 3) {
    const std::size_t f = t.dims[0], m = t.dims[1], d = t.dims[2];
    return {m * d, f * m};
  }
  if (t.dims.size() == 2) {
    const std::size_t out = t.dims[0], in = t.dims[1];
    return {in, out};
  }
  (void)hyper;
  return {t.size, t.size};  // biases; unused (biases stay zero)
}

}  // namespace

NetworkParams NetworkParams::init(const Hyperparams& hyper,
                                  std::uint64_t seed) {
  NetworkParams params(hyper, seed);
  auto eng = rng::make_engine(seed);
  for (std::size_t i = 0; i < params.tensors_.size(); ++i) {
    const TensorInfo& t = params.tensors_[i];
    if (t.dims.size() < 2) continue;  // biases stay zero
    const auto [fan_in, fan_out] = fan_of(hyper, t);
    const double a = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& w : params.tensor_span(i)) {
      w = rng::uniform_range(eng, -a, a);
    }
  }
  return params;
}

void NetworkParams::round_to_f32() {
  for (double& x : flat_) {
    x = static_cast<double>(static_cast<float>(x));
  }
}

std::array<double, kNumClasses> forward(const NetworkParams& params,
                                        ConstMatView input, bool train_mode,
                                        std::mt19937_64& rng,
                                        ForwardCache* cache) {
  const Hyperparams& hyper = params.hyper();
  if (input.rows != hyper.d || input.cols != hyper.maxl) {
    throw std::invalid_argument("forward: input shape mismatch");
  }

  const std::size_t banks = params.num_banks();
  const std::size_t f = hyper.feature_maps;
  std::vector<double> concat(hyper.pooled_width());

  if (cache != nullptr) {
    cache->input = Matrix(input.rows, input.cols);
    std::copy(input.flat().begin(), input.flat().end(),
              cache->input.values.begin());
    cache->conv_out.assign(banks, Matrix{});
    cache->relu_out.assign(banks, {});
    cache->argmax.assign(banks, {});
    cache->train_mode = train_mode;
  }

  Matrix conv_out;
  std::vector<double> relu_out;
  std::vector<std::size_t> argmax(f);
  for (std::size_t i = 0; i < banks; ++i) {
    const nn::ConvBankView bank = params.bank(i);
    const std::size_t width = nn::conv_out_width(hyper.maxl, bank.m);
    conv_out = Matrix(f, width);
    nn::conv_forward(bank, input, conv_out.view());
    relu_out.assign(f * width, 0.0);
    nn::relu_forward(conv_out.values, relu_out);
    nn::global_max_pool({f, width, relu_out.data()},
                        std::span<double>(concat).subspan(i * f, f), argmax);
    if (cache != nullptr) {
      cache->conv_out[i] = std::move(conv_out);
      cache->relu_out[i] = std::move(relu_out);
      cache->argmax[i] = argmax;
    }
  }

  std::vector<double> dropped(concat.size());
  std::vector<std::uint8_t> mask(concat.size());
  nn::dropout_forward(hyper.dropout_p, train_mode, rng, concat, dropped, mask);

  std::vector<double> fc_pre(hyper.fc_units);
  nn::dense_forward(params.fc(), dropped, fc_pre);
  std::vector<double> fc_act(hyper.fc_units);
  nn::relu_forward(fc_pre, fc_act);

  std::array<double, kNumClasses> logits{};
  nn::dense_forward(params.out(), fc_act, logits);
  std::array<double, kNumClasses> probs{};
  nn::softmax(logits, probs);

  if (cache != nullptr) {
    cache->concat = std::move(concat);
    cache->mask = std::move(mask);
    cache->dropped = std::move(dropped);
    cache->fc_pre = std::move(fc_pre);
    cache->fc_act = std::move(fc_act);
    cache->logits = logits;
    cache->probs = probs;
  }
  return probs;
}

void backward(const NetworkParams& params, const ForwardCache& cache,
              std::size_t gold, NetworkParams& grads, Matrix* grad_input) {
  const Hyperparams& hyper = params.hyper();
  if (!params.same_shape(grads)) {
    throw std::invalid_argument("backward: gradient shape mismatch");
  }
  if (cache.input.rows != hyper.d || cache.input.cols != hyper.maxl ||
      cache.concat.size() != hyper.pooled_width() ||
      cache.conv_out.size() != params.num_banks()) {
    throw std::invalid_argument("backward: stale cache shape");
  }
  if (gold >= kNumClasses) {
    throw std::invalid_argument("backward: gold index out of range");
  }

  std::array<double, kNumClasses> grad_logits{};
  nn::cross_entropy_logit_grad(cache.probs, gold, grad_logits);

  std::vector<double> grad_fc_act(hyper.fc_units);
  nn::dense_backward(params.out(), cache.fc_act, grad_logits, grads.out_mut(),
                     grad_fc_act);

  std::vector<double> grad_fc_pre(hyper.fc_units);
  nn::relu_backward(cache.fc_pre, grad_fc_act, grad_fc_pre);

  std::vector<double> grad_dropped(hyper.pooled_width());
  nn::dense_backward(params.fc(), cache.dropped, grad_fc_pre, grads.fc_mut(),
                     grad_dropped);

  std::vector<double> grad_concat(hyper.pooled_width());
  if (cache.train_mode) {
    nn::dropout_backward(hyper.dropout_p, cache.mask, grad_dropped,
                         grad_concat);
  } else {
    grad_concat = grad_dropped;
  }

  const std::size_t f = hyper.feature_maps;
  Matrix bank_grad_input;
  if (grad_input != nullptr) {
    *grad_input = Matrix(hyper.d, hyper.maxl);
    bank_grad_input = Matrix(hyper.d, hyper.maxl);
  }
  for (std::size_t i = 0; i < params.num_banks(); ++i) {
    const nn::ConvBankView bank = params.bank(i);
    const std::size_t width = nn::conv_out_width(hyper.maxl, bank.m);
    if (cache.conv_out[i].rows != f || cache.conv_out[i].cols != width) {
      throw std::invalid_argument("backward: stale cache shape");
    }

    Matrix grad_relu(f, width);
    nn::global_max_pool_backward(
        std::span<const double>(grad_concat).subspan(i * f, f),
        cache.argmax[i], grad_relu.view());

    Matrix grad_conv(f, width);
    nn::relu_backward(cache.conv_out[i].values, grad_relu.values,
                      grad_conv.values);

    nn::conv_backward(bank, cache.input.view(), grad_conv.view(),
                      grads.bank_mut(i),
                      grad_input != nullptr ? bank_grad_input.view()
                                            : MatView{});
    if (grad_input != nullptr) {
      for (std::size_t j = 0; j < grad_input->values.size(); ++j) {
        grad_input->values[j] += bank_grad_input.values[j];
      }
    }
  }
}

Label predict_label(std::span<const double> probs) {
  if (probs.size() != kNumClasses) {
    throw std::invalid_argument("predict_label: expected 3 probabilities");
  }
  const double best = std::max(probs[0], std::max(probs[1], probs[2]));
  if (probs[static_cast<std::size_t>(Label::neutral)] == best) {
    return Label::neutral;
  }
  if (probs[static_cast<std::size_t>(Label::negative)] == best) {
    return Label::negative;
  }
  return Label::positive;
}

}  // namespace senti::model
