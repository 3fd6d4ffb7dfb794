#include "senti/nadam.hpp"

#include <cmath>
#include <stdexcept>

namespace senti::opt {

void NadamConfig::validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) {
    throw std::invalid_argument("beta1 must be in [0, 1)");
  }
  if (!(beta2 >= 0.0 && beta2 < 1.0)) {
    throw std::invalid_argument("beta2 must be in [0, 1)");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (schedule_decay < 0.0) {
    throw std::invalid_argument("schedule_decay must be non-negative");
  }
}

void adaptive_moment_step(const NadamConfig& config,
                          const NadamVariant& variant, NadamState& state,
                          std::span<double> params,
                          std::span<const double> grads) {
  if (params.size() != grads.size()) {
    throw std::invalid_argument("nadam: gradient shape mismatch");
  }
  if (state.m.empty() && state.v.empty() && state.t == 0) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw std::invalid_argument("nadam: state shape mismatch");
  }

  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double b1 = config.beta1;
  const double b2 = config.beta2;

  const double mu_t =
      variant.warmup_schedule
          ? b1 * (1.0 - 0.5 * std::pow(0.96, t * config.schedule_decay))
          : b1;
  const double mu_next =
      variant.warmup_schedule
          ? b1 * (1.0 - 0.5 * std::pow(0.96, (t + 1.0) * config.schedule_decay))
          : b1;
  state.mu_product *= mu_t;

  const double v_correction = 1.0 - std::pow(b2, t);
  const double g_scale = (1.0 - mu_t) / (1.0 - state.mu_product);
  const double m_scale = mu_next / (1.0 - state.mu_product * mu_next);
  const double adam_scale = 1.0 / (1.0 - state.mu_product);

  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = b1 * state.m[i] + (1.0 - b1) * g;
    state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g;
    const double vhat = state.v[i] / v_correction;
    const double mbar = variant.nesterov
                            ? g_scale * g + m_scale * state.m[i]
                            : adam_scale * state.m[i];
    params[i] -= config.lr * mbar / (std::sqrt(vhat) + config.eps);
  }
}

void nadam_step(const NadamConfig& config, NadamState& state,
                std::span<double> params, std::span<const double> grads) {
  adaptive_moment_step(config, NadamVariant{}, state, params, grads);
}

}  // namespace senti::opt
