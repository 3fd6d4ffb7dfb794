#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace senti::opt {

struct NadamConfig {
  double lr = 0.002;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double schedule_decay = 0.004;

  void validate() const;
};

/// Variant switches for the shared moment-update machinery. The
/// defaults give Nadam; (nesterov=false, warmup_schedule=false) reduces
/// the recurrences to plain Adam, which the tests exercise against a
/// scalar Adam oracle.
struct NadamVariant {
  bool nesterov = true;
  bool warmup_schedule = true;
};

struct NadamState {
  std::uint64_t t = 0;          // completed steps
  double mu_product = 1.0;      // running product of schedule values
  std::vector<double> m;
  std::vector<double> v;

  NadamState() = default;
  explicit NadamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// One Nadam update over a flat parameter vector. With t <- t+1:
///   mu_t      = b1 * (1 - 0.5 * 0.96^(t * schedule_decay))
///   mu_next   = b1 * (1 - 0.5 * 0.96^((t+1) * schedule_decay))
///   mu_product *= mu_t
///   m   = b1 * m + (1-b1) * g
///   v   = b2 * v + (1-b2) * g^2
///   vhat = v / (1 - b2^t)
///   mbar = (1-mu_t) * g/(1-mu_product) + mu_next * m/(1-mu_product*mu_next)
///   theta -= lr * mbar / (sqrt(vhat) + eps)
void nadam_step(const NadamConfig& config, NadamState& state,
                std::span<double> params, std::span<const double> grads);

/// Generalized step behind nadam_step; see NadamVariant. Without the
/// Nesterov blend, mbar = m / (1 - mu_product).
void adaptive_moment_step(const NadamConfig& config,
                          const NadamVariant& variant, NadamState& state,
                          std::span<double> params,
                          std::span<const double> grads);

}  // namespace senti::opt
