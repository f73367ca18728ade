#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tenantsched/mlp.hpp"

namespace tsched::policy {

struct AdamConfig {
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double max_grad_norm = 0.5;
};

// Adaptive-moment optimizer with bias correction. Gradients are clipped to a
// global norm bound before the moment update; NaN or Inf anywhere in the
// gradient aborts the step without touching params or state.
class AdamOptimizer {
 public:
  AdamOptimizer(const MLPParams& shape, AdamConfig config)
      : config_(config), m_(zeros_like(shape)), v_(zeros_like(shape)) {}

  void step(MLPParams& params, const MLPParams& grads) {
    std::vector<double> g_flat;
    bool bad = false;
    double sq_sum = 0.0;
    for_each_param(grads, [&](double g) {
      if (!std::isfinite(g)) bad = true;
      sq_sum += g * g;
      g_flat.push_back(g);
    });
    if (bad) {
      throw std::runtime_error("non-finite gradient, optimizer step aborted");
    }
    const double norm = std::sqrt(sq_sum);
    const double scale =
        (config_.max_grad_norm > 0.0 && norm > config_.max_grad_norm)
            ? config_.max_grad_norm / norm
            : 1.0;

    std::vector<double*> p_flat, m_flat, v_flat;
    flatten(params, p_flat);
    flatten(m_, m_flat);
    flatten(v_, v_flat);
    if (p_flat.size() != g_flat.size() || m_flat.size() != g_flat.size()) {
      throw std::invalid_argument("gradient shape mismatch");
    }

    ++t_;
    const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < g_flat.size(); ++i) {
      const double g = g_flat[i] * scale;
      double& m = *m_flat[i];
      double& v = *v_flat[i];
      m = config_.beta1 * m + (1.0 - config_.beta1) * g;
      v = config_.beta2 * v + (1.0 - config_.beta2) * g * g;
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      *p_flat[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.eps);
    }
  }

  std::uint64_t step_count() const { return t_; }
  const AdamConfig& config() const { return config_; }

 private:
  static void flatten(MLPParams& p, std::vector<double*>& out) {
    out.clear();
    for_each_param(p, [&out](double& x) { out.push_back(&x); });
  }

  AdamConfig config_;
  MLPParams m_;
  MLPParams v_;
  std::uint64_t t_ = 0;
};

}  // namespace tsched::policy
