#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tenantsched/action_mask.hpp"
#include "tenantsched/rng.hpp"

namespace tsched::policy {

// Categorical distribution over actions, supported only where the mask is
// true. Log-probabilities are kept alongside so downstream ratios do not
// re-derive them from possibly tiny probabilities.
struct MaskedDistribution {
  std::vector<double> probs;
  std::vector<double> log_probs;  // meaningful only on support
  std::vector<std::uint8_t> support;

  std::size_t size() const { return probs.size(); }
};

inline MaskedDistribution masked_softmax(const std::vector<double>& logits,
                                         const mdp::ActionMask& mask) {
  if (logits.size() != mask.size()) {
    throw std::invalid_argument("logit and mask sizes differ");
  }
  if (mask.count_allowed() == 0) {
    throw std::invalid_argument("mask allows no action");
  }
  double max_logit = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask.at(i) && logits[i] > max_logit) max_logit = logits[i];
  }
  MaskedDistribution d;
  d.probs.assign(logits.size(), 0.0);
  d.log_probs.assign(logits.size(), -std::numeric_limits<double>::infinity());
  d.support = mask.allowed;
  double z = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (mask.at(i)) z += std::exp(logits[i] - max_logit);
  }
  const double ln_z = std::log(z);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    if (!mask.at(i)) continue;
    const double shifted = logits[i] - max_logit;
    d.log_probs[i] = shifted - ln_z;
    d.probs[i] = std::exp(d.log_probs[i]);
  }
  return d;
}

inline std::size_t sample(const MaskedDistribution& d, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_supported = 0;
  bool seen = false;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d.support[i]) continue;
    last_supported = i;
    seen = true;
    acc += d.probs[i];
    if (u < acc) return i;
  }
  if (!seen) throw std::logic_error("distribution has empty support");
  return last_supported;
}

inline double log_prob(const MaskedDistribution& d, std::size_t action) {
  if (action >= d.size()) throw std::out_of_range("action id out of range");
  if (!d.support[action]) {
    throw std::invalid_argument("log_prob of masked action");
  }
  return d.log_probs[action];
}

inline double entropy(const MaskedDistribution& d) {
  double h = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.support[i] && d.probs[i] > 0.0) h -= d.probs[i] * d.log_probs[i];
  }
  return h;
}

// Highest-probability supported action; ties resolve to the lowest index.
inline std::size_t argmax(const MaskedDistribution& d) {
  std::size_t best = d.size();
  double best_p = -1.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d.support[i] && d.probs[i] > best_p) {
      best_p = d.probs[i];
      best = i;
    }
  }
  if (best == d.size()) throw std::logic_error("distribution has empty support");
  return best;
}

}  // namespace tsched::policy
