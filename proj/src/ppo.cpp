#include "tenantsched/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tenantsched/distribution.hpp"

namespace tsched::ppo {

void validate(const PPOHyper& h) {
  if (!(h.gamma > 0.0 && h.gamma < 1.0)) {
    throw std::invalid_argument("gamma must lie in (0,1)");
  }
  if (!(h.lambda >= 0.0 && h.lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0,1]");
  }
  if (!(h.eps_clip > 0.0 && h.eps_clip < 1.0)) {
    throw std::invalid_argument("eps_clip must lie in (0,1)");
  }
  if (h.epochs_per_update < 1) {
    throw std::invalid_argument("epochs_per_update must be at least 1");
  }
  if (h.minibatch_size < 1) {
    throw std::invalid_argument("minibatch_size must be at least 1");
  }
  if (!(h.learning_rate > 0.0)) {
    throw std::invalid_argument("learning_rate must be positive");
  }
  if (h.value_coef < 0.0 || h.entropy_coef < 0.0) {
    throw std::invalid_argument("loss coefficients must be nonnegative");
  }
  if (h.horizon < 1) throw std::invalid_argument("horizon must be at least 1");
  if (h.updates < 0) throw std::invalid_argument("updates must be nonnegative");
  if (h.hidden_width < 1) {
    throw std::invalid_argument("hidden_width must be at least 1");
  }
}

RolloutBuffer collect_rollout(mdp::SchedulingEnv& env,
                              const policy::MLPParams& params,
                              std::size_t horizon, Rng& rng) {
  if (horizon == 0) throw std::invalid_argument("horizon must be at least 1");
  if (env.done()) env.reset();
  if (env.done()) {
    throw std::runtime_error("environment has no decision points");
  }

  RolloutBuffer buffer;
  buffer.transitions.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    Transition tr;
    tr.obs = env.observation();
    tr.mask = env.mask();
    policy::ForwardResult fw = forward(params, tr.obs);
    policy::MaskedDistribution dist = policy::masked_softmax(fw.logits, tr.mask);
    tr.action = policy::sample(dist, rng);
    tr.log_prob_old = policy::log_prob(dist, tr.action);
    tr.value = fw.value;
    mdp::StepResult sr;
    try {
      sr = env.step(tr.action);
    } catch (const std::exception& e) {
      throw std::runtime_error("rollout step " + std::to_string(t) +
                               " failed: " + e.what());
    }
    tr.reward = sr.reward;
    tr.done = sr.done;
    tr.terms = sr.terms;
    buffer.transitions.push_back(std::move(tr));
    if (sr.done) {
      env.reset();
      if (env.done()) {
        throw std::runtime_error("environment has no decision points");
      }
    }
  }

  if (buffer.transitions.back().done) {
    buffer.bootstrap_value = 0.0;
  } else {
    buffer.bootstrap_value = forward(params, env.observation()).value;
  }
  return buffer;
}

AdvantageEstimates compute_advantages(const RolloutBuffer& buffer, double gamma,
                                      double lambda) {
  const std::size_t n = buffer.transitions.size();
  AdvantageEstimates est;
  est.advantages.assign(n, 0.0);
  est.returns.assign(n, 0.0);
  double next_value = buffer.bootstrap_value;
  double gae = 0.0;
  for (std::size_t t = n; t-- > 0;) {
    const Transition& tr = buffer.transitions[t];
    const double nonterminal = tr.done ? 0.0 : 1.0;
    const double delta =
        tr.reward + gamma * next_value * nonterminal - tr.value;
    gae = delta + gamma * lambda * nonterminal * gae;
    est.advantages[t] = gae;
    est.returns[t] = gae + tr.value;
    next_value = tr.value;
  }
  return est;
}

double clipped_surrogate(double log_prob_new, double log_prob_old,
                         double advantage, double eps_clip) {
  const double ratio = std::exp(log_prob_new - log_prob_old);
  const double clipped =
      std::clamp(ratio, 1.0 - eps_clip, 1.0 + eps_clip);
  return std::min(ratio * advantage, clipped * advantage);
}

LossReport ppo_batch_loss(const policy::MLPParams& params,
                          const RolloutBuffer& buffer,
                          const std::vector<std::size_t>& indices,
                          const std::vector<double>& std_advantages,
                          const std::vector<double>& returns, double eps_clip,
                          double value_coef, double entropy_coef,
                          policy::MLPParams* grads) {
  if (indices.empty()) throw std::invalid_argument("empty minibatch");
  if (indices.size() != std_advantages.size()) {
    throw std::invalid_argument("advantage count does not match minibatch");
  }
  const double inv_b = 1.0 / static_cast<double>(indices.size());

  LossReport report;
  for (std::size_t bi = 0; bi < indices.size(); ++bi) {
    const std::size_t i = indices[bi];
    const Transition& tr = buffer.transitions.at(i);
    const double adv = std_advantages[bi];
    const double ret = returns.at(i);

    policy::ForwardResult fw = forward(params, tr.obs);
    policy::MaskedDistribution dist =
        policy::masked_softmax(fw.logits, tr.mask);
    const double lp_new = policy::log_prob(dist, tr.action);
    const double ratio = std::exp(lp_new - tr.log_prob_old);
    const double clipped = std::clamp(ratio, 1.0 - eps_clip, 1.0 + eps_clip);
    const double surr_unclipped = ratio * adv;
    const double surr = std::min(surr_unclipped, clipped * adv);
    const double h = policy::entropy(dist);
    const double v_err = fw.value - ret;

    report.policy_loss += -surr * inv_b;
    report.value_loss += v_err * v_err * inv_b;
    report.entropy += h * inv_b;

    if (grads != nullptr) {
      // -d surr/d lp_new: the clipped branch is flat in the ratio.
      const double surr_grad =
          surr_unclipped <= clipped * adv ? ratio * adv : 0.0;
      std::vector<double> d_logits(fw.logits.size(), 0.0);
      for (std::size_t k = 0; k < d_logits.size(); ++k) {
        if (!dist.support[k]) continue;
        const double p_k = dist.probs[k];
        const double indicator = k == tr.action ? 1.0 : 0.0;
        const double d_lp_dk = indicator - p_k;
        double g = -surr_grad * d_lp_dk;
        if (entropy_coef != 0.0 && p_k > 0.0) {
          g += entropy_coef * p_k * (dist.log_probs[k] + h);
        }
        d_logits[k] = g * inv_b;
      }
      const double d_value = 2.0 * value_coef * v_err * inv_b;
      backward(params, fw.trace, d_logits, d_value, *grads);
    }
  }
  report.total = report.policy_loss + value_coef * report.value_loss -
                 entropy_coef * report.entropy;
  return report;
}

namespace {

std::vector<double> standardize(const std::vector<double>& raw) {
  const double n = static_cast<double>(raw.size());
  double mean = 0.0;
  for (double v : raw) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : raw) var += (v - mean) * (v - mean);
  var /= n;
  const double denom = std::max(std::sqrt(var), 1e-8);
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = (raw[i] - mean) / denom;
  return out;
}

}  // namespace

LossReport update(policy::MLPParams& params, policy::AdamOptimizer& opt,
                  const RolloutBuffer& buffer,
                  const AdvantageEstimates& advantages, const PPOHyper& hyper,
                  Rng& shuffle_rng) {
  const std::size_t n = buffer.transitions.size();
  if (n == 0) throw std::invalid_argument("empty rollout buffer");
  if (advantages.advantages.size() != n || advantages.returns.size() != n) {
    throw std::invalid_argument("advantages do not align with buffer");
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  LossReport mean_report;
  std::size_t passes = 0;
  for (int epoch = 0; epoch < hyper.epochs_per_update; ++epoch) {
    shuffle_rng.shuffle(perm);
    for (std::size_t begin = 0; begin < n;
         begin += static_cast<std::size_t>(hyper.minibatch_size)) {
      const std::size_t end =
          std::min(n, begin + static_cast<std::size_t>(hyper.minibatch_size));
      std::vector<std::size_t> batch(perm.begin() + begin, perm.begin() + end);
      std::vector<double> raw_adv(batch.size());
      for (std::size_t j = 0; j < batch.size(); ++j) {
        raw_adv[j] = advantages.advantages[batch[j]];
      }
      const std::vector<double> std_adv = standardize(raw_adv);

      policy::MLPParams grads = policy::zeros_like(params);
      const LossReport rep = ppo_batch_loss(
          params, buffer, batch, std_adv, advantages.returns, hyper.eps_clip,
          hyper.value_coef, hyper.entropy_coef, &grads);
      if (!std::isfinite(rep.total)) {
        std::ostringstream msg;
        msg << "non-finite loss in update (policy=" << rep.policy_loss
            << " value=" << rep.value_loss << " entropy=" << rep.entropy
            << "), update aborted";
        throw std::runtime_error(msg.str());
      }
      opt.step(params, grads);

      mean_report.policy_loss += rep.policy_loss;
      mean_report.value_loss += rep.value_loss;
      mean_report.entropy += rep.entropy;
      mean_report.total += rep.total;
      ++passes;
    }
  }
  const double inv = 1.0 / static_cast<double>(passes);
  mean_report.policy_loss *= inv;
  mean_report.value_loss *= inv;
  mean_report.entropy *= inv;
  mean_report.total *= inv;
  return mean_report;
}

TrainResult train(const EnvFactory& env_factory, const PPOHyper& hyper,
                  const UpdateCallback& on_update) {
  validate(hyper);
  std::unique_ptr<mdp::SchedulingEnv> env = env_factory();
  if (!env) throw std::invalid_argument("env factory returned null");

  TrainResult result;
  result.params = policy::init_params(env->observation_dim(),
                                      env->action_count(), hyper.hidden_width,
                                      hyper.seed);
  policy::AdamConfig opt_cfg;
  opt_cfg.learning_rate = hyper.learning_rate;
  opt_cfg.max_grad_norm = hyper.max_grad_norm;
  policy::AdamOptimizer opt(result.params, opt_cfg);

  Rng rollout_rng(Rng::derive(hyper.seed, 1));
  Rng shuffle_rng(Rng::derive(hyper.seed, 2));

  for (int u = 1; u <= hyper.updates; ++u) {
    RolloutBuffer buffer = collect_rollout(
        *env, result.params, static_cast<std::size_t>(hyper.horizon),
        rollout_rng);
    const AdvantageEstimates adv =
        compute_advantages(buffer, hyper.gamma, hyper.lambda);
    const LossReport rep =
        update(result.params, opt, buffer, adv, hyper, shuffle_rng);

    double mean_reward = 0.0;
    for (const Transition& tr : buffer.transitions) mean_reward += tr.reward;
    mean_reward /= static_cast<double>(buffer.transitions.size());

    CurvePoint pt;
    pt.update = u;
    pt.mean_reward = mean_reward;
    pt.policy_loss = rep.policy_loss;
    pt.value_loss = rep.value_loss;
    pt.entropy = rep.entropy;
    result.curve.push_back(pt);
    if (on_update) on_update(pt);
  }
  return result;
}

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

void write_curve(const std::vector<CurvePoint>& curve, std::ostream& out) {
  out << "update,mean_reward,policy_loss,value_loss,entropy\n";
  for (const CurvePoint& p : curve) {
    out << p.update << ',' << fixed6(p.mean_reward) << ','
        << fixed6(p.policy_loss) << ',' << fixed6(p.value_loss) << ','
        << fixed6(p.entropy) << "\n";
  }
}

void write_curve_file(const std::vector<CurvePoint>& curve,
                      const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write curve file '" + path + "'");
  write_curve(curve, out);
  if (!out.flush()) {
    throw std::runtime_error("failed writing curve file '" + path + "'");
  }
}

std::size_t RlPolicy::decide(const sim::ClusterState& state, TaskId task_id,
                             const mdp::ActionMask& mask, Rng& rng) {
  const mdp::Observation obs = mdp::featurize(state, task_id, config_);
  const policy::ForwardResult fw = forward(params_, obs);
  const policy::MaskedDistribution dist = policy::masked_softmax(fw.logits, mask);
  return deterministic_ ? policy::argmax(dist) : policy::sample(dist, rng);
}

EvalResult evaluate_policy(mdp::SchedulingEnv& env,
                           baselines::SchedulerPolicy& policy, int episodes,
                           Rng& rng) {
  if (episodes < 1) throw std::invalid_argument("episodes must be at least 1");
  EvalResult res;
  for (int e = 0; e < episodes; ++e) {
    const baselines::EpisodeResult ep = baselines::run_episode(env, policy, rng);
    res.per_episode.push_back(ep.metrics);
    res.episode_rewards.push_back(ep.total_reward);
    res.mean_delay_ms += ep.metrics.mean_delay_ms;
    res.mean_utilization += ep.metrics.utilization_time_avg;
    res.mean_jfi += ep.metrics.jfi_final;
    res.mean_completed += static_cast<double>(ep.metrics.completed_count);
    res.mean_episode_reward += ep.total_reward;
  }
  const double inv = 1.0 / static_cast<double>(episodes);
  res.mean_delay_ms *= inv;
  res.mean_utilization *= inv;
  res.mean_jfi *= inv;
  res.mean_completed *= inv;
  res.mean_episode_reward *= inv;
  return res;
}

EvalResult evaluate(const policy::MLPParams& params, mdp::SchedulingEnv& env,
                    int episodes, bool deterministic, Rng& rng) {
  RlPolicy policy(params, env.mdp_config(), deterministic);
  return evaluate_policy(env, policy, episodes, rng);
}

}  // namespace tsched::ppo
