#include "ethics/shaping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ethics {

namespace {

double clamp_prob(double q) {
  return std::clamp(q, kKlClamp, 1.0 - kKlClamp);
}

// x * ln(x / y) with 0 * ln 0 = 0.
double xlogx_over(double x, double y) {
  return x > 0.0 ? x * std::log(x / y) : 0.0;
}

void check_distribution(std::span<const double> dist, const char* what) {
  double total = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument(std::string(what) +
                                  " has a component outside [0, 1]");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument(std::string(what) + " does not sum to 1");
  }
}

}  // namespace

KlMode parse_kl_mode(std::string_view name) {
  if (name == "bernoulli") return KlMode::BernoulliPerAction;
  if (name == "full") return KlMode::FullDistribution;
  throw std::invalid_argument("unknown kl_mode '" + std::string(name) +
                              "' (expected bernoulli or full)");
}

std::string_view to_string(KlMode mode) {
  return mode == KlMode::FullDistribution ? "full" : "bernoulli";
}

void ShapingConfig::validate() const {
  if (!(c_n >= 0.0) || !std::isfinite(c_n)) {
    throw std::invalid_argument("c_n must be a non-negative finite number");
  }
  if (!(c_p >= 0.0) || !std::isfinite(c_p)) {
    throw std::invalid_argument("c_p must be a non-negative finite number");
  }
  if (!(tau_n >= 0.0 && tau_n < tau_p && tau_p <= 1.0)) {
    throw std::invalid_argument("thresholds must satisfy 0 <= tau_n < tau_p <= 1");
  }
}

double bernoulli_kl(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("bernoulli_kl arguments must lie in [0, 1]");
  }
  q = clamp_prob(q);
  return xlogx_over(p, q) + xlogx_over(1.0 - p, 1.0 - q);
}

double full_kl(std::span<const double> agent, std::span<const double> human) {
  if (agent.size() != human.size() || agent.empty()) {
    throw std::invalid_argument("full_kl needs equal, non-empty distributions");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < agent.size(); ++i) {
    total += xlogx_over(agent[i], clamp_prob(human[i]));
  }
  return std::max(total, 0.0);
}

ShapingBranch shaping_branch(double agent_prob, double human_prob,
                             const ShapingConfig& cfg) {
  if (agent_prob > human_prob && human_prob < cfg.tau_n) {
    return ShapingBranch::Negative;
  }
  if (agent_prob < human_prob && human_prob > cfg.tau_p) {
    return ShapingBranch::Positive;
  }
  return ShapingBranch::None;
}

double shaping_reward(ActionId a, std::span<const double> agent_policy,
                      std::span<const double> human_policy,
                      const ShapingConfig& cfg) {
  if (agent_policy.size() != human_policy.size() ||
      a.index >= agent_policy.size()) {
    throw std::invalid_argument("shaping_reward: mismatched distributions");
  }
  check_distribution(agent_policy, "agent policy");
  check_distribution(human_policy, "human policy");
  const double p = agent_policy[a.index];
  const double q = human_policy[a.index];
  const ShapingBranch branch = shaping_branch(p, q, cfg);
  if (branch == ShapingBranch::None) return 0.0;
  const double divergence = cfg.kl_mode == KlMode::BernoulliPerAction
                                ? bernoulli_kl(p, q)
                                : full_kl(agent_policy, human_policy);
  return branch == ShapingBranch::Negative ? -cfg.c_n * divergence
                                           : cfg.c_p * divergence;
}

double combine(double base_reward, double shaping) {
  if (!std::isfinite(base_reward) || !std::isfinite(shaping)) {
    throw std::invalid_argument("combine: non-finite reward component");
  }
  return base_reward + shaping;
}

EthicsShaper::EthicsShaper(std::shared_ptr<const HumanPolicy> human,
                           ShapingConfig cfg)
    : human_(std::move(human)), cfg_(cfg) {
  if (!human_) throw std::invalid_argument("EthicsShaper needs a human policy");
  cfg_.validate();
}

double EthicsShaper::reward(StateId s, ActionId a,
                            std::span<const double> agent_policy) const {
  return shaping_reward(a, agent_policy, human_->row(s), cfg_);
}

}  // namespace ethics
