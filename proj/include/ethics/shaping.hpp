#pragma once

#include <memory>
#include <span>
#include <string_view>

#include "ethics/human_model.hpp"
#include "ethics/types.hpp"

namespace ethics {

enum class KlMode { BernoulliPerAction, FullDistribution };

KlMode parse_kl_mode(std::string_view name);
std::string_view to_string(KlMode mode);

struct ShapingConfig {
  double c_n = 1.0;
  double c_p = 1.0;
  double tau_n = 0.05;
  double tau_p = 0.8;
  KlMode kl_mode = KlMode::BernoulliPerAction;

  void validate() const;
};

/// Human probabilities are kept this far from 0 and 1 inside KL terms.
inline constexpr double kKlClamp = 1e-9;

/// KL divergence between Bernoulli(p) and Bernoulli(q).
double bernoulli_kl(double p, double q);

/// KL(agent || human) over full action distributions.
double full_kl(std::span<const double> agent, std::span<const double> human);

/// Which gate of the shaping rule applies to an action.
enum class ShapingBranch { Negative, Positive, None };

ShapingBranch shaping_branch(double agent_prob, double human_prob,
                             const ShapingConfig& cfg);

/// -c_n * D when the agent over-weights an action humans almost never
/// take, +c_p * D when it under-weights an action humans strongly prefer,
/// 0 otherwise.
double shaping_reward(ActionId a, std::span<const double> agent_policy,
                      std::span<const double> human_policy,
                      const ShapingConfig& cfg);

/// base + shaping; rejects non-finite operands.
double combine(double base_reward, double shaping);

/// Ethics shaper bound to a fixed human policy snapshot. Immutable, so one
/// instance can be shared by concurrent runs.
class EthicsShaper {
 public:
  EthicsShaper(std::shared_ptr<const HumanPolicy> human, ShapingConfig cfg);

  double reward(StateId s, ActionId a,
                std::span<const double> agent_policy) const;

  const ShapingConfig& config() const { return cfg_; }
  const HumanPolicy& human() const { return *human_; }

 private:
  std::shared_ptr<const HumanPolicy> human_;
  ShapingConfig cfg_;
};

}  // namespace ethics
