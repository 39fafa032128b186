#include <cmath>
#include <set>
#include <vector>

#include "chain_mdp.hpp"
#include "doctest.h"
#include "ethics/episode.hpp"
#include "ethics/grab_milk.hpp"
#include "ethics/rng.hpp"

using namespace ethics;

namespace {

// Pearson statistic for observed counts against a uniform expectation.
double chi_square_uniform(const std::vector<long>& counts) {
  long total = 0;
  for (long c : counts) total += c;
  const double expected = static_cast<double>(total) / static_cast<double>(counts.size());
  double stat = 0.0;
  for (long c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

// 1-step chain: state 0 -> terminal state 1 with reward 1.
class OneStep final : public Environment {
 public:
  std::size_t state_count() const override { return 2; }
  std::size_t action_count() const override { return 1; }
  std::size_t step_cap() const override { return 10; }
  StateId reset(Rng&) override { return StateId{0}; }
  StepOutcome step(ActionId, Rng&) override {
    StepOutcome o;
    o.next_state = StateId{1};
    o.reward = 1.0;
    o.terminal = true;
    return o;
  }
  std::vector<EventMetric> event_metrics() const override { return {}; }
  std::unique_ptr<Environment> clone() const override {
    return std::make_unique<OneStep>(*this);
  }
};

}  // namespace

TEST_CASE("rng streams are reproducible") {
  Rng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs |= x != c.next();
  }
  CHECK(differs);
}

TEST_CASE("uniform stays in [0, 1)") {
  Rng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}

TEST_CASE("index is uniform by chi-square") {
  Rng rng(7);
  for (std::uint64_t n : {2u, 3u, 5u, 7u}) {
    std::vector<long> counts(n, 0);
    for (int i = 0; i < 100000; ++i) counts[rng.index(n)]++;
    // 99.9% quantiles for n-1 degrees of freedom are below 25 for n <= 7.
    CHECK(chi_square_uniform(counts) < 25.0);
  }
}

TEST_CASE("derived seeds are distinct and independent of run count") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(5, k));
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
  CHECK(derive_seed(5, 3) != derive_seed(6, 3));
}

TEST_CASE("event set and counts") {
  EventSet s;
  CHECK(s.empty());
  s.insert(EnvEvent::CatHit);
  CHECK(s.contains(EnvEvent::CatHit));
  CHECK_FALSE(s.contains(EnvEvent::Collision));
  EventCounts c;
  c[EnvEvent::Collision] += 2;
  CHECK(c[EnvEvent::Collision] == 2);
  CHECK(to_string(EnvEvent::ElderRescued) == "elder_rescued");
}

TEST_CASE("degenerate one-step chain") {
  OneStep env;
  Rng rng(1);
  SarsaLearner learner{QTable(2, 1), LearnerConfig{}};
  const EpisodeTrace t = run_episode(env, learner, nullptr, rng, {});
  CHECK(t.episode_length == 1);
  CHECK(t.steps.size() == 1);
  CHECK(t.cumulative_base_reward == 1.0);
  CHECK(t.reached_terminal);
  // Terminal update: 0 + 0.1 * (1 - 0).
  CHECK(learner.q(StateId{0}, ActionId{0}) == doctest::Approx(0.1));
}

TEST_CASE("optimal grab policy walks 18 steps for return 3") {
  GrabMilkEnv env(canonical_layout());
  const GrabLayout& layout = env.layout();
  // Greedy table that goes right along the bottom row, then up the right edge.
  QTable q(env.state_count(), env.action_count());
  for (int y = 0; y < kGrabSize; ++y) {
    for (int x = 0; x < kGrabSize; ++x) {
      const StateId s{layout.index({x, y})};
      const auto a = (x < kGrabSize - 1 && y == 0) ? GrabAction::Right : GrabAction::Up;
      q(s, ActionId{static_cast<std::size_t>(a)}) = 1.0;
    }
  }
  SarsaLearner learner{q, LearnerConfig{}};
  Rng rng(3);
  EpisodeOptions opts;
  opts.learn = false;
  const EpisodeTrace t = run_episode(env, learner, nullptr, rng, opts);
  CHECK(t.episode_length == 18);
  CHECK(t.cumulative_base_reward == 3.0);
  CHECK(t.event_counts[EnvEvent::MilkReached] == 1);
  CHECK(learner.q == q);
  for (const auto& step : t.steps) {
    CHECK(step.shaping_reward == 0.0);
    CHECK(step.total_reward() == step.base_reward + step.shaping_reward);
  }
}

TEST_CASE("episodes never exceed the step cap") {
  GrabMilkEnv env(canonical_layout(), 25);
  Rng rng(9);
  SarsaLearner learner{QTable(env.state_count(), env.action_count()), LearnerConfig{}};
  EpisodeOptions opts;
  opts.epsilon = 1.0;
  for (int i = 0; i < 50; ++i) {
    const EpisodeTrace t = run_episode(env, learner, nullptr, rng, opts);
    CHECK(t.episode_length <= 25);
    CHECK(t.steps.size() == t.episode_length);
  }
  // A zero table with lowest-index ties walks up the left edge forever.
  SarsaLearner frozen{QTable(env.state_count(), env.action_count()), LearnerConfig{}};
  EpisodeOptions greedy;
  greedy.learn = false;
  const EpisodeTrace t = run_episode(env, frozen, nullptr, rng, greedy);
  CHECK(t.episode_length == 25);
  CHECK_FALSE(t.reached_terminal);
}

TEST_CASE("episode runs are deterministic") {
  testing::ChainEnv env(5, 3.0, 10.0, 0.1);
  auto run = [&] {
    Rng rng(11);
    SarsaLearner learner{QTable(5, 2), LearnerConfig{}};
    EpisodeOptions opts;
    opts.epsilon = 0.3;
    std::vector<EpisodeTrace> traces;
    for (int i = 0; i < 20; ++i) traces.push_back(run_episode(env, learner, nullptr, rng, opts));
    return std::make_pair(traces, learner.q);
  };
  CHECK(run() == run());
}

TEST_CASE("dimension mismatch is rejected") {
  testing::ChainEnv env(5, 3.0, 10.0, 0.1);
  Rng rng(1);
  SarsaLearner learner{QTable(4, 2), LearnerConfig{}};
  CHECK_THROWS_AS(run_episode(env, learner, nullptr, rng, {}), std::invalid_argument);
}
