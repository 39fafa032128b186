#include <memory>
#include <vector>

#include "doctest.h"
#include "ethics/experiment.hpp"
#include "ethics/synth.hpp"

using namespace ethics;

namespace {

std::shared_ptr<const HumanPolicy> grab_human(std::size_t trajectories) {
  Rng rng(21);
  const DeltaTable t = ingest(synth_grab(canonical_layout(), trajectories, rng));
  return std::make_shared<const HumanPolicy>(human_policy(t, 0.95, DeltaScale::UnitMax));
}

ExperimentConfig small_grab(std::size_t runs, std::size_t episodes) {
  ExperimentConfig cfg;
  cfg.runs = runs;
  cfg.episodes = episodes;
  cfg.learner.epsilon = 0.1;
  cfg.learner.epsilon_final = 0.0;
  cfg.learner.epsilon_decay_episodes = episodes / 2;
  return cfg;
}

}  // namespace

TEST_CASE("aggregate examples") {
  const RunAggregate a = aggregate_runs({{1, 2}, {3, 4}});
  CHECK(a.mean == std::vector<double>{2, 3});
  CHECK(a.stderr_[0] == doctest::Approx(1.0));
  CHECK(a.stderr_[1] == doctest::Approx(1.0));
  CHECK(a.run_count == 2);

  const RunAggregate single = aggregate_runs({{4, 7, 1}});
  CHECK(single.mean == std::vector<double>{4, 7, 1});
  CHECK(single.stderr_ == std::vector<double>{0, 0, 0});

  const RunAggregate flat = aggregate_runs({{5}, {5}, {5}});
  CHECK(flat.mean == std::vector<double>{5});
  CHECK(flat.stderr_ == std::vector<double>{0});

  CHECK_THROWS(aggregate_runs({}));
  CHECK_THROWS(aggregate_runs({{1, 2}, {3}}));
}

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg;
  cfg.episodes = 0;
  CHECK_THROWS_AS(run_experiment(cfg, 1), std::invalid_argument);
  cfg = ExperimentConfig{};
  cfg.runs = 0;
  CHECK_THROWS_AS(run_experiment(cfg, 1), std::invalid_argument);
  CHECK_THROWS(parse_env_kind("maze"));
  CHECK(parse_env_kind("driving") == EnvKind::Driving);
}

TEST_CASE("series shape and single-run stderr") {
  const ExperimentConfig cfg = small_grab(1, 30);
  const ExperimentResult r = run_experiment(cfg, 3);
  CHECK(r.metric_names == std::vector<std::string>{"reward", "steps", "crossed", "helped"});
  REQUIRE(r.aggregates.size() == 4);
  for (const auto& agg : r.aggregates) {
    CHECK(agg.mean.size() == 30);
    for (double se : agg.stderr_) CHECK(se == 0.0);
  }
  for (double steps : r.metric("steps").mean) CHECK(steps <= 400.0);
}

TEST_CASE("same master seed reproduces the experiment") {
  ExperimentConfig cfg = small_grab(4, 50);
  cfg.keep_tables = true;
  const ExperimentResult a = run_experiment(cfg, 8);
  const ExperimentResult b = run_experiment(cfg, 8);
  for (std::size_t m = 0; m < a.aggregates.size(); ++m) {
    CHECK(a.aggregates[m].mean == b.aggregates[m].mean);
    CHECK(a.aggregates[m].stderr_ == b.aggregates[m].stderr_);
  }
  for (std::size_t r = 0; r < 4; ++r) CHECK(*a.runs[r].final_table == *b.runs[r].final_table);
  const ExperimentResult c = run_experiment(cfg, 9);
  CHECK(a.aggregates[1].mean != c.aggregates[1].mean);
}

TEST_CASE("parallel runs equal the serial reference bit for bit") {
  for (EnvKind kind : {EnvKind::Grab, EnvKind::Driving}) {
    ExperimentConfig cfg = small_grab(6, 40);
    cfg.env.kind = kind;
    cfg.keep_tables = true;
    if (kind == EnvKind::Grab) cfg.shaping = ShapingSetup{ShapingConfig{}, grab_human(100)};
    const ExperimentResult p = run_experiment(cfg, 5);
    const ExperimentResult s = run_experiment_serial(cfg, 5);
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      CHECK(p.runs[r].series == s.runs[r].series);
      CHECK(*p.runs[r].final_table == *s.runs[r].final_table);
    }
  }
}

TEST_CASE("adding runs leaves earlier runs unchanged") {
  ExperimentConfig cfg = small_grab(3, 40);
  const ExperimentResult few = run_experiment(cfg, 2);
  cfg.runs = 5;
  const ExperimentResult more = run_experiment(cfg, 2);
  for (std::size_t r = 0; r < 3; ++r) CHECK(few.runs[r].series == more.runs[r].series);
}

TEST_CASE("zero shaping scales reproduce the baseline trace exactly") {
  const auto human = grab_human(200);
  for (EnvKind kind : {EnvKind::Grab, EnvKind::Driving}) {
    EnvSpec spec;
    spec.kind = kind;
    auto env_a = make_environment(spec);
    auto env_b = make_environment(spec);
    std::shared_ptr<const HumanPolicy> h = human;
    if (kind == EnvKind::Driving) {
      Rng hr(4);
      h = std::make_shared<const HumanPolicy>(
          human_policy(ingest(synth_driving(spec.driving, 20, hr)), 0.95));
    }
    const EthicsShaper null_shaper(h, ShapingConfig{0.0, 0.0, 0.05, 0.8});
    SarsaLearner a{QTable(env_a->state_count(), env_a->action_count()), LearnerConfig{}};
    SarsaLearner b = a;
    Rng ra(13), rb(13);
    EpisodeOptions opts;
    opts.epsilon = 0.1;
    for (int e = 0; e < 60; ++e) {
      const EpisodeTrace ta = run_episode(*env_a, a, nullptr, ra, opts);
      const EpisodeTrace tb = run_episode(*env_b, b, &null_shaper, rb, opts);
      REQUIRE(ta == tb);
    }
    CHECK(a.q == b.q);
  }
}

TEST_CASE("shaping rewards are logged separately from base rewards") {
  GrabMilkEnv env(canonical_layout());
  const EthicsShaper shaper(grab_human(300), ShapingConfig{});
  SarsaLearner learner{QTable(100, 4), LearnerConfig{}};
  Rng rng(17);
  EpisodeOptions opts;
  opts.epsilon = 0.3;
  bool any_shaping = false;
  for (int e = 0; e < 30; ++e) {
    const EpisodeTrace t = run_episode(env, learner, &shaper, rng, opts);
    double base = 0.0, shaping = 0.0;
    for (const auto& s : t.steps) {
      CHECK((s.base_reward == -1.0 || s.base_reward == 20.0));
      CHECK(s.total_reward() == s.base_reward + s.shaping_reward);
      base += s.base_reward;
      shaping += s.shaping_reward;
      any_shaping |= s.shaping_reward != 0.0;
    }
    CHECK(base == doctest::Approx(t.cumulative_base_reward));
    CHECK(shaping == doctest::Approx(t.cumulative_shaping_reward));
  }
  CHECK(any_shaping);
}

TEST_CASE("shaping uses the policy before the step's update") {
  // Two-state room: S then M. The first step's shaping must use the zero
  // Q row, i.e. a uniform agent distribution.
  const GrabLayout room = GrabLayout::parse(std::string("SM\n"));
  GrabMilkEnv env(room);
  auto human = std::make_shared<HumanPolicy>(2, 4, 0.95);
  const std::vector<double> row{0.01, 0.01, 0.01, 0.97};
  human->set_row(StateId{0}, row);
  const EthicsShaper shaper(human, ShapingConfig{});
  SarsaLearner learner{QTable(2, 4), LearnerConfig{}};
  Rng rng(1);
  EpisodeOptions opts;
  const EpisodeTrace t = run_episode(env, learner, &shaper, rng, opts);
  REQUIRE(t.steps.size() >= 1);
  const auto& first = t.steps.front();
  const std::vector<double> uniform(4, 0.25);
  CHECK(first.shaping_reward == shaping_reward(first.action, uniform, row, ShapingConfig{}));
}

TEST_CASE("final window statistics") {
  ExperimentConfig cfg = small_grab(3, 20);
  const ExperimentResult r = run_experiment(cfg, 1);
  const WindowStat w = final_window(r, "steps", 5);
  double expect = 0.0;
  for (const auto& run : r.runs) {
    double s = 0.0;
    for (std::size_t e = 15; e < 20; ++e) s += run.series[1][e];
    expect += s / 5.0;
  }
  CHECK(w.mean == doctest::Approx(expect / 3.0));
  CHECK_THROWS(final_window(r, "steps", 21));
  CHECK_THROWS(final_window(r, "nope", 5));
}

TEST_CASE("baseline learner approaches the 18-step optimum") {
  ExperimentConfig cfg = small_grab(5, 1500);
  cfg.learner.epsilon_decay_episodes = 1000;
  const ExperimentResult r = run_experiment(cfg, 4);
  CHECK(final_window(r, "steps", 100).mean <= 19.0);
  CHECK(final_window(r, "steps", 100).mean >= 18.0);
}
