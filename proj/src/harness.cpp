#include "ethics/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ethics/synth.hpp"

namespace ethics {

namespace fs = std::filesystem;

namespace {

// Runs a component validation and prefixes its message with the key.
template <typename Fn>
void checked(const char* key, Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(std::string(key) + ": " + ex.what());
  }
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

LearnerConfig learner_from(const Config& cfg) {
  LearnerConfig l;
  l.alpha = cfg.get_real("learner.alpha");
  l.gamma = cfg.get_real("learner.gamma");
  l.epsilon = cfg.get_real("learner.epsilon");
  l.epsilon_final = cfg.get_real("learner.epsilon_final");
  l.epsilon_decay_episodes = cfg.get_count("learner.epsilon_decay_episodes");
  l.temperature = cfg.get_real("learner.temperature");
  return l;
}

ShapingConfig shaping_from(const Config& cfg) {
  ShapingConfig s;
  s.c_n = cfg.get_real("shaping.c_n");
  s.c_p = cfg.get_real("shaping.c_p");
  s.tau_n = cfg.get_real("shaping.tau_n");
  s.tau_p = cfg.get_real("shaping.tau_p");
  checked("shaping.kl_mode", [&] { s.kl_mode = parse_kl_mode(cfg.get("shaping.kl_mode")); });
  return s;
}

std::vector<double> sweep_values(const Config& cfg, const std::string& name,
                                 const std::string& base_key) {
  auto values = cfg.get_real_list("sweep." + name);
  if (values.empty()) values.push_back(cfg.get_real(base_key));
  return values;
}

}  // namespace

std::string format_real(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("real formatting failed");
  return std::string(buf, ptr);
}

EnvSpec build_env_spec(const Config& cfg) {
  EnvSpec spec;
  checked("experiment.env", [&] { spec.kind = parse_env_kind(cfg.get("experiment.env")); });
  if (spec.kind == EnvKind::Grab) {
    const std::string layout = cfg.get_path("env.layout");
    if (!layout.empty()) {
      checked("env.layout", [&] {
        spec.layout = load_layout(layout);
        spec.layout.validate_standard();
      });
    }
    spec.grab_step_cap = cfg.get_count("env.step_cap");
    if (spec.grab_step_cap == 0) throw ConfigError("env.step_cap must be positive");
  } else {
    DrivingConfig& d = spec.driving;
    checked("env.variant", [&] { d.variant = parse_driving_variant(cfg.get("env.variant")); });
    d.horizon = cfg.get_count("env.horizon");
    d.road_length = static_cast<int>(cfg.get_count("env.road_length"));
    d.car_spawn_prob = cfg.get_real("env.car_spawn_prob");
    d.hazard_spawn_prob = cfg.get_real("env.hazard_spawn_prob");
    checked("env", [&] { d.validate(); });
  }
  return spec;
}

ExperimentConfig build_experiment(const Config& cfg) {
  ExperimentConfig ex;
  ex.name = cfg.get("experiment.name");
  if (ex.name.empty()) throw ConfigError("experiment.name must not be empty");
  ex.env = build_env_spec(cfg);
  ex.episodes = cfg.get_count("experiment.episodes");
  ex.runs = cfg.get_count("experiment.runs");
  if (ex.episodes == 0) throw ConfigError("experiment.episodes must be positive");
  if (ex.runs == 0) throw ConfigError("experiment.runs must be positive");
  const std::size_t window = cfg.get_count("experiment.final_window");
  if (window == 0 || window > ex.episodes) {
    throw ConfigError("experiment.final_window must lie in [1, episodes]");
  }
  ex.keep_tables = cfg.get_switch("experiment.save_tables");
  ex.learner = learner_from(cfg);
  checked("learner", [&] { ex.learner.validate(); });

  if (cfg.get_switch("experiment.shaping")) {
    ShapingSetup setup;
    setup.config = shaping_from(cfg);
    checked("shaping", [&] { setup.config.validate(); });
    const std::string path = cfg.get_path("human.dataset");
    if (path.empty()) throw ConfigError("human.dataset is required when shaping is on");
    const double confidence = cfg.get_real("human.confidence");
    checked("human.confidence", [&] { validate_confidence(confidence); });
    DeltaScale scale = DeltaScale::None;
    checked("human.delta_scale", [&] { scale = parse_delta_scale(cfg.get("human.delta_scale")); });
    const auto env = make_environment(ex.env);
    HumanDataset data;
    checked("human.dataset", [&] {
      data = load_dataset(path, env->state_count(), env->action_count());
    });
    const DeltaTable delta = ingest(data, cfg.get_count("human.window"));
    setup.human = std::make_shared<const HumanPolicy>(human_policy(delta, confidence, scale));
    ex.shaping = std::move(setup);
  }
  return ex;
}

void write_metric_csv(std::ostream& out, const RunAggregate& agg) {
  out << "episode,mean,stderr\n";
  for (std::size_t e = 0; e < agg.mean.size(); ++e) {
    out << (e + 1) << ',' << format_real(agg.mean[e]) << ','
        << format_real(agg.stderr_[e]) << '\n';
  }
}

TrainReport cli_train(const Config& cfg, const fs::path& out_dir, std::ostream& log) {
  const ExperimentConfig base = build_experiment(cfg);
  const std::uint64_t seed = cfg.get_u64("experiment.seed");
  const std::size_t window = cfg.get_count("experiment.final_window");
  fs::create_directories(out_dir);

  const auto alphas = sweep_values(cfg, "alpha", "learner.alpha");
  const auto gammas = sweep_values(cfg, "gamma", "learner.gamma");
  const auto c_ns = sweep_values(cfg, "c_n", "shaping.c_n");
  const auto c_ps = sweep_values(cfg, "c_p", "shaping.c_p");
  const bool sweep = alphas.size() * gammas.size() * c_ns.size() * c_ps.size() > 1 ||
                     !cfg.get("sweep.alpha").empty() || !cfg.get("sweep.gamma").empty() ||
                     !cfg.get("sweep.c_n").empty() || !cfg.get("sweep.c_p").empty();

  TrainReport report;
  Config effective = cfg;
  for (const char* key : {"human.dataset", "env.layout"}) {
    const std::string p = cfg.get_path(key);
    effective.set(key, p.empty() ? p : fs::absolute(p).lexically_normal().string());
  }
  const fs::path ini_path = out_dir / (base.name + "_effective.ini");
  {
    auto out = open_output(ini_path);
    out << effective.to_ini();
    finish_output(out, ini_path);
  }
  report.files.push_back(ini_path);

  for (double alpha : alphas) {
    for (double gamma : gammas) {
      for (double c_n : c_ns) {
        for (double c_p : c_ps) {
          ExperimentConfig ex = base;
          ex.learner.alpha = alpha;
          ex.learner.gamma = gamma;
          checked("sweep", [&] { ex.learner.validate(); });
          if (ex.shaping) {
            ex.shaping->config.c_n = c_n;
            ex.shaping->config.c_p = c_p;
            checked("sweep", [&] { ex.shaping->config.validate(); });
          }
          SweepPoint point;
          point.alpha = alpha;
          point.gamma = gamma;
          point.c_n = c_n;
          point.c_p = c_p;
          point.tag = sweep ? base.name + "_a" + format_real(alpha) + "_g" +
                                  format_real(gamma) + "_cn" + format_real(c_n) +
                                  "_cp" + format_real(c_p)
                            : base.name;

          const ExperimentResult result = run_experiment(ex, seed);
          for (std::size_t m = 0; m < result.metric_names.size(); ++m) {
            const fs::path path = out_dir / (point.tag + "_" + result.metric_names[m] + ".csv");
            auto out = open_output(path);
            write_metric_csv(out, result.aggregates[m]);
            finish_output(out, path);
            report.files.push_back(path);
          }
          if (ex.keep_tables) {
            for (std::size_t r = 0; r < result.runs.size(); ++r) {
              const fs::path path =
                  out_dir / (point.tag + "_run" + std::to_string(r) + ".qtable");
              save_qtable(path.string(), *result.runs[r].final_table);
              report.files.push_back(path);
            }
          }
          point.final_reward = final_window(result, "reward", window);
          log << point.tag << ": final reward " << format_real(point.final_reward.mean)
              << " +- " << format_real(point.final_reward.stderr_);
          for (const auto& name : result.metric_names) {
            if (name == "reward") continue;
            log << ", " << name << ' ' << format_real(final_window(result, name, window).mean);
          }
          log << '\n';
          report.points.push_back(std::move(point));
        }
      }
    }
  }

  if (sweep) {
    std::vector<const SweepPoint*> ranked;
    for (const auto& p : report.points) ranked.push_back(&p);
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto* a, const auto* b) {
      return a->final_reward.mean > b->final_reward.mean;
    });
    const fs::path path = out_dir / (base.name + "_sweep_summary.csv");
    auto out = open_output(path);
    out << "rank,tag,alpha,gamma,c_n,c_p,final_reward_mean,final_reward_stderr\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      const SweepPoint& p = *ranked[i];
      out << (i + 1) << ',' << p.tag << ',' << format_real(p.alpha) << ','
          << format_real(p.gamma) << ',' << format_real(p.c_n) << ','
          << format_real(p.c_p) << ',' << format_real(p.final_reward.mean) << ','
          << format_real(p.final_reward.stderr_) << '\n';
    }
    finish_output(out, path);
    report.files.push_back(path);
  }
  return report;
}

std::string SynthReport::summary() const {
  std::ostringstream s;
  s << "pairs=" << pairs << " states_covered=" << states_covered
    << " coverage=" << format_real(coverage()) << " fallbacks=" << fallbacks;
  return s.str();
}

SynthReport cli_synth(const Config& cfg, std::size_t n, std::uint64_t seed,
                      const fs::path& out) {
  const EnvSpec spec = build_env_spec(cfg);
  Rng rng(seed);
  SynthStats stats;
  HumanDataset data;
  std::ostringstream header;
  if (spec.kind == EnvKind::Grab) {
    data = synth_grab(spec.layout, n, rng, {}, &stats);
    header << "grab trajectories=" << n << " seed=" << seed;
  } else {
    data = synth_driving(spec.driving, n, rng, {}, &stats);
    header << "driving variant=" << to_string(spec.driving.variant)
           << " episodes=" << n << " seed=" << seed;
  }
  if (!out.parent_path().empty()) fs::create_directories(out.parent_path());
  save_dataset(out.string(), data, header.str());

  SynthReport report;
  report.pairs = data.pairs.size();
  report.state_count = data.state_count;
  report.fallbacks = stats.fallbacks;
  std::vector<char> seen(data.state_count, 0);
  for (const auto& p : data.pairs) {
    if (!seen[p.state.index]) {
      seen[p.state.index] = 1;
      ++report.states_covered;
    }
  }
  return report;
}

std::string cli_count_paths(const std::optional<fs::path>& layout) {
  const GrabLayout room = layout ? load_layout(layout->string()) : canonical_layout();
  const auto count = count_shortest_paths(room);
  if (!count) throw std::runtime_error("the milk cannot be reached");
  return "paths=" + std::to_string(count->paths) + " length=" + std::to_string(count->length);
}

std::string EvalReport::summary() const {
  std::ostringstream s;
  for (std::size_t m = 0; m < metric_names.size(); ++m) {
    s << metric_names[m] << " mean=" << format_real(metrics[m].mean)
      << " stderr=" << format_real(metrics[m].stderr_) << '\n';
  }
  return s.str();
}

EvalReport cli_eval(const QTable& table, const EnvSpec& env_spec,
                    std::size_t episodes, std::uint64_t seed) {
  if (episodes == 0) throw std::invalid_argument("episodes must be positive");
  auto env = make_environment(env_spec);
  if (table.state_count() != env->state_count() ||
      table.action_count() != env->action_count()) {
    throw std::invalid_argument(
        "table is " + std::to_string(table.state_count()) + " x " +
        std::to_string(table.action_count()) + " but the environment needs " +
        std::to_string(env->state_count()) + " x " + std::to_string(env->action_count()));
  }
  SarsaLearner learner{table, LearnerConfig{}};
  EpisodeOptions options;
  options.epsilon = 0.0;
  options.learn = false;
  options.record_steps = false;
  Rng rng(seed);

  const auto events = env->event_metrics();
  std::vector<std::vector<double>> series(2 + events.size());
  for (std::size_t e = 0; e < episodes; ++e) {
    const EpisodeTrace trace = run_episode(*env, learner, nullptr, rng, options);
    series[0].push_back(trace.cumulative_base_reward);
    series[1].push_back(static_cast<double>(trace.episode_length));
    for (std::size_t k = 0; k < events.size(); ++k) {
      series[2 + k].push_back(static_cast<double>(trace.event_counts[events[k].event]));
    }
  }
  EvalReport report;
  report.metric_names = metric_names(*env);
  for (const auto& s : series) {
    double mean = 0.0;
    for (double x : s) mean += x;
    mean /= static_cast<double>(s.size());
    double ss = 0.0;
    for (double x : s) ss += (x - mean) * (x - mean);
    const double n = static_cast<double>(s.size());
    const double se = s.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    report.metrics.push_back({mean, se});
  }
  return report;
}

}  // namespace ethics
