#include <cmath>
#include <deque>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "ethics/grab_milk.hpp"
#include "ethics/human_model.hpp"
#include "ethics/rng.hpp"
#include "ethics/synth.hpp"

using namespace ethics;

namespace {

HumanDataset make_dataset(std::size_t states, std::size_t actions,
                          std::vector<std::pair<std::size_t, std::size_t>> pairs) {
  HumanDataset d{states, actions, {}};
  for (auto [s, a] : pairs) d.pairs.push_back({StateId{s}, ActionId{a}});
  return d;
}

std::vector<double> counts_of(const DeltaTable& t, std::size_t s) {
  std::vector<double> out;
  for (auto c : t.counts(StateId{s})) out.push_back(static_cast<double>(c));
  return out;
}

// Independent tally of a window's contents.
DeltaTable rebuild(std::size_t states, std::size_t actions,
                   const std::vector<std::deque<std::size_t>>& windows) {
  DeltaTable t(states, actions);
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t a : windows[s]) t.push(StateId{s}, ActionId{a});
  }
  return t;
}

}  // namespace

TEST_CASE("ingest counts pairs") {
  const auto t = ingest(make_dataset(2, 4, {{0, 1}, {0, 1}, {0, 0}}));
  CHECK(counts_of(t, 0) == std::vector<double>{1, 2, 0, 0});
  CHECK(t.total(StateId{0}) == 3);
  CHECK_FALSE(t.has_data(StateId{1}));
  CHECK(t.covered_states() == 1);

  const auto empty = ingest(make_dataset(3, 2, {}));
  for (std::size_t s = 0; s < 3; ++s) CHECK(counts_of(empty, s) == std::vector<double>{0, 0});
}

TEST_CASE("ingest rejects out-of-range pairs") {
  CHECK_THROWS(ingest(make_dataset(2, 2, {{2, 0}})));
  CHECK_THROWS(ingest(make_dataset(2, 2, {{0, 2}})));
}

TEST_CASE("zero-mean normalization") {
  DeltaTable t(3, 4);
  const std::vector<std::size_t> acts{0, 1, 1, 3};
  for (auto a : acts) t.push(StateId{0}, ActionId{a});
  CHECK(normalize_zero_mean(t, StateId{0}) == std::vector<double>{0, 1, -1, 0});
  for (int k = 0; k < 3; ++k) {
    for (std::size_t a = 0; a < 4; ++a) t.push(StateId{1}, ActionId{a});
  }
  CHECK(normalize_zero_mean(t, StateId{1}) == std::vector<double>{0, 0, 0, 0});
  CHECK(normalize_zero_mean(t, StateId{2}) == std::vector<double>{0, 0, 0, 0});

  DeltaTable two(1, 2);
  for (int k = 0; k < 3; ++k) two.push(StateId{0}, ActionId{0});
  CHECK(normalize_zero_mean(two, StateId{0}) == std::vector<double>{1.5, -1.5});
  CHECK(normalize_zero_mean(two, StateId{0}, DeltaScale::UnitMax) == std::vector<double>{1, -1});
  CHECK(normalize_zero_mean(two, StateId{0}, DeltaScale::Mean) == std::vector<double>{1, -1});
}

TEST_CASE("normalized deltas sum to zero") {
  Rng rng(4);
  DeltaTable t(20, 4);
  for (int i = 0; i < 5000; ++i) t.push(StateId{rng.index(20)}, ActionId{rng.index(4)});
  for (auto scale : {DeltaScale::None, DeltaScale::UnitMax, DeltaScale::Mean}) {
    for (std::size_t s = 0; s < 20; ++s) {
      double total = 0.0;
      for (double d : normalize_zero_mean(t, StateId{s}, scale)) total += d;
      CHECK(std::abs(total) <= 1e-12);
    }
  }
}

TEST_CASE("delta scale names") {
  CHECK(parse_delta_scale("none") == DeltaScale::None);
  CHECK(parse_delta_scale("unit_max") == DeltaScale::UnitMax);
  CHECK(parse_delta_scale("mean") == DeltaScale::Mean);
  CHECK_THROWS(parse_delta_scale("max"));
  CHECK(to_string(DeltaScale::UnitMax) == "unit_max");
}

TEST_CASE("feedback integration examples") {
  const std::vector<double> d{1.0, -1.0};
  const auto p = integrate_feedback(d, 0.95);
  // Weights 19 and 1/19.
  CHECK(p[0] == doctest::Approx(19.0 / (19.0 + 1.0 / 19.0)).epsilon(1e-12));
  CHECK(p[0] == doctest::Approx(0.99724).epsilon(1e-5));
  CHECK(p[1] == doctest::Approx(0.00276).epsilon(1e-3));

  for (double x : integrate_feedback(std::vector<double>(5, 0.0), 0.95)) {
    CHECK(x == doctest::Approx(0.2));
  }

  const std::vector<double> extreme{50.0, -50.0};
  const auto e = integrate_feedback(extreme, 0.95);
  CHECK(e[0] == 1.0);
  CHECK(std::isfinite(e[1]));
  CHECK(e[1] == doctest::Approx(std::exp(-100.0 * std::log(19.0))).epsilon(1e-9));
}

TEST_CASE("confidence must lie in (0.5, 1)") {
  const std::vector<double> d{1.0, -1.0};
  for (double c : {0.5, 1.0, 0.2, 1.5}) {
    CHECK_THROWS_AS(integrate_feedback(d, c), std::invalid_argument);
    CHECK_THROWS_AS(validate_confidence(c), std::invalid_argument);
  }
  CHECK_NOTHROW(validate_confidence(0.51));
}

TEST_CASE("direct and softmax integration agree on zero-mean vectors") {
  Rng rng(12);
  for (double c : {0.6, 0.8, 0.95}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const std::size_t n = 2 + rng.index(3);
      std::vector<double> d(n);
      double mean = 0.0;
      for (double& x : d) {
        x = (rng.uniform() - 0.5) * 40.0;
        mean += x;
      }
      mean /= static_cast<double>(n);
      for (double& x : d) x -= mean;
      const auto a = integrate_feedback(d, c);
      const auto b = integrate_feedback_softmax(d, c);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-10);
    }
  }
}

TEST_CASE("more feedback never lowers an action's probability") {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    DeltaTable t(1, 4);
    for (int i = 0; i < 10; ++i) t.push(StateId{0}, ActionId{rng.index(4)});
    for (int step = 0; step < 5; ++step) {
      const ActionId a{rng.index(4)};
      const double before = human_policy(t, 0.8).row(StateId{0})[a.index];
      t.push(StateId{0}, a);
      const double after = human_policy(t, 0.8).row(StateId{0})[a.index];
      CHECK(after >= before - 1e-15);
    }
  }
}

TEST_CASE("unseen states are exactly uniform") {
  DeltaTable t(4, 3);
  t.push(StateId{1}, ActionId{2});
  for (auto scale : {DeltaScale::None, DeltaScale::UnitMax, DeltaScale::Mean}) {
    const HumanPolicy h = human_policy(t, 0.95, scale);
    for (std::size_t s : {0u, 2u, 3u}) {
      for (double p : h.row(StateId{s})) CHECK(p == 1.0 / 3.0);
    }
    double total = 0.0;
    for (double p : h.row(StateId{1})) total += p;
    CHECK(std::abs(total - 1.0) <= 1e-12);
    CHECK(h.row(StateId{1})[2] > 1.0 / 3.0);
  }
}

TEST_CASE("window eviction") {
  DeltaTable t(1, 3, 2);
  CHECK_FALSE(t.push(StateId{0}, ActionId{0}));
  CHECK_FALSE(t.push(StateId{0}, ActionId{0}));
  CHECK(t.push(StateId{0}, ActionId{1}));
  CHECK(counts_of(t, 0) == std::vector<double>{1, 1, 0});

  DeltaTable w(2, 2, 1);
  window_push(w, {StateId{0}, ActionId{1}});
  const DeltaTable prior = w;
  window_push(w, {StateId{1}, ActionId{0}});
  CHECK_FALSE(w == prior);
  DeltaTable unwindowed(2, 2);
  CHECK_THROWS(window_push(unwindowed, {StateId{0}, ActionId{0}}));
}

TEST_CASE("pushing then evicting restores the counts") {
  DeltaTable t(1, 3, 3);
  for (std::size_t a : {0u, 1u, 2u}) t.push(StateId{0}, ActionId{a});
  const auto before = counts_of(t, 0);
  // One full window cycle of the same sequence returns to the same counts.
  for (std::size_t a : {0u, 1u, 2u}) t.push(StateId{0}, ActionId{a});
  CHECK(counts_of(t, 0) == before);
}

TEST_CASE("windowed table equals a rebuild from its window") {
  Rng rng(31);
  for (std::size_t cap : {1u, 3u, 8u}) {
    DeltaTable t(5, 4, cap);
    std::vector<std::deque<std::size_t>> windows(5);
    for (int i = 0; i < 3000; ++i) {
      const std::size_t s = rng.index(5), a = rng.index(4);
      t.push(StateId{s}, ActionId{a});
      windows[s].push_back(a);
      if (windows[s].size() > cap) windows[s].pop_front();
      if (i % 37 == 0) {
        const DeltaTable oracle = rebuild(5, 4, windows);
        for (std::size_t k = 0; k < 5; ++k) {
          CHECK(counts_of(t, k) == counts_of(oracle, k));
          CHECK(t.window(StateId{k}).size() == windows[k].size());
        }
      }
    }
  }
}

TEST_CASE("a vanished norm decays to uniform") {
  const std::size_t cap = 40;
  DeltaTable t(1, 4, cap);
  std::deque<std::size_t> window;
  HumanModel model(DeltaTable(1, 4, cap), 0.95);
  auto check_against_oracle = [&] {
    const DeltaTable oracle = rebuild(1, 4, {window});
    const HumanPolicy expect = human_policy(oracle, 0.95);
    const auto got = model.policy(StateId{0});
    for (std::size_t a = 0; a < 4; ++a) {
      CHECK(std::abs(got[a] - expect.row(StateId{0})[a]) <= 1e-12);
    }
  };
  for (std::size_t i = 0; i < cap; ++i) {
    model.push({StateId{0}, ActionId{2}});
    window.push_back(2);
    check_against_oracle();
  }
  CHECK(model.policy(StateId{0})[2] > 0.999);
  for (std::size_t i = 0; i < cap; ++i) {
    model.push({StateId{0}, ActionId{i % 4}});
    window.push_back(i % 4);
    if (window.size() > cap) window.pop_front();
    check_against_oracle();
  }
  for (double p : model.policy(StateId{0})) CHECK(std::abs(p - 0.25) <= 1e-9);
}

TEST_CASE("human model snapshot equals batch policy") {
  Rng rng(2);
  HumanModel model(DeltaTable(6, 3), 0.9, DeltaScale::UnitMax);
  DeltaTable batch(6, 3);
  for (int i = 0; i < 400; ++i) {
    const StateId s{rng.index(6)};
    const ActionId a{rng.index(3)};
    model.push({s, a});
    batch.push(s, a);
    if (i % 50 == 0) (void)model.policy(s);
  }
  const HumanPolicy snap = model.snapshot();
  const HumanPolicy expect = human_policy(batch, 0.9, DeltaScale::UnitMax);
  for (std::size_t s = 0; s < 6; ++s) {
    for (std::size_t a = 0; a < 3; ++a) {
      CHECK(snap.row(StateId{s})[a] == expect.row(StateId{s})[a]);
    }
  }
}

TEST_CASE("dataset text format round-trips") {
  const auto d = make_dataset(10, 4, {{0, 1}, {9, 3}, {5, 0}, {5, 0}});
  std::stringstream buf;
  write_dataset(buf, d, "made by a test\nsecond line");
  const std::string text = buf.str();
  CHECK(text.rfind("# made by a test\n# second line\n", 0) == 0);
  const HumanDataset back = read_dataset(buf, 10, 4);
  CHECK(back.pairs == d.pairs);

  std::stringstream with_comments("# header\n\n3 1   # trailing\n  4 2\n");
  const HumanDataset c = read_dataset(with_comments, 10, 4);
  REQUIRE(c.pairs.size() == 2);
  CHECK(c.pairs[0] == HumanPair{StateId{3}, ActionId{1}});
  CHECK(c.pairs[1] == HumanPair{StateId{4}, ActionId{2}});

  std::stringstream out_of_range("10 0\n");
  CHECK_THROWS(read_dataset(out_of_range, 10, 4));
  std::stringstream garbage("3 x\n");
  CHECK_THROWS(read_dataset(garbage, 10, 4));
  std::stringstream extra("3 1 2\n");
  CHECK_THROWS(read_dataset(extra, 10, 4));
}

TEST_CASE("synthesized room data matches an independent tally") {
  Rng rng(77);
  const HumanDataset d = synth_grab(canonical_layout(), 2500, rng);
  REQUIRE(d.pairs.size() == 100000);
  const DeltaTable t = ingest(d);
  std::vector<std::vector<std::int64_t>> tally(100, std::vector<std::int64_t>(4, 0));
  std::stringstream text;
  write_dataset(text, d);
  for (std::string line; std::getline(text, line);) {
    std::istringstream fields(line);
    std::size_t s = 0, a = 0;
    fields >> s >> a;
    tally[s][a]++;
  }
  for (std::size_t s = 0; s < 100; ++s) {
    for (std::size_t a = 0; a < 4; ++a) CHECK(t.counts(StateId{s})[a] == tally[s][a]);
  }
}
