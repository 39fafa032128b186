#include "ethics/human_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ethics {

namespace {

std::vector<double> normalized_exp(std::vector<double> log_weights) {
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  double total = 0.0;
  for (double& w : log_weights) {
    w = std::exp(w - top);
    total += w;
  }
  for (double& w : log_weights) w /= total;
  return log_weights;
}

}  // namespace

void HumanDataset::validate() const {
  if (state_count == 0 || action_count == 0) {
    throw std::invalid_argument("dataset dimensions must be positive");
  }
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].state.index >= state_count ||
        pairs[i].action.index >= action_count) {
      throw std::out_of_range("dataset pair " + std::to_string(i) +
                              " is out of range");
    }
  }
}

DeltaScale parse_delta_scale(std::string_view name) {
  if (name == "none") return DeltaScale::None;
  if (name == "unit_max") return DeltaScale::UnitMax;
  if (name == "mean") return DeltaScale::Mean;
  throw std::invalid_argument("unknown delta_scale '" + std::string(name) +
                              "' (expected none, unit_max or mean)");
}

std::string_view to_string(DeltaScale scale) {
  switch (scale) {
    case DeltaScale::None: return "none";
    case DeltaScale::UnitMax: return "unit_max";
    case DeltaScale::Mean: return "mean";
  }
  return "none";
}

DeltaTable::DeltaTable(std::size_t state_count, std::size_t action_count,
                       std::size_t window_capacity)
    : state_count_(state_count),
      action_count_(action_count),
      window_capacity_(window_capacity),
      counts_(state_count * action_count, 0),
      totals_(state_count, 0) {
  if (state_count == 0 || action_count == 0) {
    throw std::invalid_argument("DeltaTable dimensions must be positive");
  }
  if (windowed()) windows_.resize(state_count);
}

void DeltaTable::check(StateId s, ActionId a) const {
  if (s.index >= state_count_ || a.index >= action_count_) {
    throw std::out_of_range("human pair (" + std::to_string(s.index) + ", " +
                            std::to_string(a.index) + ") out of range");
  }
}

bool DeltaTable::push(StateId s, ActionId a) {
  check(s, a);
  counts_[s.index * action_count_ + a.index] += 1;
  totals_[s.index] += 1;
  if (!windowed()) return false;
  auto& queue = windows_[s.index];
  queue.push_back(a);
  if (queue.size() <= window_capacity_) return false;
  const ActionId old = queue.front();
  queue.pop_front();
  counts_[s.index * action_count_ + old.index] -= 1;
  totals_[s.index] -= 1;
  return true;
}

std::size_t DeltaTable::covered_states() const {
  return static_cast<std::size_t>(std::count_if(
      totals_.begin(), totals_.end(), [](std::int64_t t) { return t > 0; }));
}

const std::deque<ActionId>& DeltaTable::window(StateId s) const {
  static const std::deque<ActionId> kEmpty;
  if (!windowed()) return kEmpty;
  return windows_.at(s.index);
}

DeltaTable ingest(const HumanDataset& dataset, std::size_t window_capacity) {
  dataset.validate();
  DeltaTable table(dataset.state_count, dataset.action_count, window_capacity);
  for (const HumanPair& p : dataset.pairs) table.push(p.state, p.action);
  return table;
}

void window_push(DeltaTable& delta, HumanPair pair) {
  if (!delta.windowed()) {
    throw std::logic_error("window_push on a table without a window");
  }
  delta.push(pair.state, pair.action);
}

std::vector<double> normalize_zero_mean(const DeltaTable& delta, StateId s,
                                        DeltaScale scale) {
  if (s.index >= delta.state_count()) {
    throw std::out_of_range("state out of range");
  }
  const auto counts = delta.counts(s);
  const double mean = static_cast<double>(delta.total(s)) /
                      static_cast<double>(counts.size());
  std::vector<double> out(counts.size());
  for (std::size_t a = 0; a < counts.size(); ++a) {
    out[a] = static_cast<double>(counts[a]) - mean;
  }
  double divisor = 1.0;
  if (scale == DeltaScale::UnitMax) {
    double peak = 0.0;
    for (double d : out) peak = std::max(peak, std::abs(d));
    if (peak > 0.0) divisor = peak;
  } else if (scale == DeltaScale::Mean) {
    divisor = std::max(mean, 1.0);
  }
  if (divisor != 1.0) {
    for (double& d : out) d /= divisor;
  }
  return out;
}

void validate_confidence(double confidence) {
  if (!(confidence > 0.5 && confidence < 1.0)) {
    throw std::invalid_argument("confidence C must lie in (0.5, 1)");
  }
}

std::vector<double> integrate_feedback(std::span<const double> delta,
                                       double confidence) {
  validate_confidence(confidence);
  if (delta.empty()) throw std::invalid_argument("empty feedback vector");
  const double total = std::accumulate(delta.begin(), delta.end(), 0.0);
  const double log_c = std::log(confidence);
  const double log_not_c = std::log1p(-confidence);
  std::vector<double> log_weights(delta.size());
  for (std::size_t a = 0; a < delta.size(); ++a) {
    const double others = total - delta[a];
    log_weights[a] = delta[a] * log_c + others * log_not_c;
  }
  return normalized_exp(std::move(log_weights));
}

std::vector<double> integrate_feedback_softmax(std::span<const double> delta,
                                               double confidence) {
  validate_confidence(confidence);
  if (delta.empty()) throw std::invalid_argument("empty feedback vector");
  const double log_odds = std::log(confidence) - std::log1p(-confidence);
  std::vector<double> logits(delta.begin(), delta.end());
  for (double& x : logits) x *= log_odds;
  return normalized_exp(std::move(logits));
}

HumanPolicy::HumanPolicy(std::size_t state_count, std::size_t action_count,
                         double confidence)
    : state_count_(state_count),
      action_count_(action_count),
      confidence_(confidence),
      probs_(state_count * action_count,
             1.0 / static_cast<double>(action_count)) {
  validate_confidence(confidence);
}

void HumanPolicy::set_row(StateId s, std::span<const double> dist) {
  if (s.index >= state_count_ || dist.size() != action_count_) {
    throw std::invalid_argument("human policy row does not fit the table");
  }
  std::copy(dist.begin(), dist.end(),
            probs_.begin() + static_cast<std::ptrdiff_t>(s.index * action_count_));
}

HumanPolicy human_policy(const DeltaTable& delta, double confidence,
                         DeltaScale scale) {
  HumanPolicy policy(delta.state_count(), delta.action_count(), confidence);
  for (std::size_t s = 0; s < delta.state_count(); ++s) {
    const StateId state{s};
    if (!delta.has_data(state)) continue;
    policy.set_row(state, integrate_feedback(
                              normalize_zero_mean(delta, state, scale),
                              confidence));
  }
  return policy;
}

HumanModel::HumanModel(DeltaTable delta, double confidence, DeltaScale scale)
    : delta_(std::move(delta)),
      confidence_(confidence),
      scale_(scale),
      cache_(delta_.state_count(), delta_.action_count(), confidence),
      dirty_(delta_.state_count(), 1) {}

void HumanModel::push(HumanPair pair) {
  delta_.push(pair.state, pair.action);
  dirty_[pair.state.index] = 1;
}

std::span<const double> HumanModel::policy(StateId s) const {
  if (s.index >= delta_.state_count()) {
    throw std::out_of_range("state out of range");
  }
  if (dirty_[s.index]) {
    if (delta_.has_data(s)) {
      cache_.set_row(s, integrate_feedback(
                            normalize_zero_mean(delta_, s, scale_),
                            confidence_));
    } else {
      const std::vector<double> uniform(
          delta_.action_count(),
          1.0 / static_cast<double>(delta_.action_count()));
      cache_.set_row(s, uniform);
    }
    dirty_[s.index] = 0;
  }
  return cache_.row(s);
}

HumanPolicy HumanModel::snapshot() const {
  for (std::size_t s = 0; s < delta_.state_count(); ++s) policy(StateId{s});
  return cache_;
}

void write_dataset(std::ostream& out, const HumanDataset& dataset,
                   std::string_view header_comment) {
  if (!header_comment.empty()) {
    std::istringstream lines{std::string(header_comment)};
    for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  }
  for (const HumanPair& p : dataset.pairs) {
    out << p.state.index << ' ' << p.action.index << '\n';
  }
  if (!out) throw std::runtime_error("failed writing dataset");
}

HumanDataset read_dataset(std::istream& in, std::size_t state_count,
                          std::size_t action_count) {
  HumanDataset dataset{state_count, action_count, {}};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    long long s = 0;
    long long a = 0;
    if (!(fields >> s)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": expected 'state action'");
    }
    std::string rest;
    if (!(fields >> a) || (fields >> rest)) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": expected 'state action'");
    }
    if (s < 0 || a < 0 || static_cast<std::size_t>(s) >= state_count ||
        static_cast<std::size_t>(a) >= action_count) {
      throw std::out_of_range("dataset line " + std::to_string(line_no) +
                              ": pair out of range");
    }
    dataset.pairs.push_back({StateId{static_cast<std::size_t>(s)},
                             ActionId{static_cast<std::size_t>(a)}});
  }
  return dataset;
}

void save_dataset(const std::string& path, const HumanDataset& dataset,
                  std::string_view header_comment) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_dataset(out, dataset, header_comment);
}

HumanDataset load_dataset(const std::string& path, std::size_t state_count,
                          std::size_t action_count) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset " + path);
  return read_dataset(in, state_count, action_count);
}

}  // namespace ethics
