#include "ethics/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace ethics {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t");
  return std::string(s.substr(begin, end - begin + 1));
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value)) {
    throw ConfigError(key + ": expected a real number, got '" + text + "'");
  }
  return value;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& Config::known_keys() {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"experiment.name", "experiment"},
      {"experiment.env", "grab"},
      {"experiment.episodes", "4000"},
      {"experiment.runs", "20"},
      {"experiment.seed", "1"},
      {"experiment.shaping", "off"},
      {"experiment.final_window", "200"},
      {"experiment.save_tables", "on"},
      {"learner.alpha", "0.1"},
      {"learner.gamma", "0.95"},
      {"learner.epsilon", "0.1"},
      {"learner.epsilon_final", "0.1"},
      {"learner.epsilon_decay_episodes", "0"},
      {"learner.temperature", "1"},
      {"shaping.c_n", "1"},
      {"shaping.c_p", "1"},
      {"shaping.tau_n", "0.05"},
      {"shaping.tau_p", "0.8"},
      {"shaping.kl_mode", "bernoulli"},
      {"human.dataset", ""},
      {"human.confidence", "0.95"},
      {"human.delta_scale", "none"},
      {"human.window", "0"},
      {"env.layout", ""},
      {"env.step_cap", "400"},
      {"env.variant", "avoid"},
      {"env.horizon", "100"},
      {"env.road_length", "20"},
      {"env.car_spawn_prob", "0.15"},
      {"env.hazard_spawn_prob", "0.05"},
      {"sweep.alpha", ""},
      {"sweep.gamma", ""},
      {"sweep.c_n", ""},
      {"sweep.c_p", ""},
  };
  return keys;
}

Config::Config() {
  for (const auto& [key, value] : known_keys()) values_[key] = value;
}

Config Config::parse(const std::string& text, std::string base_dir) {
  // The INI reader only knows ';' comments; blank out '#' lines too.
  std::string cleaned;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] != '#') cleaned += line;
    cleaned += '\n';
  }
  boost::property_tree::ptree tree;
  std::istringstream in(cleaned);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& ex) {
    throw ConfigError("config line " + std::to_string(ex.line()) + ": " +
                      ex.message());
  }
  Config cfg;
  cfg.base_dir_ = std::move(base_dir);
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' must appear inside a [section]");
    }
    for (const auto& [key, value] : body) {
      cfg.set(section + "." + key, value.data());
    }
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream text;
  text << in.rdbuf();
  const auto dir = std::filesystem::path(path).parent_path();
  Config cfg = parse(text.str(), dir.empty() ? "." : dir.string());
  cfg.apply_process_env();
  return cfg;
}

std::string Config::env_var_name(const std::string& key) {
  std::string name = "ETHICS_" + key;
  for (char& c : name) {
    c = c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

void Config::apply_env_overrides(const EnvLookup& lookup) {
  for (const auto& [key, unused] : known_keys()) {
    if (auto value = lookup(env_var_name(key))) set(key, *value);
  }
}

void Config::apply_process_env() {
  apply_env_overrides([](const std::string& name) -> std::optional<std::string> {
    if (const char* v = std::getenv(name.c_str())) return std::string(v);
    return std::nullopt;
  });
}

void Config::set(const std::string& key, std::string value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second = trim(value);
}

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown config key '" + key + "'");
  return it->second;
}

double Config::get_real(const std::string& key) const {
  return parse_real(key, get(key));
}

std::size_t Config::get_count(const std::string& key) const {
  return static_cast<std::size_t>(get_u64(key));
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::string& text = get(key);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

bool Config::get_switch(const std::string& key) const {
  std::string v = get(key);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(key + ": expected on or off, got '" + get(key) + "'");
}

std::vector<double> Config::get_real_list(const std::string& key) const {
  std::vector<double> out;
  const std::string& text = get(key);
  if (text.empty()) return out;
  std::istringstream items(text);
  for (std::string item; std::getline(items, item, ',');) {
    out.push_back(parse_real(key, item));
  }
  return out;
}

std::string Config::get_path(const std::string& key) const {
  const std::string& value = get(key);
  if (value.empty()) return value;
  const std::filesystem::path p(value);
  if (p.is_absolute()) return value;
  return (std::filesystem::path(base_dir_) / p).lexically_normal().string();
}

std::string Config::to_ini() const {
  std::string out;
  std::string section;
  for (const auto& [key, unused] : known_keys()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out += '\n';
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += key.substr(dot + 1) + " = " + values_.at(key) + '\n';
  }
  return out;
}

}  // namespace ethics
