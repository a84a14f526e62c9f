#include "neurwin/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace neurwin {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

const std::vector<std::string>& KeyValueConfig::documented_keys() {
  static const std::vector<std::string> keys = {
      "env",        "class",     "q",
      "n",          "m",         "runs",
      "horizon",    "discount",  "learning_rate",
      "sigmoid_m",  "minibatch_size", "episodes",
      "checkpoint_interval",     "seed",
      "policy",     "out",       "noise",
      "noise_levels",            "lambda_min",
      "lambda_max", "lambda_step",
      "tol",        "ckpt",      "ckpt_dir",
      "beam_width", "lookahead_d",
      "qwic_episodes",           "layer_sizes",
      "lr_decay",
  };
  return keys;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path);
}

KeyValueConfig KeyValueConfig::parse(const std::string& text, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  const auto& known = documented_keys();
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument(origin + ":" + std::to_string(line_no) + ": unknown key '" +
                               key + "'");
    cfg.values_[key] = value;
  }
  return cfg;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::optional<int64_t> KeyValueConfig::get_int(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  size_t pos = 0;
  const int64_t n = std::stoll(*v, &pos);
  if (pos != v->size()) throw std::invalid_argument("config: key '" + key + "' is not an integer");
  return n;
}

std::optional<double> KeyValueConfig::get_double(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  size_t pos = 0;
  const double x = std::stod(*v, &pos);
  if (pos != v->size()) throw std::invalid_argument("config: key '" + key + "' is not a number");
  return x;
}

std::optional<uint64_t> KeyValueConfig::get_u64(const std::string& key) const {
  const auto v = get(key);
  if (!v) return std::nullopt;
  size_t pos = 0;
  const uint64_t n = std::stoull(*v, &pos);
  if (pos != v->size())
    throw std::invalid_argument("config: key '" + key + "' is not an unsigned integer");
  return n;
}

}  // namespace neurwin
