#include "posthoc/config_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "posthoc/errors.hpp"

namespace posthoc {

namespace {

using nlohmann::json;

std::string short_dump(const json& j) {
  std::string text = j.dump();
  if (text.size() > 120) text = text.substr(0, 117) + "...";
  return text;
}

[[noreturn]] void key_error(const std::string& key, const std::string& expected,
                            const json& got) {
  throw ConfigError("config key \"" + key + "\": expected " + expected + ", got " +
                    short_dump(got));
}

void check_keys(const json& j, const std::string& context,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError("unknown config key \"" + context + item.key() + "\"");
    }
  }
}

const json& require(const json& j, const std::string& context, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError("missing config key \"" + context + key + "\"");
  }
  return *it;
}

double as_double(const json& j, const std::string& key) {
  if (!j.is_number()) key_error(key, "a number", j);
  return j.get<double>();
}

std::int64_t as_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) key_error(key, "an integer", j);
  return j.get<std::int64_t>();
}

std::uint64_t as_seed(const json& j, const std::string& key) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const std::int64_t v = j.get<std::int64_t>();
    if (v >= 0) return static_cast<std::uint64_t>(v);
  }
  key_error(key, "a nonnegative integer", j);
}

double as_hurdle(const json& j, const std::string& key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  key_error(key, "a number or \"inf\"/\"-inf\"", j);
}

std::vector<DiscretePoint> parse_points(const json& j, const std::string& key) {
  if (!j.is_array() || j.empty()) {
    key_error(key, "a non-empty array of {value, prob} objects", j);
  }
  std::vector<DiscretePoint> points;
  points.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& pt = j[i];
    const std::string ctx = key + "[" + std::to_string(i) + "]";
    if (!pt.is_object()) key_error(ctx, "an object {value, prob}", pt);
    check_keys(pt, ctx + ".", {"value", "prob"});
    DiscretePoint p;
    p.value = as_double(require(pt, ctx + ".", "value"), ctx + ".value");
    p.probability = as_double(require(pt, ctx + ".", "prob"), ctx + ".prob");
    points.push_back(p);
  }
  return points;
}

ScalarDistribution parse_dist(const json& j, const std::string& key) {
  if (!j.is_object()) key_error(key, "an object with a \"type\" field", j);
  const json& type = require(j, key + ".", "type");
  if (!type.is_string()) key_error(key + ".type", "\"normal\" or \"discrete\"", type);
  const std::string t = type.get<std::string>();
  if (t == "normal") {
    check_keys(j, key + ".", {"type", "mean", "sd"});
    const double mean = as_double(require(j, key + ".", "mean"), key + ".mean");
    const double sd = as_double(require(j, key + ".", "sd"), key + ".sd");
    ScalarDistribution d = ScalarDistribution::make_normal(mean, sd);
    d.validate(key);
    return d;
  }
  if (t == "discrete") {
    check_keys(j, key + ".", {"type", "points"});
    ScalarDistribution d =
        ScalarDistribution::make_discrete(parse_points(require(j, key + ".", "points"),
                                                       key + ".points"));
    d.validate(key);
    return d;
  }
  key_error(key + ".type", "\"normal\" or \"discrete\"", type);
}

TheoryPolicy parse_policy(const json& j, const std::string& key, TheoryType label) {
  if (!j.is_object()) key_error(key, "an object with a \"rule\" field", j);
  const json& rule = require(j, key + ".", "rule");
  if (!rule.is_string()) {
    key_error(key + ".rule", "\"uniform_all\", \"top_k\", or \"eliminate_worst\"", rule);
  }
  const std::string r = rule.get<std::string>();
  if (r == "uniform_all") {
    check_keys(j, key + ".", {"rule"});
    return TheoryPolicy::uniform_all(label);
  }
  if (r == "top_k") {
    check_keys(j, key + ".", {"rule", "k"});
    const std::int64_t k = as_int(require(j, key + ".", "k"), key + ".k");
    return TheoryPolicy::top_k(label, static_cast<int>(k));
  }
  if (r == "eliminate_worst") {
    check_keys(j, key + ".", {"rule", "q"});
    const double q = as_double(require(j, key + ".", "q"), key + ".q");
    return TheoryPolicy::eliminate_worst(label, q);
  }
  key_error(key + ".rule", "\"uniform_all\", \"top_k\", or \"eliminate_worst\"", rule);
}

SweepAxis parse_axis(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "heterogeneity_q") return SweepAxis::heterogeneity_q;
    if (s == "mu_sd") return SweepAxis::mu_sd;
  }
  key_error("sweep.axis", "\"heterogeneity_q\" or \"mu_sd\"", j);
}

json dist_to_json(const ScalarDistribution& d) {
  json j;
  if (d.kind() == ScalarDistribution::Kind::normal) {
    j["type"] = "normal";
    j["mean"] = d.normal_mean();
    j["sd"] = d.normal_sd();
  } else {
    j["type"] = "discrete";
    json pts = json::array();
    for (const DiscretePoint& p : d.points()) {
      json pt;
      pt["value"] = p.value;
      pt["prob"] = p.probability;
      pts.push_back(pt);
    }
    j["points"] = pts;
  }
  return j;
}

json policy_to_json(const TheoryPolicy& p) {
  json j;
  switch (p.rule) {
    case TheoryPolicy::Rule::uniform_all:
      j["rule"] = "uniform_all";
      break;
    case TheoryPolicy::Rule::top_k:
      j["rule"] = "top_k";
      j["k"] = p.k;
      break;
    case TheoryPolicy::Rule::eliminate_worst:
      j["rule"] = "eliminate_worst";
      j["q"] = p.q;
      break;
  }
  return j;
}

json hurdle_to_json(double h) {
  if (std::isinf(h)) return json(h > 0 ? "inf" : "-inf");
  return json(h);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file: " + path);
  return buf.str();
}

}  // namespace

ParsedConfig parse_config(const std::string& text) {
  const json root = parse_text(text);
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(root, "",
             {"n_ideas", "mu_dist", "eps_dist", "prob_good", "good_policy", "bad_policy",
              "hurdle", "trials", "seed", "sweep"});

  ParsedConfig out;
  SweepConfig& cfg = out.config;
  cfg.base.universe.n_ideas =
      static_cast<int>(as_int(require(root, "", "n_ideas"), "n_ideas"));
  cfg.base.universe.mu_dist = parse_dist(require(root, "", "mu_dist"), "mu_dist");
  cfg.base.universe.eps_dist = parse_dist(require(root, "", "eps_dist"), "eps_dist");
  cfg.base.prob_good = as_double(require(root, "", "prob_good"), "prob_good");
  cfg.base.good_policy =
      parse_policy(require(root, "", "good_policy"), "good_policy", TheoryType::good);
  cfg.base.bad_policy =
      parse_policy(require(root, "", "bad_policy"), "bad_policy", TheoryType::bad);
  cfg.base.hurdle = as_hurdle(require(root, "", "hurdle"), "hurdle");

  if (const auto it = root.find("trials"); it != root.end()) {
    cfg.n_trials = as_int(*it, "trials");
    if (cfg.n_trials < 1) key_error("trials", "a positive integer", *it);
  } else {
    cfg.n_trials = 1'000'000;
    out.defaults_applied.push_back("trials = 1000000");
  }
  if (const auto it = root.find("seed"); it != root.end()) {
    cfg.master_seed = as_seed(*it, "seed");
  } else {
    cfg.master_seed = 42;
    out.defaults_applied.push_back("seed = 42");
  }

  if (const auto it = root.find("sweep"); it != root.end()) {
    const json& sw = *it;
    if (!sw.is_object()) key_error("sweep", "an object {axis, grid}", sw);
    check_keys(sw, "sweep.", {"axis", "grid"});
    cfg.axis = parse_axis(require(sw, "sweep.", "axis"));
    const json& grid = require(sw, "sweep.", "grid");
    if (!grid.is_array() || grid.empty()) {
      key_error("sweep.grid", "a non-empty array of numbers", grid);
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
      cfg.grid.push_back(as_double(grid[i], "sweep.grid[" + std::to_string(i) + "]"));
    }
    out.is_sweep = true;
    cfg.validate();
  } else {
    out.is_sweep = false;
    cfg.base.validate();
  }
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  return parse_config(read_file(path));
}

std::string serialize_config(const SweepConfig& config) {
  json root;
  root["n_ideas"] = config.base.universe.n_ideas;
  root["mu_dist"] = dist_to_json(config.base.universe.mu_dist);
  root["eps_dist"] = dist_to_json(config.base.universe.eps_dist);
  root["prob_good"] = config.base.prob_good;
  root["good_policy"] = policy_to_json(config.base.good_policy);
  root["bad_policy"] = policy_to_json(config.base.bad_policy);
  root["hurdle"] = hurdle_to_json(config.base.hurdle);
  root["trials"] = config.n_trials;
  root["seed"] = config.master_seed;
  if (config.axis != SweepAxis::none) {
    json sw;
    sw["axis"] = to_string(config.axis);
    sw["grid"] = config.grid;
    root["sweep"] = sw;
  }
  return root.dump(2);
}

ParsedOracleConfig parse_oracle_config(const std::string& text) {
  const json root = parse_text(text);
  if (!root.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(root, "",
             {"mu_values", "mu_points", "n_ideas", "eps_points", "prob_good",
              "good_policy", "bad_policy", "hurdle", "trials", "seed"});

  ParsedOracleConfig out;
  const bool has_fixed = root.contains("mu_values");
  const bool has_random = root.contains("mu_points");
  if (has_fixed == has_random) {
    throw ConfigError(
        "oracle config needs exactly one of \"mu_values\" (fixed true qualities) or "
        "\"mu_points\" with \"n_ideas\" (discrete law)");
  }
  out.random_mu = has_random;

  const std::vector<DiscretePoint> eps =
      parse_points(require(root, "", "eps_points"), "eps_points");
  const double prob_good = as_double(require(root, "", "prob_good"), "prob_good");
  const TheoryPolicy good =
      parse_policy(require(root, "", "good_policy"), "good_policy", TheoryType::good);
  const TheoryPolicy bad =
      parse_policy(require(root, "", "bad_policy"), "bad_policy", TheoryType::bad);
  const double hurdle = as_hurdle(require(root, "", "hurdle"), "hurdle");

  if (has_fixed) {
    if (root.contains("n_ideas")) {
      throw ConfigError("\"n_ideas\" is only valid with \"mu_points\"");
    }
    const json& mv = root["mu_values"];
    if (!mv.is_array() || mv.empty()) {
      key_error("mu_values", "a non-empty array of numbers", mv);
    }
    for (std::size_t i = 0; i < mv.size(); ++i) {
      out.fixed.mu_values.push_back(
          as_double(mv[i], "mu_values[" + std::to_string(i) + "]"));
    }
    out.fixed.eps_points = eps;
    out.fixed.prob_good = prob_good;
    out.fixed.good_policy = good;
    out.fixed.bad_policy = bad;
    out.fixed.hurdle = hurdle;
    out.fixed.validate();
  } else {
    out.random.n_ideas =
        static_cast<int>(as_int(require(root, "", "n_ideas"), "n_ideas"));
    out.random.mu_points = parse_points(root["mu_points"], "mu_points");
    out.random.eps_points = eps;
    out.random.prob_good = prob_good;
    out.random.good_policy = good;
    out.random.bad_policy = bad;
    out.random.hurdle = hurdle;
    out.random.validate();
  }

  if (const auto it = root.find("trials"); it != root.end()) {
    out.trials = as_int(*it, "trials");
    if (out.trials < 1) key_error("trials", "a positive integer", *it);
  } else {
    out.defaults_applied.push_back("trials = 1000000");
  }
  if (const auto it = root.find("seed"); it != root.end()) {
    out.seed = as_seed(*it, "seed");
  } else {
    out.defaults_applied.push_back("seed = 42");
  }
  return out;
}

ParsedOracleConfig parse_oracle_config_file(const std::string& path) {
  return parse_oracle_config(read_file(path));
}

std::string serialize_oracle_config(const ParsedOracleConfig& config) {
  json root;
  const auto points_to_json = [](const std::vector<DiscretePoint>& pts) {
    json arr = json::array();
    for (const DiscretePoint& p : pts) {
      json pt;
      pt["value"] = p.value;
      pt["prob"] = p.probability;
      arr.push_back(pt);
    }
    return arr;
  };
  if (config.random_mu) {
    root["n_ideas"] = config.random.n_ideas;
    root["mu_points"] = points_to_json(config.random.mu_points);
    root["eps_points"] = points_to_json(config.random.eps_points);
    root["prob_good"] = config.random.prob_good;
    root["good_policy"] = policy_to_json(config.random.good_policy);
    root["bad_policy"] = policy_to_json(config.random.bad_policy);
    root["hurdle"] = hurdle_to_json(config.random.hurdle);
  } else {
    root["mu_values"] = config.fixed.mu_values;
    root["eps_points"] = points_to_json(config.fixed.eps_points);
    root["prob_good"] = config.fixed.prob_good;
    root["good_policy"] = policy_to_json(config.fixed.good_policy);
    root["bad_policy"] = policy_to_json(config.fixed.bad_policy);
    root["hurdle"] = hurdle_to_json(config.fixed.hurdle);
  }
  root["trials"] = config.trials;
  root["seed"] = config.seed;
  return root.dump(2);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= static_cast<std::uint64_t>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string digest_hex(std::uint64_t digest) {
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[digest & 0xF];
    digest >>= 4;
  }
  return out;
}

std::string config_digest(const SweepConfig& config) {
  return digest_hex(fnv1a64(serialize_config(config)));
}

std::string oracle_config_digest(const ParsedOracleConfig& config) {
  return digest_hex(fnv1a64(serialize_oracle_config(config)));
}

}  // namespace posthoc
