#include "ostd/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "ostd/errors.hpp"

namespace ostd {

std::string to_string(EnvironmentKind kind) {
  return kind == EnvironmentKind::kRandomWalk ? "random_walk" : "puddle_world";
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kOsGptd:
      return "os_gptd";
    case EstimatorKind::kOsEgptd:
      return "os_egptd";
    case EstimatorKind::kBatchOracle:
      return "batch_oracle";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (dictionary.empty()) throw ConfigError("kernel dictionary is empty");
  for (const KernelSpec& spec : dictionary) {
    try {
      spec.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (num_features < 1) throw ConfigError("num_features must be >= 1");
  if (!(noise_var > 0.0)) throw ConfigError("noise_var must be positive");
  if (gamma < 0.0 || gamma >= 1.0) throw ConfigError("gamma must be in [0, 1)");
  if (num_trajectories < 1) throw ConfigError("num_trajectories must be >= 1");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  try {
    random_walk.validate();
    puddle_world.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw ConfigError("");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad number '" + value + "'");
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long out = std::stol(value, &used);
    if (used != value.size()) throw ConfigError("");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad integer '" + value + "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const unsigned long long out = std::stoull(value, &used);
    if (used != value.size()) throw ConfigError("");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': bad seed '" + value + "'");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(s);
  std::string item;
  while (std::getline(stream, item, sep)) parts.push_back(trim(item));
  return parts;
}

// family:lengthscale[:magnitude]
KernelSpec parse_kernel_entry(const std::string& entry) {
  const std::vector<std::string> parts = split(entry, ':');
  if (parts.size() < 2 || parts.size() > 3)
    throw ConfigError("bad dictionary entry '" + entry +
                      "' (want family:lengthscale[:magnitude])");
  KernelSpec spec;
  try {
    spec.family = kernel_family_from_string(parts[0]);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  spec.lengthscale = parse_double("dictionary", parts[1]);
  spec.magnitude = parts.size() == 3 ? parse_double("dictionary", parts[2]) : 1.0;
  return spec;
}

Eigen::Vector2d parse_point(const std::string& key, const std::string& value) {
  const std::vector<std::string> parts = split(value, ',');
  if (parts.size() != 2)
    throw ConfigError("config key '" + key + "': want 'x,y'");
  return {parse_double(key, parts[0]), parse_double(key, parts[1])};
}

// ax,ay,bx,by,radius entries joined by ';'
std::vector<Capsule> parse_puddles(const std::string& value) {
  std::vector<Capsule> puddles;
  for (const std::string& entry : split(value, ';')) {
    if (entry.empty()) continue;
    const std::vector<std::string> parts = split(entry, ',');
    if (parts.size() != 5)
      throw ConfigError("puddle entry '" + entry +
                        "' must be ax,ay,bx,by,radius");
    Capsule capsule;
    capsule.a = {parse_double("puddles", parts[0]),
                 parse_double("puddles", parts[1])};
    capsule.b = {parse_double("puddles", parts[2]),
                 parse_double("puddles", parts[3])};
    capsule.radius = parse_double("puddles", parts[4]);
    puddles.push_back(capsule);
  }
  if (puddles.empty()) throw ConfigError("puddles list is empty");
  return puddles;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  bool gamma_set = false;
  std::string section;
  std::istringstream stream(text);
  std::string raw_line;
  long line_no = 0;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    std::string line = raw_line;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string qualified = section.empty() ? key : section + "." + key;

    if (qualified == "experiment.environment") {
      if (value == "random_walk")
        cfg.environment = EnvironmentKind::kRandomWalk;
      else if (value == "puddle_world")
        cfg.environment = EnvironmentKind::kPuddleWorld;
      else
        throw ConfigError("unknown environment '" + value + "'");
    } else if (qualified == "experiment.estimator") {
      if (value == "os_gptd")
        cfg.estimator = EstimatorKind::kOsGptd;
      else if (value == "os_egptd")
        cfg.estimator = EstimatorKind::kOsEgptd;
      else if (value == "batch_oracle")
        cfg.estimator = EstimatorKind::kBatchOracle;
      else
        throw ConfigError("unknown estimator '" + value + "'");
    } else if (qualified == "experiment.num_trajectories") {
      cfg.num_trajectories = parse_long(qualified, value);
    } else if (qualified == "experiment.horizon") {
      cfg.horizon = parse_long(qualified, value);
    } else if (qualified == "experiment.master_seed") {
      cfg.master_seed = parse_u64(qualified, value);
    } else if (qualified == "experiment.output_dir") {
      cfg.output_dir = value;
    } else if (qualified == "experiment.workers") {
      cfg.workers = static_cast<int>(parse_long(qualified, value));
    } else if (qualified == "model.dictionary") {
      cfg.dictionary.clear();
      for (const std::string& entry : split(value, ','))
        if (!entry.empty()) cfg.dictionary.push_back(parse_kernel_entry(entry));
      if (cfg.dictionary.empty()) throw ConfigError("dictionary is empty");
    } else if (qualified == "model.num_features") {
      cfg.num_features = static_cast<int>(parse_long(qualified, value));
    } else if (qualified == "model.noise_var") {
      cfg.noise_var = parse_double(qualified, value);
    } else if (qualified == "model.gamma") {
      cfg.gamma = parse_double(qualified, value);
      gamma_set = true;
    } else if (qualified == "model.oracle_max_transitions") {
      cfg.oracle_max_transitions = parse_long(qualified, value);
    } else if (qualified == "random_walk.num_states") {
      cfg.random_walk.num_states = static_cast<int>(parse_long(qualified, value));
    } else if (qualified == "random_walk.state_dim") {
      cfg.random_walk.state_dim = static_cast<int>(parse_long(qualified, value));
    } else if (qualified == "random_walk.reward_low") {
      cfg.random_walk.reward_low = parse_double(qualified, value);
    } else if (qualified == "random_walk.reward_high") {
      cfg.random_walk.reward_high = parse_double(qualified, value);
    } else if (qualified == "puddle_world.step_size") {
      cfg.puddle_world.step_size = parse_double(qualified, value);
    } else if (qualified == "puddle_world.motion_noise_std") {
      cfg.puddle_world.motion_noise_std = parse_double(qualified, value);
    } else if (qualified == "puddle_world.goal_radius") {
      cfg.puddle_world.goal_radius = parse_double(qualified, value);
    } else if (qualified == "puddle_world.goal_center") {
      cfg.puddle_world.goal_center = parse_point(qualified, value);
    } else if (qualified == "puddle_world.start_min") {
      cfg.puddle_world.start_min = parse_point(qualified, value);
    } else if (qualified == "puddle_world.start_max") {
      cfg.puddle_world.start_max = parse_point(qualified, value);
    } else if (qualified == "puddle_world.boundary_margin") {
      cfg.puddle_world.boundary_margin = parse_double(qualified, value);
    } else if (qualified == "puddle_world.puddles") {
      cfg.puddle_world.puddles = parse_puddles(value);
    } else {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": unknown config key '" + qualified + "'");
    }
  }

  // Discount defaults follow the environment unless set explicitly.
  if (!gamma_set) {
    cfg.gamma = cfg.environment == EnvironmentKind::kRandomWalk
                    ? cfg.random_walk.discount
                    : cfg.puddle_world.discount;
  }
  cfg.random_walk.discount = cfg.gamma;
  cfg.puddle_world.discount = cfg.gamma;
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace ostd
