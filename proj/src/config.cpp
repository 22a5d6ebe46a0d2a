#include "wobble/config.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "wobble/errors.hpp"

namespace wobble {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a mapping");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

json vec_json(Vec2 v) { return json::array({v.x, v.y}); }

Vec2 vec_from(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(where + " must be a list of two numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

json robot_json(const StarfishSpec& s) {
  return json{{"tentacle_count", s.tentacle_count},
              {"sections_per_tentacle", s.sections_per_tentacle},
              {"section_width", s.section_width},
              {"section_height", s.section_height},
              {"body_radius", s.body_radius},
              {"node_mass", s.node_mass},
              {"hub_mass", s.hub_mass},
              {"body_stiffness", s.body_stiffness},
              {"structural_stiffness", s.structural_stiffness},
              {"muscle_stiffness", s.muscle_stiffness},
              {"body_damping", s.body_damping},
              {"structural_damping", s.structural_damping},
              {"muscle_damping", s.muscle_damping},
              {"orientation", s.orientation},
              {"drop_height", s.drop_height}};
}

StarfishSpec robot_from(const json& j) {
  const std::string w = "robot";
  check_keys(j,
             {"tentacle_count", "sections_per_tentacle", "section_width", "section_height",
              "body_radius", "node_mass", "hub_mass", "body_stiffness", "structural_stiffness",
              "muscle_stiffness", "body_damping", "structural_damping", "muscle_damping",
              "orientation", "drop_height"},
             w);
  StarfishSpec s;
  read(j, "tentacle_count", s.tentacle_count, w);
  read(j, "sections_per_tentacle", s.sections_per_tentacle, w);
  read(j, "section_width", s.section_width, w);
  read(j, "section_height", s.section_height, w);
  read(j, "body_radius", s.body_radius, w);
  read(j, "node_mass", s.node_mass, w);
  read(j, "hub_mass", s.hub_mass, w);
  read(j, "body_stiffness", s.body_stiffness, w);
  read(j, "structural_stiffness", s.structural_stiffness, w);
  read(j, "muscle_stiffness", s.muscle_stiffness, w);
  read(j, "body_damping", s.body_damping, w);
  read(j, "structural_damping", s.structural_damping, w);
  read(j, "muscle_damping", s.muscle_damping, w);
  read(j, "orientation", s.orientation, w);
  read(j, "drop_height", s.drop_height, w);
  return s;
}

json environment_json(const Environment& e) {
  return json{{"gravity", vec_json(e.gravity)},
              {"drag", e.drag},
              {"ground",
               {{"enabled", e.ground.enabled},
                {"ground_y", e.ground.ground_y},
                {"stiffness", e.ground.stiffness},
                {"damping", e.ground.damping},
                {"friction", e.ground.friction}}}};
}

Environment environment_from(const json& j) {
  const std::string w = "environment";
  check_keys(j, {"gravity", "drag", "ground"}, w);
  Environment e;
  if (j.contains("gravity")) e.gravity = vec_from(j.at("gravity"), w + ".gravity");
  read(j, "drag", e.drag, w);
  if (j.contains("ground")) {
    const json& g = j.at("ground");
    const std::string wg = w + ".ground";
    check_keys(g, {"enabled", "ground_y", "stiffness", "damping", "friction"}, wg);
    read(g, "enabled", e.ground.enabled, wg);
    read(g, "ground_y", e.ground.ground_y, wg);
    read(g, "stiffness", e.ground.stiffness, wg);
    read(g, "damping", e.ground.damping, wg);
    read(g, "friction", e.ground.friction, wg);
  }
  return e;
}

json sim_json(const SimConfig& s) {
  return json{{"dt", s.dt},
              {"duration", s.duration},
              {"sample_interval", s.sample_interval},
              {"max_stability_index", s.max_stability_index},
              {"max_substeps", s.max_substeps}};
}

SimConfig sim_from(const json& j) {
  const std::string w = "sim";
  check_keys(j, {"dt", "duration", "sample_interval", "max_stability_index", "max_substeps"}, w);
  SimConfig s;
  read(j, "dt", s.dt, w);
  read(j, "duration", s.duration, w);
  read(j, "sample_interval", s.sample_interval, w);
  read(j, "max_stability_index", s.max_stability_index, w);
  read(j, "max_substeps", s.max_substeps, w);
  return s;
}

json motor_json(const MotorConfig& m) {
  return json{{"period", m.motor_period}, {"contraction_range", m.contraction_range}};
}

MotorConfig motor_from(const json& j) {
  const std::string w = "motor";
  check_keys(j, {"period", "contraction_range"}, w);
  MotorConfig m;
  read(j, "period", m.motor_period, w);
  read(j, "contraction_range", m.contraction_range, w);
  return m;
}

std::vector<std::uint64_t> seeds_from(const json& j) {
  std::vector<std::uint64_t> seeds;
  if (j.is_array()) {
    for (const auto& s : j) {
      if (!s.is_number_unsigned()) throw ConfigError("seeds must be non-negative integers");
      seeds.push_back(s.get<std::uint64_t>());
    }
  } else {
    check_keys(j, {"first", "count"}, "seeds");
    std::uint64_t first = 1;
    int count = 0;
    read(j, "first", first, "seeds");
    read(j, "count", count, "seeds");
    if (count < 1) throw ConfigError("seeds.count must be at least 1");
    for (int i = 0; i < count; ++i) seeds.push_back(first + static_cast<std::uint64_t>(i));
  }
  return seeds;
}

// Applies the schedule keys present in `j` onto `s`. A `range: [lo, hi]`
// entry sets mean and amplitude so the sinusoid spans exactly that interval.
void apply_schedule_keys(const json& j, WobbleSchedule& s, const std::string& w) {
  if (j.contains("characteristic"))
    s.characteristic = parse_characteristic(j.at("characteristic").get<std::string>());
  if (j.contains("range") && (j.contains("mean") || j.contains("amplitude")))
    throw ConfigError(w + ": give either range or mean/amplitude, not both");
  if (j.contains("range")) {
    const Vec2 r = vec_from(j.at("range"), w + ".range");
    const WobbleSchedule ranged = WobbleSchedule::from_range(s.characteristic, r.x, r.y, s.period);
    s.mean = ranged.mean;
    s.amplitude = ranged.amplitude;
  }
  read(j, "mean", s.mean, w);
  read(j, "amplitude", s.amplitude, w);
  read(j, "period", s.period, w);
  if (j.contains("upper_clip")) {
    if (j.at("upper_clip").is_null()) {
      s.upper_clip.reset();
    } else {
      double clip = 0.0;
      read(j, "upper_clip", clip, w);
      s.upper_clip = clip;
    }
  }
  read(j, "wobble_end", s.wobble_end, w);
  read(j, "ramp_end", s.ramp_end, w);
}

}  // namespace

json to_json(const TrialSetup& setup) {
  return json{{"robot", robot_json(setup.robot)},
              {"environment", environment_json(setup.environment)},
              {"sim", sim_json(setup.sim)},
              {"motor", motor_json(setup.motor)}};
}

json to_json(const LearnerConfig& cfg) {
  return json{{"population", cfg.population},
              {"kept", cfg.kept},
              {"init", to_string(cfg.init)},
              {"mutation",
               {{"sigma_offset", cfg.mutation.sigma_offset},
                {"sigma_amplitude", cfg.mutation.sigma_amplitude}}}};
}

json to_json(const WobbleSchedule& s) {
  return json{{"characteristic", to_string(s.characteristic)},
              {"mean", s.mean},
              {"amplitude", s.amplitude},
              {"period", s.period},
              {"upper_clip", s.upper_clip ? json(*s.upper_clip) : json(nullptr)},
              {"wobble_end", s.wobble_end},
              {"ramp_end", s.ramp_end},
              {"total_epochs", s.total_epochs}};
}

json to_json(const ExperimentConfig& cfg) {
  json conditions = json::array();
  for (const auto& c : cfg.conditions) {
    json entry = to_json(c.schedule);
    entry.erase("total_epochs");
    entry["name"] = c.name;
    if (!c.sweep.empty()) entry["sweep"] = c.sweep;
    conditions.push_back(entry);
  }
  json j = to_json(cfg.setup);
  j["experiment"] = cfg.name;
  j["epochs"] = cfg.epochs;
  j["seeds"] = cfg.seeds;
  j["learner"] = to_json(cfg.learner);
  j["baseline"] = cfg.baseline;
  j["conditions"] = conditions;
  return j;
}

TrialSetup setup_from_json(const json& j) {
  check_keys(j, {"robot", "environment", "sim", "motor"}, "setup");
  TrialSetup s;
  if (j.contains("robot")) s.robot = robot_from(j.at("robot"));
  if (j.contains("environment")) s.environment = environment_from(j.at("environment"));
  if (j.contains("sim")) s.sim = sim_from(j.at("sim"));
  if (j.contains("motor")) s.motor = motor_from(j.at("motor"));
  return s;
}

LearnerConfig learner_from_json(const json& j) {
  const std::string w = "learner";
  check_keys(j, {"population", "kept", "init", "mutation"}, w);
  LearnerConfig cfg;
  read(j, "population", cfg.population, w);
  read(j, "kept", cfg.kept, w);
  if (j.contains("init")) cfg.init = parse_init_mode(j.at("init").get<std::string>());
  if (j.contains("mutation")) {
    const json& m = j.at("mutation");
    check_keys(m, {"sigma_offset", "sigma_amplitude"}, w + ".mutation");
    read(m, "sigma_offset", cfg.mutation.sigma_offset, w + ".mutation");
    read(m, "sigma_amplitude", cfg.mutation.sigma_amplitude, w + ".mutation");
  }
  return cfg;
}

WobbleSchedule schedule_from_json(const json& j) {
  check_keys(j,
             {"characteristic", "mean", "amplitude", "period", "upper_clip", "wobble_end",
              "ramp_end", "total_epochs"},
             "schedule");
  WobbleSchedule s;
  apply_schedule_keys(j, s, "schedule");
  read(j, "total_epochs", s.total_epochs, "schedule");
  return s;
}

ExperimentConfig experiment_from_json(const json& doc) {
  check_keys(doc,
             {"experiment", "epochs", "seeds", "schedule", "robot", "environment", "sim", "motor",
              "learner", "baseline", "conditions", "desk_scale"},
             "config");
  ExperimentConfig cfg;
  read(doc, "experiment", cfg.name, "config");
  read(doc, "epochs", cfg.epochs, "config");
  read(doc, "baseline", cfg.baseline, "config");
  if (doc.contains("seeds")) cfg.seeds = seeds_from(doc.at("seeds"));
  json setup = json::object();
  for (const char* key : {"robot", "environment", "sim", "motor"})
    if (doc.contains(key)) setup[key] = doc.at(key);
  cfg.setup = setup_from_json(setup);
  if (doc.contains("learner")) cfg.learner = learner_from_json(doc.at("learner"));

  WobbleSchedule defaults;
  if (doc.contains("schedule")) {
    const json& s = doc.at("schedule");
    check_keys(s, {"period", "wobble_end", "ramp_end"}, "schedule");
    apply_schedule_keys(s, defaults, "schedule");
  }
  defaults.total_epochs = cfg.epochs;

  if (!doc.contains("conditions") || !doc.at("conditions").is_array())
    throw ConfigError("config needs a list of conditions");
  for (const auto& c : doc.at("conditions")) {
    check_keys(c,
               {"name", "sweep", "characteristic", "mean", "amplitude", "range", "period",
                "upper_clip", "wobble_end", "ramp_end"},
               "condition");
    Condition cond;
    if (!c.contains("name")) throw ConfigError("every condition needs a name");
    read(c, "name", cond.name, "condition");
    read(c, "sweep", cond.sweep, "condition " + cond.name);
    cond.schedule = defaults;
    apply_schedule_keys(c, cond.schedule, "condition " + cond.name);
    cfg.conditions.push_back(std::move(cond));
  }
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (name.empty() || name.find_first_of("/\\") != std::string::npos)
    throw ConfigError("experiment name must be a non-empty plain directory name");
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw ConfigError("seeds must be distinct");
  if (conditions.empty()) throw ConfigError("at least one condition is required");
  std::set<std::string> names;
  for (const auto& c : conditions) {
    if (c.name.empty() || c.name.find_first_of("/\\ ") != std::string::npos)
      throw ConfigError("condition name '" + c.name + "' is not a plain directory name");
    if (!names.insert(c.name).second) throw ConfigError("duplicate condition '" + c.name + "'");
    if (c.schedule.total_epochs != epochs)
      throw ConfigError("condition " + c.name + ": schedule length differs from epochs");
    try {
      c.schedule.validate();
    } catch (const ConfigError& e) {
      throw ConfigError("condition " + c.name + ": " + e.what());
    }
  }
  setup.robot.validate();
  setup.sim.validate();
  setup.motor.validate();
  learner.validate();
}

const Condition& ExperimentConfig::condition(const std::string& wanted) const {
  for (const auto& c : conditions)
    if (c.name == wanted) return c;
  throw ConfigError("no condition named '" + wanted + "'");
}

json run_config(const ExperimentConfig& cfg, const Condition& condition) {
  return json{{"setup", to_json(cfg.setup)},
              {"learner", to_json(cfg.learner)},
              {"schedule", to_json(condition.schedule)}};
}

std::string config_hash(const json& config) { return sha256_hex(config.dump()); }

RunConfig run_config_from_json(const json& j) {
  check_keys(j, {"setup", "learner", "schedule"}, "run config");
  RunConfig rc;
  rc.setup = setup_from_json(j.at("setup"));
  rc.learner = learner_from_json(j.at("learner"));
  rc.schedule = schedule_from_json(j.at("schedule"));
  return rc;
}

namespace {

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
    case YAML::NodeType::Scalar:
      break;
  }
  const std::string text = node.Scalar();
  if (node.Tag() == "!") return text;  // quoted scalar
  if (text == "true" || text == "false") return text == "true";
  if (text == "~" || text == "null") return nullptr;
  // Integers stay integers so counts and seeds keep their type.
  try {
    std::size_t used = 0;
    if (text.find_first_of(".eE") == std::string::npos && !text.empty() && text[0] != '+') {
      if (text[0] == '-') {
        const long long v = std::stoll(text, &used);
        if (used == text.size()) return v;
      } else {
        const unsigned long long v = std::stoull(text, &used);
        if (used == text.size()) return v;
      }
    }
    used = 0;
    const double d = std::stod(text, &used);
    if (used == text.size()) return d;
  } catch (const std::exception&) {
  }
  return text;
}

}  // namespace

json yaml_file_to_json(const std::filesystem::path& path) {
  try {
    return yaml_to_json(YAML::LoadFile(path.string()));
  } catch (const YAML::Exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void merge_patch(json& base, const json& patch) {
  if (!patch.is_object() || !base.is_object()) {
    base = patch;
    return;
  }
  for (const auto& item : patch.items()) {
    if (base.contains(item.key()))
      merge_patch(base[item.key()], item.value());
    else
      base[item.key()] = item.value();
  }
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path, bool desk_scale) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  json doc = yaml_file_to_json(path);
  if (!doc.is_object()) throw ConfigError(path.string() + ": top level must be a mapping");
  if (desk_scale) {
    if (!doc.contains("desk_scale"))
      throw ConfigError(path.string() + " has no desk_scale section");
    const json patch = doc.at("desk_scale");
    merge_patch(doc, patch);
  }
  doc.erase("desk_scale");
  return experiment_from_json(doc);
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i)
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

}  // namespace wobble
