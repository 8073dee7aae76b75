#include "nonmarkov/config.hpp"

#include <array>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nonmarkov/errors.hpp"

namespace nonmarkov {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad(std::string_view key, std::string_view value, std::string_view what) {
  throw ValidationError(ErrorCode::Config, std::string(key) + " = '" + std::string(value) +
                                               "': " + std::string(what));
}

double parse_real(std::string_view key, std::string_view value) {
  const std::string text(value);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    bad(key, value, "expected a finite real number");
  }
  return v;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
  const std::string text(value);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || v < 0) {
    bad(key, value, "expected a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

template <typename E, std::size_t N>
E parse_choice(std::string_view key, std::string_view value,
               const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, e] : table)
    if (name == value) return e;
  std::string options;
  for (const auto& [name, e] : table) options += (options.empty() ? "" : "|") + std::string(name);
  bad(key, value, "expected one of " + options);
}

template <typename E, std::size_t N>
std::string_view choice_name(E e, const std::array<std::pair<std::string_view, E>, N>& table) {
  for (const auto& [name, v] : table)
    if (v == e) return name;
  return "?";
}

constexpr std::array<std::pair<std::string_view, Experiment>, 5> kExperiments{{
    {"fig3", Experiment::Fig3},
    {"fig4", Experiment::Fig4},
    {"fig5", Experiment::Fig5},
    {"measure", Experiment::Measure},
    {"custom", Experiment::Custom},
}};
constexpr std::array<std::pair<std::string_view, PulseOp>, 4> kPulseOps{{
    {"sx", PulseOp::SX},
    {"sy", PulseOp::SY},
    {"sz", PulseOp::SZ},
    {"none", PulseOp::None},
}};
constexpr std::array<std::pair<std::string_view, ModelKind>, 2> kModels{{
    {"full", ModelKind::Full},
    {"markovian", ModelKind::Markovian},
}};
constexpr std::array<std::pair<std::string_view, InitialState>, 3> kInitialStates{{
    {"plus", InitialState::Plus},
    {"excited", InitialState::Excited},
    {"ground", InitialState::Ground},
}};

std::string real_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(Experiment e) { return choice_name(e, kExperiments); }
std::string_view to_string(PulseOp op) { return choice_name(op, kPulseOps); }

Experiment parse_experiment(std::string_view text) {
  return parse_choice("experiment", text, kExperiments);
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  if (key == "experiment") experiment = parse_choice(key, value, kExperiments);
  else if (key == "omega_q") omega_q = parse_real(key, value);
  else if (key == "delta") delta = parse_real(key, value);
  else if (key == "g") g = parse_real(key, value);
  else if (key == "gamma") gamma = parse_real(key, value);
  else if (key == "cavity_dim") cavity_dim = parse_count(key, value);
  else if (key == "dt") dt = parse_real(key, value);
  else if (key == "t_end") t_end = parse_real(key, value);
  else if (key == "pulse_time") pulse_time = parse_real(key, value);
  else if (key == "pulse_op") pulse_op = parse_choice(key, value, kPulseOps);
  else if (key == "decouple_interval") decouple_interval = parse_real(key, value);
  else if (key == "decouple_delay") decouple_delay = parse_real(key, value);
  else if (key == "out_dir") out_dir = std::string(value);
  else if (key == "model") model = parse_choice(key, value, kModels);
  else if (key == "onset_time") onset_time = parse_real(key, value);
  else if (key == "initial_state") initial_state = parse_choice(key, value, kInitialStates);
  else throw ValidationError(ErrorCode::Config, "unknown key '" + std::string(key) + "'");
}

void ExperimentConfig::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ValidationError(ErrorCode::Config,
                          "override '" + std::string(assignment) + "' is not key=value");
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

double ExperimentConfig::effective_t_end() const {
  if (t_end) return *t_end;
  return experiment == Experiment::Fig5 ? 3.0 : 5.0;
}

ModelParams ExperimentConfig::model_params() const {
  return {omega_q, delta, g, gamma, cavity_dim};
}

void ExperimentConfig::validate() const {
  model_params().validate();
  if (!(dt > 0.0)) throw ValidationError(ErrorCode::Config, "dt must be positive");
  const std::array<std::pair<const char*, double>, 5> times{{
      {"t_end", effective_t_end()},
      {"pulse_time", pulse_time},
      {"decouple_interval", decouple_interval},
      {"decouple_delay", decouple_delay},
      {"onset_time", onset_time},
  }};
  for (const auto& [name, v] : times) {
    if (v < 0.0) throw ValidationError(ErrorCode::Config, std::string(name) + " is negative");
    if (std::abs(v - std::round(v / dt) * dt) > 1e-12) {
      throw ValidationError(ErrorCode::Config, std::string(name) + " = " + real_text(v) +
                                                   " is not a multiple of dt = " + real_text(dt));
    }
  }
  if (!(decouple_interval > 0.0)) {
    throw ValidationError(ErrorCode::Config, "decouple_interval must be positive");
  }
  if (pulse_time > effective_t_end()) {
    throw ValidationError(ErrorCode::Config, "pulse_time lies after t_end");
  }
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  os << "experiment = " << to_string(experiment) << '\n'
     << "omega_q = " << real_text(omega_q) << '\n'
     << "delta = " << real_text(delta) << '\n'
     << "g = " << real_text(g) << '\n'
     << "gamma = " << real_text(gamma) << '\n'
     << "cavity_dim = " << cavity_dim << '\n'
     << "dt = " << real_text(dt) << '\n';
  if (t_end) os << "t_end = " << real_text(*t_end) << '\n';
  os << "pulse_time = " << real_text(pulse_time) << '\n'
     << "pulse_op = " << to_string(pulse_op) << '\n'
     << "decouple_interval = " << real_text(decouple_interval) << '\n'
     << "decouple_delay = " << real_text(decouple_delay) << '\n'
     << "out_dir = " << out_dir << '\n'
     << "model = " << choice_name(model, kModels) << '\n'
     << "onset_time = " << real_text(onset_time) << '\n'
     << "initial_state = " << choice_name(initial_state, kInitialStates) << '\n';
  return os.str();
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(ErrorCode::Config,
                            "line " + std::to_string(line_no) + ": expected key = value");
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(ErrorCode::Config, "cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::optional<Pauli> pauli_for(PulseOp op) {
  switch (op) {
    case PulseOp::SX: return Pauli::X;
    case PulseOp::SY: return Pauli::Y;
    case PulseOp::SZ: return Pauli::Z;
    case PulseOp::None: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace nonmarkov
