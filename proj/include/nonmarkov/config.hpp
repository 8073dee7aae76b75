#pragma once

// Experiment configuration: flat `key = value` lines with `#` comments.
// Unknown keys are rejected.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nonmarkov/model.hpp"

namespace nonmarkov {

enum class Experiment { Fig3, Fig4, Fig5, Measure, Custom };
enum class PulseOp { SX, SY, SZ, None };
enum class ModelKind { Full, Markovian };
enum class InitialState { Plus, Excited, Ground };

std::string_view to_string(Experiment e);
std::string_view to_string(PulseOp op);
Experiment parse_experiment(std::string_view text);

struct ExperimentConfig {
  Experiment experiment = Experiment::Fig3;
  double omega_q = 1.0;
  double delta = 1.0;
  double g = 1.0;
  double gamma = 2.0;
  std::size_t cavity_dim = 2;
  double dt = 1e-3;
  std::optional<double> t_end;  // default depends on the experiment
  double pulse_time = 1.0;
  PulseOp pulse_op = PulseOp::SZ;
  double decouple_interval = 0.02;
  double decouple_delay = 0.1;
  std::string out_dir = ".";
  ModelKind model = ModelKind::Full;  // measure and custom only
  double onset_time = 1.0;            // measure only
  InitialState initial_state = InitialState::Plus;  // custom only

  /// Sets one key from its textual value; throws ValidationError(Config).
  void set(std::string_view key, std::string_view value);
  /// Parses "key=value".
  void apply_override(std::string_view assignment);

  /// 5 for fig3/fig4/measure/custom, 3 for fig5 unless set.
  double effective_t_end() const;
  ModelParams model_params() const;

  /// Nonnegative times, positive dt, every time a multiple of dt to 1e-12.
  void validate() const;

  /// Every key, one per line, reals at 17 significant digits.
  std::string serialize() const;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// The unitary for a pulse_op value; None has no unitary.
std::optional<Pauli> pauli_for(PulseOp op);

}  // namespace nonmarkov
