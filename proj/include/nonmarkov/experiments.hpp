#pragma once

// Figure presets and the measure computation behind the command line tool.

#include <optional>
#include <string>
#include <vector>

#include "nonmarkov/config.hpp"
#include "nonmarkov/csv.hpp"
#include "nonmarkov/evolve.hpp"
#include "nonmarkov/measure.hpp"

namespace nonmarkov {

struct ExperimentOutput {
  std::string name;  // file stem of the CSV
  CsvTable table;
  std::vector<Trajectory> trajectories;  // every integrated track, for hygiene checks
  std::string summary;                   // stdout line; empty for the figure presets
  std::optional<MeasureResult> measure;
};

/// Columns t, sx_markov, sy_markov, sz_markov, sx_full, sy_full, sz_full.
/// Atom starts in (|g> + |e>)/sqrt(2), cavity in vacuum.
ExperimentOutput run_fig3(const ExperimentConfig& cfg);

/// Columns t, D_markov, D_full, C_markov, C_full. D between the tracks
/// started from |e> and |g>; C between an ancilla and the atom started in
/// (|gg> + |ee>)/sqrt(2).
ExperimentOutput run_fig4(const ExperimentConfig& cfg);

/// Columns t, D_direct, D_delayed, C_atom_cavity_delayed. Both protocols
/// apply pulse_op at pulse_time; the direct sigma_z train follows at
/// pulse_time + k * decouple_interval (k >= 1), the delayed one starts at
/// pulse_time + decouple_delay.
ExperimentOutput run_fig5(const ExperimentConfig& cfg);

/// N_alpha for the pair (|e><e|, |g><g|) evolved to onset_time. The cavity
/// keeps at least three levels because sigma_x and sigma_y pulses can put
/// a second excitation into the joint system.
ExperimentOutput run_measure(const ExperimentConfig& cfg);

/// Bloch expectations t, sx, sy, sz for `model` from `initial_state`, with
/// pulse_op at pulse_time.
ExperimentOutput run_custom(const ExperimentConfig& cfg);

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// Writes out_dir/<name>.csv and returns the path.
std::string write_output(const ExperimentOutput& out, const std::string& out_dir);

}  // namespace nonmarkov
