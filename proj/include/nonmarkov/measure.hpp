#pragma once

// Non-Markovianity through dynamical recovery: starting from a pair of plant
// states at distance alpha, how much of the lost distinguishability can local
// pulse schedules win back,
//   N_alpha = max over schedules and times of (D(t) - alpha) / (1 - alpha).
// The supremum over all schedules is replaced by a grid search over a finite
// family, so the reported value is a lower bound.

#include <cstddef>
#include <string>
#include <vector>

#include "nonmarkov/evolve.hpp"
#include "nonmarkov/linalg.hpp"
#include "nonmarkov/model.hpp"

namespace nonmarkov {

/// Schedule family: one pulse from `pulse_ops` at onset + j * pulse_time_step
/// (within `window`), optionally followed by a sigma_z decoupling train with
/// spacing from `train_intervals` starting `train_delay` after the pulse. A
/// zero delay means the pulse itself is the first element of the train.
/// The recovered distance is the running maximum up to onset + window.
struct SearchSpec {
  double onset_time = 1.0;
  double dt = 1e-3;
  double window = 5.0;
  double pulse_time_step = 0.05;
  std::vector<Pauli> pulse_ops{Pauli::X, Pauli::Y, Pauli::Z};
  std::vector<double> train_intervals{0.02, 0.05};
  std::vector<double> train_delays{0.0, 0.05, 0.1, 0.2};
  std::size_t plant = 0;  // factor receiving the pulses
};

struct SearchEntry {
  std::string schedule;
  double pulse_time = 0.0;  // NaN for the unpulsed baseline
  double max_distance = 0.0;
};

struct MeasureResult {
  double n_alpha = 0.0;  // clipped to [0, 1]
  double alpha = 0.0;
  double best_distance = 0.0;
  PulseSchedule argmax_schedule;
  std::string argmax_summary;
  std::vector<SearchEntry> search_log;
};

/// `rho1`, `rho2` are the joint states at the onset time in the model's
/// layout; `alpha` is the plant trace distance between them. Throws
/// AlphaOutOfRange if alpha >= 1 - 1e-9.
MeasureResult n_alpha(const LindbladModel& model, const ComplexMatrix& rho1,
                      const ComplexMatrix& rho2, double alpha, const SearchSpec& spec = {});

}  // namespace nonmarkov
