#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nonmarkov/evolve.hpp"
#include "nonmarkov/linalg.hpp"

namespace nonmarkov {

/// Tr|r1 - r2| / 2.
double trace_distance(const ComplexMatrix& r1, const ComplexMatrix& r2);

/// Wootters concurrence of a two-qubit state:
/// max(0, l1 - l2 - l3 - l4) with l_i the descending square roots of the
/// eigenvalues of sqrt(rho) (s_y (x) s_y) rho* (s_y (x) s_y) sqrt(rho).
double concurrence(const ComplexMatrix& rho);

/// Concurrence between atom and cavity. Excitation-number conservation
/// keeps the cavity in its lowest two Fock levels for single-excitation
/// states; the state is projected there and renormalised. Throws
/// TruncationLeak if levels >= 2 carry more than 1e-8 population.
double atom_cavity_concurrence(const ComplexMatrix& rho, const SubsystemLayout& layout);

/// (<s_x>, <s_y>, <s_z>) of the atom factor.
BlochVector bloch_expectations(const ComplexMatrix& rho, const SubsystemLayout& layout,
                               std::size_t atom = 0);

enum class DeviationNorm { BlochMax, TraceDistance };

/// Comparison of the actual pulsed plant evolution with the evolution
/// predicted by the pre-pulse dynamical maps. Post-pulse deviation above
/// max(10 x pre-pulse floor, 1e-6) flags the dynamics as non-Markovian.
struct CriterionResult {
  std::vector<double> deviation;
  double pre_pulse_floor = 0.0;
  double threshold = 0.0;
  double max_post_pulse = 0.0;
  bool non_markovian = false;
  std::optional<double> first_violation_time;
};

inline constexpr double kCriterionAbsoluteFloor = 1e-6;

CriterionResult criterion_deviation(const Trajectory& plant_actual, const Trajectory& plant_reference,
                                    DeviationNorm norm, double pulse_time);

/// Indices i (0 < i < n-1) where the three-point stencil changes slope sign.
std::vector<std::size_t> local_extrema(std::span<const double> x);

/// Indices of V-shaped minima of a nonnegative series whose value is below
/// the adjacent increments, i.e. the sampled trace of a zero crossing of
/// an underlying signed quantity.
std::vector<std::size_t> zero_touches(std::span<const double> x);

/// Largest rise x[j] - x[i] over first <= i < j.
double max_rise(std::span<const double> x, std::size_t first = 0);

/// Largest single-step increase x[k+1] - x[k] over first <= k.
double max_step_increase(std::span<const double> x, std::size_t first = 0);

}  // namespace nonmarkov
