#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "nonmarkov/linalg.hpp"
#include "nonmarkov/model.hpp"
#include "nonmarkov/riccati.hpp"

namespace nonmarkov {

/// Instantaneous local unitary on one tensor factor.
struct PulseEvent {
  double time = 0.0;
  ComplexMatrix unitary;
  std::size_t target = 0;
  std::string label;
};

/// Pulses in strictly increasing time order; every unitary is checked
/// against U^+ U = I to 1e-10.
class PulseSchedule {
 public:
  PulseSchedule() = default;
  explicit PulseSchedule(std::vector<PulseEvent> events);

  /// Appends an event later than every existing one.
  void add(PulseEvent event);
  /// Union of two schedules; events must not share a time.
  static PulseSchedule merge(const PulseSchedule& a, const PulseSchedule& b);

  const std::vector<PulseEvent>& events() const noexcept { return events_; }
  bool empty() const noexcept { return events_.empty(); }
  std::size_t size() const noexcept { return events_.size(); }

  /// Compact description, e.g. "sz@1;sz@1.1+0.02x95".
  std::string summary() const;

 private:
  std::vector<PulseEvent> events_;
};

/// States recorded on a uniform grid t_k = t0 + k dt. At a pulse instant the
/// stored state is the post-pulse one.
struct Trajectory {
  std::string model_id;
  SubsystemLayout layout;
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<ComplexMatrix> states;

  std::size_t size() const noexcept { return states.size(); }
  double time(std::size_t k) const noexcept { return t0 + dt * static_cast<double>(k); }
  /// Partial trace of every state onto the kept factors.
  Trajectory reduced(std::span<const std::size_t> keep) const;
};

ComplexMatrix lindblad_rhs(const LindbladModel& m, const ComplexMatrix& rho, double t);

/// Generator of a model as a Liouville-space matrix acting on the row-major
/// vectorisation of rho.
ComplexMatrix liouvillian(const LindbladModel& m, double t);

/// One classical RK4 step of the Lindblad equation at fixed dt. Autonomous
/// models precompute the step map, which for a linear time-independent
/// generator is exactly I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24.
class LiouvillePropagator {
 public:
  LiouvillePropagator(const LindbladModel& model, double dt);

  double dt() const noexcept { return dt_; }
  std::size_t dim() const noexcept { return dim_; }
  bool autonomous() const noexcept { return autonomous_; }
  /// Advances rho from t to t + dt in place.
  void step(ComplexMatrix& rho, double t) const;
  /// The linear map realised by step(., t) in Liouville space.
  ComplexMatrix step_map(double t) const;

 private:
  ComplexMatrix generator_at(double t) const;

  double dt_;
  std::size_t dim_;
  bool autonomous_;
  SparseMatrix autonomous_step_;

  // Time-dependent models: L(t) = base + sum_k c_k(t) h_parts[k] + sum_i gamma_i(t) d_parts[i].
  std::shared_ptr<const LindbladModel> model_;
  ComplexMatrix base_;
  std::vector<ComplexMatrix> h_parts_;
  std::vector<ComplexMatrix> d_parts_;
};

/// rho -> U rho U^+ with U already embedded in the full space.
void apply_unitary(ComplexMatrix& rho, const ComplexMatrix& u);

/// Fixed-step RK4 from t0 to t_end. Pulse times are snapped to the nearest
/// grid point and applied after the step that ends there.
/// Throws PulseOffGrid, PositivityLoss (min eigenvalue < -1e-6).
Trajectory integrate(const LindbladModel& m, const ComplexMatrix& rho0, double t_end, double dt,
                     const PulseSchedule& pulses = {}, double t0 = 0.0);

/// Pulses of `op` at t_start, t_start + interval, ... <= t_end.
/// Throws IntervalNotOnGrid unless interval is a positive multiple of dt.
PulseSchedule decoupling_schedule(double t_start, double t_end, double interval,
                                  const ComplexMatrix& op, std::size_t target, double dt,
                                  const std::string& label = "sz");

using BlochVector = std::array<double, 3>;

struct BlochSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<BlochVector> values;

  double time(std::size_t k) const noexcept { return t0 + dt * static_cast<double>(k); }
  std::size_t size() const noexcept { return values.size(); }
};

/// Markovian Bloch equations with rate gamma'(t) = g Re f(t):
///   s_x' = -gamma' s_x - w_q s_y,  s_y' = w_q s_x - gamma' s_y,
///   s_z' = -2 gamma' (s_z + 1).
/// Pulses act on the atom (target 0) as the rotation R_ij = Tr(s_i U s_j U^+)/2.
BlochSeries bloch_ode(const ModelParams& p, const RiccatiSolution& f, const BlochVector& s0,
                      double t_end, double dt, const PulseSchedule& pulses = {});

ComplexMatrix density_from_bloch(const BlochVector& s);
Trajectory trajectory_from_bloch(const BlochSeries& series, const std::string& model_id);

/// Worst-case numerical hygiene over a set of states.
struct StateHygiene {
  double max_trace_drift = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 1.0;
};

StateHygiene hygiene(const Trajectory& traj);

}  // namespace nonmarkov
