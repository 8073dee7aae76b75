#include "nonmarkov/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "nonmarkov/errors.hpp"

namespace nonmarkov {

namespace {

constexpr double kUnitaryTolerance = 1e-10;
constexpr double kPositivityFloor = -1e-6;
constexpr double kGridTolerance = 1e-12;

void require_unitary(const ComplexMatrix& u) {
  if (!u.is_square() || u.empty()) {
    throw ValidationError(ErrorCode::DimensionMismatch, "pulse unitary must be square");
  }
  const double defect = max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows()));
  if (defect > kUnitaryTolerance) {
    throw ValidationError(ErrorCode::NonUnitary,
                          "pulse operator deviates from unitarity by " + std::to_string(defect));
  }
}

std::string format_time(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

// (A (x) B^T) acting on row-major vec(rho) realises rho -> A rho B.
ComplexMatrix left_right(const ComplexMatrix& a, const ComplexMatrix& b) {
  return kron(a, b.transpose());
}

ComplexMatrix hamiltonian_part(const ComplexMatrix& h) {
  using namespace std::complex_literals;
  const ComplexMatrix id = ComplexMatrix::identity(h.rows());
  return -1i * (left_right(h, id) - left_right(id, h));
}

ComplexMatrix dissipator_part(const ComplexMatrix& a) {
  const ComplexMatrix id = ComplexMatrix::identity(a.rows());
  const ComplexMatrix ada = a.adjoint() * a;
  return 2.0 * left_right(a, a.adjoint()) - left_right(ada, id) - left_right(id, ada);
}

}  // namespace

PulseSchedule::PulseSchedule(std::vector<PulseEvent> events) {
  for (auto& e : events) add(std::move(e));
}

void PulseSchedule::add(PulseEvent event) {
  if (!std::isfinite(event.time) || event.time < 0.0) {
    throw ValidationError(ErrorCode::InvalidArgument, "pulse time must be finite and >= 0");
  }
  if (!events_.empty() && !(event.time > events_.back().time)) {
    throw ValidationError(ErrorCode::InvalidArgument, "pulse times must be strictly increasing");
  }
  require_unitary(event.unitary);
  events_.push_back(std::move(event));
}

PulseSchedule PulseSchedule::merge(const PulseSchedule& a, const PulseSchedule& b) {
  std::vector<PulseEvent> all = a.events_;
  all.insert(all.end(), b.events_.begin(), b.events_.end());
  std::stable_sort(all.begin(), all.end(),
                   [](const PulseEvent& x, const PulseEvent& y) { return x.time < y.time; });
  return PulseSchedule(std::move(all));
}

std::string PulseSchedule::summary() const {
  if (events_.empty()) return "none";
  std::ostringstream os;
  std::size_t i = 0;
  bool first = true;
  while (i < events_.size()) {
    // Collapse runs of equally spaced identical labels into "label@start+step x count".
    std::size_t j = i + 1;
    double step = 0.0;
    if (j < events_.size() && events_[j].label == events_[i].label) {
      step = events_[j].time - events_[i].time;
      while (j + 1 < events_.size() && events_[j + 1].label == events_[i].label &&
             std::abs(events_[j + 1].time - events_[j].time - step) < 1e-9)
        ++j;
      ++j;
    }
    if (!first) os << ';';
    first = false;
    os << events_[i].label << '@' << format_time(events_[i].time);
    if (j - i > 1) os << '+' << format_time(step) << 'x' << (j - i);
    i = j;
  }
  return os.str();
}

Trajectory Trajectory::reduced(std::span<const std::size_t> keep) const {
  Trajectory out{model_id, layout.restrict_to(keep), t0, dt, {}};
  out.states.reserve(states.size());
  for (const auto& s : states) out.states.push_back(partial_trace(s, layout, keep));
  return out;
}

ComplexMatrix lindblad_rhs(const LindbladModel& m, const ComplexMatrix& rho, double t) {
  if (!rho.is_square() || rho.rows() != m.dim()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "state dimension " + std::to_string(rho.rows()) +
                              " does not match model dimension " + std::to_string(m.dim()));
  }
  using namespace std::complex_literals;
  ComplexMatrix out = -1i * commutator(m.hamiltonian(t), rho);
  for (std::size_t i = 0; i < m.collapse_terms().size(); ++i) {
    const double rate = m.rate(i, t);
    if (rate == 0.0) continue;
    const ComplexMatrix& a = m.collapse_terms()[i].op;
    const ComplexMatrix ad = a.adjoint();
    out += rate * (2.0 * (a * rho * ad) - anticommutator(ad * a, rho));
  }
  return out;
}

ComplexMatrix liouvillian(const LindbladModel& m, double t) {
  ComplexMatrix l = hamiltonian_part(m.hamiltonian(t));
  for (std::size_t i = 0; i < m.collapse_terms().size(); ++i) {
    const double rate = m.rate(i, t);
    if (rate != 0.0) l += rate * dissipator_part(m.collapse_terms()[i].op);
  }
  return l;
}

LiouvillePropagator::LiouvillePropagator(const LindbladModel& model, double dt)
    : dt_(dt), dim_(model.dim()), autonomous_(model.is_time_independent()) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError(ErrorCode::InvalidArgument, "time step must be positive");
  }
  if (autonomous_) {
    const ComplexMatrix hl = dt * liouvillian(model, 0.0);
    const std::size_t n = hl.rows();
    ComplexMatrix step = ComplexMatrix::identity(n);
    ComplexMatrix power = ComplexMatrix::identity(n);
    double factorial = 1.0;
    for (int k = 1; k <= 4; ++k) {
      power = power * hl;
      factorial *= k;
      step += (1.0 / factorial) * power;
    }
    autonomous_step_ = SparseMatrix(step);
    return;
  }
  model_ = std::make_shared<const LindbladModel>(model);
  base_ = hamiltonian_part(model.static_hamiltonian());
  for (const auto& term : model.hamiltonian_terms()) h_parts_.push_back(hamiltonian_part(term.op));
  for (const auto& term : model.collapse_terms()) d_parts_.push_back(dissipator_part(term.op));
}

ComplexMatrix LiouvillePropagator::generator_at(double t) const {
  ComplexMatrix l = base_;
  const auto& h_terms = model_->hamiltonian_terms();
  for (std::size_t k = 0; k < h_parts_.size(); ++k) {
    const double c = h_terms[k].coefficient(t);
    if (c != 0.0) l += c * h_parts_[k];
  }
  for (std::size_t i = 0; i < d_parts_.size(); ++i) {
    const double rate = model_->rate(i, t);
    if (rate != 0.0) l += rate * d_parts_[i];
  }
  return l;
}

void LiouvillePropagator::step(ComplexMatrix& rho, double t) const {
  if (!rho.is_square() || rho.rows() != dim_) {
    throw ValidationError(ErrorCode::DimensionMismatch, "state does not match propagator");
  }
  auto x = rho.entries();
  if (autonomous_) {
    std::vector<Complex> y(x.size());
    autonomous_step_.multiply(x, y);
    std::copy(y.begin(), y.end(), x.begin());
    return;
  }
  const double h = dt_;
  const ComplexMatrix l0 = generator_at(t);
  const ComplexMatrix lh = generator_at(t + 0.5 * h);
  const ComplexMatrix l1 = generator_at(t + h);
  const std::vector<Complex> state(x.begin(), x.end());
  const std::size_t n = state.size();
  std::vector<Complex> tmp(n);

  const std::vector<Complex> k1 = matvec(l0, state);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
  const std::vector<Complex> k2 = matvec(lh, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
  const std::vector<Complex> k3 = matvec(lh, tmp);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = state[i] + h * k3[i];
  const std::vector<Complex> k4 = matvec(l1, tmp);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = state[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

ComplexMatrix LiouvillePropagator::step_map(double t) const {
  const std::size_t n = dim_ * dim_;
  ComplexMatrix out(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    ComplexMatrix basis(dim_, dim_);
    basis.entries()[c] = 1.0;
    step(basis, t);
    const auto col = basis.entries();
    for (std::size_t r = 0; r < n; ++r) out(r, c) = col[r];
  }
  return out;
}

void apply_unitary(ComplexMatrix& rho, const ComplexMatrix& u) { rho = u * rho * u.adjoint(); }

namespace {

std::size_t steps_for(double t0, double t_end, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ValidationError(ErrorCode::InvalidArgument, "time step must be positive");
  }
  if (!(t_end >= t0)) throw ValidationError(ErrorCode::InvalidArgument, "t_end precedes t0");
  const double raw = (t_end - t0) / dt;
  const double n = std::round(raw);
  if (std::abs(raw - n) > 1e-6) {
    throw ValidationError(ErrorCode::GridMismatch, "duration is not a multiple of dt");
  }
  return static_cast<std::size_t>(n);
}

// Grid index -> embedded unitaries to apply there.
std::map<std::size_t, std::vector<ComplexMatrix>> snap_pulses(const PulseSchedule& pulses,
                                                              const SubsystemLayout& layout,
                                                              double t0, double dt,
                                                              std::size_t n_steps) {
  std::map<std::size_t, std::vector<ComplexMatrix>> out;
  for (const auto& e : pulses.events()) {
    const double raw = (e.time - t0) / dt;
    const double k = std::round(raw);
    if (!(std::abs(raw - k) <= 0.5) || k < 0.0 || k > static_cast<double>(n_steps)) {
      throw ValidationError(ErrorCode::PulseOffGrid,
                            "pulse at t = " + format_time(e.time) + " lies outside the grid");
    }
    const auto idx = static_cast<std::size_t>(k);
    if (out.contains(idx)) {
      throw ValidationError(ErrorCode::PulseOffGrid,
                            "two pulses snap to the same grid point near t = " + format_time(e.time));
    }
    out[idx].push_back(embed(e.unitary, layout, e.target));
  }
  return out;
}

void check_state(const ComplexMatrix& rho, double t) {
  if (!rho.all_finite()) {
    throw NumericalError(ErrorCode::PositivityLoss, "non-finite state at t = " + format_time(t));
  }
  const double min_eig = herm_eigvals(rho).front();
  if (min_eig < kPositivityFloor) {
    throw NumericalError(ErrorCode::PositivityLoss,
                         "eigenvalue " + std::to_string(min_eig) + " at t = " + format_time(t) +
                             " (time step too large?)");
  }
}

}  // namespace

Trajectory integrate(const LindbladModel& m, const ComplexMatrix& rho0, double t_end, double dt,
                     const PulseSchedule& pulses, double t0) {
  if (!rho0.is_square() || rho0.rows() != m.dim()) {
    throw ValidationError(ErrorCode::DimensionMismatch, "initial state does not match model");
  }
  if (hermiticity_defect(rho0) > kHermitianTolerance ||
      std::abs(rho0.trace() - Complex{1.0}) > 1e-8) {
    throw ValidationError(ErrorCode::InvalidArgument, "initial state is not a density matrix");
  }
  const std::size_t n = steps_for(t0, t_end, dt);
  const auto kicks = snap_pulses(pulses, m.layout(), t0, dt, n);
  const LiouvillePropagator prop(m, dt);

  Trajectory traj{m.name(), m.layout(), t0, dt, {}};
  traj.states.reserve(n + 1);
  ComplexMatrix rho = rho0;
  for (std::size_t k = 0;; ++k) {
    if (auto it = kicks.find(k); it != kicks.end())
      for (const auto& u : it->second) apply_unitary(rho, u);
    if (k > 0) check_state(rho, traj.time(k));
    traj.states.push_back(rho);
    if (k == n) break;
    prop.step(rho, traj.time(k));
  }
  return traj;
}

PulseSchedule decoupling_schedule(double t_start, double t_end, double interval,
                                  const ComplexMatrix& op, std::size_t target, double dt,
                                  const std::string& label) {
  if (!(dt > 0.0) || !(interval > 0.0)) {
    throw ValidationError(ErrorCode::IntervalNotOnGrid, "interval and dt must be positive");
  }
  const double ratio = std::round(interval / dt);
  if (ratio < 1.0 || std::abs(interval - ratio * dt) > kGridTolerance) {
    throw ValidationError(ErrorCode::IntervalNotOnGrid,
                          "interval " + format_time(interval) + " is not a multiple of dt");
  }
  PulseSchedule out;
  if (t_end < t_start) return out;
  const auto count = static_cast<std::size_t>(std::floor((t_end - t_start) / interval + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i)
    out.add({t_start + static_cast<double>(i) * interval, op, target, label});
  return out;
}

namespace {

std::array<std::array<double, 3>, 3> bloch_rotation(const ComplexMatrix& u) {
  const std::array<ComplexMatrix, 3> s{pauli(Pauli::X), pauli(Pauli::Y), pauli(Pauli::Z)};
  std::array<std::array<double, 3>, 3> r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = 0.5 * (s[i] * u * s[j] * u.adjoint()).trace().real();
  return r;
}

}  // namespace

BlochSeries bloch_ode(const ModelParams& p, const RiccatiSolution& f, const BlochVector& s0,
                      double t_end, double dt, const PulseSchedule& pulses) {
  p.validate();
  const std::size_t n = steps_for(0.0, t_end, dt);
  std::map<std::size_t, std::array<std::array<double, 3>, 3>> kicks;
  for (const auto& e : pulses.events()) {
    if (e.target != 0) {
      throw ValidationError(ErrorCode::DimensionMismatch, "Bloch pulses must target the atom");
    }
    const double raw = e.time / dt;
    const double k = std::round(raw);
    if (k < 0.0 || k > static_cast<double>(n)) {
      throw ValidationError(ErrorCode::PulseOffGrid,
                            "pulse at t = " + format_time(e.time) + " lies outside the grid");
    }
    if (!kicks.emplace(static_cast<std::size_t>(k), bloch_rotation(e.unitary)).second) {
      throw ValidationError(ErrorCode::PulseOffGrid, "two pulses snap to the same grid point");
    }
  }

  const double w = p.omega_q;
  auto rhs = [&](const BlochVector& s, double t) -> BlochVector {
    const double gp = gamma_prime(f, t);
    return {-gp * s[0] - w * s[1], w * s[0] - gp * s[1], -2.0 * gp * (s[2] + 1.0)};
  };

  BlochSeries out{0.0, dt, {}};
  out.values.reserve(n + 1);
  BlochVector s = s0;
  for (std::size_t k = 0;; ++k) {
    if (auto it = kicks.find(k); it != kicks.end()) {
      const auto& r = it->second;
      const BlochVector old = s;
      for (int i = 0; i < 3; ++i) s[i] = r[i][0] * old[0] + r[i][1] * old[1] + r[i][2] * old[2];
    }
    out.values.push_back(s);
    if (k == n) break;
    const double t = out.time(k);
    const BlochVector k1 = rhs(s, t);
    BlochVector tmp;
    for (int i = 0; i < 3; ++i) tmp[i] = s[i] + 0.5 * dt * k1[i];
    const BlochVector k2 = rhs(tmp, t + 0.5 * dt);
    for (int i = 0; i < 3; ++i) tmp[i] = s[i] + 0.5 * dt * k2[i];
    const BlochVector k3 = rhs(tmp, t + 0.5 * dt);
    for (int i = 0; i < 3; ++i) tmp[i] = s[i] + dt * k3[i];
    const BlochVector k4 = rhs(tmp, t + dt);
    for (int i = 0; i < 3; ++i) s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return out;
}

ComplexMatrix density_from_bloch(const BlochVector& s) {
  ComplexMatrix rho = ComplexMatrix::identity(2);
  rho += s[0] * pauli(Pauli::X);
  rho += s[1] * pauli(Pauli::Y);
  rho += s[2] * pauli(Pauli::Z);
  rho *= 0.5;
  return rho;
}

Trajectory trajectory_from_bloch(const BlochSeries& series, const std::string& model_id) {
  Trajectory out{model_id, SubsystemLayout({{"atom", 2}}), series.t0, series.dt, {}};
  out.states.reserve(series.size());
  for (const auto& s : series.values) out.states.push_back(density_from_bloch(s));
  return out;
}

StateHygiene hygiene(const Trajectory& traj) {
  StateHygiene h;
  for (const auto& rho : traj.states) {
    h.max_trace_drift = std::max(h.max_trace_drift, std::abs(rho.trace() - Complex{1.0}));
    const double defect = hermiticity_defect(rho);
    h.max_hermiticity_defect = std::max(h.max_hermiticity_defect, defect);
    if (defect <= kHermitianTolerance)
      h.min_eigenvalue = std::min(h.min_eigenvalue, herm_eigvals(rho).front());
    else
      h.min_eigenvalue = -INFINITY;
  }
  return h;
}

}  // namespace nonmarkov
