#include "nonmarkov/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>

#include "nonmarkov/errors.hpp"
#include "nonmarkov/metrics.hpp"
#include "nonmarkov/model.hpp"
#include "nonmarkov/riccati.hpp"

namespace nonmarkov {

namespace {

std::shared_ptr<const RiccatiSolution> memory_function(const ModelParams& p) {
  return std::make_shared<const RiccatiSolution>(
      RiccatiSolution::closed_form({p.omega_q, p.delta, p.g, p.gamma}));
}

// Pure atom (x) cavity-vacuum state with atom amplitudes (c_e, c_g).
ComplexMatrix atom_vacuum(Complex ce, Complex cg, std::size_t nc) {
  std::vector<Complex> psi(2 * nc);
  psi[0] = ce;
  psi[nc] = cg;
  return ComplexMatrix::projector(psi);
}

ComplexMatrix atom_state(Complex ce, Complex cg) {
  const std::array<Complex, 2> psi{ce, cg};
  return ComplexMatrix::projector(psi);
}

// (|gg> + |ee>)/sqrt(2) on ancilla (x) atom, times `rest` vacuum levels.
ComplexMatrix bell_state(std::size_t rest) {
  std::vector<Complex> psi(4 * rest);
  const double a = 1.0 / std::sqrt(2.0);
  psi[0] = a;             // e e 0
  psi[3 * rest] = a;      // g g 0
  return ComplexMatrix::projector(psi);
}

PulseSchedule single_pulse(const ExperimentConfig& cfg, std::size_t target) {
  PulseSchedule s;
  if (const auto op = pauli_for(cfg.pulse_op)) {
    s.add({cfg.pulse_time, pauli(*op), target, std::string(to_string(cfg.pulse_op))});
  }
  return s;
}

std::vector<double> atom_distance(const Trajectory& a, const Trajectory& b) {
  const std::array<std::size_t, 1> keep{0};
  std::vector<double> out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const ComplexMatrix ra = a.layout.size() == 1 ? a.states[k] : partial_trace(a.states[k], a.layout, keep);
    const ComplexMatrix rb = b.layout.size() == 1 ? b.states[k] : partial_trace(b.states[k], b.layout, keep);
    out.push_back(trace_distance(ra, rb));
  }
  return out;
}

CsvTable columns(std::vector<std::string> header, double dt,
                 const std::vector<std::vector<double>>& cols) {
  CsvTable t;
  t.header = std::move(header);
  const std::size_t n = cols.front().size();
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> row{dt * static_cast<double>(k)};
    for (const auto& c : cols) row.push_back(c[k]);
    t.add_row(row);
  }
  return t;
}

}  // namespace

ExperimentOutput run_fig3(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelParams p = cfg.model_params();
  const double t_end = cfg.effective_t_end();
  const PulseSchedule pulses = single_pulse(cfg, 0);
  const double a = 1.0 / std::sqrt(2.0);

  const Trajectory full =
      integrate(build_full_model(p), atom_vacuum(a, a, p.cavity_dim), t_end, cfg.dt, pulses);
  const BlochSeries markov = bloch_ode(p, *memory_function(p), {1.0, 0.0, 0.0}, t_end, cfg.dt, pulses);

  std::vector<std::vector<double>> cols(6);
  for (std::size_t k = 0; k < full.size(); ++k) {
    const BlochVector s = bloch_expectations(full.states[k], full.layout);
    for (std::size_t i = 0; i < 3; ++i) {
      cols[i].push_back(markov.values[k][i]);
      cols[3 + i].push_back(s[i]);
    }
  }
  ExperimentOutput out;
  out.name = "fig3";
  out.table = columns({"t", "sx_markov", "sy_markov", "sz_markov", "sx_full", "sy_full", "sz_full"},
                      cfg.dt, cols);
  out.trajectories = {full, trajectory_from_bloch(markov, "markov")};
  return out;
}

ExperimentOutput run_fig4(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelParams p = cfg.model_params();
  const double t_end = cfg.effective_t_end();
  const auto f = memory_function(p);
  const LindbladModel full = build_full_model(p);
  const LindbladModel reduced = build_reduced_model(p, f);
  const PulseSchedule atom_pulse = single_pulse(cfg, 0);
  const PulseSchedule ancilla_pulse = single_pulse(cfg, 1);
  const std::size_t nc = p.cavity_dim;

  const BlochSeries up = bloch_ode(p, *f, {0.0, 0.0, 1.0}, t_end, cfg.dt, atom_pulse);
  const BlochSeries down = bloch_ode(p, *f, {0.0, 0.0, -1.0}, t_end, cfg.dt, atom_pulse);
  const Trajectory full_e = integrate(full, atom_vacuum(1.0, 0.0, nc), t_end, cfg.dt, atom_pulse);
  const Trajectory full_g = integrate(full, atom_vacuum(0.0, 1.0, nc), t_end, cfg.dt, atom_pulse);
  const Trajectory pair_markov =
      integrate(with_ancilla(reduced), bell_state(1), t_end, cfg.dt, ancilla_pulse);
  const Trajectory pair_full =
      integrate(with_ancilla(full), bell_state(nc), t_end, cfg.dt, ancilla_pulse);

  std::vector<std::vector<double>> cols(4);
  cols[1] = atom_distance(full_e, full_g);
  const std::array<std::size_t, 2> keep{0, 1};
  for (std::size_t k = 0; k < full_e.size(); ++k) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < 3; ++i) d2 += std::pow(up.values[k][i] - down.values[k][i], 2);
    cols[0].push_back(0.5 * std::sqrt(d2));
    cols[2].push_back(concurrence(pair_markov.states[k]));
    cols[3].push_back(concurrence(partial_trace(pair_full.states[k], pair_full.layout, keep)));
  }
  ExperimentOutput out;
  out.name = "fig4";
  out.table = columns({"t", "D_markov", "D_full", "C_markov", "C_full"}, cfg.dt, cols);
  out.trajectories = {trajectory_from_bloch(up, "markov_e"), trajectory_from_bloch(down, "markov_g"),
                      full_e, full_g, pair_markov, pair_full};
  return out;
}

ExperimentOutput run_fig5(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelParams p = cfg.model_params();
  const double t_end = cfg.effective_t_end();
  const LindbladModel full = build_full_model(p);
  const ComplexMatrix sz = pauli(Pauli::Z);
  const double interval = cfg.decouple_interval;

  const PulseSchedule kick = single_pulse(cfg, 0);
  PulseSchedule direct = kick;
  PulseSchedule delayed = kick;
  if (cfg.pulse_time + interval <= t_end) {
    direct = PulseSchedule::merge(
        kick, decoupling_schedule(cfg.pulse_time + interval, t_end, interval, sz, 0, cfg.dt));
  }
  if (cfg.decouple_delay == 0.0) {
    delayed = direct;  // the train starts with the kick itself
  } else if (cfg.pulse_time + cfg.decouple_delay <= t_end) {
    delayed = PulseSchedule::merge(
        kick, decoupling_schedule(cfg.pulse_time + cfg.decouple_delay, t_end, interval, sz, 0, cfg.dt));
  }

  const std::size_t nc = p.cavity_dim;
  const Trajectory direct_e = integrate(full, atom_vacuum(1.0, 0.0, nc), t_end, cfg.dt, direct);
  const Trajectory direct_g = integrate(full, atom_vacuum(0.0, 1.0, nc), t_end, cfg.dt, direct);
  const Trajectory delayed_e = integrate(full, atom_vacuum(1.0, 0.0, nc), t_end, cfg.dt, delayed);
  const Trajectory delayed_g = integrate(full, atom_vacuum(0.0, 1.0, nc), t_end, cfg.dt, delayed);

  std::vector<std::vector<double>> cols(3);
  cols[0] = atom_distance(direct_e, direct_g);
  cols[1] = atom_distance(delayed_e, delayed_g);
  for (const auto& s : delayed_e.states) cols[2].push_back(atom_cavity_concurrence(s, delayed_e.layout));

  ExperimentOutput out;
  out.name = "fig5";
  out.table = columns({"t", "D_direct", "D_delayed", "C_atom_cavity_delayed"}, cfg.dt, cols);
  out.trajectories = {direct_e, direct_g, delayed_e, delayed_g};
  return out;
}

ExperimentOutput run_measure(const ExperimentConfig& cfg) {
  cfg.validate();
  ModelParams p = cfg.model_params();
  p.cavity_dim = std::max<std::size_t>(p.cavity_dim, 3);

  std::optional<LindbladModel> model;
  ComplexMatrix rho_e, rho_g;
  if (cfg.model == ModelKind::Full) {
    model.emplace(build_full_model(p));
    rho_e = atom_vacuum(1.0, 0.0, p.cavity_dim);
    rho_g = atom_vacuum(0.0, 1.0, p.cavity_dim);
  } else {
    model.emplace(build_reduced_model(p, memory_function(p)));
    rho_e = atom_state(1.0, 0.0);
    rho_g = atom_state(0.0, 1.0);
  }

  ExperimentOutput out;
  out.name = "measure";
  if (cfg.onset_time > 0.0) {
    const Trajectory te = integrate(*model, rho_e, cfg.onset_time, cfg.dt);
    const Trajectory tg = integrate(*model, rho_g, cfg.onset_time, cfg.dt);
    rho_e = te.states.back();
    rho_g = tg.states.back();
    out.trajectories = {te, tg};
  }
  const std::array<std::size_t, 1> keep{0};
  const double alpha = model->layout().size() == 1
                           ? trace_distance(rho_e, rho_g)
                           : trace_distance(partial_trace(rho_e, model->layout(), keep),
                                            partial_trace(rho_g, model->layout(), keep));

  SearchSpec spec;
  spec.onset_time = cfg.onset_time;
  spec.dt = cfg.dt;
  spec.window = cfg.effective_t_end();
  MeasureResult result = n_alpha(*model, rho_e, rho_g, alpha, spec);

  out.table.header = {"schedule", "pulse_time", "max_distance", "n_alpha"};
  for (const auto& e : result.search_log) {
    const double n = std::clamp((e.max_distance - alpha) / (1.0 - alpha), 0.0, 1.0);
    out.table.add_row({e.schedule, std::isnan(e.pulse_time) ? std::string("none") : format_real(e.pulse_time),
                       format_real(e.max_distance), format_real(n)});
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "n_alpha=%.8e alpha=%.8e best_distance=%.8e schedule=",
                result.n_alpha, result.alpha, result.best_distance);
  out.summary = buf + result.argmax_summary + " (lower bound over the searched family)";
  out.measure = std::move(result);
  return out;
}

ExperimentOutput run_custom(const ExperimentConfig& cfg) {
  cfg.validate();
  const ModelParams p = cfg.model_params();
  const double a = 1.0 / std::sqrt(2.0);
  Complex ce = a, cg = a;
  if (cfg.initial_state == InitialState::Excited) ce = 1.0, cg = 0.0;
  if (cfg.initial_state == InitialState::Ground) ce = 0.0, cg = 1.0;

  const PulseSchedule pulses = single_pulse(cfg, 0);
  const Trajectory traj =
      cfg.model == ModelKind::Full
          ? integrate(build_full_model(p), atom_vacuum(ce, cg, p.cavity_dim), cfg.effective_t_end(),
                      cfg.dt, pulses)
          : integrate(build_reduced_model(p, memory_function(p)), atom_state(ce, cg),
                      cfg.effective_t_end(), cfg.dt, pulses);

  std::vector<std::vector<double>> cols(3);
  for (const auto& s : traj.states) {
    const BlochVector b = bloch_expectations(s, traj.layout);
    for (std::size_t i = 0; i < 3; ++i) cols[i].push_back(b[i]);
  }
  ExperimentOutput out;
  out.name = "custom";
  out.table = columns({"t", "sx", "sy", "sz"}, cfg.dt, cols);
  out.trajectories = {traj};
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case Experiment::Fig3: return run_fig3(cfg);
    case Experiment::Fig4: return run_fig4(cfg);
    case Experiment::Fig5: return run_fig5(cfg);
    case Experiment::Measure: return run_measure(cfg);
    case Experiment::Custom: return run_custom(cfg);
  }
  throw ValidationError(ErrorCode::Config, "unknown experiment");
}

std::string write_output(const ExperimentOutput& out, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw ValidationError(ErrorCode::Config, "cannot create " + out_dir + ": " + ec.message());
  const std::string path = (std::filesystem::path(out_dir) / (out.name + ".csv")).string();
  write_csv(path, out.table);
  return path;
}

}  // namespace nonmarkov
