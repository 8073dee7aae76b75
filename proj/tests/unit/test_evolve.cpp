#include <array>
#include <cmath>
#include <memory>

#include "doctest.h"
#include "helpers.hpp"
#include "nonmarkov/errors.hpp"
#include "nonmarkov/evolve.hpp"
#include "nonmarkov/metrics.hpp"
#include "nonmarkov/model.hpp"
#include "nonmarkov/riccati.hpp"

using namespace nonmarkov;
using namespace testing_support;

namespace {

const ModelParams kFigure{1.0, 1.0, 1.0, 2.0, 2};
const SubsystemLayout kAtom({{"atom", 2}});

ComplexMatrix plus_vacuum(std::size_t nc) {
  std::vector<Complex> psi(2 * nc);
  psi[0] = psi[nc] = 1.0 / std::sqrt(2.0);
  return ComplexMatrix::projector(psi);
}

std::shared_ptr<const RiccatiSolution> figure_f() {
  return std::make_shared<const RiccatiSolution>(RiccatiSolution::closed_form({1.0, 1.0, 1.0, 2.0}));
}

PulseSchedule sz_at(double t, std::size_t target = 0) {
  PulseSchedule s;
  s.add({t, pauli(Pauli::Z), target, "sz"});
  return s;
}

// Textbook RK4 on lindblad_rhs.
ComplexMatrix rk4_reference(const LindbladModel& m, ComplexMatrix rho, double t_end, double dt) {
  const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k < n; ++k) {
    const double t = dt * static_cast<double>(k);
    const auto k1 = lindblad_rhs(m, rho, t);
    const auto k2 = lindblad_rhs(m, rho + (0.5 * dt) * k1, t + 0.5 * dt);
    const auto k3 = lindblad_rhs(m, rho + (0.5 * dt) * k2, t + 0.5 * dt);
    const auto k4 = lindblad_rhs(m, rho + dt * k3, t + dt);
    rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return rho;
}

}  // namespace

TEST_CASE("lindblad_rhs examples") {
  const auto full = build_full_model(kFigure);
  std::vector<Complex> dark(4);
  dark[2] = 1.0;
  CHECK(lindblad_rhs(full, ComplexMatrix::projector(dark), 0.3).max_abs() == 0.0);

  const LindbladModel decay("decay", kAtom, ComplexMatrix(2, 2), {}, {{pauli(Pauli::Minus), 0.7}});
  const std::array<Complex, 2> e{1.0, 0.0};
  const std::array<Complex, 2> expected{-1.4, 1.4};
  CHECK(max_abs_diff(lindblad_rhs(decay, ComplexMatrix::diagonal(e), 0.0),
                     ComplexMatrix::diagonal(expected)) <= 1e-15);

  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto rho = random_density(rng, 4);
    CHECK(std::abs(lindblad_rhs(full, rho, 0.0).trace()) <= 1e-14);
  }
  CHECK_THROWS_AS(lindblad_rhs(full, ComplexMatrix::identity(2), 0.0), ValidationError);
}

TEST_CASE("liouvillian acts like lindblad_rhs") {
  std::mt19937_64 rng(2);
  const auto m = build_full_model({1.2, 0.9, 0.7, 1.9, 3});
  const auto l = liouvillian(m, 0.0);
  const auto rho = random_density(rng, 6);
  const auto lv = matvec(l, rho.entries());
  const auto direct = lindblad_rhs(m, rho, 0.0);
  for (std::size_t i = 0; i < lv.size(); ++i) CHECK(std::abs(lv[i] - direct.entries()[i]) <= 1e-13);
}

TEST_CASE("propagator matches textbook RK4") {
  std::mt19937_64 rng(3);
  const auto full = build_full_model({1.0, 0.8, 1.1, 2.3, 3});
  const auto rho0 = random_density(rng, 6);
  const auto ours = integrate(full, rho0, 1.0, 0.01).states.back();
  CHECK(max_abs_diff(ours, rk4_reference(full, rho0, 1.0, 0.01)) <= 1e-13);

  const auto reduced = build_reduced_model(kFigure, figure_f());
  const auto r0 = random_density(rng, 2);
  CHECK(max_abs_diff(integrate(reduced, r0, 1.0, 0.01).states.back(),
                     rk4_reference(reduced, r0, 1.0, 0.01)) <= 1e-13);
}

TEST_CASE("step_map reproduces step") {
  std::mt19937_64 rng(4);
  const auto reduced = with_ancilla(build_reduced_model(kFigure, figure_f()));
  const LiouvillePropagator prop(reduced, 0.01);
  auto rho = random_density(rng, 4);
  const auto map = prop.step_map(0.37);
  const auto mapped = matvec(map, rho.entries());
  prop.step(rho, 0.37);
  for (std::size_t i = 0; i < mapped.size(); ++i) CHECK(std::abs(mapped[i] - rho.entries()[i]) <= 1e-15);
}

TEST_CASE("RK4 converges at fourth order") {
  const auto full = build_full_model(kFigure);
  const auto rho0 = plus_vacuum(2);
  const auto ref = integrate(full, rho0, 1.0, 1e-5).states.back();
  for (double dt : {0.1, 0.05}) {
    const double e1 = max_abs_diff(integrate(full, rho0, 1.0, dt).states.back(), ref);
    const double e2 = max_abs_diff(integrate(full, rho0, 1.0, dt / 2).states.back(), ref);
    const double factor = e1 / e2;
    CHECK(factor >= 12.0);
    CHECK(factor <= 20.0);
  }
  const auto reduced = build_reduced_model(kFigure, figure_f());
  const auto a0 = ComplexMatrix::projector(std::array<Complex, 2>{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)});
  const auto rref = integrate(reduced, a0, 1.0, 1e-5).states.back();
  const double e1 = max_abs_diff(integrate(reduced, a0, 1.0, 0.1).states.back(), rref);
  const double e2 = max_abs_diff(integrate(reduced, a0, 1.0, 0.05).states.back(), rref);
  CHECK(e1 / e2 >= 12.0);
  CHECK(e1 / e2 <= 20.0);
}

TEST_CASE("sigma_z pulse flips the superposition phase") {
  const LindbladModel idle("idle", kAtom, ComplexMatrix(2, 2), {}, {});
  const double a = 1.0 / std::sqrt(2.0);
  const auto plus = ComplexMatrix::projector(std::array<Complex, 2>{a, a});
  const auto minus = ComplexMatrix::projector(std::array<Complex, 2>{a, -a});
  const auto traj = integrate(idle, plus, 2.0, 0.01, sz_at(1.0));
  CHECK(max_abs_diff(traj.states[99], plus) <= 1e-15);
  CHECK(max_abs_diff(traj.states[100], minus) <= 1e-15);
  CHECK(max_abs_diff(traj.states.back(), minus) <= 1e-15);
}

TEST_CASE("pulse times snap to the grid") {
  const LindbladModel idle("idle", kAtom, ComplexMatrix(2, 2), {}, {});
  const auto e = ComplexMatrix::projector(std::array<Complex, 2>{1.0, 0.0});
  PulseSchedule flip;
  flip.add({0.5004, pauli(Pauli::X), 0, "sx"});
  const auto traj = integrate(idle, e, 1.0, 1e-3, flip);
  CHECK(traj.states[499](0, 0).real() == 1.0);
  CHECK(traj.states[500](1, 1).real() == 1.0);

  PulseSchedule late;
  late.add({1.2, pauli(Pauli::X), 0, "sx"});
  CHECK_THROWS_AS(integrate(idle, e, 1.0, 1e-3, late), ValidationError);
  PulseSchedule crowded;
  crowded.add({0.5001, pauli(Pauli::X), 0, "sx"});
  crowded.add({0.5002, pauli(Pauli::X), 0, "sx"});
  CHECK_THROWS_AS(integrate(idle, e, 1.0, 1e-3, crowded), ValidationError);
  PulseSchedule wrong_factor;
  wrong_factor.add({0.5, pauli(Pauli::X), 1, "sx"});
  CHECK_THROWS_AS(integrate(idle, e, 1.0, 1e-3, wrong_factor), ValidationError);
}

TEST_CASE("zero-duration evolution returns the pulsed initial state") {
  const LindbladModel idle("idle", kAtom, ComplexMatrix(2, 2), {}, {});
  const auto e = ComplexMatrix::projector(std::array<Complex, 2>{1.0, 0.0});
  PulseSchedule flip;
  flip.add({0.0, pauli(Pauli::X), 0, "sx"});
  const auto traj = integrate(idle, e, 0.0, 1e-3, flip);
  REQUIRE(traj.size() == 1);
  CHECK(traj.states[0](1, 1).real() == 1.0);
}

TEST_CASE("integrate validates inputs") {
  const auto full = build_full_model(kFigure);
  CHECK_THROWS_AS(integrate(full, ComplexMatrix::identity(4), 1.0, 1e-3), ValidationError);
  CHECK_THROWS_AS(integrate(full, plus_vacuum(2), 1.0005, 1e-3), ValidationError);
  CHECK_THROWS_AS(integrate(full, plus_vacuum(3), 1.0, 1e-3), ValidationError);
}

TEST_CASE("oversized steps lose positivity") {
  const auto full = build_full_model({1.0, 1.0, 1.0, 40.0, 2});
  try {
    (void)integrate(full, plus_vacuum(2), 5.0, 0.5);
    FAIL("expected PositivityLoss");
  } catch (const NumericalError& e) {
    CHECK(e.code() == ErrorCode::PositivityLoss);
  }
}

TEST_CASE("pulse schedule validation and summary") {
  PulseSchedule s;
  s.add({1.0, pauli(Pauli::Z), 0, "sz"});
  CHECK_THROWS_AS(s.add({1.0, pauli(Pauli::Z), 0, "sz"}), ValidationError);
  CHECK_THROWS_AS(s.add({0.5, pauli(Pauli::Z), 0, "sz"}), ValidationError);
  CHECK_THROWS_AS(s.add({2.0, pauli(Pauli::Plus), 0, "sp"}), ValidationError);
  CHECK_THROWS_AS(PulseSchedule({{-1.0, pauli(Pauli::Z), 0, "sz"}}), ValidationError);
  const auto train = decoupling_schedule(1.1, 3.0, 0.02, pauli(Pauli::Z), 0, 1e-3);
  PulseSchedule kick;
  kick.add({1.0, pauli(Pauli::X), 0, "sx"});
  CHECK(PulseSchedule::merge(kick, train).summary() == "sx@1;sz@1.1+0.02x96");
  CHECK(PulseSchedule().summary() == "none");
  CHECK_THROWS_AS(PulseSchedule::merge(s, s), ValidationError);
}

TEST_CASE("decoupling schedule") {
  const auto s = decoupling_schedule(1.0, 2.0, 0.1, pauli(Pauli::Z), 0, 1e-3);
  CHECK(s.size() == 11);
  CHECK(s.events().back().time == doctest::Approx(2.0));
  try {
    (void)decoupling_schedule(1.0, 2.0, 0.0125, pauli(Pauli::Z), 0, 1e-3);
    FAIL("expected IntervalNotOnGrid");
  } catch (const ValidationError& e) {
    CHECK(e.code() == ErrorCode::IntervalNotOnGrid);
  }
  CHECK_THROWS_AS(decoupling_schedule(1.0, 2.0, 5e-4, pauli(Pauli::Z), 0, 1e-3), ValidationError);
}

TEST_CASE("decoupling freezes the atom to first order in the spacing") {
  const auto full = build_full_model(kFigure);
  std::vector<Complex> ex(4);
  ex[0] = 1.0;
  const auto rho_e = ComplexMatrix::projector(ex);
  std::vector<Complex> gr(4);
  gr[2] = 1.0;
  const auto rho_g = ComplexMatrix::projector(gr);
  std::vector<double> spread;
  for (double delta : {0.04, 0.02, 0.01}) {
    const auto sched = PulseSchedule::merge(
        sz_at(1.0), decoupling_schedule(1.0 + delta, 3.0, delta, pauli(Pauli::Z), 0, 1e-3));
    const auto te = integrate(full, rho_e, 3.0, 1e-3, sched).reduced(std::array<std::size_t, 1>{0});
    const auto tg = integrate(full, rho_g, 3.0, 1e-3, sched).reduced(std::array<std::size_t, 1>{0});
    const double d1 = trace_distance(te.states[1000], tg.states[1000]);
    double worst = 0.0;
    for (std::size_t k = 1000; k < te.size(); ++k)
      worst = std::max(worst, std::abs(trace_distance(te.states[k], tg.states[k]) - d1));
    spread.push_back(worst);
  }
  CHECK(spread[1] < spread[0]);
  CHECK(spread[2] < spread[1]);
  CHECK(spread[0] / spread[1] == doctest::Approx(2.0).epsilon(0.15));
  CHECK(spread[1] / spread[2] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("bloch_ode examples") {
  const auto f = figure_f();
  const auto ground = bloch_ode(kFigure, *f, {0.0, 0.0, -1.0}, 3.0, 1e-3);
  for (const auto& s : ground.values) CHECK(s == BlochVector{0.0, 0.0, -1.0});

  // Constant rate: the tuned steady state is a fixed point of the Riccati flow.
  const RiccatiParams p{1.0, 1.0, 1.0, 2.5};
  const double fss = f_steady_state(p);
  const auto steady = RiccatiSolution::from_grid(p, 0.5, std::vector<Complex>(11, fss));
  const ModelParams mp{1.0, 1.0, 1.0, 2.5, 2};
  const auto up = bloch_ode(mp, steady, {0.0, 0.0, 1.0}, 5.0, 1e-3);
  for (std::size_t k = 0; k < up.size(); k += 250)
    CHECK(up.values[k][2] == doctest::Approx(2.0 * std::exp(-2.0 * fss * up.time(k)) - 1.0).epsilon(1e-12));

  CHECK_THROWS_AS(bloch_ode({1.0, 1.5, 1.0, 2.0, 2}, RiccatiSolution::closed_form({1.0, 1.5, 1.0, 2.0}),
                            {1.0, 0.0, 0.0}, 1.0, 1e-3),
                  ValidationError);
}

TEST_CASE("bloch_ode pulses rotate the Bloch vector") {
  const auto f = figure_f();
  const auto s = bloch_ode(kFigure, *f, {1.0, 0.0, 0.0}, 1.0, 1e-3, sz_at(0.0));
  CHECK(s.values[0][0] == doctest::Approx(-1.0));
  PulseSchedule off_atom;
  off_atom.add({0.5, pauli(Pauli::Z), 1, "sz"});
  CHECK_THROWS_AS(bloch_ode(kFigure, *f, {1.0, 0.0, 0.0}, 1.0, 1e-3, off_atom), ValidationError);
}

TEST_CASE("Bloch equations and the reduced master equation agree") {
  const auto f = figure_f();
  const auto reduced = build_reduced_model(kFigure, f);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 3; ++trial) {
    const auto rho0 = random_density(rng, 2);
    const BlochVector s0 = bloch_expectations(rho0, kAtom);
    const auto pulses = sz_at(1.0);
    const auto traj = integrate(reduced, rho0, 4.0, 1e-3, pulses);
    const auto bloch = bloch_ode(kFigure, *f, s0, 4.0, 1e-3, pulses);
    double worst = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const auto s = bloch_expectations(traj.states[k], kAtom);
      for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(s[i] - bloch.values[k][i]));
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("dual track: the reduced model follows the full model until the pulse") {
  const auto full = integrate(build_full_model(kFigure), plus_vacuum(2), 5.0, 1e-3, sz_at(1.0));
  const double a = 1.0 / std::sqrt(2.0);
  const auto reduced = integrate(build_reduced_model(kFigure, figure_f()),
                                 ComplexMatrix::projector(std::array<Complex, 2>{a, a}), 5.0, 1e-3,
                                 sz_at(1.0));
  const auto atom = full.reduced(std::array<std::size_t, 1>{0});
  double before = 0.0;
  double after = 0.0;
  for (std::size_t k = 0; k < atom.size(); ++k) {
    const double d = max_abs_diff(atom.states[k], reduced.states[k]);
    (k <= 1000 ? before : after) = std::max(k <= 1000 ? before : after, d);
  }
  CHECK(before <= 1e-6);
  CHECK(after > 0.01);
}

TEST_CASE("pulses preserve the trace distance between tracks") {
  std::mt19937_64 rng(8);
  const auto full = build_full_model(kFigure);
  const auto r1 = random_density(rng, 4);
  const auto r2 = random_density(rng, 4);
  PulseSchedule kick;
  kick.add({0.5, random_unitary(rng, 2), 0, "u"});
  const auto a = integrate(full, r1, 1.0, 1e-3, kick);
  const auto b = integrate(full, r2, 1.0, 1e-3, kick);
  const auto a0 = integrate(full, r1, 1.0, 1e-3);
  const auto b0 = integrate(full, r2, 1.0, 1e-3);
  CHECK(std::abs(trace_distance(a.states[500], b.states[500]) -
                 trace_distance(a0.states[500], b0.states[500])) <= 1e-10);
}

TEST_CASE("long runs keep states physical") {
  const auto full = integrate(build_full_model(kFigure), plus_vacuum(2), 10.0, 1e-3, sz_at(1.0));
  const auto h = hygiene(full);
  CHECK(h.max_trace_drift <= 1e-8);
  CHECK(h.max_hermiticity_defect <= 1e-9);
  CHECK(h.min_eigenvalue >= -1e-7);
  const double a = 1.0 / std::sqrt(2.0);
  const auto red = integrate(build_reduced_model(kFigure, figure_f()),
                             ComplexMatrix::projector(std::array<Complex, 2>{a, a}), 10.0, 1e-3);
  const auto hr = hygiene(red);
  CHECK(hr.max_trace_drift <= 1e-8);
  CHECK(hr.min_eigenvalue >= -1e-7);
}

TEST_CASE("trajectories from Bloch series") {
  BlochSeries s{0.0, 0.5, {{0.0, 0.0, 1.0}, {1.0, 0.0, 0.0}}};
  const auto t = trajectory_from_bloch(s, "b");
  CHECK(t.size() == 2);
  CHECK(t.states[0](0, 0).real() == 1.0);
  CHECK(t.states[1](0, 1).real() == doctest::Approx(0.5));
  CHECK(t.time(1) == 0.5);
}
