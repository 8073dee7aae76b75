#include <cmath>
#include <vector>

#include "doctest.h"
#include "nonmarkov/errors.hpp"
#include "nonmarkov/riccati.hpp"

using namespace nonmarkov;

namespace {

std::vector<RiccatiParams> sweep() {
  std::vector<RiccatiParams> out;
  for (double ratio : {2.0, 2.5, 3.0, 4.0, 8.0})
    for (double detune : {0.0, 0.5, -0.5}) out.push_back({1.0, 1.0 + detune, 1.0, ratio});
  return out;
}

}  // namespace

TEST_CASE("riccati_rhs examples") {
  CHECK(riccati_rhs(0.0, {1.0, 1.0, 0.7, 2.0}) == Complex(0.7));
  CHECK(std::abs(riccati_rhs(1.0, {1.0, 1.0, 1.0, 2.0})) <= 1e-15);
  CHECK(std::abs(riccati_rhs((3.0 - std::sqrt(5.0)) / 2.0, {1.0, 1.0, 1.0, 3.0})) <= 1e-15);
  // Detuning enters as i (w_q - Delta) f.
  const Complex v = riccati_rhs(Complex(0.0, 1.0), {2.0, 1.0, 1.0, 0.0});
  CHECK(std::abs(v - Complex(-1.0, 0.0)) <= 1e-15);
}

TEST_CASE("closed form examples") {
  CHECK(f_closed({1.0, 1.0, 1.0, 2.0}, 0.0) == Complex(0.0));
  CHECK(std::abs(f_closed({1.0, 1.0, 1.0, 2.0}, 1.0) - 0.5) <= 1e-15);
  const RiccatiParams p{1.0, 1.0, 1.0, 4.0};
  CHECK(std::abs(f_closed(p, 2.0) - f_ode(p, 2.0, 1e-3)(2.0)) <= 1e-8);
}

TEST_CASE("degenerate case is g t / (1 + g t)") {
  for (double g : {0.5, 1.0, 2.0}) {
    const RiccatiParams p{1.0, 1.0, g, 2.0 * g};
    for (double t : {0.1, 1.0, 3.0, 10.0})
      CHECK(std::abs(f_closed(p, t) - g * t / (1.0 + g * t)) <= 1e-14);
  }
}

TEST_CASE("series and hyperbolic forms meet near the degenerate point") {
  for (double eps : {1e-5, 3e-6, 1.5e-6, 9e-7, 2e-7}) {
    // beta^2 = (gamma/2)^2 - g^2 with gamma = 2 + 2 eps^2 at g = 1 gives |beta| ~ sqrt(2) eps.
    const RiccatiParams p{1.0, 1.0, 1.0, 2.0 * std::sqrt(1.0 + eps * eps)};
    for (double t : {0.5, 2.0, 5.0}) {
      const Complex series = 2.0 * t / (2.0 + p.gamma * t);
      CHECK(std::abs(f_closed(p, t) - series) <= 1e-9);
    }
  }
}

TEST_CASE("oracle equivalence across the parameter sweep") {
  for (const auto& p : sweep()) {
    const RiccatiSolution ode = f_ode(p, 10.0, 1e-3);
    double worst = 0.0;
    for (std::size_t k = 0; k <= 10000; ++k) {
      const double t = 1e-3 * static_cast<double>(k);
      worst = std::max(worst, std::abs(f_closed(p, t) - ode.samples()[k]));
    }
    CHECK(worst <= 1e-7);
  }
}

TEST_CASE("closed form satisfies the Riccati equation") {
  const double h = 1e-4;
  for (const auto& p : sweep()) {
    for (double t = 0.05; t <= 10.0; t += 0.05) {
      const Complex deriv = (f_closed(p, t + h) - f_closed(p, t - h)) / (2.0 * h);
      CHECK(std::abs(deriv - riccati_rhs(f_closed(p, t), p)) <= 1e-6);
    }
  }
}

TEST_CASE("closed form is invariant under the sign of beta") {
  for (const auto& p : sweep()) {
    const Complex mu(p.gamma, -(p.omega_q - p.delta));
    const Complex beta = std::sqrt(mu * mu / 4.0 - p.g * p.g);
    if (std::abs(beta) < 1e-6) continue;
    for (double t : {0.2, 1.0, 5.0}) {
      auto eval = [&](Complex b) {
        return 2.0 * p.g * std::sinh(b * t) / (2.0 * b * std::cosh(b * t) + mu * std::sinh(b * t));
      };
      CHECK(std::abs(eval(beta) - eval(-beta)) <= 1e-13);
      CHECK(std::abs(eval(beta) - f_closed(p, t)) <= 1e-12);
    }
  }
}

TEST_CASE("tuned regime: f real, nondecreasing and below the steady state") {
  for (double ratio : {2.0, 2.5, 3.0, 4.0, 8.0}) {
    const RiccatiParams p{1.0, 1.0, 1.0, ratio};
    CHECK(p.tuned_strong_dissipation());
    const double fss = f_steady_state(p);
    CHECK(std::abs(fss * fss - ratio * fss + 1.0) <= 1e-12);
    double prev = 0.0;
    for (std::size_t k = 0; k <= 10000; ++k) {
      const Complex f = f_closed(p, 1e-3 * static_cast<double>(k));
      CHECK(std::abs(f.imag()) <= 1e-9);
      CHECK(f.real() >= prev - 1e-15);  // flat to the last bit once saturated
      CHECK(f.real() <= fss + 1e-9);
      prev = f.real();
    }
  }
  CHECK(std::abs(f_closed({1.0, 1.0, 1.0, 2.0}, 200.0) - 1.0) <= 1e-2);
  CHECK_THROWS_AS(f_steady_state({1.0, 1.5, 1.0, 2.0}), ValidationError);
}

TEST_CASE("ode solution") {
  const RiccatiParams p{1.0, 1.0, 1.0, 2.0};
  const auto s = f_ode(p, 3.0, 1e-3);
  CHECK(s.method() == RiccatiSolution::Method::OdeGrid);
  CHECK(s(0.0) == Complex(0.0));
  CHECK(std::abs(s(1.0) - 0.5) <= 1e-12);
  // Cubic Hermite between nodes.
  CHECK(std::abs(s(1.0005) - 1.0005 / 2.0005) <= 1e-12);
  CHECK_THROWS(s(3.5));
  CHECK_THROWS_AS(f_ode(p, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(f_ode({1.0, 1.0, 1.0, -1.0}, 1.0, 1e-3), ValidationError);
}

TEST_CASE("ode overflow is reported") {
  // gamma = 0, detuned far: f follows tan-like blow-up for g f^2 + g.
  const RiccatiParams p{0.0, 0.0, 1.0, 0.0};
  CHECK_THROWS_AS(f_ode(p, 3.0, 1e-3), NumericalError);
}

TEST_CASE("gamma_prime") {
  const RiccatiParams p{1.0, 1.0, 1.0, 2.0};
  CHECK(gamma_prime(p, 0.0) == 0.0);
  CHECK(gamma_prime(p, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gamma_prime(p, 1e6) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(gamma_prime({1.0, 1.5, 1.0, 2.0}, 1.0), ValidationError);
  CHECK_NOTHROW(gamma_prime({1.0, 1.5, 1.0, 2.0}, 1.0, true));
  const auto s = RiccatiSolution::closed_form(p);
  CHECK(gamma_prime(s, 1.0) == doctest::Approx(0.5));
}
