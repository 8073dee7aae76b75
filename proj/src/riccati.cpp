#include "nonmarkov/riccati.hpp"

#include <cmath>
#include <string>

#include "nonmarkov/errors.hpp"

namespace nonmarkov {

namespace {

constexpr double kDegenerateBeta = 1e-6;
constexpr double kOverflow = 1e6;
constexpr double kReducedRateFloor = -1e-9;

Complex mu_of(const RiccatiParams& p) { return {p.gamma, -(p.omega_q - p.delta)}; }

}  // namespace

void RiccatiParams::validate() const {
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw ValidationError(ErrorCode::InvalidArgument, "coupling g must be positive");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw ValidationError(ErrorCode::InvalidArgument, "damping gamma must be nonnegative");
  }
  if (!std::isfinite(omega_q) || !std::isfinite(delta)) {
    throw ValidationError(ErrorCode::InvalidArgument, "frequencies must be finite");
  }
}

bool RiccatiParams::tuned_strong_dissipation() const {
  return omega_q == delta && gamma >= 2.0 * g;
}

Complex riccati_rhs(Complex f, const RiccatiParams& p) {
  return p.g + p.g * f * f + Complex{0.0, p.omega_q - p.delta} * f - p.gamma * f;
}

Complex f_closed(const RiccatiParams& p, double t) {
  if (t == 0.0) return 0.0;
  const Complex mu = mu_of(p);
  const Complex beta = std::sqrt(mu * mu / 4.0 - p.g * p.g);
  if (std::abs(beta) < kDegenerateBeta) {
    return 2.0 * p.g * t / (2.0 + mu * t);
  }
  // tanh keeps the ratio finite where sinh and cosh would overflow.
  const Complex th = std::tanh(beta * t);
  return 2.0 * p.g * th / (2.0 * beta + mu * th);
}

double f_steady_state(const RiccatiParams& p) {
  if (!p.tuned_strong_dissipation()) {
    throw ValidationError(ErrorCode::OutsideRegime,
                          "steady state is real only for w_q == Delta and gamma >= 2g");
  }
  const double disc = p.gamma * p.gamma - 4.0 * p.g * p.g;
  // Smaller root of g f^2 - gamma f + g = 0, written without cancellation.
  return 2.0 * p.g / (p.gamma + std::sqrt(std::max(disc, 0.0)));
}

RiccatiSolution RiccatiSolution::closed_form(const RiccatiParams& p) {
  p.validate();
  return RiccatiSolution(p, Method::ClosedForm);
}

RiccatiSolution RiccatiSolution::from_grid(const RiccatiParams& p, double dt,
                                           std::vector<Complex> samples) {
  p.validate();
  if (!(dt > 0.0) || samples.size() < 2) {
    throw ValidationError(ErrorCode::InvalidArgument, "grid solution needs dt > 0 and two samples");
  }
  RiccatiSolution s(p, Method::OdeGrid);
  s.dt_ = dt;
  s.samples_ = std::move(samples);
  return s;
}

double RiccatiSolution::t_end() const noexcept {
  if (method_ == Method::ClosedForm) return INFINITY;
  return dt_ * static_cast<double>(samples_.size() - 1);
}

Complex RiccatiSolution::operator()(double t) const {
  if (method_ == Method::ClosedForm) return f_closed(params_, t);

  const std::size_t n = samples_.size() - 1;
  const double span = dt_ * static_cast<double>(n);
  if (t < 0.0 || t > span * (1.0 + 1e-12)) {
    throw ValidationError(ErrorCode::InvalidArgument,
                          "t = " + std::to_string(t) + " outside tabulated range");
  }
  std::size_t k = static_cast<std::size_t>(std::floor(t / dt_));
  if (k >= n) k = n - 1;
  const double s = t / dt_ - static_cast<double>(k);
  const double s2 = s * s, s3 = s2 * s;
  const Complex f0 = samples_[k], f1 = samples_[k + 1];
  const Complex d0 = riccati_rhs(f0, params_) * dt_;
  const Complex d1 = riccati_rhs(f1, params_) * dt_;
  return (2 * s3 - 3 * s2 + 1) * f0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * f1 +
         (s3 - s2) * d1;
}

RiccatiSolution f_ode(const RiccatiParams& p, double t_end, double dt) {
  p.validate();
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw ValidationError(ErrorCode::InvalidArgument, "f_ode needs dt > 0 and t_end > 0");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  std::vector<Complex> samples;
  samples.reserve(steps + 1);
  Complex f = 0.0;
  samples.push_back(f);
  for (std::size_t k = 0; k < steps; ++k) {
    const Complex k1 = riccati_rhs(f, p);
    const Complex k2 = riccati_rhs(f + 0.5 * dt * k1, p);
    const Complex k3 = riccati_rhs(f + 0.5 * dt * k2, p);
    const Complex k4 = riccati_rhs(f + dt * k3, p);
    f += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!(std::abs(f) <= kOverflow)) {
      throw NumericalError(ErrorCode::StepOverflow,
                           "|f| exceeded 1e6 at t = " + std::to_string(dt * double(k + 1)));
    }
    samples.push_back(f);
  }
  return RiccatiSolution::from_grid(p, dt, std::move(samples));
}

double gamma_prime(const RiccatiSolution& f, double t, bool allow_any_regime) {
  const RiccatiParams& p = f.params();
  if (!allow_any_regime && !p.tuned_strong_dissipation()) {
    throw ValidationError(ErrorCode::OutsideRegime,
                          "gamma' is a physical rate only for w_q == Delta and gamma >= 2g");
  }
  const double rate = p.g * f(t).real();
  if (rate < kReducedRateFloor) {
    throw NumericalError(ErrorCode::RateNegative,
                         "g Re f(t) = " + std::to_string(rate) + " at t = " + std::to_string(t));
  }
  return std::max(rate, 0.0);
}

double gamma_prime(const RiccatiParams& p, double t, bool allow_any_regime) {
  return gamma_prime(RiccatiSolution::closed_form(p), t, allow_any_regime);
}

}  // namespace nonmarkov
