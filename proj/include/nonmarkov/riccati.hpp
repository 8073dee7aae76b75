#pragma once

// Memory function f(t) of the atom coupled to a damped cavity. It obeys
//   f' = g + g f^2 + i (w_q - Delta) f - gamma f,   f(0) = 0,
// and fixes the time-local rate g Re f(t) and shift g Im f(t) of the atom.

#include <complex>
#include <vector>

namespace nonmarkov {

using Complex = std::complex<double>;

struct RiccatiParams {
  double omega_q = 1.0;
  double delta = 1.0;
  double g = 1.0;
  double gamma = 2.0;

  void validate() const;
  /// w_q == Delta and gamma >= 2g: f(t) is real, nonnegative and increasing.
  bool tuned_strong_dissipation() const;
  bool operator==(const RiccatiParams&) const = default;
};

Complex riccati_rhs(Complex f, const RiccatiParams& p);

/// Closed form 2g tanh(bt) / (2b + mu tanh(bt)), mu = gamma - i(w_q - Delta),
/// b = sqrt(mu^2/4 - g^2); the series 2gt / (2 + mu t) when |b| < 1e-6.
Complex f_closed(const RiccatiParams& p, double t);

/// Fixed point of the tuned equation g f^2 - gamma f + g = 0 (smaller root).
double f_steady_state(const RiccatiParams& p);

class RiccatiSolution {
 public:
  enum class Method { ClosedForm, OdeGrid };

  /// Evaluates f through the closed form.
  static RiccatiSolution closed_form(const RiccatiParams& p);
  /// Wraps RK4 samples on a uniform grid; evaluation uses cubic Hermite
  /// interpolation with node slopes from riccati_rhs.
  static RiccatiSolution from_grid(const RiccatiParams& p, double dt, std::vector<Complex> samples);

  const RiccatiParams& params() const noexcept { return params_; }
  Method method() const noexcept { return method_; }
  double dt() const noexcept { return dt_; }
  const std::vector<Complex>& samples() const noexcept { return samples_; }
  double t_end() const noexcept;

  Complex operator()(double t) const;

 private:
  RiccatiSolution(const RiccatiParams& p, Method m) : params_(p), method_(m) {}

  RiccatiParams params_;
  Method method_;
  double dt_ = 0.0;
  std::vector<Complex> samples_;
};

/// Classical RK4 from f(0) = 0; throws StepOverflow once |f| exceeds 1e6.
RiccatiSolution f_ode(const RiccatiParams& p, double t_end, double dt);

/// Effective time-dependent damping rate g Re f(t). Outside the tuned
/// strong-dissipation regime the caller must opt in with allow_any_regime.
double gamma_prime(const RiccatiParams& p, double t, bool allow_any_regime = false);
double gamma_prime(const RiccatiSolution& f, double t, bool allow_any_regime = false);

}  // namespace nonmarkov
