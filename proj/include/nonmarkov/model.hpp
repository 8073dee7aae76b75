#pragma once

// Operators and Lindblad models for a two-level atom coupled to a damped
// cavity mode.
//
// Basis conventions used throughout the library:
//   * atom: index 0 = excited |e>, index 1 = ground |g>; sigma_z = diag(1, -1).
//     A state labelled "|1>" is |e> and "|0>" is |g>.
//   * cavity: Fock states |0> .. |N_c - 1>.
//   * composite: atom (x) cavity, atom leftmost.

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nonmarkov/linalg.hpp"

namespace nonmarkov {

class RiccatiSolution;

/// Scalar function of time that remembers whether it is constant, so the
/// integrator can precompute the propagator of autonomous models.
class TimeFunction {
 public:
  TimeFunction(double constant = 0.0) : constant_(constant) {}  // NOLINT(implicit)
  explicit TimeFunction(std::function<double(double)> fn) : fn_(std::move(fn)) {}

  double operator()(double t) const { return fn_ ? fn_(t) : constant_; }
  bool is_constant() const noexcept { return !fn_; }

 private:
  double constant_ = 0.0;
  std::function<double(double)> fn_;
};

struct HamiltonianTerm {
  ComplexMatrix op;  // Hermitian
  TimeFunction coefficient;
};

struct CollapseTerm {
  ComplexMatrix op;
  TimeFunction rate;  // gamma_i(t) >= 0
};

/// Rates in [-kRateClip, 0) are treated as roundoff and clipped to zero.
inline constexpr double kRateClip = 1e-12;

/// d rho/dt = -i[H(t), rho] + sum_i gamma_i(t) (2 A rho A^+ - {A^+ A, rho}),
/// with H(t) = static part + sum_k c_k(t) H_k.
class LindbladModel {
 public:
  LindbladModel(std::string name, SubsystemLayout layout, ComplexMatrix static_hamiltonian,
                std::vector<HamiltonianTerm> hamiltonian_terms,
                std::vector<CollapseTerm> collapse_terms);

  const std::string& name() const noexcept { return name_; }
  const SubsystemLayout& layout() const noexcept { return layout_; }
  std::size_t dim() const noexcept { return layout_.total_dim(); }

  const ComplexMatrix& static_hamiltonian() const noexcept { return static_h_; }
  const std::vector<HamiltonianTerm>& hamiltonian_terms() const noexcept { return h_terms_; }
  const std::vector<CollapseTerm>& collapse_terms() const noexcept { return collapse_; }

  ComplexMatrix hamiltonian(double t) const;
  /// Rate of collapse term `i` at time t, clipped at zero within kRateClip;
  /// throws RateNegative beyond that.
  double rate(std::size_t i, double t) const;

  bool is_time_independent() const;

 private:
  std::string name_;
  SubsystemLayout layout_;
  ComplexMatrix static_h_;
  std::vector<HamiltonianTerm> h_terms_;
  std::vector<CollapseTerm> collapse_;
};

struct ModelParams {
  double omega_q = 1.0;  // atomic transition frequency
  double delta = 1.0;    // cavity frequency (detuning parameter)
  double g = 1.0;        // atom-cavity coupling
  double gamma = 2.0;    // cavity damping
  std::size_t cavity_dim = 2;

  void validate() const;
};

enum class Pauli { X, Y, Z, Plus, Minus };

ComplexMatrix pauli(Pauli which);
ComplexMatrix annihilation(std::size_t dim);

/// Places `op` on factor `target` with identities elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, const SubsystemLayout& layout, std::size_t target);

SubsystemLayout atom_cavity_layout(std::size_t cavity_dim);

/// Atom and cavity with the cavity leaking into a zero-temperature continuum:
/// H = (w_q/2) s_z + Delta a^+ a + g (s_- a^+ + s_+ a), one collapse term (a, gamma).
LindbladModel build_full_model(const ModelParams& p);

/// Time-local master equation for the atom alone, valid for a cavity that
/// starts in vacuum: H = (w_q/2) s_z + g Im f(t) s_+ s_-, collapse (s_-, g Re f(t)).
/// Querying a rate where g Re f < -1e-9 throws RateNegative.
LindbladModel build_reduced_model(const ModelParams& p, std::shared_ptr<const RiccatiSolution> f);

/// Prepends an idle two-level ancilla (no Hamiltonian, no dissipation).
LindbladModel with_ancilla(const LindbladModel& model, const std::string& name = "ancilla");

/// Total excitation number s_+ s_- (x) I + I (x) a^+ a on atom (x) cavity.
ComplexMatrix excitation_number(std::size_t cavity_dim);

}  // namespace nonmarkov
