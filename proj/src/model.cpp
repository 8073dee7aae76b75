#include "nonmarkov/model.hpp"

#include <cmath>

#include "nonmarkov/errors.hpp"
#include "nonmarkov/riccati.hpp"

namespace nonmarkov {

namespace {

void require_dim(const ComplexMatrix& op, std::size_t dim, const std::string& what) {
  if (!op.is_square() || op.rows() != dim) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          what + " has dimension " + std::to_string(op.rows()) + ", expected " +
                              std::to_string(dim));
  }
}

void require_hermitian(const ComplexMatrix& op, const std::string& what) {
  if (hermiticity_defect(op) > kHermitianTolerance) {
    throw ValidationError(ErrorCode::NonHermitian, what + " is not Hermitian");
  }
}

}  // namespace

LindbladModel::LindbladModel(std::string name, SubsystemLayout layout,
                             ComplexMatrix static_hamiltonian,
                             std::vector<HamiltonianTerm> hamiltonian_terms,
                             std::vector<CollapseTerm> collapse_terms)
    : name_(std::move(name)),
      layout_(std::move(layout)),
      static_h_(std::move(static_hamiltonian)),
      h_terms_(std::move(hamiltonian_terms)),
      collapse_(std::move(collapse_terms)) {
  const std::size_t d = layout_.total_dim();
  require_dim(static_h_, d, "static Hamiltonian");
  require_hermitian(static_h_, "static Hamiltonian");
  for (const auto& term : h_terms_) {
    require_dim(term.op, d, "Hamiltonian term");
    require_hermitian(term.op, "Hamiltonian term");
  }
  for (const auto& term : collapse_) require_dim(term.op, d, "collapse operator");
}

ComplexMatrix LindbladModel::hamiltonian(double t) const {
  ComplexMatrix h = static_h_;
  for (const auto& term : h_terms_) h += term.coefficient(t) * term.op;
  return h;
}

double LindbladModel::rate(std::size_t i, double t) const {
  const double r = collapse_.at(i).rate(t);
  if (r < -kRateClip || std::isnan(r)) {
    throw NumericalError(ErrorCode::RateNegative, "collapse rate " + std::to_string(r) +
                                                      " at t = " + std::to_string(t));
  }
  return std::max(r, 0.0);
}

bool LindbladModel::is_time_independent() const {
  for (const auto& term : h_terms_)
    if (!term.coefficient.is_constant()) return false;
  for (const auto& term : collapse_)
    if (!term.rate.is_constant()) return false;
  return true;
}

void ModelParams::validate() const {
  RiccatiParams{omega_q, delta, g, gamma}.validate();
  if (cavity_dim < 2) {
    throw ValidationError(ErrorCode::InvalidArgument, "cavity_dim must be at least 2");
  }
}

ComplexMatrix pauli(Pauli which) {
  using namespace std::complex_literals;
  switch (which) {
    case Pauli::X: return {{0.0, 1.0}, {1.0, 0.0}};
    case Pauli::Y: return {{0.0, -1i}, {1i, 0.0}};
    case Pauli::Z: return {{1.0, 0.0}, {0.0, -1.0}};
    case Pauli::Plus: return {{0.0, 1.0}, {0.0, 0.0}};   // |e><g|
    case Pauli::Minus: return {{0.0, 0.0}, {1.0, 0.0}};  // |g><e|
  }
  throw ValidationError(ErrorCode::InvalidArgument, "unknown Pauli operator");
}

ComplexMatrix annihilation(std::size_t dim) {
  if (dim < 2) throw ValidationError(ErrorCode::InvalidArgument, "Fock space needs dim >= 2");
  ComplexMatrix a(dim, dim);
  for (std::size_t n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

ComplexMatrix embed(const ComplexMatrix& op, const SubsystemLayout& layout, std::size_t target) {
  if (target >= layout.size()) {
    throw ValidationError(ErrorCode::DimensionMismatch, "target factor out of range");
  }
  require_dim(op, layout.factor(target).dim, "embedded operator");
  ComplexMatrix out = ComplexMatrix::identity(1);
  for (std::size_t f = 0; f < layout.size(); ++f)
    out = kron(out, f == target ? op : ComplexMatrix::identity(layout.factor(f).dim));
  return out;
}

SubsystemLayout atom_cavity_layout(std::size_t cavity_dim) {
  return SubsystemLayout({{"atom", 2}, {"cavity", cavity_dim}});
}

ComplexMatrix excitation_number(std::size_t cavity_dim) {
  const ComplexMatrix a = annihilation(cavity_dim);
  const ComplexMatrix i_c = ComplexMatrix::identity(cavity_dim);
  const ComplexMatrix i_a = ComplexMatrix::identity(2);
  return kron(pauli(Pauli::Plus) * pauli(Pauli::Minus), i_c) + kron(i_a, a.adjoint() * a);
}

LindbladModel build_full_model(const ModelParams& p) {
  p.validate();
  const std::size_t nc = p.cavity_dim;
  const ComplexMatrix a = annihilation(nc);
  const ComplexMatrix i_c = ComplexMatrix::identity(nc);
  const ComplexMatrix i_a = ComplexMatrix::identity(2);

  ComplexMatrix h = (p.omega_q / 2.0) * kron(pauli(Pauli::Z), i_c);
  h += p.delta * kron(i_a, a.adjoint() * a);
  h += p.g * (kron(pauli(Pauli::Minus), a.adjoint()) + kron(pauli(Pauli::Plus), a));

  std::vector<CollapseTerm> collapse;
  collapse.push_back({kron(i_a, a), TimeFunction(p.gamma)});
  return LindbladModel("full", atom_cavity_layout(nc), std::move(h), {}, std::move(collapse));
}

LindbladModel build_reduced_model(const ModelParams& p, std::shared_ptr<const RiccatiSolution> f) {
  p.validate();
  if (!f) throw ValidationError(ErrorCode::InvalidArgument, "missing memory function");
  const RiccatiParams expected{p.omega_q, p.delta, p.g, p.gamma};
  if (!(f->params() == expected)) {
    throw ValidationError(ErrorCode::InvalidArgument,
                          "memory function was computed for different model parameters");
  }
  const double g = p.g;
  const ComplexMatrix excited = pauli(Pauli::Plus) * pauli(Pauli::Minus);

  std::vector<HamiltonianTerm> h_terms;
  h_terms.push_back({excited, TimeFunction([f, g](double t) { return g * (*f)(t).imag(); })});

  std::vector<CollapseTerm> collapse;
  collapse.push_back({pauli(Pauli::Minus), TimeFunction([f, g](double t) {
                        const double r = g * (*f)(t).real();
                        if (r < -1e-9) {
                          throw NumericalError(ErrorCode::RateNegative,
                                               "g Re f(t) = " + std::to_string(r) +
                                                   " at t = " + std::to_string(t));
                        }
                        return std::max(r, 0.0);
                      })});

  return LindbladModel("reduced", SubsystemLayout({{"atom", 2}}),
                       (p.omega_q / 2.0) * pauli(Pauli::Z), std::move(h_terms),
                       std::move(collapse));
}

LindbladModel with_ancilla(const LindbladModel& model, const std::string& name) {
  std::vector<Subsystem> factors{{name, 2}};
  for (const auto& f : model.layout().factors()) factors.push_back(f);
  const ComplexMatrix i2 = ComplexMatrix::identity(2);

  std::vector<HamiltonianTerm> h_terms;
  for (const auto& term : model.hamiltonian_terms())
    h_terms.push_back({kron(i2, term.op), term.coefficient});
  std::vector<CollapseTerm> collapse;
  for (const auto& term : model.collapse_terms())
    collapse.push_back({kron(i2, term.op), term.rate});

  return LindbladModel(model.name(), SubsystemLayout(std::move(factors)),
                       kron(i2, model.static_hamiltonian()), std::move(h_terms),
                       std::move(collapse));
}

}  // namespace nonmarkov
