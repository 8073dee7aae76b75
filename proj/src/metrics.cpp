#include "nonmarkov/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nonmarkov/errors.hpp"
#include "nonmarkov/model.hpp"

namespace nonmarkov {

double trace_distance(const ComplexMatrix& r1, const ComplexMatrix& r2) {
  if (r1.rows() != r2.rows() || r1.cols() != r2.cols()) {
    throw ValidationError(ErrorCode::DimensionMismatch, "trace_distance: states differ in size");
  }
  return 0.5 * trace_norm(r1 - r2);
}

double concurrence(const ComplexMatrix& rho) {
  if (!rho.is_square() || rho.rows() != 4) {
    throw ValidationError(ErrorCode::DimensionMismatch, "concurrence needs a 4x4 density matrix");
  }
  // With rho = A A^+, the l_i are the singular values of tau = A^T Y A. They
  // are read off the Hermitian dilation [[0, tau], [tau^+, 0]] (eigenvalues
  // +-l_i), which keeps small l_i accurate to roundoff instead of to its
  // square root.
  const HermitianEigen eig = herm_eig(rho);
  ComplexMatrix a = eig.vectors;
  for (std::size_t j = 0; j < 4; ++j) {
    const double w = std::sqrt(std::max(eig.values[j], 0.0));
    for (std::size_t i = 0; i < 4; ++i) a(i, j) *= w;
  }
  const ComplexMatrix yy = kron(pauli(Pauli::Y), pauli(Pauli::Y));
  const ComplexMatrix tau = a.transpose() * yy * a;
  ComplexMatrix dilation(8, 8);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      dilation(i, 4 + j) = tau(i, j);
      dilation(4 + j, i) = std::conj(tau(i, j));
    }
  const std::vector<double> mu = herm_eigvals(dilation);
  std::array<double, 4> lambda{};
  for (std::size_t i = 0; i < 4; ++i) lambda[i] = std::max(mu[7 - i], 0.0);
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double atom_cavity_concurrence(const ComplexMatrix& rho, const SubsystemLayout& layout) {
  if (layout.size() != 2 || layout.factor(0).dim != 2) {
    throw ValidationError(ErrorCode::DimensionMismatch, "expected an atom (x) cavity layout");
  }
  if (!rho.is_square() || rho.rows() != layout.total_dim()) {
    throw ValidationError(ErrorCode::DimensionMismatch, "state does not match layout");
  }
  const std::size_t nc = layout.factor(1).dim;
  double leak = 0.0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t n = 2; n < nc; ++n) leak += rho(a * nc + n, a * nc + n).real();
  if (leak > 1e-8) {
    throw ValidationError(ErrorCode::TruncationLeak,
                          "population " + std::to_string(leak) + " above the first photon");
  }
  const std::array<std::size_t, 4> keep{0, 1, nc, nc + 1};
  ComplexMatrix sub(4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) sub(i, j) = rho(keep[i], keep[j]);
  const double tr = sub.trace().real();
  if (!(tr > 0.0)) {
    throw ValidationError(ErrorCode::TruncationLeak, "no population in the two-level subspace");
  }
  sub *= 1.0 / tr;
  return concurrence(sub);
}

BlochVector bloch_expectations(const ComplexMatrix& rho, const SubsystemLayout& layout,
                               std::size_t atom) {
  if (atom >= layout.size() || layout.factor(atom).dim != 2) {
    throw ValidationError(ErrorCode::DimensionMismatch, "atom factor must be two-dimensional");
  }
  const std::array<std::size_t, 1> keep{atom};
  const ComplexMatrix reduced = layout.size() == 1 ? rho : partial_trace(rho, layout, keep);
  if (reduced.rows() != 2) {
    throw ValidationError(ErrorCode::DimensionMismatch, "state does not match layout");
  }
  BlochVector out{};
  const std::array<Pauli, 3> ops{Pauli::X, Pauli::Y, Pauli::Z};
  for (std::size_t i = 0; i < 3; ++i) {
    const Complex value = (pauli(ops[i]) * reduced).trace();
    if (std::abs(value.imag()) > 1e-8) {
      throw ValidationError(ErrorCode::NonRealExpectation,
                            "expectation has imaginary part " + std::to_string(value.imag()));
    }
    out[i] = value.real();
  }
  return out;
}

CriterionResult criterion_deviation(const Trajectory& plant_actual, const Trajectory& plant_reference,
                                    DeviationNorm norm, double pulse_time) {
  if (plant_actual.size() != plant_reference.size() ||
      std::abs(plant_actual.t0 - plant_reference.t0) > 1e-12 ||
      std::abs(plant_actual.dt - plant_reference.dt) > 1e-15) {
    throw ValidationError(ErrorCode::GridMismatch, "trajectories are on different time grids");
  }
  CriterionResult out;
  out.deviation.reserve(plant_actual.size());
  for (std::size_t k = 0; k < plant_actual.size(); ++k) {
    const ComplexMatrix& a = plant_actual.states[k];
    const ComplexMatrix& b = plant_reference.states[k];
    double d = 0.0;
    if (norm == DeviationNorm::TraceDistance) {
      d = trace_distance(a, b);
    } else {
      const BlochVector sa = bloch_expectations(a, plant_actual.layout);
      const BlochVector sb = bloch_expectations(b, plant_reference.layout);
      for (std::size_t i = 0; i < 3; ++i) d = std::max(d, std::abs(sa[i] - sb[i]));
    }
    out.deviation.push_back(d);
  }
  const double half_step = 0.5 * plant_actual.dt;
  for (std::size_t k = 0; k < out.deviation.size(); ++k)
    if (plant_actual.time(k) < pulse_time - half_step)
      out.pre_pulse_floor = std::max(out.pre_pulse_floor, out.deviation[k]);
  out.threshold = std::max(10.0 * out.pre_pulse_floor, kCriterionAbsoluteFloor);
  for (std::size_t k = 0; k < out.deviation.size(); ++k) {
    if (plant_actual.time(k) <= pulse_time + half_step) continue;
    out.max_post_pulse = std::max(out.max_post_pulse, out.deviation[k]);
    if (out.deviation[k] > out.threshold && !out.non_markovian) {
      out.non_markovian = true;
      out.first_violation_time = plant_actual.time(k);
    }
  }
  return out;
}

std::vector<std::size_t> local_extrema(std::span<const double> x) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    if ((x[i] - x[i - 1]) * (x[i + 1] - x[i]) < 0.0) out.push_back(i);
  return out;
}

std::vector<std::size_t> zero_touches(std::span<const double> x) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double left = x[i - 1] - x[i];
    const double right = x[i + 1] - x[i];
    if (left > 0.0 && right >= 0.0 && x[i] <= std::max(left, right)) out.push_back(i);
  }
  return out;
}

double max_rise(std::span<const double> x, std::size_t first) {
  double best = 0.0;
  double low = INFINITY;
  for (std::size_t k = first; k < x.size(); ++k) {
    low = std::min(low, x[k]);
    best = std::max(best, x[k] - low);
  }
  return best;
}

double max_step_increase(std::span<const double> x, std::size_t first) {
  double best = -INFINITY;
  for (std::size_t k = first; k + 1 < x.size(); ++k) best = std::max(best, x[k + 1] - x[k]);
  return best;
}

}  // namespace nonmarkov
