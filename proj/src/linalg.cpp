#include "nonmarkov/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "nonmarkov/errors.hpp"

namespace nonmarkov {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                              "x" + std::to_string(b.cols()));
  }
}

void require_square(const ComplexMatrix& m, const char* op) {
  if (!m.is_square() || m.empty()) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          std::string(op) + ": matrix must be square and non-empty");
  }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw ValidationError(ErrorCode::DimensionMismatch, "entry count does not match shape");
  }
  if (!all_finite()) {
    throw ValidationError(ErrorCode::InvalidArgument, "matrix entries must be finite");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) {
      throw ValidationError(ErrorCode::DimensionMismatch, "ragged matrix literal");
    }
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::projector(std::span<const Complex> psi) {
  ComplexMatrix m(psi.size(), psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) m(i, j) = psi[i] * std::conj(psi[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

ComplexMatrix ComplexMatrix::conjugate() const {
  ComplexMatrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

Complex ComplexMatrix::trace() const {
  require_square(*this, "trace");
  Complex sum = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) sum += (*this)(i, i);
  return sum;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ValidationError(ErrorCode::DimensionMismatch, "matrix product: inner dimensions differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

SparseMatrix::SparseMatrix(const ComplexMatrix& dense) {
  row_start_.reserve(dense.rows() + 1);
  row_start_.push_back(0);
  for (std::size_t i = 0; i < dense.rows(); ++i) {
    for (std::size_t j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != Complex{}) {
        col_.push_back(j);
        val_.push_back(dense(i, j));
      }
    }
    row_start_.push_back(col_.size());
  }
}

void SparseMatrix::multiply(std::span<const Complex> x, std::span<Complex> y) const {
  for (std::size_t i = 0; i + 1 < row_start_.size(); ++i) {
    Complex acc = 0.0;
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) acc += val_[k] * x[col_[k]];
    y[i] = acc;
  }
}

std::vector<Complex> matvec(const ComplexMatrix& m, std::span<const Complex> v) {
  if (m.cols() != v.size()) {
    throw ValidationError(ErrorCode::DimensionMismatch, "matrix-vector product");
  }
  std::vector<Complex> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  const auto ea = a.entries();
  const auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

double hermiticity_defect(const ComplexMatrix& m) {
  require_square(m, "hermiticity_defect");
  double d = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) d = std::max(d, std::abs(m(i, j) - std::conj(m(j, i))));
  return d;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a * b + b * a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

SubsystemLayout::SubsystemLayout(std::vector<Subsystem> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw ValidationError(ErrorCode::InvalidArgument, "layout needs at least one factor");
  }
  std::set<std::string> names;
  for (const auto& f : factors_) {
    if (f.dim < 2) {
      throw ValidationError(ErrorCode::InvalidArgument,
                            "factor '" + f.name + "' must have dimension >= 2");
    }
    if (!names.insert(f.name).second) {
      throw ValidationError(ErrorCode::InvalidArgument, "duplicate factor name '" + f.name + "'");
    }
    total_dim_ *= f.dim;
  }
}

std::size_t SubsystemLayout::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (factors_[i].name == name) return i;
  throw ValidationError(ErrorCode::InvalidArgument, "no factor named '" + name + "'");
}

SubsystemLayout SubsystemLayout::restrict_to(std::span<const std::size_t> keep) const {
  std::vector<bool> kept(factors_.size(), false);
  for (std::size_t k : keep) {
    if (k >= factors_.size()) {
      throw ValidationError(ErrorCode::DimensionMismatch, "factor index out of range");
    }
    if (kept[k]) throw ValidationError(ErrorCode::InvalidArgument, "factor listed twice");
    kept[k] = true;
  }
  std::vector<Subsystem> out;
  for (std::size_t i = 0; i < factors_.size(); ++i)
    if (kept[i]) out.push_back(factors_[i]);
  return SubsystemLayout(std::move(out));
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const SubsystemLayout& layout,
                            std::span<const std::size_t> keep) {
  const std::size_t dim = layout.total_dim();
  if (!rho.is_square() || rho.rows() != dim) {
    throw ValidationError(ErrorCode::DimensionMismatch,
                          "partial_trace: state dimension " + std::to_string(rho.rows()) +
                              " does not match layout dimension " + std::to_string(dim));
  }
  const SubsystemLayout kept_layout = layout.restrict_to(keep);
  std::vector<bool> kept(layout.size(), false);
  for (std::size_t k : keep) kept[k] = true;

  // Split every basis index into (kept, traced) sub-indices.
  std::vector<std::size_t> kept_index(dim), traced_index(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t rest = i;
    std::size_t k_idx = 0, k_stride = 1, t_idx = 0, t_stride = 1;
    for (std::size_t f = layout.size(); f-- > 0;) {
      const std::size_t d = layout.factor(f).dim;
      const std::size_t digit = rest % d;
      rest /= d;
      if (kept[f]) {
        k_idx += digit * k_stride;
        k_stride *= d;
      } else {
        t_idx += digit * t_stride;
        t_stride *= d;
      }
    }
    kept_index[i] = k_idx;
    traced_index[i] = t_idx;
  }

  const std::size_t out_dim = kept_layout.total_dim();
  ComplexMatrix out(out_dim, out_dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      if (traced_index[i] == traced_index[j]) out(kept_index[i], kept_index[j]) += rho(i, j);
  return out;
}

HermitianEigen herm_eig(const ComplexMatrix& m) {
  require_square(m, "herm_eig");
  const double defect = hermiticity_defect(m);
  if (!(defect <= kHermitianTolerance)) {
    throw ValidationError(ErrorCode::NonHermitian,
                          "hermiticity defect " + std::to_string(defect) + " exceeds tolerance");
  }
  const std::size_t n = m.rows();
  ComplexMatrix a = m + m.adjoint();
  a *= 0.5;
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double threshold = 1e-14 * std::max(1.0, a.frobenius_norm());
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > threshold; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        // Phase-rotate column q so the pivot is real, then apply a real
        // Jacobi rotation in the (p, q) plane.
        const Complex phase = std::conj(apq / r);
        const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Complex gpp = c, gpq = s, gqp = -s * phase, gqq = c * phase;

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * gpp + akq * gqp;
          a(k, q) = akp * gpq + akq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
          a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < n; ++k) {
          const Complex vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * gpp + vkq * gqp;
          v(k, q) = vkp * gpq + vkq * gqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

std::vector<double> herm_eigvals(const ComplexMatrix& m) { return herm_eig(m).values; }

double trace_norm(const ComplexMatrix& m) {
  double s = 0.0;
  for (double x : herm_eigvals(m)) s += std::abs(x);
  return s;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m) {
  const HermitianEigen eig = herm_eig(m);
  const std::size_t n = m.rows();
  ComplexMatrix out(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double root = std::sqrt(std::max(eig.values[k], 0.0));
    if (root == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += root * eig.vectors(i, k) * std::conj(eig.vectors(j, k));
  }
  return out;
}

}  // namespace nonmarkov
