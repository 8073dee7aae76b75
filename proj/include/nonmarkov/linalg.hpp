#pragma once

// Dense complex linear algebra for the small Hilbert spaces used here
// (dimension <= 64). Storage is row-major, so the entries of a d x d matrix
// double as its row-major vectorisation in Liouville space.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace nonmarkov {

using Complex = std::complex<double>;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  /// Row-by-row literal, e.g. {{0, 1}, {1, 0}}.
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  /// |psi><psi| for a column vector given by its amplitudes.
  static ComplexMatrix projector(std::span<const Complex> psi);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> entries() noexcept { return data_; }
  std::span<const Complex> entries() const noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conjugate() const;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

  /// Largest entrywise modulus.
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix a);
ComplexMatrix operator*(ComplexMatrix a, Complex s);

/// Compressed-row copy of a dense matrix holding only its exactly nonzero
/// entries.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  explicit SparseMatrix(const ComplexMatrix& dense);

  std::size_t rows() const noexcept { return row_start_.empty() ? 0 : row_start_.size() - 1; }
  std::size_t nonzeros() const noexcept { return val_.size(); }
  /// y = S x; x and y must not alias.
  void multiply(std::span<const Complex> x, std::span<Complex> y) const;

 private:
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> col_;
  std::vector<Complex> val_;
};

/// Matrix-vector product for a column vector of amplitudes.
std::vector<Complex> matvec(const ComplexMatrix& m, std::span<const Complex> v);

/// Largest entrywise |a - b|; throws DimensionMismatch on shape mismatch.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest entrywise |m - m^dagger|.
double hermiticity_defect(const ComplexMatrix& m);

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// One tensor factor of a composite Hilbert space.
struct Subsystem {
  std::string name;
  std::size_t dim = 0;

  bool operator==(const Subsystem&) const = default;
};

/// Ordered tensor-product structure. Factor 0 is the leftmost Kronecker
/// factor, so basis index = sum_k i_k * stride_k with the last factor fastest.
class SubsystemLayout {
 public:
  explicit SubsystemLayout(std::vector<Subsystem> factors);

  std::size_t size() const noexcept { return factors_.size(); }
  const Subsystem& factor(std::size_t index) const { return factors_.at(index); }
  const std::vector<Subsystem>& factors() const noexcept { return factors_; }
  std::size_t total_dim() const noexcept { return total_dim_; }
  /// Index of the factor with the given name; throws if absent.
  std::size_t index_of(const std::string& name) const;
  /// Layout made of the kept factors, in their original order.
  SubsystemLayout restrict_to(std::span<const std::size_t> keep) const;

  bool operator==(const SubsystemLayout&) const = default;

 private:
  std::vector<Subsystem> factors_;
  std::size_t total_dim_ = 1;
};

/// Traces out every factor not listed in `keep`. Kept factors retain their
/// relative order regardless of the order given.
ComplexMatrix partial_trace(const ComplexMatrix& rho, const SubsystemLayout& layout,
                            std::span<const std::size_t> keep);

/// Eigen-decomposition of a Hermitian matrix; columns of `vectors` are the
/// eigenvectors matching `values` (ascending).
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix vectors;
};

inline constexpr double kHermitianTolerance = 1e-10;

HermitianEigen herm_eig(const ComplexMatrix& m);
std::vector<double> herm_eigvals(const ComplexMatrix& m);

/// Schatten-1 norm of a Hermitian matrix (sum of |eigenvalues|).
double trace_norm(const ComplexMatrix& m);

/// Principal square root of a positive semidefinite Hermitian matrix;
/// eigenvalues below zero (roundoff) are clipped.
ComplexMatrix psd_sqrt(const ComplexMatrix& m);

}  // namespace nonmarkov
