#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace evid {

using Complex = std::complex<double>;

/// Dense square complex matrix, row-major. Used for unitary transforms and
/// eigenvector storage; carries no structural invariant.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t n) : n_(n), data_(n * n) {}

  static ComplexMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }

  std::span<const Complex> row(std::size_t i) const {
    return {data_.data() + i * n_, n_};
  }

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

/// Dense n×n Hermitian matrix.
///
/// Every mutation goes through set(), which writes the mirrored conjugate
/// entry too, so the Hermitian property holds exactly at all times.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  /// Zero matrix of dimension n.
  explicit HermitianMatrix(std::size_t n) : n_(n), data_(n * n) {}

  static HermitianMatrix identity(std::size_t n);
  static HermitianMatrix diagonal(std::span<const double> values);
  static HermitianMatrix diagonal(std::initializer_list<double> values);
  /// Real symmetric matrix from rows. Throws NotHermitian unless the rows are
  /// exactly symmetric.
  static HermitianMatrix from_rows(
      std::initializer_list<std::initializer_list<double>> rows);
  /// Complex matrix from a row-major buffer. Throws NotHermitian unless the
  /// buffer is exactly Hermitian with a real diagonal.
  static HermitianMatrix from_dense(std::size_t n, std::span<const Complex> entries);

  std::size_t size() const noexcept { return n_; }

  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * n_ + j];
  }

  /// Sets (i,j) and (j,i) = conj(value). Diagonal entries must be real.
  /// A zero imaginary part is stored as +0 in both entries.
  void set(std::size_t i, std::size_t j, Complex value);

  std::span<const Complex> entries() const noexcept { return data_; }

  /// True when every imaginary part is +0 or -0.
  bool is_real() const noexcept;
  double trace() const noexcept;
  double frobenius_norm() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const HermitianMatrix&, const HermitianMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

}  // namespace evid
