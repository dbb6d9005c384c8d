#include "evid/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evid/error.hpp"

namespace evid {

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
  HermitianMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  HermitianMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m.set(i, i, values[i]);
  return m;
}

HermitianMatrix HermitianMatrix::diagonal(std::initializer_list<double> values) {
  return diagonal(std::span<const double>(values.begin(), values.size()));
}

HermitianMatrix HermitianMatrix::from_rows(
    std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  std::vector<Complex> buffer;
  buffer.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "row length differs from row count");
    }
    for (double v : row) buffer.emplace_back(v, 0.0);
  }
  return from_dense(n, buffer);
}

HermitianMatrix HermitianMatrix::from_dense(std::size_t n,
                                            std::span<const Complex> entries) {
  if (entries.size() != n * n) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(n * n) + " entries, got " +
                    std::to_string(entries.size()));
  }
  HermitianMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex lower = entries[i * n + j];
      const Complex upper = entries[j * n + i];
      if (lower != std::conj(upper) || (i == j && lower.imag() != 0.0)) {
        throw Error(ErrorKind::NotHermitian, "entries (" + std::to_string(i + 1) +
                                                 "," + std::to_string(j + 1) +
                                                 ") and (" + std::to_string(j + 1) +
                                                 "," + std::to_string(i + 1) +
                                                 ") are not conjugate");
      }
      m.set(i, j, lower);
    }
  }
  return m;
}

void HermitianMatrix::set(std::size_t i, std::size_t j, Complex value) {
  if (i == j) {
    if (value.imag() != 0.0) {
      throw Error(ErrorKind::NotHermitian,
                  "diagonal entry " + std::to_string(i + 1) + " has nonzero imaginary part");
    }
    data_[i * n_ + i] = Complex(value.real(), 0.0);
    return;
  }
  // Zero imaginary parts are stored as +0 on both sides of the diagonal.
  const double im = value.imag() == 0.0 ? 0.0 : value.imag();
  data_[i * n_ + j] = Complex(value.real(), im);
  data_[j * n_ + i] = Complex(value.real(), im == 0.0 ? 0.0 : -im);
}

bool HermitianMatrix::is_real() const noexcept {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return z.imag() == 0.0; });
}

double HermitianMatrix::trace() const noexcept {
  double t = 0.0;
  for (std::size_t i = 0; i < n_; ++i) t += data_[i * n_ + i].real();
  return t;
}

double HermitianMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

double HermitianMatrix::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace evid
