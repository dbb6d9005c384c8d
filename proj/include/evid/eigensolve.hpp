#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "evid/matrix.hpp"

namespace evid {

/// Real symmetric tridiagonal matrix; offdiag[k] couples rows k and k+1.
struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> offdiag;
};

/// Eigenvalues sorted ascending.
struct Spectrum {
  std::vector<double> values;
  std::size_t source_dim = 0;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
  /// max |value|; for Hermitian input this is the spectral norm.
  double norm() const noexcept;
  /// values.back() - values.front(), zero for empty spectra.
  double spread() const noexcept;
};

/// Row i of `vectors` is a unit eigenvector for spectrum.values[i], so that
/// A = sum_i values[i] * v_i v_i^H.
struct SpectralDecomposition {
  Spectrum spectrum;
  ComplexMatrix vectors;
};

struct TridiagonalReduction {
  Tridiagonal tridiagonal;
  /// U with U^H A U = T when accumulation was requested.
  std::optional<ComplexMatrix> transform;
};

inline constexpr int kDefaultSweepBudget = 50;

TridiagonalReduction tridiagonalize(const HermitianMatrix& a, bool accumulate);

/// Eigenvalues of a symmetric tridiagonal matrix by implicit-shift QL.
/// Throws ConvergenceFailure after `sweep_budget` sweeps on one eigenvalue.
Spectrum tridiagonal_eigenvalues(const Tridiagonal& t,
                                 int sweep_budget = kDefaultSweepBudget);

Spectrum eigenvalues(const HermitianMatrix& a,
                     int sweep_budget = kDefaultSweepBudget);

SpectralDecomposition spectral_decomposition(
    const HermitianMatrix& a, int sweep_budget = kDefaultSweepBudget);

}  // namespace evid
