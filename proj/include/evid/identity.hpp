#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "evid/eigensolve.hpp"
#include "evid/matrix.hpp"

namespace evid {

// All indices in this header are 0-based.

/// Contiguous groups of a sorted spectrum whose adjacent gaps are <= tol.
struct EigenClustering {
  std::vector<std::vector<std::size_t>> clusters;
  std::vector<double> representatives;
  double tol = 0.0;

  bool has_degenerate() const noexcept;
};

/// |v_{i,j}|^2 for every eigenvalue row i and coordinate column j, plus the
/// spectrum and clustering the rows are aligned with. Rows of a degenerate
/// cluster share the cluster's total weight evenly.
///
/// A full table has coordinates 0..n-1; a partial one lists the coordinates
/// its columns hold.
struct MagnitudeTable {
  std::size_t n = 0;
  std::vector<std::size_t> coordinates;
  std::vector<double> eigenvalues;
  std::vector<double> weights;  // row-major n × coordinates.size()
  EigenClustering clustering;

  std::size_t width() const noexcept { return coordinates.size(); }
  double operator()(std::size_t i, std::size_t c) const { return weights[i * width() + c]; }
  double& operator()(std::size_t i, std::size_t c) { return weights[i * width() + c]; }
  std::vector<double> column(std::size_t c) const;
  std::vector<double> row_sums() const;
  std::vector<double> column_sums() const;
};

struct ResolventSample {
  double lambda = 0.0;
  double value = 0.0;
  double nearest_pole_gap = 0.0;
};

struct InterlacingReport {
  bool pass = true;
  /// Most negative of λ_k(M) - λ_k(A) and λ_{k+1}(A) - λ_k(M) over all k.
  double worst_slack = 0.0;
  std::size_t worst_index = 0;
  double tol = 0.0;
};

/// 1e-8 * max(1, ‖A‖₂) with ‖A‖₂ read off the spectrum.
double default_cluster_tolerance(const Spectrum& spec);

/// A with row and column j removed. Throws DimensionTooSmall for n = 1.
HermitianMatrix principal_minor(const HermitianMatrix& a, std::size_t j);

/// |v_{i,j}|^2 = prod_k (λ_i(A) - λ_k(M)) / prod_{k≠i} (λ_i(A) - λ_k(A)), where
/// M is the minor for coordinate j. Requires λ_i(A) to be separated from its
/// neighbours by more than `tol` (default_cluster_tolerance when unset).
double magnitude_squared(const Spectrum& spec_a, const Spectrum& spec_m, std::size_t i,
                         std::optional<double> tol = std::nullopt);

EigenClustering cluster_spectrum(const Spectrum& spec, double tol);

/// Total weight sum_{i in cluster} |v_{i,j}|^2 of a degenerate cluster, the
/// limit of the identity as the cluster members coalesce.
double cluster_weight(const Spectrum& spec_a, const Spectrum& spec_m,
                      std::span<const std::size_t> cluster, double tol);

/// Weights of one coordinate: entry i is |v_{i,j}|^2, clusters split evenly.
std::vector<double> column_weights(const Spectrum& spec_a, const Spectrum& spec_m,
                                   const EigenClustering& clustering);

struct TableOptions {
  std::optional<double> cluster_tol;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

struct IdentityRun {
  MagnitudeTable table;
  std::vector<Spectrum> minor_spectra;  // indexed by coordinate
};

MagnitudeTable magnitude_table(const HermitianMatrix& a, const TableOptions& options = {});
IdentityRun magnitude_table_detailed(const HermitianMatrix& a,
                                     const TableOptions& options = {});

/// Single column j of the table, with eigenvalues and clustering filled in.
MagnitudeTable magnitude_column(const HermitianMatrix& a, std::size_t j,
                                std::optional<double> cluster_tol = std::nullopt);

/// f(λ) = det(M - λI) / det(A - λI) from the two spectra.
ResolventSample resolvent_det_form(const Spectrum& spec_a, const Spectrum& spec_m,
                                   double lambda);

/// f(λ) = sum_i w_i / (λ_i - λ), terms summed in ascending magnitude.
ResolventSample resolvent_pf_form(std::span<const double> weights, const Spectrum& spec_a,
                                  double lambda);

InterlacingReport check_interlacing(const Spectrum& spec_a, const Spectrum& spec_m,
                                    double tol);

}  // namespace evid
