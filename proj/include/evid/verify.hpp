#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evid/identity.hpp"
#include "evid/io.hpp"

namespace evid {

struct ComparisonReport {
  std::string provenance;
  std::size_t n = 0;
  double tol = 0.0;
  double max_abs_error = 0.0;
  double mean_abs_error = 0.0;
  std::size_t worst_row = 0;  // 0-based
  std::size_t worst_col = 0;
  /// max |row sum - 1| and max |column sum - 1| of the identity table.
  double row_sum_error = 0.0;
  double col_sum_error = 0.0;
  bool interlacing_pass = false;
  double worst_interlacing_slack = 0.0;
  /// Smallest adjacent eigenvalue gap divided by ‖A‖₂.
  double min_normalized_gap = 0.0;
  bool degenerate = false;
  bool pass = false;
  /// Set when the run raised instead of producing tables ("Kind: message").
  std::optional<std::string> failure;
};

/// |V_ij|^2 from the full eigendecomposition, rows by ascending eigenvalue.
/// Clusters (at cluster_tol, identity-core default when unset) get the same
/// even split of their column totals as the identity table.
MagnitudeTable oracle_magnitudes(const HermitianMatrix& a,
                                 std::optional<double> cluster_tol = std::nullopt);

/// Identity table against the oracle. Passes iff max_abs_error <= tol and
/// every minor interlaces at 1e-10 ‖A‖₂.
ComparisonReport compare(const HermitianMatrix& a, double tol, std::string provenance = {},
                         const TableOptions& options = {});

struct CampaignResult {
  std::vector<ComparisonReport> reports;  // same order as the specs
  std::size_t passes = 0;
  double worst_error = 0.0;
  std::string worst_provenance;
  double min_normalized_gap = 0.0;
  double gap_at_worst_error = 0.0;
};

/// Generates and compares every spec; failures are recorded, never thrown.
/// Runs concurrently on `threads` workers (0: hardware concurrency).
CampaignResult campaign(std::span<const GeneratorSpec> specs, double tol, unsigned threads = 0);

std::string report_json(const ComparisonReport& report);
std::string campaign_json(const CampaignResult& result);

}  // namespace evid
