#include "evid/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "evid/error.hpp"

namespace evid {

namespace {

void apply_even_split(MagnitudeTable& table) {
  for (const auto& cluster : table.clustering.clusters) {
    if (cluster.size() < 2) continue;
    for (std::size_t c = 0; c < table.width(); ++c) {
      double total = 0.0;
      for (std::size_t i : cluster) total += table(i, c);
      for (std::size_t i : cluster) table(i, c) = total / static_cast<double>(cluster.size());
    }
  }
}

double normalized_min_gap(const Spectrum& spec) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < spec.size(); ++k) gap = std::min(gap, spec[k] - spec[k - 1]);
  const double scale = spec.norm();
  return scale > 0.0 ? gap / scale : gap;
}

}  // namespace

MagnitudeTable oracle_magnitudes(const HermitianMatrix& a, std::optional<double> cluster_tol) {
  const std::size_t n = a.size();
  const SpectralDecomposition sd = spectral_decomposition(a);
  MagnitudeTable table;
  table.n = n;
  table.coordinates.resize(n);
  for (std::size_t j = 0; j < n; ++j) table.coordinates[j] = j;
  table.eigenvalues = sd.spectrum.values;
  table.weights.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) table(i, j) = std::norm(sd.vectors(i, j));
  }
  table.clustering =
      cluster_spectrum(sd.spectrum, cluster_tol.value_or(default_cluster_tolerance(sd.spectrum)));
  apply_even_split(table);
  return table;
}

ComparisonReport compare(const HermitianMatrix& a, double tol, std::string provenance,
                         const TableOptions& options) {
  ComparisonReport report;
  report.provenance = std::move(provenance);
  report.n = a.size();
  report.tol = tol;

  const IdentityRun run = magnitude_table_detailed(a, options);
  const MagnitudeTable& identity = run.table;
  const MagnitudeTable oracle = oracle_magnitudes(a, identity.clustering.tol);
  const std::size_t n = identity.n;

  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double err = std::abs(identity(i, j) - oracle(i, j));
      sum += err;
      if (err > report.max_abs_error) {
        report.max_abs_error = err;
        report.worst_row = i;
        report.worst_col = j;
      }
    }
  }
  report.mean_abs_error = sum / static_cast<double>(n * n);
  for (double s : identity.row_sums()) report.row_sum_error = std::max(report.row_sum_error, std::abs(s - 1.0));
  for (double s : identity.column_sums()) report.col_sum_error = std::max(report.col_sum_error, std::abs(s - 1.0));

  Spectrum spec_a{identity.eigenvalues, n};
  const double interlace_tol = 1e-10 * spec_a.norm();
  report.interlacing_pass = true;
  report.worst_interlacing_slack = std::numeric_limits<double>::infinity();
  for (const auto& spec_m : run.minor_spectra) {
    const auto r = check_interlacing(spec_a, spec_m, interlace_tol);
    report.interlacing_pass = report.interlacing_pass && r.pass;
    report.worst_interlacing_slack = std::min(report.worst_interlacing_slack, r.worst_slack);
  }
  report.min_normalized_gap = normalized_min_gap(spec_a);
  report.degenerate = identity.clustering.has_degenerate();
  report.pass = report.max_abs_error <= tol && report.interlacing_pass;
  return report;
}

CampaignResult campaign(std::span<const GeneratorSpec> specs, double tol, unsigned threads) {
  CampaignResult result;
  result.reports.resize(specs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < specs.size(); k = next++) {
      const std::string provenance = specs[k].describe();
      try {
        result.reports[k] = compare(generate(specs[k]), tol, provenance, TableOptions{std::nullopt, 1});
      } catch (const Error& e) {
        ComparisonReport failed;
        failed.provenance = provenance;
        failed.n = specs[k].n;
        failed.tol = tol;
        failed.failure = std::string(kind_name(e.kind())) + ": " + e.what();
        result.reports[k] = std::move(failed);
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(specs.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  result.min_normalized_gap = std::numeric_limits<double>::infinity();
  for (const auto& r : result.reports) {
    if (r.pass) ++result.passes;
    if (r.failure) continue;
    if (r.max_abs_error > result.worst_error || result.worst_provenance.empty()) {
      result.worst_error = r.max_abs_error;
      result.worst_provenance = r.provenance;
      result.gap_at_worst_error = r.min_normalized_gap;
    }
    result.min_normalized_gap = std::min(result.min_normalized_gap, r.min_normalized_gap);
  }
  return result;
}

std::string report_json(const ComparisonReport& r) {
  std::string out = "{\"provenance\":" + json_quote(r.provenance);
  out += ",\"n\":" + std::to_string(r.n);
  out += ",\"tol\":" + json_number(r.tol);
  out += ",\"pass\":" + std::string(r.pass ? "true" : "false");
  if (r.failure) {
    out += ",\"failure\":" + json_quote(*r.failure) + "}";
    return out;
  }
  out += ",\"max_abs_error\":" + json_number(r.max_abs_error);
  out += ",\"mean_abs_error\":" + json_number(r.mean_abs_error);
  out += ",\"worst_cell\":[" + std::to_string(r.worst_row + 1) + "," +
         std::to_string(r.worst_col + 1) + "]";
  out += ",\"row_sum_error\":" + json_number(r.row_sum_error);
  out += ",\"col_sum_error\":" + json_number(r.col_sum_error);
  out += ",\"interlacing_pass\":" + std::string(r.interlacing_pass ? "true" : "false");
  out += ",\"worst_interlacing_slack\":" + json_number(r.worst_interlacing_slack);
  out += ",\"min_normalized_gap\":" + json_number(r.min_normalized_gap);
  out += ",\"degenerate\":" + std::string(r.degenerate ? "true" : "false");
  out += "}";
  return out;
}

std::string campaign_json(const CampaignResult& result) {
  std::string out = "{\"runs\":" + std::to_string(result.reports.size());
  out += ",\"passes\":" + std::to_string(result.passes);
  out += ",\"worst_error\":" + json_number(result.worst_error);
  out += ",\"worst_provenance\":" + json_quote(result.worst_provenance);
  out += ",\"min_normalized_gap\":" + json_number(result.min_normalized_gap);
  out += ",\"gap_at_worst_error\":" + json_number(result.gap_at_worst_error);
  out += ",\"reports\":[";
  for (std::size_t k = 0; k < result.reports.size(); ++k) {
    if (k > 0) out += ',';
    out += report_json(result.reports[k]);
  }
  out += "]}\n";
  return out;
}

}  // namespace evid
