#include "evid/identity.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "evid/error.hpp"
#include "evid/signed_log.hpp"

namespace evid {

namespace {

constexpr double kNegativeSlack = 1e-9;

void require_minor_of(const Spectrum& spec_a, const Spectrum& spec_m) {
  if (spec_a.size() == 0 || spec_m.size() + 1 != spec_a.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "minor spectrum has " + std::to_string(spec_m.size()) +
                    " values, expected " + std::to_string(spec_a.size()) + " - 1");
  }
}

// Ratios in [-1e-9, 0) are rounding noise; below that the spectra cannot come
// from a matrix and its minor.
double clamp_weight(double ratio, const std::string& where) {
  if (std::isnan(ratio)) {
    throw Error(ErrorKind::NegativeWeight, where + ": weight is NaN");
  }
  if (ratio < -kNegativeSlack) {
    throw Error(ErrorKind::NegativeWeight,
                where + ": weight " + std::to_string(ratio) +
                    " is negative; spectra are inconsistent");
  }
  return std::clamp(ratio, 0.0, 1.0);
}

double ratio_value(const SignedLogValue& num, const SignedLogValue& den) {
  if (num.is_zero) return 0.0;
  return (num / den).value();
}

}  // namespace

bool EigenClustering::has_degenerate() const noexcept {
  return std::any_of(clusters.begin(), clusters.end(),
                     [](const auto& c) { return c.size() > 1; });
}

std::vector<double> MagnitudeTable::column(std::size_t c) const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (*this)(i, c);
  return out;
}

std::vector<double> MagnitudeTable::row_sums() const {
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < width(); ++c) out[i] += (*this)(i, c);
  }
  return out;
}

std::vector<double> MagnitudeTable::column_sums() const {
  std::vector<double> out(width(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < width(); ++c) out[c] += (*this)(i, c);
  }
  return out;
}

double default_cluster_tolerance(const Spectrum& spec) {
  return 1e-8 * std::max(1.0, spec.norm());
}

HermitianMatrix principal_minor(const HermitianMatrix& a, std::size_t j) {
  const std::size_t n = a.size();
  if (n < 2) {
    throw Error(ErrorKind::DimensionTooSmall, "principal minor requires n >= 2");
  }
  if (j >= n) {
    throw Error(ErrorKind::DimensionMismatch, "coordinate " + std::to_string(j + 1) +
                                                  " out of range 1.." + std::to_string(n));
  }
  HermitianMatrix m(n - 1);
  for (std::size_t r = 0, mr = 0; r < n; ++r) {
    if (r == j) continue;
    for (std::size_t c = 0, mc = 0; c <= r; ++c) {
      if (c == j) continue;
      m.set(mr, mc, a(r, c));
      ++mc;
    }
    ++mr;
  }
  return m;
}

double magnitude_squared(const Spectrum& spec_a, const Spectrum& spec_m, std::size_t i,
                         std::optional<double> tol) {
  require_minor_of(spec_a, spec_m);
  const std::size_t n = spec_a.size();
  if (i >= n) {
    throw Error(ErrorKind::DimensionMismatch, "eigenvalue index out of range");
  }
  const double threshold = tol.value_or(default_cluster_tolerance(spec_a));
  const double lambda = spec_a[i];

  std::vector<double> gaps;
  gaps.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == i) continue;
    const double gap = lambda - spec_a[k];
    if (std::abs(gap) <= threshold) {
      throw Error(ErrorKind::DegenerateEigenvalue,
                  "eigenvalue " + std::to_string(i + 1) + " is within " +
                      std::to_string(threshold) + " of eigenvalue " + std::to_string(k + 1));
    }
    gaps.push_back(gap);
  }
  const SignedLogValue den = signed_log_product(gaps);

  gaps.clear();
  for (std::size_t k = 0; k + 1 < n; ++k) gaps.push_back(lambda - spec_m[k]);
  const SignedLogValue num = signed_log_product(gaps);

  return clamp_weight(ratio_value(num, den), "eigenvalue " + std::to_string(i + 1));
}

EigenClustering cluster_spectrum(const Spectrum& spec, double tol) {
  EigenClustering out;
  out.tol = tol;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (k == 0 || spec[k] - spec[k - 1] > tol) out.clusters.emplace_back();
    out.clusters.back().push_back(k);
  }
  out.representatives.reserve(out.clusters.size());
  for (const auto& c : out.clusters) {
    double sum = 0.0;
    for (std::size_t k : c) sum += spec[k];
    out.representatives.push_back(sum / static_cast<double>(c.size()));
  }
  return out;
}

double cluster_weight(const Spectrum& spec_a, const Spectrum& spec_m,
                      std::span<const std::size_t> cluster, double tol) {
  require_minor_of(spec_a, spec_m);
  if (cluster.empty()) {
    throw Error(ErrorKind::DimensionMismatch, "empty cluster");
  }
  const std::size_t n = spec_a.size();
  const std::size_t m = cluster.size();
  const std::size_t first = cluster.front();
  for (std::size_t t = 0; t < m; ++t) {
    if (cluster[t] != first + t || cluster[t] >= n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "cluster must be a contiguous range of eigenvalue indices");
    }
  }
  double center = 0.0;
  for (std::size_t k : cluster) center += spec_a[k];
  center /= static_cast<double>(m);

  // The m-1 minor eigenvalues nearest the cluster cancel against the m-1
  // vanishing gaps inside the cluster. Ties go to the smaller index.
  std::vector<std::size_t> by_distance(spec_m.size());
  std::iota(by_distance.begin(), by_distance.end(), std::size_t{0});
  std::stable_sort(by_distance.begin(), by_distance.end(), [&](std::size_t x, std::size_t y) {
    return std::abs(spec_m[x] - center) < std::abs(spec_m[y] - center);
  });
  const double reach = static_cast<double>(m) * tol + 1e-9 * spec_a.norm();
  std::vector<bool> matched(spec_m.size(), false);
  for (std::size_t t = 0; t + 1 < m; ++t) {
    const std::size_t k = by_distance[t];
    if (std::abs(spec_m[k] - center) > reach) {
      throw Error(ErrorKind::MatchingFailure,
                  "only " + std::to_string(t) + " minor eigenvalues within " +
                      std::to_string(reach) + " of cluster at " + std::to_string(center) +
                      ", need " + std::to_string(m - 1));
    }
    matched[k] = true;
  }

  std::vector<double> gaps;
  gaps.reserve(n);
  for (std::size_t k = 0; k < spec_m.size(); ++k) {
    if (!matched[k]) gaps.push_back(center - spec_m[k]);
  }
  const SignedLogValue num = signed_log_product(gaps);

  gaps.clear();
  for (std::size_t k = 0; k < n; ++k) {
    if (k < first || k >= first + m) gaps.push_back(center - spec_a[k]);
  }
  const SignedLogValue den = signed_log_product(gaps);
  if (den.is_zero) {
    throw Error(ErrorKind::DegenerateEigenvalue,
                "cluster at " + std::to_string(center) + " touches another eigenvalue");
  }
  return clamp_weight(ratio_value(num, den), "cluster at " + std::to_string(center));
}

std::vector<double> column_weights(const Spectrum& spec_a, const Spectrum& spec_m,
                                   const EigenClustering& clustering) {
  std::vector<double> out(spec_a.size(), 0.0);
  for (const auto& cluster : clustering.clusters) {
    if (cluster.size() == 1) {
      out[cluster.front()] = magnitude_squared(spec_a, spec_m, cluster.front(), clustering.tol);
      continue;
    }
    const double share = cluster_weight(spec_a, spec_m, cluster, clustering.tol) /
                         static_cast<double>(cluster.size());
    for (std::size_t k : cluster) out[k] = share;
  }
  return out;
}

namespace {

MagnitudeTable empty_table(const Spectrum& spec_a, double tol) {
  MagnitudeTable table;
  table.n = spec_a.size();
  table.eigenvalues = spec_a.values;
  table.clustering = cluster_spectrum(spec_a, tol);
  return table;
}

}  // namespace

IdentityRun magnitude_table_detailed(const HermitianMatrix& a, const TableOptions& options) {
  const std::size_t n = a.size();
  if (n < 2) {
    throw Error(ErrorKind::DimensionTooSmall, "magnitude table requires n >= 2");
  }
  const Spectrum spec_a = eigenvalues(a);
  IdentityRun run;
  run.table = empty_table(spec_a, options.cluster_tol.value_or(default_cluster_tolerance(spec_a)));
  MagnitudeTable& table = run.table;
  table.coordinates.resize(n);
  std::iota(table.coordinates.begin(), table.coordinates.end(), std::size_t{0});
  table.weights.assign(n * n, 0.0);
  run.minor_spectra.resize(n);

  // Columns are independent; each worker writes only its own column and the
  // lowest failing column decides which error is reported.
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < n; j = next++) {
      try {
        run.minor_spectra[j] = eigenvalues(principal_minor(a, j));
        const auto col = column_weights(spec_a, run.minor_spectra[j], table.clustering);
        for (std::size_t i = 0; i < n; ++i) table.weights[i * n + j] = col[i];
      } catch (...) {
        failures[j] = std::current_exception();
      }
    }
  };
  unsigned threads = options.threads != 0 ? options.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return run;
}

MagnitudeTable magnitude_table(const HermitianMatrix& a, const TableOptions& options) {
  return magnitude_table_detailed(a, options).table;
}

MagnitudeTable magnitude_column(const HermitianMatrix& a, std::size_t j,
                                std::optional<double> cluster_tol) {
  const Spectrum spec_a = eigenvalues(a);
  const Spectrum spec_m = eigenvalues(principal_minor(a, j));
  MagnitudeTable table =
      empty_table(spec_a, cluster_tol.value_or(default_cluster_tolerance(spec_a)));
  table.coordinates = {j};
  table.weights = column_weights(spec_a, spec_m, table.clustering);
  return table;
}

namespace {

double nearest_pole(const Spectrum& spec_a, double lambda) {
  double gap = std::numeric_limits<double>::infinity();
  for (double v : spec_a.values) gap = std::min(gap, std::abs(lambda - v));
  return gap;
}

void require_off_pole(const Spectrum& spec_a, double lambda, double gap) {
  if (gap <= 1e-14 * spec_a.norm()) {
    throw Error(ErrorKind::PoleEvaluation,
                "lambda " + std::to_string(lambda) + " coincides with an eigenvalue");
  }
}

}  // namespace

ResolventSample resolvent_det_form(const Spectrum& spec_a, const Spectrum& spec_m,
                                   double lambda) {
  require_minor_of(spec_a, spec_m);
  ResolventSample out{lambda, 0.0, nearest_pole(spec_a, lambda)};
  require_off_pole(spec_a, lambda, out.nearest_pole_gap);
  std::vector<double> gaps;
  gaps.reserve(spec_a.size());
  for (double v : spec_m.values) gaps.push_back(v - lambda);
  const SignedLogValue num = signed_log_product(gaps);
  gaps.clear();
  for (double v : spec_a.values) gaps.push_back(v - lambda);
  out.value = ratio_value(num, signed_log_product(gaps));
  return out;
}

ResolventSample resolvent_pf_form(std::span<const double> weights, const Spectrum& spec_a,
                                  double lambda) {
  if (weights.size() != spec_a.size()) {
    throw Error(ErrorKind::DimensionMismatch, "weight column and spectrum differ in length");
  }
  ResolventSample out{lambda, 0.0, nearest_pole(spec_a, lambda)};
  require_off_pole(spec_a, lambda, out.nearest_pole_gap);
  std::vector<double> terms(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) terms[i] = weights[i] / (spec_a[i] - lambda);
  std::stable_sort(terms.begin(), terms.end(),
                   [](double x, double y) { return std::abs(x) < std::abs(y); });
  for (double t : terms) out.value += t;
  return out;
}

InterlacingReport check_interlacing(const Spectrum& spec_a, const Spectrum& spec_m,
                                    double tol) {
  require_minor_of(spec_a, spec_m);
  InterlacingReport report;
  report.tol = tol;
  report.worst_slack = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < spec_m.size(); ++k) {
    const double below = spec_m[k] - spec_a[k];
    const double above = spec_a[k + 1] - spec_m[k];
    const double slack = std::min(below, above);
    if (slack < report.worst_slack) {
      report.worst_slack = slack;
      report.worst_index = k;
    }
  }
  if (spec_m.size() == 0) report.worst_slack = 0.0;
  report.pass = report.worst_slack >= -tol;
  return report;
}

}  // namespace evid
