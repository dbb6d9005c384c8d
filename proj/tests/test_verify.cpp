#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <vector>

#include "evid/verify.hpp"

using namespace evid;

TEST_CASE("oracle_magnitudes: hand-solvable cases") {
  CHECK(oracle_magnitudes(HermitianMatrix::diagonal({1, 2})).weights == std::vector<double>{1, 0, 0, 1});
  for (double w : oracle_magnitudes(HermitianMatrix::from_rows({{0, 1}, {1, 0}})).weights) {
    CHECK(w == doctest::Approx(0.5).epsilon(1e-14));
  }
  CHECK(oracle_magnitudes(HermitianMatrix::diagonal({3})).weights == std::vector<double>{1});
}

TEST_CASE("oracle_magnitudes: rows and columns of a 16x16 GOE table sum to one") {
  const auto t = oracle_magnitudes(generate({GeneratorKind::goe, 16, 2, {}}));
  for (double s : t.row_sums()) CHECK(std::abs(s - 1.0) <= 1e-10);
  for (double s : t.column_sums()) CHECK(std::abs(s - 1.0) <= 1e-10);
}

TEST_CASE("oracle_magnitudes: clusters share their column totals evenly") {
  const auto a = generate({GeneratorKind::clustered, 5, 8, {2, 3}});
  const auto t = oracle_magnitudes(a);
  REQUIRE(t.clustering.clusters.size() == 2);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(t(0, j) == t(1, j));
    CHECK(t(2, j) == t(3, j));
    CHECK(t(3, j) == t(4, j));
  }
  for (double s : t.row_sums()) CHECK(std::abs(s - 1.0) <= 1e-10 * 5);
}

TEST_CASE("compare: exact agreement on hand-solvable matrices") {
  const auto diag = compare(HermitianMatrix::diagonal({1, 2, 3}), 1e-12, "diag");
  CHECK(diag.pass);
  CHECK(diag.max_abs_error == 0.0);
  CHECK(diag.mean_abs_error == 0.0);
  CHECK(diag.interlacing_pass);
  CHECK(diag.provenance == "diag");

  const auto swap = compare(HermitianMatrix::from_rows({{0, 1}, {1, 0}}), 1e-12);
  CHECK(swap.pass);
  CHECK(swap.min_normalized_gap == doctest::Approx(2.0));
}

TEST_CASE("compare: pass flag follows the tolerance") {
  const auto a = generate({GeneratorKind::gue, 12, 3, {}});
  const auto loose = compare(a, 1e-8);
  CHECK(loose.pass);
  CHECK(loose.max_abs_error >= loose.mean_abs_error);
  CHECK(loose.mean_abs_error >= 0.0);
  CHECK(loose.row_sum_error <= 1e-8 * 12);
  CHECK(loose.col_sum_error <= 1e-8 * 12);
  if (loose.max_abs_error > 0.0) CHECK_FALSE(compare(a, loose.max_abs_error / 2).pass);
}

TEST_CASE("campaign: 100 GOE draws at n=16 all pass at 1e-8") {
  std::vector<GeneratorSpec> specs;
  for (std::uint64_t seed = 0; seed < 100; ++seed) specs.push_back({GeneratorKind::goe, 16, seed, {}});
  const auto result = campaign(specs, 1e-8);
  CHECK(result.passes == 100);
  CHECK(result.worst_error <= 1e-8);
  CHECK(result.min_normalized_gap > 0.0);
}

TEST_CASE("campaign: single diagonal spec") {
  const std::vector<GeneratorSpec> specs{{GeneratorKind::diagonal, 5, 1, {}}};
  const auto result = campaign(specs, 1e-12);
  REQUIRE(result.reports.size() == 1);
  CHECK(result.passes == 1);
  CHECK(result.worst_error == 0.0);
}

TEST_CASE("campaign: clustered (2,2) passes through the cluster path") {
  std::vector<GeneratorSpec> specs;
  for (std::uint64_t seed = 0; seed < 10; ++seed) specs.push_back({GeneratorKind::clustered, 4, seed, {2, 2}});
  const auto result = campaign(specs, 1e-6);
  CHECK(result.passes == 10);
  for (const auto& r : result.reports) CHECK(r.degenerate);
}

TEST_CASE("campaign: mixed kinds and sizes") {
  std::vector<GeneratorSpec> specs;
  for (auto kind : {GeneratorKind::goe, GeneratorKind::gue, GeneratorKind::jacobi}) {
    for (std::size_t n : {4, 8, 16, 32}) {
      for (std::uint64_t seed = 0; seed < 10; ++seed) specs.push_back({kind, n, seed, {}});
    }
  }
  const auto result = campaign(specs, 1e-8);
  CHECK(result.passes == specs.size());
  for (const auto& r : result.reports) CHECK(r.interlacing_pass);
}

TEST_CASE("campaign: failures are recorded, reports are order-stable and thread-count independent") {
  const std::vector<GeneratorSpec> specs{
      {GeneratorKind::goe, 6, 1, {}},
      {GeneratorKind::clustered, 4, 1, {3, 3}},
      {GeneratorKind::gue, 6, 2, {}},
      {GeneratorKind::goe, 1, 0, {}},
  };
  const auto serial = campaign(specs, 1e-8, 1);
  const auto parallel = campaign(specs, 1e-8, 4);
  CHECK(campaign_json(serial) == campaign_json(parallel));
  CHECK(serial.passes == 2);
  REQUIRE(serial.reports[1].failure.has_value());
  CHECK(serial.reports[1].failure->rfind("InvalidSpec", 0) == 0);
  REQUIRE(serial.reports[3].failure.has_value());
  CHECK(serial.reports[3].failure->rfind("DimensionTooSmall", 0) == 0);
  CHECK(serial.reports[2].provenance == "gue n=6 seed=2");

  const auto doc = nlohmann::json::parse(campaign_json(serial));
  CHECK(doc["runs"] == 4);
  CHECK(doc["passes"] == 2);
  CHECK(doc["reports"][0]["pass"] == true);
  CHECK(doc["reports"][0]["worst_cell"].size() == 2);
  CHECK(doc["reports"][1]["pass"] == false);
}
