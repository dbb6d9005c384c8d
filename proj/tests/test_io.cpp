#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <set>

#include "evid/error.hpp"
#include "evid/io.hpp"

using namespace evid;

namespace {

template <class F>
const Error capture(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e;
  }
  FAIL("expected an evid::Error");
  return Error(ErrorKind::InvalidSpec, "");
}

bool bit_identical(const HermitianMatrix& a, const HermitianMatrix& b) {
  return a.size() == b.size() &&
         std::memcmp(a.entries().data(), b.entries().data(), a.entries().size() * sizeof(Complex)) == 0;
}

}  // namespace

TEST_CASE("parse_matrix: dense swap matrix") {
  const auto a = parse_matrix("hermitian dense 2\n0 1\n1 0\n");
  CHECK(a == HermitianMatrix::from_rows({{0, 1}, {1, 0}}));
}

TEST_CASE("parse_matrix: coordinate lower triangle") {
  const auto a = parse_matrix("hermitian coordinate 3\n1 1 1\n2 2 2\n3 3 3\n");
  CHECK(a == HermitianMatrix::diagonal({1, 2, 3}));

  const auto b = parse_matrix("% comment\nhermitian coordinate 2 complex\n\n2 1 1+2i\n# another\n1 2 1-2i\n");
  CHECK(b(1, 0) == Complex(1, 2));
  CHECK(b(0, 1) == Complex(1, -2));
}

TEST_CASE("parse_matrix: complex value spellings") {
  const auto a = parse_matrix(
      "hermitian dense 3 complex\n"
      "1 -2i 3e-2-1e+1i\n"
      "+2i 2.5 0\n"
      "0.03+10i 0 -1\n");
  CHECK(a(0, 1) == Complex(0, -2));
  CHECK(a(0, 2) == Complex(0.03, -10));
  CHECK(a(2, 0) == Complex(0.03, 10));
  CHECK(a(1, 1) == Complex(2.5, 0));
}

TEST_CASE("parse_matrix: near-Hermitian input is symmetrized, far is rejected") {
  const auto a = parse_matrix("hermitian dense 2\n1 2\n2.0000000000001 1\n");
  CHECK(a(0, 1) == a(1, 0));
  CHECK(a(0, 1).real() == doctest::Approx(2.00000000000005));

  const auto e = capture([] { (void)parse_matrix("hermitian dense 2\n1 2\n3 1\n"); });
  CHECK(e.kind() == ErrorKind::NotHermitian);
  CHECK(std::string(e.what()).find("(2,1)") != std::string::npos);

  const auto d = capture([] { (void)parse_matrix("hermitian dense 1 complex\n1+1i\n"); });
  CHECK(d.kind() == ErrorKind::NotHermitian);
}

TEST_CASE("parse_matrix: malformed documents") {
  auto kind = [](std::string_view text) { return capture([&] { (void)parse_matrix(text); }).kind(); };
  CHECK(kind("") == ErrorKind::ParseError);
  CHECK(kind("symmetric dense 2\n1 0\n0 1\n") == ErrorKind::ParseError);
  CHECK(kind("hermitian banded 2\n") == ErrorKind::ParseError);
  CHECK(kind("hermitian dense 0\n") == ErrorKind::ParseError);
  CHECK(kind("hermitian dense 2\n1 0\n0 1\n0 0\n") == ErrorKind::DimensionMismatch);
  CHECK(kind("hermitian dense 2\n1 0 0\n0 1\n") == ErrorKind::DimensionMismatch);
  CHECK(kind("hermitian dense 2\n1 0\n0 1+1i\n") == ErrorKind::ParseError);
  CHECK(kind("hermitian dense 2\n1 x\nx 1\n") == ErrorKind::ParseError);
  CHECK(kind("hermitian dense 1\ninf\n") == ErrorKind::ParseError);
  CHECK(kind("hermitian coordinate 2\n3 1 1\n") == ErrorKind::DimensionMismatch);
  CHECK(kind("hermitian coordinate 2\n1 1 1\n1 1 2\n") == ErrorKind::ParseError);
  CHECK(kind("hermitian coordinate 2\n1 1\n") == ErrorKind::ParseError);

  const auto e = capture([] { (void)parse_matrix("hermitian dense 2\n1 0\n0 1.5.2\n"); });
  CHECK(std::string(e.what()).rfind("line 3, column 3:", 0) == 0);
}

TEST_CASE("serialize_matrix: fixed layouts") {
  CHECK(serialize_matrix(HermitianMatrix::diagonal({1, 2}), MatrixFormat::dense) == "hermitian dense 2\n1 0\n0 2\n");
  CHECK(serialize_matrix(HermitianMatrix::diagonal({4.5}), MatrixFormat::coordinate) ==
        "hermitian coordinate 1\n1 1 4.5\n");
  HermitianMatrix c(2);
  c.set(0, 0, 1.0);
  c.set(1, 0, Complex(0.1, -3));
  CHECK(serialize_matrix(c, MatrixFormat::coordinate) ==
        "hermitian coordinate 2 complex\n1 1 1+0i\n2 1 0.10000000000000001-3i\n");
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-0.0) == "-0");
}

TEST_CASE("serialize/parse round trip is bit-exact (seed 5, every kind and layout)") {
  for (auto kind : {GeneratorKind::goe, GeneratorKind::gue, GeneratorKind::jacobi, GeneratorKind::diagonal}) {
    for (std::size_t n : {1, 5, 12}) {
      const auto a = generate({kind, n, 5, {}});
      for (auto layout : {MatrixFormat::dense, MatrixFormat::coordinate}) {
        const std::string text = serialize_matrix(a, layout);
        const auto back = parse_matrix(text);
        CHECK(bit_identical(a, back));
        CHECK(serialize_matrix(back, layout) == text);
      }
    }
  }
}

TEST_CASE("CounterRng: values match an independent SplitMix64 reference") {
  CHECK(CounterRng(0).bits(0, 0) == 0xe220a8397b1dcdafULL);
  CHECK(CounterRng(0).bits(0, 1) == 0x6e789e6aa1b965f4ULL);
  CHECK(CounterRng(42).bits(3, 7) == 0x18bc6fd47cc55a95ULL);
  CHECK(CounterRng(~0ULL).bits(1, 12345) == 0xddabfc2b47489763ULL);
  CHECK(CounterRng(0).uniform(0, 0) == 0.8833108082136427);
  CHECK(CounterRng(42).uniform(3, 7) == 0.09662531793289503);
}

TEST_CASE("CounterRng: gaussian draws have unit variance") {
  const CounterRng rng(2024);
  double sum = 0.0, sum2 = 0.0;
  const int count = 200000;
  for (int k = 0; k < count; ++k) {
    const double g = rng.gaussian(0, k);
    sum += g;
    sum2 += g * g;
  }
  CHECK(std::abs(sum / count) < 0.01);
  CHECK(std::abs(sum2 / count - 1.0) < 0.02);
}

TEST_CASE("generate: kind contracts") {
  const auto d = generate({GeneratorKind::diagonal, 3, 77, {}});
  CHECK(d(0, 1) == 0.0);
  CHECK(d(0, 0).real() < d(1, 1).real());
  CHECK(d(1, 1).real() < d(2, 2).real());

  const auto j = generate({GeneratorKind::jacobi, 6, 3, {}});
  CHECK(j.is_real());
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = 0; c < r; ++c) {
      if (r == c + 1) {
        CHECK(j(r, c).real() > 0.0);
      } else {
        CHECK(j(r, c) == 0.0);
      }
    }
  }

  const auto g = generate({GeneratorKind::gue, 5, 3, {}});
  CHECK_FALSE(g.is_real());
  CHECK(generate({GeneratorKind::goe, 5, 3, {}}).is_real());
}

TEST_CASE("generate: identical specs give bit-identical matrices") {
  for (auto kind : {GeneratorKind::goe, GeneratorKind::gue, GeneratorKind::jacobi, GeneratorKind::diagonal}) {
    CHECK(bit_identical(generate({kind, 4, 1, {}}), generate({kind, 4, 1, {}})));
    CHECK_FALSE(generate({kind, 4, 1, {}}) == generate({kind, 4, 2, {}}));
  }
  CHECK(bit_identical(generate({GeneratorKind::clustered, 4, 1, {2, 2}}),
                      generate({GeneratorKind::clustered, 4, 1, {2, 2}})));
}

TEST_CASE("generate: clustered (2,2) has two double eigenvalues") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = generate({GeneratorKind::clustered, 4, seed, {2, 2}});
    const auto spec = eigenvalues(a);
    CHECK(std::abs(spec[1] - spec[0]) <= 1e-10);
    CHECK(std::abs(spec[3] - spec[2]) <= 1e-10);
    CHECK(spec[2] - spec[1] > 1.0);
  }
}

TEST_CASE("generate: invalid specs") {
  auto kind = [](GeneratorSpec s) { return capture([&] { (void)generate(s); }).kind(); };
  CHECK(kind({GeneratorKind::goe, 0, 1, {}}) == ErrorKind::InvalidSpec);
  CHECK(kind({GeneratorKind::clustered, 4, 1, {}}) == ErrorKind::InvalidSpec);
  CHECK(kind({GeneratorKind::clustered, 4, 1, {2, 1}}) == ErrorKind::InvalidSpec);
  CHECK(kind({GeneratorKind::clustered, 4, 1, {4, 0}}) == ErrorKind::InvalidSpec);
  CHECK(kind({GeneratorKind::goe, 4, 1, {2, 2}}) == ErrorKind::InvalidSpec);
  CHECK(parse_generator_kind("gue") == GeneratorKind::gue);
  CHECK_FALSE(parse_generator_kind("wishart").has_value());
}

TEST_CASE("write_table: CSV and JSON layouts") {
  const auto table = magnitude_table(HermitianMatrix::diagonal({5, 7}));
  CHECK(write_table(table, TableFormat::csv, nullptr) == "lambda,coord_1,coord_2\n5,1,0\n7,0,1\n");

  const std::string json = write_table(table, TableFormat::json, nullptr);
  CHECK(json == "{\"eigenvalues\":[5,7],\"coordinates\":[1,2],\"weights\":[[1,0],[0,1]],\"clusters\":[]}\n");
  const auto doc = nlohmann::json::parse(json);
  CHECK(doc["clusters"].empty());

  const auto clustered = magnitude_table(generate({GeneratorKind::clustered, 4, 3, {2, 2}}));
  const auto cdoc = nlohmann::json::parse(write_table(clustered, TableFormat::json, &clustered.clustering));
  REQUIRE(cdoc["clusters"].size() == 2);
  CHECK(cdoc["clusters"][0]["rows"] == nlohmann::json::array({1, 2}));
  CHECK(cdoc["clusters"][1]["rows"] == nlohmann::json::array({3, 4}));
  CHECK(cdoc["clusters"][0]["split"] == "even");
  CHECK(cdoc["weights"].size() == 4);
}

TEST_CASE("write_table: CSV parses back to the same doubles") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto table = magnitude_table(generate({GeneratorKind::gue, 9, seed, {}}));
    const std::string csv = write_table(table, TableFormat::csv, &table.clustering);
    CHECK(write_table(table, TableFormat::csv, &table.clustering) == csv);
    const auto back = parse_table_csv(csv);
    CHECK(back.n == table.n);
    CHECK(back.coordinates == table.coordinates);
    CHECK(back.eigenvalues == table.eigenvalues);
    CHECK(back.weights == table.weights);
  }
}
