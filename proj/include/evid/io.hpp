#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evid/identity.hpp"
#include "evid/matrix.hpp"

namespace evid {

// ---------------------------------------------------------------------------
// Matrix text format
//
//   hermitian <dense|coordinate> <n> [complex]
//
// dense: n rows of n whitespace-separated values.
// coordinate: "row col value" lines, 1-indexed, lower triangle; missing
// entries are zero. An upper-triangle entry stands for its mirror.
// Complex values are written a+bi / a-bi. Blank lines and lines starting
// with '%' or '#' are ignored.
// ---------------------------------------------------------------------------

enum class MatrixFormat { dense, coordinate };

HermitianMatrix parse_matrix(std::string_view text);
HermitianMatrix read_matrix_file(const std::filesystem::path& path);
std::string serialize_matrix(const HermitianMatrix& a, MatrixFormat format);

/// printf "%.17g": 17 significant digits, round-trips every finite double.
std::string format_double(double x);

// ---------------------------------------------------------------------------
// Counter-based random source
//
// bits(c) = mix64(mix64(seed) + (c + 1) * 0x9E3779B97F4A7C15), mix64 being the
// SplitMix64 finalizer. Each draw is a pure function of (seed, stream, index),
// so the order in which entries are generated never changes the output.
// ---------------------------------------------------------------------------

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed);

  std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const;
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform(std::uint64_t stream, std::uint64_t index) const;
  /// Standard normal by Box-Muller from uniforms 2*index and 2*index+1.
  double gaussian(std::uint64_t stream, std::uint64_t index) const;

 private:
  std::uint64_t key_;
};

enum class GeneratorKind { goe, gue, jacobi, diagonal, clustered };

std::string_view generator_kind_name(GeneratorKind kind);
std::optional<GeneratorKind> parse_generator_kind(std::string_view name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::goe;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  std::vector<std::size_t> cluster_multiplicities;

  std::string describe() const;
};

/// goe:       diagonal N(0,1), off-diagonal N(0,1/2).
/// gue:       diagonal N(0,1), off-diagonal real and imaginary parts N(0,1/2).
/// jacobi:    tridiagonal, diagonal 0.1*N(0,1), off-diagonal
///            sqrt(k(n-k)) * (1 + 0.02*(U - 1/2)); nearly equispaced spectrum.
/// diagonal:  strictly increasing diagonal with steps 0.5 + U.
/// clustered: Q diag(D) Q^T with Q Haar-like orthogonal (Gram-Schmidt on a
///            Gaussian matrix) and D repeating one value per multiplicity.
/// Throws InvalidSpec on n = 0 or bad multiplicities.
HermitianMatrix generate(const GeneratorSpec& spec);

// ---------------------------------------------------------------------------
// Table emission
// ---------------------------------------------------------------------------

enum class TableFormat { csv, json };

/// csv:  "lambda,coord_<j>..." header, one row per eigenvalue.
/// json: {"eigenvalues":[...],"coordinates":[...],"weights":[[...]],"clusters":[...]}
/// Only clusters with two or more members are listed; a null metadata pointer
/// yields an empty list.
std::string write_table(const MagnitudeTable& table, TableFormat format,
                        const EigenClustering* clustering_metadata);

/// Reads back the CSV emitted by write_table.
MagnitudeTable parse_table_csv(std::string_view text);

/// JSON string literal with the minimal escapes.
std::string json_quote(std::string_view s);
/// format_double for finite values, null otherwise.
std::string json_number(double x);

}  // namespace evid
