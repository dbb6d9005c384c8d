#include "evid/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "evid/error.hpp"

namespace evid {

namespace {

struct Token {
  std::string_view text;
  std::size_t line;
  std::size_t column;
};

[[noreturn]] void parse_fail(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorKind::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
}

// Content lines split into whitespace-separated tokens, comments dropped.
std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      tokens.push_back({line.substr(start, i - start), line_no, start + 1});
    }
    if (!tokens.empty() && tokens.front().text.front() != '%' &&
        tokens.front().text.front() != '#') {
      lines.push_back(std::move(tokens));
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double parse_real(std::string_view s, const Token& at) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    parse_fail(at.line, at.column, "invalid number '" + std::string(at.text) + "'");
  }
  if (!std::isfinite(value)) {
    parse_fail(at.line, at.column, "non-finite value '" + std::string(at.text) + "'");
  }
  return value;
}

// a, a+bi, a-bi, bi.
Complex parse_value(const Token& tok, bool complex_allowed) {
  std::string_view s = tok.text;
  if (s.back() != 'i') return {parse_real(s, tok), 0.0};
  if (!complex_allowed) {
    parse_fail(tok.line, tok.column, "complex value in a real document (add 'complex' to the header)");
  }
  s.remove_suffix(1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0.0;
  std::string_view im_text = s;
  if (split != std::string_view::npos) {
    re = parse_real(s.substr(0, split), tok);
    im_text = s.substr(split);
  }
  bool negative = false;
  if (!im_text.empty() && (im_text.front() == '+' || im_text.front() == '-')) {
    negative = im_text.front() == '-';
    im_text.remove_prefix(1);
  }
  double im = im_text.empty() ? 1.0 : parse_real(im_text, tok);
  return {re, negative ? -im : im};
}

std::size_t parse_index(const Token& tok, std::size_t n) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
  if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size()) {
    parse_fail(tok.line, tok.column, "invalid index '" + std::string(tok.text) + "'");
  }
  if (value < 1 || value > n) {
    throw Error(ErrorKind::DimensionMismatch, "line " + std::to_string(tok.line) + ": index " +
                                                  std::to_string(value) + " outside 1.." +
                                                  std::to_string(n));
  }
  return value - 1;
}

std::string format_value(const Complex& z, bool complex_doc) {
  if (!complex_doc) return format_double(z.real());
  return format_double(z.real()) + (std::signbit(z.imag()) ? "-" : "+") +
         format_double(std::abs(z.imag())) + "i";
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

HermitianMatrix parse_matrix(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty()) parse_fail(1, 1, "empty document");
  const auto& header = lines.front();
  if (header.front().text != "hermitian") {
    parse_fail(header.front().line, header.front().column, "header must start with 'hermitian'");
  }
  if (header.size() < 3 || header.size() > 4) {
    parse_fail(header.front().line, 1, "header must be 'hermitian <dense|coordinate> <n> [complex]'");
  }
  const bool dense = header[1].text == "dense";
  if (!dense && header[1].text != "coordinate") {
    parse_fail(header[1].line, header[1].column, "unknown layout '" + std::string(header[1].text) + "'");
  }
  std::size_t n = 0;
  {
    const auto& t = header[2];
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), n);
    if (ec != std::errc{} || ptr != t.text.data() + t.text.size() || n == 0) {
      parse_fail(t.line, t.column, "dimension must be a positive integer");
    }
  }
  bool complex_doc = false;
  if (header.size() == 4) {
    if (header[3].text != "complex") {
      parse_fail(header[3].line, header[3].column, "expected 'complex'");
    }
    complex_doc = true;
  }

  std::vector<Complex> x(n * n);
  if (dense) {
    if (lines.size() - 1 != n) {
      throw Error(ErrorKind::DimensionMismatch, "dense body has " + std::to_string(lines.size() - 1) +
                                                    " rows, expected " + std::to_string(n));
    }
    for (std::size_t r = 0; r < n; ++r) {
      const auto& row = lines[r + 1];
      if (row.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "line " + std::to_string(row.front().line) +
                                                      ": " + std::to_string(row.size()) +
                                                      " values, expected " + std::to_string(n));
      }
      for (std::size_t c = 0; c < n; ++c) x[r * n + c] = parse_value(row[c], complex_doc);
    }
  } else {
    std::vector<bool> seen(n * n, false);
    for (std::size_t l = 1; l < lines.size(); ++l) {
      const auto& entry = lines[l];
      if (entry.size() != 3) parse_fail(entry.front().line, 1, "expected 'row col value'");
      const std::size_t r = parse_index(entry[0], n);
      const std::size_t c = parse_index(entry[1], n);
      if (seen[r * n + c]) {
        parse_fail(entry.front().line, 1, "duplicate entry (" + std::to_string(r + 1) + "," +
                                              std::to_string(c + 1) + ")");
      }
      seen[r * n + c] = true;
      x[r * n + c] = parse_value(entry[2], complex_doc);
    }
    // An entry given on one side only stands for its mirror as well.
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (seen[r * n + c] && !seen[c * n + r]) x[c * n + r] = std::conj(x[r * n + c]);
      }
    }
  }

  double maxabs = 0.0;
  for (const auto& z : x) maxabs = std::max(maxabs, std::abs(z));
  const double tol = 1e-12 * maxabs;
  HermitianMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex lower = x[i * n + j];
      const Complex upper = x[j * n + i];
      if (std::abs(lower - std::conj(upper)) > tol) {
        throw Error(ErrorKind::NotHermitian, "entries (" + std::to_string(i + 1) + "," +
                                                 std::to_string(j + 1) + ") and (" +
                                                 std::to_string(j + 1) + "," +
                                                 std::to_string(i + 1) + ") differ");
      }
      const Complex sym = (lower + std::conj(upper)) / 2.0;
      a.set(i, j, i == j ? Complex(sym.real(), 0.0) : sym);
    }
  }
  return a;
}

HermitianMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_matrix(buffer.str());
}

std::string serialize_matrix(const HermitianMatrix& a, MatrixFormat format) {
  const std::size_t n = a.size();
  const bool complex_doc = !a.is_real();
  std::string out = "hermitian ";
  out += format == MatrixFormat::dense ? "dense " : "coordinate ";
  out += std::to_string(n);
  if (complex_doc) out += " complex";
  out += '\n';
  if (format == MatrixFormat::dense) {
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        if (c > 0) out += ' ';
        out += format_value(a(r, c), complex_doc);
      }
      out += '\n';
    }
    return out;
  }
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c <= r; ++c) {
      const Complex z = a(r, c);
      const bool positive_zero = z.real() == 0.0 && !std::signbit(z.real()) &&
                                 z.imag() == 0.0 && !std::signbit(z.imag());
      if (positive_zero) continue;
      out += std::to_string(r + 1) + ' ' + std::to_string(c + 1) + ' ' +
             format_value(z, complex_doc) + '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

enum Stream : std::uint64_t {
  kDiagonal = 0,
  kOffReal = 1,
  kOffImag = 2,
  kRotation = 3,
  kLevels = 4,
};

}  // namespace

CounterRng::CounterRng(std::uint64_t seed) : key_(mix64(seed)) {}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t index) const {
  const std::uint64_t counter = (stream << 40) | (index & ((std::uint64_t{1} << 40) - 1));
  return mix64(key_ + (counter + 1) * kGolden);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index) const {
  return (static_cast<double>(bits(stream, index) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::gaussian(std::uint64_t stream, std::uint64_t index) const {
  const double u1 = uniform(stream, 2 * index);
  const double u2 = uniform(stream, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string_view generator_kind_name(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::goe: return "goe";
    case GeneratorKind::gue: return "gue";
    case GeneratorKind::jacobi: return "jacobi";
    case GeneratorKind::diagonal: return "diagonal";
    case GeneratorKind::clustered: return "clustered";
  }
  return "unknown";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
  for (auto kind : {GeneratorKind::goe, GeneratorKind::gue, GeneratorKind::jacobi,
                    GeneratorKind::diagonal, GeneratorKind::clustered}) {
    if (generator_kind_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string GeneratorSpec::describe() const {
  std::string out = std::string(generator_kind_name(kind)) + " n=" + std::to_string(n) +
                    " seed=" + std::to_string(seed);
  if (!cluster_multiplicities.empty()) {
    out += " mult=";
    for (std::size_t k = 0; k < cluster_multiplicities.size(); ++k) {
      if (k > 0) out += ',';
      out += std::to_string(cluster_multiplicities[k]);
    }
  }
  return out;
}

namespace {

// Columns of a Gaussian matrix orthonormalized by two passes of modified
// Gram-Schmidt. Row-major n×n.
std::vector<double> random_orthogonal(const CounterRng& rng, std::size_t n) {
  std::vector<double> q(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) q[r * n + c] = rng.gaussian(kRotation, r * n + c);
  }
  for (std::size_t c = 0; c < n; ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t p = 0; p < c; ++p) {
        double dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += q[r * n + p] * q[r * n + c];
        for (std::size_t r = 0; r < n; ++r) q[r * n + c] -= dot * q[r * n + p];
      }
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += q[r * n + c] * q[r * n + c];
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) q[r * n + c] /= norm;
  }
  return q;
}

void validate(const GeneratorSpec& spec) {
  if (spec.n == 0) throw Error(ErrorKind::InvalidSpec, "n must be positive");
  if (spec.n >= (std::size_t{1} << 19)) throw Error(ErrorKind::InvalidSpec, "n too large");
  if (spec.kind != GeneratorKind::clustered) {
    if (!spec.cluster_multiplicities.empty()) {
      throw Error(ErrorKind::InvalidSpec, "multiplicities apply only to the clustered kind");
    }
    return;
  }
  if (spec.cluster_multiplicities.empty()) {
    throw Error(ErrorKind::InvalidSpec, "clustered kind needs cluster multiplicities");
  }
  std::size_t total = 0;
  for (std::size_t m : spec.cluster_multiplicities) {
    if (m == 0) throw Error(ErrorKind::InvalidSpec, "multiplicities must be positive");
    total += m;
  }
  if (total != spec.n) {
    throw Error(ErrorKind::InvalidSpec, "multiplicities sum to " + std::to_string(total) +
                                            ", expected n = " + std::to_string(spec.n));
  }
}

}  // namespace

HermitianMatrix generate(const GeneratorSpec& spec) {
  validate(spec);
  const std::size_t n = spec.n;
  const CounterRng rng(spec.seed);
  HermitianMatrix a(n);
  const double half = std::sqrt(0.5);

  switch (spec.kind) {
    case GeneratorKind::goe:
    case GeneratorKind::gue: {
      const bool complex = spec.kind == GeneratorKind::gue;
      for (std::size_t i = 0; i < n; ++i) {
        a.set(i, i, rng.gaussian(kDiagonal, i * n + i));
        for (std::size_t j = 0; j < i; ++j) {
          const double re = half * rng.gaussian(kOffReal, i * n + j);
          const double im = complex ? half * rng.gaussian(kOffImag, i * n + j) : 0.0;
          a.set(i, j, {re, im});
        }
      }
      break;
    }
    case GeneratorKind::jacobi: {
      for (std::size_t i = 0; i < n; ++i) {
        a.set(i, i, 0.1 * rng.gaussian(kDiagonal, i));
        if (i + 1 < n) {
          const double skeleton = std::sqrt(static_cast<double>((i + 1) * (n - 1 - i)));
          const double jitter = 1.0 + 0.02 * (rng.uniform(kOffReal, i) - 0.5);
          a.set(i + 1, i, skeleton * jitter);
        }
      }
      break;
    }
    case GeneratorKind::diagonal: {
      double value = rng.gaussian(kDiagonal, 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0) value += 0.5 + rng.uniform(kOffReal, i);
        a.set(i, i, value);
      }
      break;
    }
    case GeneratorKind::clustered: {
      std::vector<double> levels;
      double value = rng.gaussian(kLevels, 0);
      for (std::size_t c = 0; c < spec.cluster_multiplicities.size(); ++c) {
        if (c > 0) value += 1.0 + rng.uniform(kLevels, c + 1);
        levels.insert(levels.end(), spec.cluster_multiplicities[c], value);
      }
      const auto q = random_orthogonal(rng, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k) s += q[i * n + k] * levels[k] * q[j * n + k];
          a.set(i, j, s);
        }
      }
      break;
    }
  }
  return a;
}

// ---------------------------------------------------------------------------

std::string json_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(ch));
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out + "\"";
}

std::string json_number(double x) { return std::isfinite(x) ? format_double(x) : "null"; }

std::string write_table(const MagnitudeTable& table, TableFormat format,
                        const EigenClustering* clustering_metadata) {
  std::string out;
  if (format == TableFormat::csv) {
    out = "lambda";
    for (std::size_t j : table.coordinates) out += ",coord_" + std::to_string(j + 1);
    out += '\n';
    for (std::size_t i = 0; i < table.n; ++i) {
      out += format_double(table.eigenvalues[i]);
      for (std::size_t c = 0; c < table.width(); ++c) out += ',' + format_double(table(i, c));
      out += '\n';
    }
    return out;
  }

  out = "{\"eigenvalues\":[";
  for (std::size_t i = 0; i < table.n; ++i) {
    if (i > 0) out += ',';
    out += json_number(table.eigenvalues[i]);
  }
  out += "],\"coordinates\":[";
  for (std::size_t c = 0; c < table.width(); ++c) {
    if (c > 0) out += ',';
    out += std::to_string(table.coordinates[c] + 1);
  }
  out += "],\"weights\":[";
  for (std::size_t i = 0; i < table.n; ++i) {
    if (i > 0) out += ',';
    out += '[';
    for (std::size_t c = 0; c < table.width(); ++c) {
      if (c > 0) out += ',';
      out += json_number(table(i, c));
    }
    out += ']';
  }
  out += "],\"clusters\":[";
  if (clustering_metadata != nullptr) {
    bool first = true;
    for (std::size_t k = 0; k < clustering_metadata->clusters.size(); ++k) {
      const auto& cluster = clustering_metadata->clusters[k];
      if (cluster.size() < 2) continue;
      if (!first) out += ',';
      first = false;
      out += "{\"rows\":[";
      for (std::size_t t = 0; t < cluster.size(); ++t) {
        if (t > 0) out += ',';
        out += std::to_string(cluster[t] + 1);
      }
      out += "],\"representative\":" + json_number(clustering_metadata->representatives[k]) +
             ",\"tol\":" + json_number(clustering_metadata->tol) + ",\"split\":\"even\"}";
    }
  }
  out += "]}\n";
  return out;
}

MagnitudeTable parse_table_csv(std::string_view text) {
  std::vector<std::vector<std::string_view>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      cells.push_back(line.substr(start, comma == std::string_view::npos ? line.size() - start
                                                                          : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  if (rows.empty() || rows.front().empty() || rows.front().front() != "lambda") {
    parse_fail(1, 1, "table header must start with 'lambda'");
  }
  MagnitudeTable table;
  const auto& header = rows.front();
  for (std::size_t c = 1; c < header.size(); ++c) {
    std::string_view cell = header[c];
    if (cell.substr(0, 6) != "coord_") parse_fail(1, c + 1, "expected coord_<j>");
    const Token tok{cell.substr(6), 1, c + 1};
    table.coordinates.push_back(parse_index(tok, std::size_t(-1) - 1));
  }
  table.n = rows.size() - 1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != header.size()) {
      throw Error(ErrorKind::DimensionMismatch, "table row " + std::to_string(r + 1) +
                                                    " has the wrong number of cells");
    }
    table.eigenvalues.push_back(parse_real(rows[r][0], Token{rows[r][0], r + 1, 1}));
    for (std::size_t c = 1; c < rows[r].size(); ++c) {
      table.weights.push_back(parse_real(rows[r][c], Token{rows[r][c], r + 1, c + 1}));
    }
  }
  return table;
}

}  // namespace evid
