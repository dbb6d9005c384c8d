#include "evid/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <vector>

#include "evid/identity.hpp"
#include "evid/io.hpp"
#include "evid/verify.hpp"

namespace evid::cli {

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::NotHermitian:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::InvalidSpec:
    case ErrorKind::DimensionTooSmall:
      return kExitUsage;
    case ErrorKind::ConvergenceFailure:
    case ErrorKind::NegativeWeight:
    case ErrorKind::MatchingFailure:
    case ErrorKind::DegenerateEigenvalue:
    case ErrorKind::PoleEvaluation:
      return kExitNumerical;
  }
  return kExitNumerical;
}

namespace {

struct Options {
  std::string file;
  std::size_t col = 0;  // 1-based, 0 = unset
  std::optional<double> tol;
  std::optional<double> cluster_tol;
  std::string format = "csv";
  std::string form = "both";
  double from = 0.0;
  double to = 0.0;
  std::size_t samples = 0;
  std::string kind;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> mult;
  std::string layout = "dense";
  std::string output;
  unsigned threads = 0;
};

std::size_t coordinate(const HermitianMatrix& a, std::size_t col) {
  if (col < 1 || col > a.size()) {
    throw Error(ErrorKind::DimensionMismatch, "--col " + std::to_string(col) + " outside 1.." +
                                                  std::to_string(a.size()));
  }
  return col - 1;
}

GeneratorSpec generator_spec(const Options& o) {
  const auto kind = parse_generator_kind(o.kind);
  if (!kind) throw Error(ErrorKind::InvalidSpec, "unknown generator kind '" + o.kind + "'");
  return GeneratorSpec{*kind, o.n, o.seed, o.mult};
}

int run_magnitudes(const Options& o, std::ostream& out) {
  const HermitianMatrix a = read_matrix_file(o.file);
  MagnitudeTable table;
  if (o.col != 0) {
    table = magnitude_column(a, coordinate(a, o.col), o.cluster_tol);
  } else {
    table = magnitude_table(a, TableOptions{o.cluster_tol, o.threads});
  }
  const auto format = o.format == "json" ? TableFormat::json : TableFormat::csv;
  out << write_table(table, format, &table.clustering);
  return kExitOk;
}

int run_resolvent(const Options& o, std::ostream& out) {
  const HermitianMatrix a = read_matrix_file(o.file);
  const std::size_t j = coordinate(a, o.col);
  const bool want_det = o.form != "pf";
  const bool want_pf = o.form != "det";

  const MagnitudeTable column = magnitude_column(a, j, o.cluster_tol);
  const Spectrum spec_a{column.eigenvalues, a.size()};
  const Spectrum spec_m = eigenvalues(principal_minor(a, j));
  const std::vector<double> weights = column.column(0);

  const double spread = spec_a.spread();
  const double skip_below = 1e-9 * (spread > 0.0 ? spread : std::max(1.0, spec_a.norm()));
  out << "lambda,det_form,pf_form,nearest_pole_gap\n";
  for (std::size_t k = 0; k < o.samples; ++k) {
    const double lambda =
        (o.samples == 1 || k == 0) ? o.from
        : k + 1 == o.samples       ? o.to
                                   : o.from + (o.to - o.from) * static_cast<double>(k) /
                                                  static_cast<double>(o.samples - 1);
    double gap = std::numeric_limits<double>::infinity();
    for (double v : spec_a.values) gap = std::min(gap, std::abs(lambda - v));
    if (gap < skip_below) continue;
    std::string det_cell, pf_cell;
    if (want_det) det_cell = format_double(resolvent_det_form(spec_a, spec_m, lambda).value);
    if (want_pf) pf_cell = format_double(resolvent_pf_form(weights, spec_a, lambda).value);
    out << format_double(lambda) << ',' << det_cell << ',' << pf_cell << ','
        << format_double(gap) << '\n';
  }
  return kExitOk;
}

int run_verify(const Options& o, std::ostream& out) {
  const bool from_file = !o.file.empty();
  const bool from_gen = !o.kind.empty();
  if (from_file == from_gen) {
    throw CLI::ValidationError("verify needs exactly one of FILE or --gen");
  }
  HermitianMatrix a;
  std::string provenance;
  if (from_file) {
    a = read_matrix_file(o.file);
    provenance = o.file;
  } else {
    const GeneratorSpec spec = generator_spec(o);
    a = generate(spec);
    provenance = spec.describe();
  }
  const ComparisonReport report =
      compare(a, o.tol.value_or(1e-8), provenance, TableOptions{o.cluster_tol, o.threads});
  out << report_json(report) << '\n';
  return report.pass ? kExitOk : kExitVerificationFailed;
}

int run_gen(const Options& o, std::ostream& out) {
  const HermitianMatrix a = generate(generator_spec(o));
  const std::string doc =
      serialize_matrix(a, o.layout == "coordinate" ? MatrixFormat::coordinate : MatrixFormat::dense);
  if (o.output.empty()) {
    out << doc;
    return kExitOk;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw Error(ErrorKind::ParseError, "cannot write " + o.output);
  file << doc;
  return kExitOk;
}

int run_interlace(const Options& o, std::ostream& out) {
  const HermitianMatrix a = read_matrix_file(o.file);
  const std::size_t j = coordinate(a, o.col);
  const Spectrum spec_a = eigenvalues(a);
  const Spectrum spec_m = eigenvalues(principal_minor(a, j));
  const auto report = check_interlacing(spec_a, spec_m, o.tol.value_or(1e-10 * spec_a.norm()));
  out << "{\"col\":" << o.col << ",\"pass\":" << (report.pass ? "true" : "false")
      << ",\"worst_slack\":" << json_number(report.worst_slack)
      << ",\"worst_index\":" << report.worst_index + 1 << ",\"tol\":" << json_number(report.tol)
      << "}\n";
  return report.pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvector component magnitudes from eigenvalues of principal minors", "evid"};
  app.require_subcommand(1);
  Options o;

  auto* magnitudes = app.add_subcommand("magnitudes", "Emit the |v_ij|^2 table (or one column)");
  magnitudes->add_option("FILE", o.file, "Matrix document")->required();
  magnitudes->add_option("--col", o.col, "Emit only this coordinate (1-based)")->check(CLI::PositiveNumber);
  magnitudes->add_option("--tol", o.cluster_tol, "Eigenvalue cluster tolerance")->check(CLI::NonNegativeNumber);
  magnitudes->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  magnitudes->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto* resolvent = app.add_subcommand("resolvent", "Sample f(lambda) = <e_j, (A - lambda I)^-1 e_j>");
  resolvent->add_option("FILE", o.file, "Matrix document")->required();
  resolvent->add_option("--col", o.col, "Coordinate j (1-based)")->required()->check(CLI::PositiveNumber);
  resolvent->add_option("--from", o.from, "Grid start")->required();
  resolvent->add_option("--to", o.to, "Grid end")->required();
  resolvent->add_option("--samples", o.samples, "Grid points")->required()->check(CLI::PositiveNumber);
  resolvent->add_option("--form", o.form, "Which forms to evaluate")->check(CLI::IsMember({"det", "pf", "both"}));
  resolvent->add_option("--tol", o.cluster_tol, "Eigenvalue cluster tolerance")->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify", "Compare the identity table with a full eigendecomposition");
  verify->add_option("FILE", o.file, "Matrix document");
  auto* gen_kind = verify->add_option("--gen", o.kind, "Generator kind");
  verify->add_option("--n", o.n, "Dimension")->needs(gen_kind);
  verify->add_option("--seed", o.seed, "Seed")->needs(gen_kind);
  verify->add_option("--mult", o.mult, "Cluster multiplicities (clustered kind)")->delimiter(',')->needs(gen_kind);
  verify->add_option("--tol", o.tol, "Pass tolerance on max |identity - oracle|")->check(CLI::NonNegativeNumber);
  verify->add_option("--cluster-tol", o.cluster_tol, "Eigenvalue cluster tolerance")->check(CLI::NonNegativeNumber);
  verify->add_option("--threads", o.threads, "Worker threads (0: all cores)");

  auto* gen = app.add_subcommand("gen", "Write a generated matrix document");
  gen->add_option("--kind", o.kind, "goe|gue|jacobi|diagonal|clustered")->required();
  gen->add_option("--n", o.n, "Dimension")->required();
  gen->add_option("--seed", o.seed, "Seed")->required();
  gen->add_option("--mult", o.mult, "Cluster multiplicities (clustered kind)")->delimiter(',');
  gen->add_option("--layout", o.layout, "Body layout")->check(CLI::IsMember({"dense", "coordinate"}));
  gen->add_option("-o,--output", o.output, "Output file (default stdout)");

  auto* interlace = app.add_subcommand("interlace", "Check Cauchy interlacing for one minor");
  interlace->add_option("FILE", o.file, "Matrix document")->required();
  interlace->add_option("--col", o.col, "Coordinate j (1-based)")->required()->check(CLI::PositiveNumber);
  interlace->add_option("--tol", o.tol, "Slack tolerance (default 1e-10 ||A||_2)")->check(CLI::NonNegativeNumber);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
    if (magnitudes->parsed()) return run_magnitudes(o, out);
    if (resolvent->parsed()) return run_resolvent(o, out);
    if (verify->parsed()) return run_verify(o, out);
    if (gen->parsed()) return run_gen(o, out);
    return run_interlace(o, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::Error& e) {
    err << "error:Usage: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error:" << kind_name(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}

}  // namespace evid::cli
