#pragma once

// qutrit-assign front end: argument parsing, grid sweeps and the validation
// suite.  Kept as a library so the tests can drive it without a subprocess.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qutrit/qutrit.hpp"

namespace qutrit::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kIntegrationFailure = 3, kIoError = 4 };

enum class OutputFormat { Csv, Json };

/// start:stop:step, stop inclusive.
struct GridSpec {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.1;

  /// Throws DomainError on a malformed or out-of-range grid.
  std::vector<double> points() const;
};

GridSpec parse_grid(const std::string& text);
/// "a,b" or a single value "a".
Interval parse_region(const std::string& text);
/// "pure1", "pure0", "pure-1" or "custom:x1,...,x8" (commas or whitespace).
BlochVector parse_center(const std::string& text);

struct RunConfig {
  PriorSpec prior;
  std::string center_text = "pure1";
  AssignmentMethod method = AssignmentMethod::LargeN_Delta;
  GridSpec grid;
  std::vector<Interval> region;
  unsigned N = 0;
  IntegratorConfig integrator;
  std::optional<std::filesystem::path> output;
  OutputFormat format = OutputFormat::Csv;
  bool compare_maxent = false;
  /// Fill elapsed_ms.  Off by default so that outputs are reproducible.
  bool timing = false;
  /// Validation negative control: use the textbook lambda_7 sign.
  bool corrupt_basis = false;

  /// Throws DomainError when the combination of options is inconsistent.
  void validate() const;
};

/// Default target standard error of the sweep: the figure uncertainty of each
/// prior (0.01 for the constant prior, 0.02 otherwise).
double default_target_stderr(PriorKind kind);

struct Row {
  double mbar = 0.0;
  double x8 = 0.0;
  double x8_stderr = 0.0;
  double x3 = 0.0;
  std::optional<double> maxent_x8;
  std::uint64_t n_samples = 0;
  std::uint64_t n_physical = 0;
  bool mirrored = false;
  bool analytic = false;
  std::uint64_t seed = 0;
  std::optional<double> elapsed_ms;
};

inline constexpr const char* kCsvHeader =
    "mbar,x8,x8_stderr,x3,maxent_x8,n_samples,n_physical,mirrored,analytic,seed,elapsed_ms";
inline constexpr int kJsonSchemaVersion = 1;

/// Rows for the configured sweep.  Large-N grids are symmetrised: every grid
/// value m also yields -m, computed from +|m| by the level swap (mirrored), and
/// m = +-1 rows are set analytically.  Region methods yield a single row whose
/// mbar is the midpoint of the region.
std::vector<Row> compute_rows(const RunConfig& config);

void write_csv(std::ostream& os, const std::vector<Row>& rows);
void write_json(std::ostream& os, const RunConfig& config, const std::vector<Row>& rows);

/// Runs the sweep and writes the output.  Errors are reported on `err` and
/// mapped to exit codes.
int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err);

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Symmetry, suppressed components, MaxEnt constraint, cross-seed agreement and
/// related checks for the configured prior.
std::vector<PropertyResult> validate_properties(const RunConfig& config);

/// Prints one PASS/FAIL line per property; kIntegrationFailure if any fails.
int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command line entry point (subcommands `sweep` and `validate`).
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qutrit::cli
