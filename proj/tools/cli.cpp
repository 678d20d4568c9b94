#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <system_error>

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Eigenvalues>

namespace qutrit::cli {

namespace {

using Json = nlohmann::ordered_json;

double parse_double(std::string_view text, const char* what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw DomainError(std::string("cannot parse ") + what + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? text.npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// Grid values are start + k*step rounded to 12 decimals, so 0:1:0.1 yields
// 0.3 rather than 0.30000000000000004.
double snap(double v) { return std::round(v * 1e12) / 1e12; }

Row endpoint_row(double mbar, const RunConfig& config) {
  Row row;
  row.mbar = mbar;
  row.x3 = mbar;
  row.x8 = kX8Max;
  row.analytic = true;
  row.seed = config.integrator.seed;
  return row;
}

Row row_from(const AssignmentResult& r, double mbar, const RunConfig& config) {
  Row row;
  row.mbar = mbar;
  row.x8 = r.x.x8();
  row.x8_stderr = r.stderr_x[kX8];
  row.x3 = r.x.x3();
  row.mirrored = r.mirrored;
  row.analytic = r.analytic;
  row.seed = config.integrator.seed;
  if (const auto* est = r.estimate()) {
    row.n_samples = est->n_samples;
    row.n_physical = est->n_physical;
  }
  return row;
}

std::vector<Row> large_n_rows(const RunConfig& config) {
  std::set<double> values;
  for (double g : config.grid.points()) values.insert(g);
  for (double g : config.grid.points()) values.insert(-g);

  std::map<double, Row> positive;
  auto compute_positive = [&](double m) -> const Row& {
    auto it = positive.find(m);
    if (it != positive.end()) return it->second;
    const auto t0 = std::chrono::steady_clock::now();
    Row row = m == 1.0 ? endpoint_row(1.0, config)
                       : row_from(assign_large_n(m, config.prior, config.integrator), m, config);
    if (config.timing) {
      row.elapsed_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }
    return positive.emplace(m, row).first->second;
  };

  std::vector<Row> rows;
  for (double m : values) {
    if (m >= 0.0) {
      rows.push_back(compute_positive(m));
      continue;
    }
    Row row = compute_positive(-m);
    row.mbar = m;
    row.x3 = -row.x3;
    row.mirrored = !row.analytic;
    if (config.timing) row.elapsed_ms = 0.0;
    rows.push_back(row);
  }
  return rows;
}

Row region_row(const RunConfig& config) {
  const AverageRegion region(config.region);
  const auto t0 = std::chrono::steady_clock::now();
  const AssignmentResult r = config.method == AssignmentMethod::FiniteN
                                 ? assign_finite_n(region, config.N, config.prior, config.integrator)
                                 : assign_large_n_region(region, config.prior, config.integrator);
  Row row = row_from(r, region.midpoint(), config);
  if (const auto* ledger = std::get_if<FiniteNLedger>(&r.diagnostics)) {
    row.n_samples = ledger->estimate.n_samples;
    row.n_physical = ledger->estimate.n_physical;
  }
  if (config.timing) {
    row.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  return row;
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json config_json(const RunConfig& c) {
  Json prior;
  prior["kind"] = std::string(to_string(c.prior.kind));
  if (c.prior.kind == PriorKind::GaussianLike) {
    prior["center"] = c.center_text;
    prior["center_coords"] = c.prior.center.coords();
    prior["s"] = c.prior.breadth;
  }
  if (c.prior.kind == PriorKind::Slater) prior["slater_exponent"] = c.prior.slater_exponent;

  Json integ;
  integ["n_samples"] = c.integrator.n_samples;
  integ["seed"] = c.integrator.seed;
  integ["sequence"] = std::string(to_string(c.integrator.sequence));
  integ["target_stderr"] = optional_json(c.integrator.target_stderr);
  integ["max_samples"] = c.integrator.max_samples;
  integ["chunk_size"] = c.integrator.chunk_size;
  integ["min_effective_samples"] = c.integrator.min_effective_samples;
  integ["replicates"] = c.integrator.replicates;
  integ["tight_box"] = c.integrator.tight_box;

  Json j;
  j["prior"] = prior;
  j["method"] = std::string(to_string(c.method));
  if (c.method == AssignmentMethod::LargeN_Delta) {
    j["grid"] = {{"start", c.grid.start}, {"stop", c.grid.stop}, {"step", c.grid.step}};
  } else {
    Json region = Json::array();
    for (const auto& iv : AverageRegion(c.region).intervals()) region.push_back({iv.lo, iv.hi});
    j["region"] = region;
  }
  if (c.method == AssignmentMethod::FiniteN) j["N"] = c.N;
  j["integrator"] = integ;
  j["compare_maxent"] = c.compare_maxent;
  j["timing"] = c.timing;
  return j;
}

const GellMannBasis& textbook_basis() {
  static const GellMannBasis basis = [] {
    auto g = GellMannBasis::standard().generators();
    g[6] = -g[6];
    return GellMannBasis(g);
  }();
  return basis;
}

std::string fmt_margin(double measured, double limit) {
  std::ostringstream os;
  os.precision(4);
  os << "measured=" << measured << " limit=" << limit;
  return os.str();
}

PropertyResult check(std::string name, double measured, double limit) {
  return {std::move(name), measured <= limit, fmt_margin(measured, limit)};
}

Coords random_box_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> u8(kX8Min, kX8Max);
  Coords x;
  for (std::size_t i = 0; i < kBlochDim; ++i) x[i] = i == kX8 ? u8(rng) : u(rng);
  return x;
}

BlochVector random_physical(std::mt19937_64& rng) {
  while (true) {
    const BlochVector x(random_box_point(rng));
    if (is_physical(x)) return x;
  }
}

double sigma_distance(const SliceIntegralEstimate& a, const SliceIntegralEstimate& b) {
  const double se = std::hypot(a.stderr_ratio[kX8], b.stderr_ratio[kX8]);
  const double d = std::abs(a.ratio[kX8] - b.ratio[kX8]);
  return se > 0 ? d / se : (d == 0 ? 0.0 : INFINITY);
}

}  // namespace

std::vector<double> GridSpec::points() const {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (start > stop) throw DomainError("grid start must not exceed stop");
  if (start < -1.0 || stop > 1.0) throw DomainError("grid values must lie in [-1, 1]");
  const auto n = static_cast<long long>(std::floor((stop - start) / step + 1e-9));
  if (n > 100000) throw DomainError("grid has too many points");
  std::vector<double> out;
  for (long long k = 0; k <= n; ++k) {
    out.push_back(std::clamp(snap(start + static_cast<double>(k) * step), -1.0, 1.0));
  }
  return out;
}

GridSpec parse_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3) throw DomainError("grid must have the form start:stop:step");
  GridSpec g{parse_double(parts[0], "grid start"), parse_double(parts[1], "grid stop"),
             parse_double(parts[2], "grid step")};
  g.points();
  return g;
}

Interval parse_region(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) {
    const double v = parse_double(parts[0], "region");
    return {v, v};
  }
  if (parts.size() != 2) throw DomainError("region must have the form a,b");
  return {parse_double(parts[0], "region bound"), parse_double(parts[1], "region bound")};
}

BlochVector parse_center(const std::string& text) {
  if (text == "pure1") return pure_state_plus();
  if (text == "pure0") return pure_state_zero();
  if (text == "pure-1") return pure_state_minus();
  constexpr std::string_view prefix = "custom:";
  if (text.rfind(prefix, 0) != 0) {
    throw DomainError("center must be pure1, pure0, pure-1 or custom:<8 values>");
  }
  std::string body = text.substr(prefix.size());
  std::replace(body.begin(), body.end(), ',', ' ');
  std::istringstream is(body);
  std::vector<double> values;
  std::string token;
  while (is >> token) values.push_back(parse_double(token, "center coordinate"));
  if (values.size() != kBlochDim) throw DomainError("custom center needs exactly 8 coordinates");
  Coords c;
  std::copy(values.begin(), values.end(), c.begin());
  return BlochVector(c);
}

void RunConfig::validate() const {
  prior.validate();
  integrator.validate();
  if (method == AssignmentMethod::LargeN_Delta) {
    if (!region.empty()) throw DomainError("--region requires --method large-n-region or finite-n");
    grid.points();
  } else {
    if (region.empty()) throw DomainError("this method needs --region");
    const AverageRegion r(region);
    if (method == AssignmentMethod::FiniteN && N == 0) throw DomainError("finite-n needs --N >= 1");
  }
}

double default_target_stderr(PriorKind kind) { return kind == PriorKind::Constant ? 0.01 : 0.02; }

std::vector<Row> compute_rows(const RunConfig& config) {
  config.validate();
  std::vector<Row> rows;
  if (config.method == AssignmentMethod::LargeN_Delta) {
    rows = large_n_rows(config);
  } else {
    rows.push_back(region_row(config));
  }
  if (config.compare_maxent) {
    for (auto& row : rows) row.maxent_x8 = maxent_state(row.mbar).x8;
  }
  return rows;
}

void write_csv(std::ostream& os, const std::vector<Row>& rows) {
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << format_double(r.mbar) << ',' << format_double(r.x8) << ','
       << format_double(r.x8_stderr) << ',' << format_double(r.x3) << ','
       << (r.maxent_x8 ? format_double(*r.maxent_x8) : "") << ',' << r.n_samples << ','
       << r.n_physical << ',' << (r.mirrored ? "true" : "false") << ','
       << (r.analytic ? "true" : "false") << ',' << r.seed << ','
       << (r.elapsed_ms ? format_double(std::round(*r.elapsed_ms * 1000) / 1000) : "") << '\n';
  }
}

void write_json(std::ostream& os, const RunConfig& config, const std::vector<Row>& rows) {
  Json j;
  j["schema_version"] = kJsonSchemaVersion;
  j["config"] = config_json(config);
  Json arr = Json::array();
  for (const auto& r : rows) {
    Json row;
    row["mbar"] = r.mbar;
    row["x8"] = r.x8;
    row["x8_stderr"] = r.x8_stderr;
    row["x3"] = r.x3;
    row["maxent_x8"] = optional_json(r.maxent_x8);
    row["n_samples"] = r.n_samples;
    row["n_physical"] = r.n_physical;
    row["mirrored"] = r.mirrored;
    row["analytic"] = r.analytic;
    row["seed"] = r.seed;
    row["elapsed_ms"] = optional_json(r.elapsed_ms);
    arr.push_back(std::move(row));
  }
  j["rows"] = std::move(arr);
  os << j.dump(2) << '\n';
}

int run_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.validate();
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  std::ofstream file;
  if (config.output) {
    file.open(*config.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      err << "I/O error: cannot open " << config.output->string() << " for writing\n";
      return kIoError;
    }
  }

  std::vector<Row> rows;
  try {
    rows = compute_rows(config);
  } catch (const IntegrationError& e) {
    err << "integration failure: " << e.what() << '\n';
    return kIntegrationFailure;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  std::ostream& os = config.output ? static_cast<std::ostream&>(file) : out;
  if (config.format == OutputFormat::Json) {
    write_json(os, config, rows);
  } else {
    write_csv(os, rows);
  }
  os.flush();
  if (!os) {
    err << "I/O error: failed writing output\n";
    return kIoError;
  }
  return kOk;
}

std::vector<PropertyResult> validate_properties(const RunConfig& config) {
  const GellMannBasis& basis = config.corrupt_basis ? textbook_basis() : GellMannBasis::standard();
  std::vector<PropertyResult> results;
  std::mt19937_64 rng(config.integrator.seed);

  {
    double worst = 0.0;
    for (std::size_t i = 0; i < kBlochDim; ++i) {
      worst = std::max(worst, std::abs(basis[i].trace()));
      worst = std::max(worst, (basis[i] - basis[i].adjoint()).cwiseAbs().maxCoeff());
      for (std::size_t j = 0; j < kBlochDim; ++j) {
        const double expect = i == j ? 2.0 : 0.0;
        worst = std::max(worst, std::abs((basis[i] * basis[j]).trace() - expect));
      }
    }
    results.push_back(check("basis orthonormality", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const BlochVector x = random_physical(rng);
      const Matrix3c lhs = bloch_to_density(symmetry_map(x), basis).matrix();
      const Matrix3c rhs = swap_outer_levels(bloch_to_density(x, basis)).matrix();
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    results.push_back(check("symmetry map equals level swap", worst, 1e-12));
  }

  {
    int mismatches = 0;
    for (int k = 0; k < 20000; ++k) {
      const BlochVector x(random_box_point(rng));
      const Matrix3c m = bloch_to_density(x, basis).matrix();
      const double lo =
          Eigen::SelfAdjointEigenSolver<Matrix3c>(m, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
      if (std::abs(lo) < 1e-9) continue;
      if (is_physical(x) != (lo > 0)) ++mismatches;
    }
    results.push_back(check("closed-form PSD test vs eigenvalues", mismatches, 0));
  }

  {
    double worst = 0.0;
    for (int k = -100; k <= 100; ++k) {
      const double m = k / 100.0;
      const auto me = maxent_state(m);
      worst = std::max(worst, std::abs((me.rho.matrix() * basis[kX3]).trace().real() - m));
    }
    results.push_back(check("MaxEnt constraint on 201 grid", worst, 1e-12));
  }

  {
    double worst = 0.0;
    for (const auto& r : {assign_large_n(1.0, config.prior, config.integrator),
                          assign_large_n(-1.0, config.prior, config.integrator)}) {
      const double target = r.x.x3() > 0 ? 1.0 : -1.0;
      worst = std::max(worst, std::abs(r.x.x8() - kX8Max));
      worst = std::max(worst, std::abs(r.rho.diagonal()[target > 0 ? 0 : 2] - 1.0));
    }
    results.push_back(check("endpoints are pure states", worst, 0.0));
  }

  IntegratorConfig cfg = config.integrator;
  std::map<double, SliceIntegralEstimate> at;
  for (double m : {0.3, 0.5, 0.6}) at.emplace(m, integrate_slice(m, config.prior, cfg));

  results.push_back(check("pinned identity L3/Z = mbar (|error|)",
                          std::abs(at.at(0.5).ratio[kX3] - 0.5), 0.0));
  for (double m : {0.3, 0.6}) {
    results.push_back(check("suppressed components at mbar=" + format_double(m) + " (sigma)",
                            max_suppressed_significance(at.at(m)), kSuppressionSigma));
  }

  IntegratorConfig flipped = cfg;
  flipped.seed = cfg.seed + 1;
  const auto minus = integrate_slice(-0.5, config.prior, flipped);
  {
    const double sigmas = sigma_distance(at.at(0.5), minus);
    results.push_back(check("sign flip x8(0.5) vs x8(-0.5) (sigma)", sigmas, 3.0));
  }

  IntegratorConfig other_seed = cfg;
  other_seed.seed = cfg.seed + 2;
  const auto again = integrate_slice(0.5, config.prior, other_seed);
  results.push_back(
      check("cross-seed agreement at mbar=0.5 (sigma)", sigma_distance(at.at(0.5), again), 3.0));

  return results;
}

int run_validate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::vector<PropertyResult> results;
  try {
    config.prior.validate();
    config.integrator.validate();
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  try {
    results = validate_properties(config);
  } catch (const IntegrationError& e) {
    err << "integration failure: " << e.what() << '\n';
    return kIntegrationFailure;
  }
  bool ok = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    ok = ok && r.passed;
  }
  out << (ok ? "all properties passed" : "some properties FAILED") << '\n';
  return ok ? kOk : kIntegrationFailure;
}

int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian qutrit state assignment from average-value data", "qutrit-assign"};
  app.require_subcommand(1);

  struct Raw {
    std::string prior = "constant";
    std::string center = "pure1";
    double s = 0.25;
    int slater_exponent = 7;
    std::string grid = "0:1:0.1";
    std::vector<std::string> region;
    std::string method;
    unsigned N = 0;
    std::uint64_t samples = IntegratorConfig{}.n_samples;
    std::optional<double> target_stderr;
    std::uint64_t seed = IntegratorConfig{}.seed;
    std::string sequence = "pseudo";
    unsigned threads = 0;
    bool compare_maxent = false;
    std::string output;
    std::string format = "csv";
    bool timing = false;
    bool corrupt_basis = false;
  } raw;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--prior", raw.prior, "constant, gaussian or slater")
        ->check(CLI::IsMember({"constant", "gaussian", "slater"}));
    sub->add_option("--center", raw.center, "Gaussian center: pure1, pure0, pure-1, custom:<8>");
    sub->add_option("--s", raw.s, "Gaussian breadth");
    sub->add_option("--slater-exponent", raw.slater_exponent, "exponent of det(rho)");
    sub->add_option("--samples", raw.samples, "initial number of samples");
    sub->add_option("--target-stderr", raw.target_stderr,
                    "double samples until stderr <= value (0 disables; default 0.01 for the "
                    "constant prior, 0.02 otherwise)");
    sub->add_option("--seed", raw.seed, "base seed");
    sub->add_option("--sequence", raw.sequence, "pseudo or lowdisc")
        ->check(CLI::IsMember({"pseudo", "lowdisc"}));
    sub->add_option("--threads", raw.threads, "worker threads (0 = all cores)");
  };

  CLI::App* sweep = app.add_subcommand("sweep", "compute assigned x8 over a grid or region");
  add_common(sweep);
  auto* grid_opt = sweep->add_option("--grid", raw.grid, "start:stop:step (default 0:1:0.1)");
  sweep->add_option("--region", raw.region, "a,b (repeatable; union of intervals)")
      ->excludes(grid_opt);
  sweep->add_option("--method", raw.method, "large-n, large-n-region or finite-n")
      ->check(CLI::IsMember({"large-n", "large-n-region", "finite-n"}));
  sweep->add_option("--N", raw.N, "number of measurements (finite-n)");
  sweep->add_flag("--compare-maxent", raw.compare_maxent, "add the MaxEnt x8 column");
  sweep->add_option("--output", raw.output, "output path (default stdout)");
  sweep->add_option("--format", raw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sweep->add_flag("--timing", raw.timing, "record elapsed_ms (output no longer reproducible)");

  CLI::App* validate = app.add_subcommand("validate", "run the property suite");
  add_common(validate);
  validate->add_flag("--corrupt-basis", raw.corrupt_basis)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  RunConfig config;
  try {
    config.center_text = raw.center;
    switch (prior_kind_from_string(raw.prior)) {
      case PriorKind::Constant: config.prior = PriorSpec::constant(); break;
      case PriorKind::Slater: config.prior = PriorSpec::slater(raw.slater_exponent); break;
      case PriorKind::GaussianLike:
        config.prior = PriorSpec::gaussian(parse_center(raw.center), raw.s);
        break;
    }
    config.integrator.n_samples = raw.samples;
    config.integrator.seed = raw.seed;
    config.integrator.sequence = sequence_from_string(raw.sequence);
    config.integrator.threads = raw.threads;
    const double target = raw.target_stderr.value_or(default_target_stderr(config.prior.kind));
    if (target < 0) throw DomainError("--target-stderr must be non-negative");
    if (target > 0) config.integrator.target_stderr = target;

    if (sweep->parsed()) {
      for (const auto& r : raw.region) config.region.push_back(parse_region(r));
      if (!raw.method.empty()) {
        config.method = method_from_string(raw.method);
      } else if (!config.region.empty()) {
        config.method = AssignmentMethod::LargeN_Region;
      }
      if (config.method == AssignmentMethod::LargeN_Delta) config.grid = parse_grid(raw.grid);
      config.N = raw.N;
      config.compare_maxent = raw.compare_maxent;
      if (!raw.output.empty()) config.output = raw.output;
      config.format = raw.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
      config.timing = raw.timing;
      config.validate();
    } else {
      config.corrupt_basis = raw.corrupt_basis;
    }
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  return sweep->parsed() ? run_sweep(config, out, err) : run_validate(config, out, err);
}

}  // namespace qutrit::cli
