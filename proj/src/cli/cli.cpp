#include "fuzzy_casimir/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "fuzzy_casimir/errors.hpp"
#include "fuzzy_casimir/fock_engine.hpp"
#include "fuzzy_casimir/luscher_fit.hpp"

namespace fuzzy_casimir::cli {

namespace {

using std::numbers::pi;

// Identity-check tolerances, shared by verify and the acceptance suite.
constexpr double kTolLadder = 1e-14;
constexpr double kTolCommutator = 1e-12;
constexpr double kTolEigen = 1e-12;
constexpr double kTolCutoff = 1e-11;
constexpr double kTolLinearity = 1e-13;
constexpr double kTolDirectClosed = 1e-12;
constexpr double kTolGamma = 1e-4;
constexpr int kRandomWaveOps = 10;

std::string subcommand_name(Subcommand s) {
  switch (s) {
    case Subcommand::Verify: return "verify";
    case Subcommand::Dispersion: return "dispersion";
    case Subcommand::Casimir: return "casimir";
    case Subcommand::Expand: return "expand";
    case Subcommand::Fit: return "fit";
  }
  return "unknown";
}

Check make_check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance};
}

Json range_json(const Range& r) {
  return {{"start", r.start}, {"stop", r.stop}, {"count", r.count}};
}

std::vector<double> L_values(const RunConfig& cfg, const Range& fallback) {
  if (cfg.L) return {*cfg.L};
  const Range r = cfg.L_range.value_or(fallback);
  return luscher::linear_grid(r.start, r.stop, r.count);
}

}  // namespace

void RunConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("--lambda must be positive");
  auto check_range = [](const std::optional<Range>& r, const char* name) {
    if (!r) return;
    if (r->count < 1) throw ConfigError(std::string(name) + " count must be >= 1");
    if (!(r->stop >= r->start)) throw ConfigError(std::string(name) + " range is empty (stop < start)");
  };
  check_range(L_range, "L");
  check_range(q_range, "q");
  if (L && !(*L > 0.0)) throw ConfigError("--L must be positive");
  switch (subcommand) {
    case Subcommand::Verify:
      if (n_max < 2) {
        throw ConfigError("--n-max must be >= 2: squared superoperators need a depth-2 interior block");
      }
      if (q_count < 1) throw ConfigError("--q-count must be >= 1");
      break;
    case Subcommand::Fit:
      if (!input_path && L_range) {
        const int needed = include_delta ? 4 : 3;
        if (L_range->count < needed) {
          throw ConfigError("fit needs at least " + std::to_string(needed) + " grid points, got " +
                            std::to_string(L_range->count));
        }
      }
      if (noise_sigma < 0.0) throw ConfigError("--noise must be non-negative");
      break;
    default:
      break;
  }
}

// ---------------------------------------------------------------------------
// verify

Report cmd_verify(const RunConfig& cfg) {
  cfg.validate();
  using namespace fock;
  const FockSpace space = build_space(cfg.n_max, 2);
  const double lam = cfg.lambda;
  const NcModel model(space, lam);

  Report rep;
  rep.subcommand = "verify";
  rep.lambda = lam;
  rep.parameters = {{"n_max", cfg.n_max}, {"q_count", cfg.q_count}, {"seed", cfg.seed}};

  rep.checks.push_back(make_check("ladder_algebra", check_ladder_algebra(space), kTolLadder));
  rep.checks.push_back(
      make_check("coordinate_commutators", check_commutators(space, lam), kTolCommutator));

  double v3 = 0.0, v4 = 0.0, v12 = 0.0, cutoff_pw = 0.0;
  for (int k = 1; k <= cfg.q_count; ++k) {
    const double q = k * pi / (lam * (cfg.q_count + 1));
    const WaveOp psi = plane_wave(space, q, lam);
    v3 = std::max(v3, eigen_residual(model.V(3), psi, std::sin(lam * q) / lam));
    v4 = std::max(v4, eigen_residual(model.V4(), psi, std::cos(lam * q) / lam));
    v12 = std::max({v12, eigen_residual(model.V(1), psi, 0.0), eigen_residual(model.V(2), psi, 0.0)});
    cutoff_pw = std::max(cutoff_pw, check_cutoff_identity(model, psi));
  }
  rep.checks.push_back(make_check("plane_wave_V3_sin", v3, kTolEigen));
  rep.checks.push_back(make_check("plane_wave_V4_cos", v4, kTolEigen));
  rep.checks.push_back(make_check("plane_wave_V1_V2_zero", v12, kTolEigen));
  rep.checks.push_back(make_check(
      "maximal_frequency",
      eigen_residual(model.V(3), plane_wave(space, pi / (2.0 * lam), lam), 1.0 / lam), kTolEigen));
  rep.checks.push_back(make_check("cutoff_identity_plane_waves", cutoff_pw, kTolCutoff));

  double cutoff_rand = 0.0, velocity = 0.0, v4h = 0.0;
  for (int s = 0; s < kRandomWaveOps; ++s) {
    const WaveOp psi = random_wave_op(space, lam, cfg.seed + static_cast<std::uint64_t>(s));
    cutoff_rand = std::max(cutoff_rand, check_cutoff_identity(model, psi));
    velocity = std::max(velocity, check_velocity_commutator(model, psi));
    v4h = std::max(v4h, check_v4_hamiltonian(model, psi));
  }
  rep.checks.push_back(make_check("cutoff_identity_random", cutoff_rand, kTolCutoff));
  rep.checks.push_back(make_check("velocity_commutator", velocity, kTolCutoff));
  rep.checks.push_back(make_check("v4_hamiltonian", v4h, kTolCutoff));

  {
    const WaveOp p1 = random_wave_op(space, lam, cfg.seed + 1000);
    const WaveOp p2 = random_dense_wave_op(space, lam, cfg.seed + 1001);
    const Complex alpha{0.7, -1.3};
    const Complex beta{-0.4, 0.25};
    double worst = 0.0;
    for (int i = 1; i <= 4; ++i) {
      const auto& v = model.V(i);
      const DenseMatrix d =
          v(alpha * p1 + beta * p2).matrix() - alpha * v(p1).matrix() - beta * v(p2).matrix();
      worst = std::max(worst, d.cwiseAbs().maxCoeff());
    }
    rep.checks.push_back(make_check("superop_linearity", worst, kTolLinearity));
  }

  rep.table.columns = {"check", "residual", "tolerance", "pass"};
  rep.table_in_json = false;
  for (const auto& c : rep.checks) rep.table.rows.push_back({c.name, c.value, c.tolerance, c.pass});

  if (cfg.dump_ops_path) {
    const auto ladders = ladder_matrices(space);
    const auto coords = coordinates(space, lam);
    std::ofstream f(*cfg.dump_ops_path, std::ios::binary);
    if (!f) throw ConfigError("cannot open " + *cfg.dump_ops_path);
    f << "{\"n_max\":" << cfg.n_max << ",\"lambda\":" << format_double(lam)
      << ",\"a1\":" << dump_triplets_json(ladders.a[0]) << ",\"a2\":" << dump_triplets_json(ladders.a[1])
      << ",\"x1\":" << dump_triplets_json(coords.x[0]) << ",\"x2\":" << dump_triplets_json(coords.x[1])
      << ",\"x3\":" << dump_triplets_json(coords.x[2]) << "}\n";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// dispersion

Report cmd_dispersion(const RunConfig& cfg) {
  cfg.validate();
  const double lam = cfg.lambda;
  const double q_max = pi / lam;
  Range r;
  if (cfg.q_range) {
    r = *cfg.q_range;
  } else {
    r = {q_max / 16.0, q_max, 16};
  }

  Report rep;
  rep.subcommand = "dispersion";
  rep.lambda = lam;
  rep.parameters = {{"q", range_json(r)}};
  rep.table.columns = {"q", "omega_nc", "omega_comm", "ratio"};

  double worst_excess = 0.0;
  for (double q : luscher::linear_grid(r.start, r.stop, r.count)) {
    if (!(q > 0.0) || q > q_max * (1.0 + 1e-12)) {
      rep.warnings.push_back("q = " + format_double(q) + " outside (0, pi/lambda]; row skipped");
      continue;
    }
    const double omega = std::sin(lam * q) / lam;
    rep.table.rows.push_back({q, omega, q, omega / q});
    worst_excess = std::max(worst_excess, omega - 1.0 / lam);
  }
  rep.checks.push_back(make_check("frequency_below_cutoff", worst_excess, 0.0));
  return rep;
}

// ---------------------------------------------------------------------------
// casimir

Report cmd_casimir(const RunConfig& cfg) {
  cfg.validate();
  const double lam = cfg.lambda;
  const double scale = cfg.per_polarization ? 0.5 : 1.0;
  const Range fallback{2.0 * lam, 20.0 * lam, 10};

  Report rep;
  rep.subcommand = "casimir";
  rep.lambda = lam;
  rep.parameters = {{"mode_policy", casimir::to_string(cfg.mode_policy)},
                    {"summation", cfg.summation == casimir::Summation::Compensated ? "compensated" : "naive"},
                    {"per_polarization", cfg.per_polarization}};
  if (cfg.L) {
    rep.parameters["L"] = *cfg.L;
  } else {
    rep.parameters["L"] = range_json(cfg.L_range.value_or(fallback));
  }
  rep.table.columns = {"L",          "E_direct",     "E_closed",   "E_taylor3",
                       "E_commutative", "E_subtracted", "force_full", "force_casimir"};

  double worst_rel = 0.0;
  for (double L : L_values(cfg, fallback)) {
    if (L / (2.0 * lam) < 1.0 - 1e-9) {
      rep.warnings.push_back("L = " + format_double(L) + " rejected: below half minimum wavelength");
      continue;
    }
    const casimir::CasimirConfig cc{lam, L, cfg.mode_policy, cfg.summation};
    if (cfg.mode_policy == casimir::ModePolicy::RequireInteger &&
        !casimir::has_integer_mode_count(L, lam)) {
      rep.warnings.push_back("L = " + format_double(L) + " rejected: L/(2*lambda) is not an integer");
      continue;
    }
    const auto direct = casimir::energy_direct_sum(cc);
    const auto closed = casimir::energy_closed_form(cc);
    if (casimir::has_integer_mode_count(L, lam)) {
      worst_rel = std::max(worst_rel, std::abs(direct.value - closed.value) / std::abs(closed.value));
    }
    rep.table.rows.push_back({L, scale * direct.value, scale * closed.value,
                              scale * casimir::energy_taylor(L, lam, 3).value,
                              scale * casimir::energy_commutative(L).value,
                              scale * casimir::subtracted_energy(L, lam),
                              scale * casimir::force(L, lam), scale * casimir::casimir_force(L, lam)});
  }
  rep.checks.push_back(make_check("direct_closed_agreement", worst_rel, kTolDirectClosed));
  return rep;
}

// ---------------------------------------------------------------------------
// expand

Report cmd_expand(const RunConfig& cfg) {
  cfg.validate();
  const double lam = cfg.lambda;
  const double L = cfg.L.value_or(1.0);
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("expand needs L > 0");
  const bool has_modes = L / (2.0 * lam) >= 1.0 - 1e-9;
  const double scale = cfg.per_polarization ? 0.5 : 1.0;

  Report rep;
  rep.subcommand = "expand";
  rep.lambda = lam;
  rep.parameters = {{"L", L}, {"per_polarization", cfg.per_polarization}};
  rep.table.columns = {"term", "expression", "value"};

  static const std::array<const char*, 4> expressions = {
      "L/(pi*lambda^2)", "1/(2*lambda)", "-pi/(12*L)", "-pi^3*lambda^2/(720*L^3)"};
  for (int k = 0; k < 4; ++k) {
    rep.table.rows.push_back({"term" + std::to_string(k), std::string(expressions[static_cast<std::size_t>(k)]),
                              scale * casimir::taylor_term(k, L, lam)});
  }
  rep.table.rows.push_back({"taylor3", std::string("term0+term1+term2+term3"),
                            scale * casimir::energy_taylor(L, lam, 3).value});
  if (!has_modes) {
    rep.warnings.push_back("L = " + format_double(L) + " is below half minimum wavelength 2*lambda; " +
                           "closed form and remainder omitted");
    return rep;
  }
  const double closed = casimir::closed_form_value(L, lam);
  const double remainder = std::abs(casimir::taylor_remainder(L, lam));
  const double bound = casimir::kTaylorRemainderConstant * std::pow(lam, 4) / std::pow(L, 5);
  rep.table.rows.push_back({"closed_form", std::string("(1+cot(pi*lambda/(2*L)))/(2*lambda)"), scale * closed});
  rep.table.rows.push_back({"remainder", std::string("|closed-taylor3|"), scale * remainder});
  rep.table.rows.push_back({"remainder_bound", std::string("C*lambda^4/L^5"), scale * bound});
  if (L / lam >= 4.0 * (1.0 - 1e-9)) {
    const double half = std::abs(casimir::taylor_remainder(L, 0.5 * lam));
    rep.table.rows.push_back({"remainder_half_lambda", std::string("|closed-taylor3| at lambda/2"), scale * half});
    rep.table.rows.push_back({"remainder_ratio", std::string("remainder/remainder_half_lambda"), remainder / half});
  }
  rep.checks.push_back(make_check("remainder_within_bound", remainder - bound, 0.0));
  return rep;
}

// ---------------------------------------------------------------------------
// fit

std::vector<luscher::CurveSample> read_samples(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open input " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();

  std::vector<luscher::CurveSample> out;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    Json doc;
    try {
      doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ConfigError("malformed JSON input: " + std::string(e.what()));
    }
    if (!doc.contains("schema") || doc["schema"] != kSchemaVersion) {
      throw ConfigError("input JSON schema must be " + std::to_string(kSchemaVersion));
    }
    for (const auto& row : doc.at("rows")) {
      const char* e_key = row.contains("E") ? "E" : "E_closed";
      if (!row.contains("L") || !row.contains(e_key)) throw ConfigError("JSON row lacks L or E/E_closed");
      out.push_back({row["L"].get<double>(), row[e_key].get<double>(), row.value("weight", 1.0)});
    }
    return out;
  }

  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV input");
  std::map<std::string, std::size_t> col;
  {
    std::istringstream h(line);
    std::string name;
    for (std::size_t i = 0; std::getline(h, name, ','); ++i) {
      if (!name.empty() && name.back() == '\r') name.pop_back();
      col[name] = i;
    }
  }
  const auto find = [&](std::initializer_list<const char*> names) -> std::optional<std::size_t> {
    for (const char* n : names) {
      if (auto it = col.find(n); it != col.end()) return it->second;
    }
    return std::nullopt;
  };
  const auto iL = find({"L"});
  const auto iE = find({"E", "E_closed"});
  const auto iW = find({"weight"});
  if (!iL || !iE) throw ConfigError("CSV header needs columns L and E (or E_closed)");

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream ls(line);
    std::string fld;
    while (std::getline(ls, fld, ',')) fields.push_back(fld);
    auto num = [&](std::size_t i) {
      if (i >= fields.size()) throw ConfigError("short CSV row: " + line);
      try {
        return std::stod(fields[i]);
      } catch (const std::exception&) {
        throw ConfigError("non-numeric CSV field: " + fields[i]);
      }
    };
    out.push_back({num(*iL), num(*iE), iW ? num(*iW) : 1.0});
  }
  return out;
}

Report cmd_fit(const RunConfig& cfg) {
  cfg.validate();
  const double lam = cfg.lambda;

  Report rep;
  rep.subcommand = "fit";
  rep.lambda = lam;

  std::vector<luscher::CurveSample> samples;
  if (cfg.input_path) {
    samples = read_samples(*cfg.input_path);
    rep.parameters["input"] = *cfg.input_path;
  } else {
    const Range r = cfg.L_range.value_or(Range{100.0 * lam, 1000.0 * lam, 50});
    samples = luscher::sample_curve(lam, luscher::linear_grid(r.start, r.stop, r.count));
    rep.parameters["L"] = range_json(r);
  }
  rep.parameters["include_delta"] = cfg.include_delta;
  if (cfg.noise_sigma > 0.0) {
    samples = luscher::add_gaussian_noise(samples, cfg.noise_sigma, cfg.seed);
    rep.parameters["noise_sigma"] = cfg.noise_sigma;
    rep.parameters["seed"] = cfg.seed;
  }

  const auto fit = luscher::fit_luscher(samples, cfg.include_delta);
  const auto report = luscher::compare_coefficients(fit, lam);

  rep.table.columns = {"coefficient", "fitted", "theory", "relative_error"};
  rep.table.rows.push_back({std::string("T"), fit.T, report.theory_T, report.relative_errors.T});
  rep.table.rows.push_back({std::string("C"), fit.C, report.theory_C, report.relative_errors.C});
  rep.table.rows.push_back({std::string("gamma"), fit.gamma, report.theory_gamma, report.relative_errors.gamma});
  if (fit.has_delta) {
    rep.table.rows.push_back(
        {std::string("delta"), fit.delta, report.theory_delta_720, report.relative_errors.delta_720});
    rep.table.rows.push_back({std::string("delta_288"), fit.delta, report.theory_delta_288,
                              report.relative_errors.delta_288});
  }

  rep.checks.push_back(make_check("gamma_relative_error", report.relative_errors.gamma, kTolGamma));
  rep.extra["report"] = {
      {"fitted",
       {{"T", fit.T},
        {"C", fit.C},
        {"gamma", fit.gamma},
        {"delta", fit.delta},
        {"has_delta", fit.has_delta},
        {"residual_rms", fit.residual_rms},
        {"condition_estimate", fit.condition_estimate},
        {"sample_count", fit.sample_count}}},
      {"theory",
       {{"T", report.theory_T},
        {"C", report.theory_C},
        {"gamma", report.theory_gamma},
        {"delta_720", report.theory_delta_720},
        {"delta_288", report.theory_delta_288}}},
      {"relative_errors",
       {{"T", report.relative_errors.T},
        {"C", report.relative_errors.C},
        {"gamma", report.relative_errors.gamma},
        {"delta_720", report.relative_errors.delta_720},
        {"delta_288", report.relative_errors.delta_288}}},
      {"verdict", report.verdict}};
  return rep;
}

// ---------------------------------------------------------------------------
// driver

namespace {

struct Options {
  double lambda = 1.0;
  std::optional<double> L;
  std::optional<double> L_start, L_stop;
  std::optional<int> L_count;
  std::optional<double> q_start, q_stop;
  std::optional<int> q_count;
  int n_max = 8;
  std::string format;
  std::string out;
  std::uint64_t seed = 20170101;
  bool per_polarization = false;
  std::string mode_policy = "floor";
  std::string summation = "compensated";
  std::string input;
  bool no_delta = false;
  double noise = 0.0;
  std::string dump_ops;
};

std::optional<Range> make_range(const std::optional<double>& start, const std::optional<double>& stop,
                                const std::optional<int>& count, const char* name) {
  if (!start && !stop && !count) return std::nullopt;
  if (!start || !stop || !count) {
    throw ConfigError(std::string("--") + name + "-start, --" + name + "-stop and --" + name +
                      "-count must be given together");
  }
  return Range{*start, *stop, *count};
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--lambda", o.lambda, "NC length scale lambda > 0");
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out, "Write output to PATH instead of stdout");
}

void add_L_range(CLI::App* sub, Options& o) {
  sub->add_option("--L-start", o.L_start, "First segment length");
  sub->add_option("--L-stop", o.L_stop, "Last segment length");
  sub->add_option("--L-count", o.L_count, "Number of lengths");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noncommutative plane waves and the 1D Casimir energy", "fuzzy_casimir"};
  app.set_config("--config", "", "TOML-style configuration file; flags take precedence");
  app.require_subcommand(1);

  Options o;
  auto* verify = app.add_subcommand("verify", "Check the NC operator identities on a truncated Fock space");
  add_common(verify, o);
  verify->add_option("--n-max", o.n_max, "Maximum total occupation n1+n2");
  verify->add_option("--q-count", o.q_count, "Plane waves sampled in (0, pi/lambda)");
  verify->add_option("--seed", o.seed, "Seed for random WaveOps");
  verify->add_option("--dump-ops", o.dump_ops, "Write ladder and coordinate matrices as JSON triplets");

  auto* dispersion = app.add_subcommand("dispersion", "Tabulate omega = sin(lambda q)/lambda against q");
  add_common(dispersion, o);
  dispersion->add_option("--q-start", o.q_start, "First wavenumber");
  dispersion->add_option("--q-stop", o.q_stop, "Last wavenumber");
  dispersion->add_option("--q-count", o.q_count, "Number of wavenumbers");

  auto* cas = app.add_subcommand("casimir", "Casimir energies and forces over a range of lengths");
  add_common(cas, o);
  cas->add_option("--L", o.L, "Single segment length");
  add_L_range(cas, o);
  cas->add_option("--mode-policy", o.mode_policy, "Non-integer L/(2 lambda) handling")
      ->check(CLI::IsMember({"floor", "require-integer"}));
  cas->add_option("--summation", o.summation, "Direct-sum accumulation")
      ->check(CLI::IsMember({"compensated", "naive"}));
  cas->add_flag("--per-polarization", o.per_polarization, "Report energies per polarization (halved)");

  auto* expand = app.add_subcommand("expand", "Small-lambda expansion coefficients and remainder");
  add_common(expand, o);
  expand->add_option("--L", o.L, "Segment length (default 1)");
  expand->add_flag("--per-polarization", o.per_polarization, "Report energies per polarization (halved)");

  auto* fit = app.add_subcommand("fit", "Fit E(L) = T L + C - gamma/L - delta/L^3");
  add_common(fit, o);
  add_L_range(fit, o);
  fit->add_option("--input", o.input, "CSV (L,E[,weight]) or casimir JSON samples");
  fit->add_flag("--no-delta", o.no_delta, "Fit without the 1/L^3 term");
  fit->add_option("--noise", o.noise, "Gaussian noise sigma added to E");
  fit->add_option("--seed", o.seed, "Noise seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    RunConfig cfg;
    cfg.lambda = o.lambda;
    cfg.L = o.L;
    cfg.n_max = o.n_max;
    cfg.seed = o.seed;
    cfg.per_polarization = o.per_polarization;
    cfg.mode_policy = o.mode_policy == "require-integer" ? casimir::ModePolicy::RequireInteger
                                                         : casimir::ModePolicy::Floor;
    cfg.summation = o.summation == "naive" ? casimir::Summation::Naive : casimir::Summation::Compensated;
    cfg.include_delta = !o.no_delta;
    cfg.noise_sigma = o.noise;
    if (!o.input.empty()) cfg.input_path = o.input;
    if (!o.out.empty()) cfg.output_path = o.out;
    if (!o.dump_ops.empty()) cfg.dump_ops_path = o.dump_ops;
    cfg.L_range = make_range(o.L_start, o.L_stop, o.L_count, "L");
    if (cfg.L && cfg.L_range) throw ConfigError("--L and --L-start/--L-stop/--L-count are exclusive");

    OutputFormat default_format = OutputFormat::Csv;
    if (verify->parsed()) {
      cfg.subcommand = Subcommand::Verify;
      default_format = OutputFormat::Json;
      if (o.q_count) cfg.q_count = *o.q_count;
    } else if (dispersion->parsed()) {
      cfg.subcommand = Subcommand::Dispersion;
      cfg.q_range = make_range(o.q_start, o.q_stop, o.q_count, "q");
    } else if (cas->parsed()) {
      cfg.subcommand = Subcommand::Casimir;
    } else if (expand->parsed()) {
      cfg.subcommand = Subcommand::Expand;
    } else {
      cfg.subcommand = Subcommand::Fit;
      default_format = OutputFormat::Json;
    }
    cfg.format = o.format.empty() ? default_format
                                  : (o.format == "json" ? OutputFormat::Json : OutputFormat::Csv);

    Report rep;
    try {
      switch (cfg.subcommand) {
        case Subcommand::Verify: rep = cmd_verify(cfg); break;
        case Subcommand::Dispersion: rep = cmd_dispersion(cfg); break;
        case Subcommand::Casimir: rep = cmd_casimir(cfg); break;
        case Subcommand::Expand: rep = cmd_expand(cfg); break;
        case Subcommand::Fit: rep = cmd_fit(cfg); break;
      }
    } catch (const ConditioningError& e) {
      err << "conditioning failure: " << e.what() << " (condition estimate "
          << format_double(e.condition()) << ")\n";
      return kExitCheckFailed;
    }

    const std::string text = render(rep, cfg.format);
    if (cfg.output_path) {
      std::ofstream f(*cfg.output_path, std::ios::binary);
      if (!f) throw ConfigError("cannot open output " + *cfg.output_path);
      f << text;
    } else {
      out << text;
    }
    if (cfg.format == OutputFormat::Csv) {
      for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
    }
    for (const auto& c : rep.checks) {
      if (!c.pass) {
        err << subcommand_name(cfg.subcommand) << ": check " << c.name << " failed ("
            << format_double(c.value) << " > " << format_double(c.tolerance) << ")\n";
      }
    }
    return rep.all_checks_pass() ? kExitOk : kExitCheckFailed;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("fuzzy_casimir");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace fuzzy_casimir::cli
