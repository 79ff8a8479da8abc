#include "paircorr/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <vector>

#include "paircorr/approximations.hpp"
#include "paircorr/density.hpp"
#include "paircorr/empirical.hpp"
#include "paircorr/quadrature.hpp"
#include "paircorr/unfolding.hpp"

namespace paircorr {

using nlohmann::json;

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ScalingSpec parse_phi_expr(const std::string& expr, std::optional<double> declared_lambda) {
  static const std::string number = R"([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)";
  static const std::regex power("^\\s*N\\^\\(?\\s*(" + number + ")\\s*\\)?\\s*$");
  static const std::regex critical("^\\s*(?:(" + number + ")\\s*\\*\\s*)?N\\^\\(\\s*1\\s*-\\s*alpha\\s*\\)\\s*$");
  static const std::regex custom("^\\s*(" + number + ")\\s*\\*\\s*N\\^\\(?\\s*(" + number +
                                 ")\\s*\\)?\\s*$");
  std::smatch m;
  if (std::regex_match(expr, m, power)) return PowerBeta{std::stod(m[1])};
  if (std::regex_match(expr, m, critical)) return ScaledPower{m[1].matched ? std::stod(m[1]) : 1.0};
  if (std::regex_match(expr, m, custom)) {
    const double c = std::stod(m[1]);
    const double b = std::stod(m[2]);
    if (!(c > 0.0)) throw ConfigError("phi expression needs a positive constant: " + expr);
    CustomScaling s;
    s.evaluator = [c, b](std::uint64_t n) { return c * std::pow(static_cast<double>(n), b); };
    s.declared_lambda = declared_lambda;
    s.label = expr;
    return s;
  }
  throw ConfigError("unsupported phi expression '" + expr + "' (use N^b, l*N^(1-alpha) or c*N^b)");
}

namespace {

struct Options {
  // scaling
  double alpha = 0.5;
  std::optional<double> beta;
  std::optional<double> lambda;
  std::string phi_expr;
  std::optional<double> declared_lambda;
  std::string regime;  // density: finite | zero | infinite
  // sizes
  std::uint64_t n = 1000;
  double window = 8.0;
  // density
  double t_min = -8.0;
  double t_max = 8.0;
  double step = 0.01;
  bool scaled = false;
  // empirical
  double bin_width = 0.05;
  unsigned snap_bins = 0;
  std::optional<double> range_lo;
  std::optional<double> range_hi;
  std::string mode = "streaming";
  bool positive_only = false;
  unsigned threads = 1;
  // verify
  std::string suite;
  std::uint64_t cases = 1000;
  std::uint64_t seed = 20240601;
  // output
  std::string out;
  std::string format = "csv";
  std::string manifest;
  std::string from_manifest;
};

json options_to_json(const Options& o) {
  json j;
  j["alpha"] = o.alpha;
  if (o.beta) j["beta"] = *o.beta;
  if (o.lambda) j["lambda"] = *o.lambda;
  if (!o.phi_expr.empty()) j["phi_expr"] = o.phi_expr;
  if (o.declared_lambda) j["declared_lambda"] = *o.declared_lambda;
  j["n"] = o.n;
  j["window"] = o.window;
  j["bin_width"] = o.bin_width;
  j["snap_bins"] = o.snap_bins;
  if (o.range_lo) j["range_lo"] = *o.range_lo;
  if (o.range_hi) j["range_hi"] = *o.range_hi;
  j["mode"] = o.mode;
  j["positive_only"] = o.positive_only;
  j["threads"] = o.threads;
  j["format"] = o.format;
  return j;
}

void options_from_json(const json& j, Options& o) {
  o.alpha = j.at("alpha").get<double>();
  o.beta.reset();
  o.lambda.reset();
  o.phi_expr.clear();
  o.declared_lambda.reset();
  if (j.contains("beta")) o.beta = j["beta"].get<double>();
  if (j.contains("lambda")) o.lambda = j["lambda"].get<double>();
  if (j.contains("phi_expr")) o.phi_expr = j["phi_expr"].get<std::string>();
  if (j.contains("declared_lambda")) o.declared_lambda = j["declared_lambda"].get<double>();
  o.n = j.at("n").get<std::uint64_t>();
  o.window = j.at("window").get<double>();
  o.bin_width = j.value("bin_width", o.bin_width);
  o.snap_bins = j.value("snap_bins", 0u);
  if (j.contains("range_lo")) o.range_lo = j["range_lo"].get<double>();
  if (j.contains("range_hi")) o.range_hi = j["range_hi"].get<double>();
  o.mode = j.value("mode", o.mode);
  o.positive_only = j.value("positive_only", false);
  o.threads = j.value("threads", 1u);
  o.format = j.value("format", o.format);
}

ScalingSpec scaling_from(const Options& o) {
  const int given = (o.beta ? 1 : 0) + (o.lambda ? 1 : 0) + (o.phi_expr.empty() ? 0 : 1);
  if (given != 1) throw ConfigError("give exactly one of --beta, --lambda, --phi-expr");
  if (o.beta) return PowerBeta{*o.beta};
  if (o.lambda) return ScaledPower{*o.lambda};
  return parse_phi_expr(o.phi_expr, o.declared_lambda);
}

CorrelationConfig config_from(const Options& o) { return CorrelationConfig(o.alpha, scaling_from(o), o.n, o.window); }

std::uint64_t atom_cap_from_env() {
  if (const char* v = std::getenv("PAIRCORR_MEM_CAP")) {
    try {
      return std::stoull(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string("PAIRCORR_MEM_CAP is not an integer: ") + v);
    }
  }
  return kDefaultAtomCap;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ConfigError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

json regime_json(const Regime& r) {
  json j;
  j["kind"] = to_string(r);
  if (r.kind == RegimeKind::FiniteLambda) j["lambda"] = r.lambda;
  return j;
}

json report_json(const BoundReport& r) {
  json j;
  j["label"] = r.label;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["pass"] = r.pass;
  j["hypothesis_met"] = r.hypothesis_met;
  j["terms"] = r.terms;
  return j;
}

json failed_case(const std::string& label, const std::exception& e) {
  json j;
  j["label"] = label;
  j["pass"] = false;
  j["error"] = e.what();
  return j;
}

// density --------------------------------------------------------------------

Regime density_regime(const Options& o) {
  if (o.regime == "zero") return Regime::zero();
  if (o.regime == "infinite") return Regime::infinite();
  if (o.regime.empty() || o.regime == "finite") return Regime::finite(o.lambda.value_or(1.0));
  throw ConfigError("unknown regime '" + o.regime + "'");
}

int cmd_density(const Options& o) {
  if (!(o.step > 0.0) || !(o.t_min <= o.t_max)) throw ConfigError("density needs step > 0 and t-min <= t-max");
  const Regime regime = density_regime(o);
  const double reach = std::max(std::abs(o.t_min), std::abs(o.t_max));
  const DensityProfile profile(o.alpha, regime, std::max(reach, 1e-300));
  const auto count = static_cast<std::uint64_t>(std::floor((o.t_max - o.t_min) / o.step + 1e-9)) + 1;

  Output out(o.out);
  auto& os = out.stream();
  if (o.format == "json") {
    json j;
    j["alpha"] = o.alpha;
    j["regime"] = regime_json(regime);
    j["discontinuity_step"] = profile.jump_spacing();
    j["poisson_level"] = poisson_level(o.alpha);
    json rows = json::array();
    for (std::uint64_t i = 0; i < count; ++i) {
      const double t = o.t_min + static_cast<double>(i) * o.step;
      json row = {{"t", t}, {"rho", profile(t)}};
      if (o.scaled) row["rho_scaled"] = rho_scaled(o.alpha, t);
      rows.push_back(row);
    }
    j["rows"] = rows;
    os << j.dump(2) << '\n';
    return kExitPass;
  }
  os << "# command=density\n";
  os << "# alpha=" << format_number(o.alpha) << '\n';
  os << "# regime=" << to_string(regime) << '\n';
  if (regime.kind == RegimeKind::FiniteLambda) os << "# lambda=" << format_number(regime.lambda) << '\n';
  os << "# discontinuity_step=" << format_number(profile.jump_spacing()) << '\n';
  os << "# poisson_level=" << format_number(poisson_level(o.alpha)) << '\n';
  os << (o.scaled ? "t,rho,rho_scaled\n" : "t,rho\n");
  for (std::uint64_t i = 0; i < count; ++i) {
    const double t = o.t_min + static_cast<double>(i) * o.step;
    os << format_number(t) << ',' << format_number(profile(t));
    if (o.scaled) os << ',' << format_number(rho_scaled(o.alpha, t));
    os << '\n';
  }
  return kExitPass;
}

// empirical ------------------------------------------------------------------

int cmd_empirical(const Options& o, const std::vector<std::string>& argv) {
  const auto started = std::chrono::steady_clock::now();
  const std::string started_at = utc_now();
  const CorrelationConfig config = config_from(o);
  const Side side = o.positive_only ? Side::PositiveOnly : Side::Symmetric;
  const double lo = o.range_lo.value_or(o.positive_only ? 0.0 : -config.window());
  const double hi = o.range_hi.value_or(config.window());

  std::optional<Regime> regime;
  try {
    regime = classify_regime(config);
  } catch (const ConfigError&) {
    if (o.snap_bins > 0) throw;
  }

  std::optional<BinLayout> layout;
  if (o.snap_bins > 0) {
    if (regime->kind != RegimeKind::FiniteLambda) throw ConfigError("--snap-bins needs a finite lambda regime");
    layout = BinLayout::snapped(lo, hi, config.alpha() * regime->lambda, o.snap_bins);
  } else {
    layout = BinLayout::uniform(lo, hi, o.bin_width);
  }

  Histogram h;
  std::uint64_t atoms = 0;
  if (o.mode == "materialized") {
    EnumerationOptions eo;
    eo.threads = o.threads;
    eo.atom_cap = atom_cap_from_env();
    AtomMeasure m = enumerate_window(config, eo);
    atoms = m.size();
    if (side == Side::Symmetric) m = symmetrize(std::move(m));
    h = histogram(m, *layout);
  } else if (o.mode == "streaming") {
    h = stream_histogram(config, *layout, side, o.threads);
    atoms = h.total_pairs_visited;
  } else {
    throw ConfigError("unknown mode '" + o.mode + "'");
  }

  std::optional<DensityProfile> profile;
  if (regime) profile.emplace(config.alpha(), *regime, std::max({std::abs(lo), std::abs(hi), 1e-300}));
  auto limit_density = [&](std::size_t i) {
    if (!profile) return std::nan("");
    return rho_mass(*profile, h.edges[i], h.edges[i + 1]) / h.width(i);
  };

  Output out(o.out);
  auto& os = out.stream();
  if (o.format == "json") {
    json j;
    j["alpha"] = config.alpha();
    j["scaling"] = config.scaling_label();
    j["n"] = config.n();
    j["window"] = config.window();
    j["phi"] = config.phi();
    j["psi"] = config.psi();
    if (regime) j["regime"] = regime_json(*regime);
    j["discontinuity_step"] = profile ? profile->jump_spacing() : 0.0;
    j["side"] = o.positive_only ? "positive" : "symmetric";
    j["atoms"] = atoms;
    json rows = json::array();
    for (std::size_t i = 0; i < h.bins(); ++i) {
      rows.push_back({{"bin_left", h.edges[i]},
                      {"bin_right", h.edges[i + 1]},
                      {"count", h.counts[i]},
                      {"empirical_density", h.density(i)},
                      {"limit_density", limit_density(i)}});
    }
    j["rows"] = rows;
    os << j.dump(2) << '\n';
  } else {
    os << "# command=empirical\n";
    os << "# alpha=" << format_number(config.alpha()) << '\n';
    os << "# scaling=" << config.scaling_label() << '\n';
    os << "# n=" << config.n() << '\n';
    os << "# window=" << format_number(config.window()) << '\n';
    os << "# phi=" << format_number(config.phi()) << '\n';
    os << "# psi=" << format_number(config.psi()) << '\n';
    os << "# regime=" << (regime ? to_string(*regime) : std::string("undeclared")) << '\n';
    if (regime && regime->kind == RegimeKind::FiniteLambda) os << "# lambda=" << format_number(regime->lambda) << '\n';
    os << "# discontinuity_step=" << format_number(profile ? profile->jump_spacing() : 0.0) << '\n';
    os << "# side=" << (o.positive_only ? "positive" : "symmetric") << '\n';
    os << "# mode=" << o.mode << '\n';
    os << "# atoms=" << atoms << '\n';
    os << "bin_left,bin_right,empirical_density,limit_density\n";
    for (std::size_t i = 0; i < h.bins(); ++i) {
      os << format_number(h.edges[i]) << ',' << format_number(h.edges[i + 1]) << ',' << format_number(h.density(i))
         << ',' << format_number(limit_density(i)) << '\n';
    }
  }

  const std::string manifest_path = !o.manifest.empty() ? o.manifest : (o.out.empty() ? "" : o.out + ".manifest.json");
  if (!manifest_path.empty()) {
    json m;
    m["command"] = "empirical";
    m["argv"] = argv;
    m["config"] = options_to_json(o);
    m["started_at"] = started_at;
    m["finished_at"] = utc_now();
    m["outputs"] = o.out.empty() ? json::array() : json::array({o.out});
    m["atom_count"] = atoms;
    m["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    std::ofstream mf(manifest_path);
    if (!mf) throw ConfigError("cannot write manifest " + manifest_path);
    mf << m.dump(2) << '\n';
  }
  return kExitPass;
}

// verify ---------------------------------------------------------------------

std::vector<CorrelationConfig> single_or(const Options& o, bool single, std::vector<CorrelationConfig> grid) {
  if (single) return {config_from(o)};
  return grid;
}

json suite_linearization(const Options& o, bool single) {
  std::vector<CorrelationConfig> grid;
  for (double alpha : {0.3, 0.5, 0.7}) {
    for (std::uint64_t n : {1000ull, 10000ull, 100000ull}) grid.emplace_back(alpha, ScaledPower{1.0}, n, 2.0);
  }
  json reports = json::array();
  for (const auto& config : single_or(o, single, grid)) {
    const double a = config.window();
    for (const auto& f : {TestFunction::bump_shifted(0.1 * a, a), TestFunction::bump_symmetric(a, 0.0)}) {
      try {
        reports.push_back(report_json(check_linearization_bound(config, f, HypothesisPolicy::Enforce, o.threads)));
      } catch (const std::invalid_argument& e) {
        reports.push_back(failed_case("linearization N=" + std::to_string(config.n()), e));
      }
    }
  }
  return reports;
}

json suite_effective_zero(const Options& o, bool single) {
  std::vector<CorrelationConfig> grid;
  for (double alpha : {0.3, 0.5, 0.7}) {
    for (std::uint64_t n : {1000ull, 10000ull, 100000ull}) {
      for (double divisor : {2.0, 4.0}) grid.emplace_back(alpha, PowerBeta{(1.0 - alpha) / divisor}, n, 2.0);
    }
  }
  json reports = json::array();
  for (const auto& config : single_or(o, single, grid)) {
    const double a = config.window();
    for (const auto& f : {TestFunction::bump_symmetric(a), TestFunction::bump_symmetric(a, 0.0)}) {
      try {
        reports.push_back(report_json(verify_effective_bound(config, f, HypothesisPolicy::Report, o.threads)));
      } catch (const std::invalid_argument& e) {
        reports.push_back(failed_case("effective-zero N=" + std::to_string(config.n()), e));
      }
    }
  }
  return reports;
}

json suite_riemann(const Options& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> centre(-3.0, 3.0), width(0.05, 4.0), log_delta(-3.0, 0.0);
  std::uniform_int_distribution<std::uint64_t> terms(1, 10000);
  json reports = json::array();
  for (std::uint64_t i = 0; i < o.cases; ++i) {
    const double c = centre(rng);
    const double w = width(rng);
    const auto f = TestFunction::bump_on(c - 0.5 * w, c + 0.5 * w);
    const double delta = std::pow(10.0, log_delta(rng));
    const std::uint64_t m = terms(rng);
    BoundReport r;
    r.label = "riemann f=" + f.describe() + " delta=" + format_number(delta) + " M=" + std::to_string(m);
    try {
      const RiemannGap g = riemann_gap(f, delta, m);
      r.lhs = g.lhs;
      r.rhs = g.rhs;
      r.pass = g.lhs <= g.rhs;
      reports.push_back(report_json(r));
    } catch (const std::exception& e) {
      reports.push_back(failed_case(r.label, e));
    }
  }
  return reports;
}

std::vector<TestFunction> unfolding_functions() {
  std::vector<TestFunction> fs;
  for (int i = 0; i < 20; ++i) {
    const double lo = 0.1 + 0.1 * (i % 10);
    const double hi = lo + 0.4 + 0.35 * i;
    fs.push_back(TestFunction::bump_on(lo, hi, 1.0 + 0.1 * i));
  }
  return fs;
}

json suite_unfolding() {
  json reports = json::array();
  for (double alpha : {0.3, 0.5, 0.7, 0.9}) {
    for (const auto& f : unfolding_functions()) {
      BoundReport r;
      r.label = "unfolding alpha=" + format_number(alpha) + " f=" + f.describe();
      try {
        const DensityCrosscheck c = crosscheck_density(alpha, f);
        r.lhs = c.gap;
        r.rhs = 1e-8;
        r.pass = c.gap <= 1e-8;
        r.terms = {{"unfolded", c.unfolded}, {"direct", c.direct}};
        reports.push_back(report_json(r));
      } catch (const std::exception& e) {
        reports.push_back(failed_case(r.label, e));
      }
    }
  }
  return reports;
}

json suite_roots(const Options& o) {
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> alpha_d(0.2, 0.9), unit(0.0, 1.0), log_n(1.0, 7.0), t_d(0.0, 8.0),
      lambda_d(0.2, 5.0);
  json reports = json::array();
  for (std::uint64_t i = 0; i < o.cases; ++i) {
    const double alpha = alpha_d(rng);
    const auto n = static_cast<std::uint64_t>(std::pow(10.0, log_n(rng)));
    const bool poisson = unit(rng) < 0.5;
    const ScalingSpec s = poisson ? ScalingSpec(PowerBeta{(1.0 - alpha) * (0.1 + 0.8 * unit(rng))})
                                  : ScalingSpec(ScaledPower{lambda_d(rng)});
    const double t = t_d(rng);
    BoundReport r;
    try {
      const CorrelationConfig config(alpha, s, n, 8.0);
      r.label = "roots alpha=" + format_number(alpha) + " N=" + std::to_string(n) + " phi=" +
                config.scaling_label() + " t=" + format_number(t);
      const RootForm form = root_form(config);
      const double x = root_xNt(config, t);
      const RootBracket b = root_bracket(form, alpha, config.phi(), n, t);
      const double residual = std::abs(root_function(form, alpha, config.phi(), n, t, x));
      r.lhs = std::max({0.0, b.lo - x, x - b.hi});
      r.rhs = 0.0;
      r.pass = b.lo <= x && x <= b.hi && residual <= 1e-12 * static_cast<double>(n);
      r.terms = {{"x", x}, {"lo", b.lo}, {"hi", b.hi}, {"residual", residual}};
      if (form == RootForm::Poisson) {
        const RiemannGap g = theta_N_error_bound(config, t);
        r.terms["theta_gap"] = g.lhs;
        r.terms["theta_bound"] = g.rhs;
        r.pass = r.pass && g.lhs <= g.rhs;
      }
      reports.push_back(report_json(r));
    } catch (const std::exception& e) {
      reports.push_back(failed_case(r.label.empty() ? "roots case " + std::to_string(i) : r.label, e));
    }
  }
  return reports;
}

int cmd_verify(const Options& o, bool single) {
  json reports;
  if (o.suite == "linearization") {
    reports = suite_linearization(o, single);
  } else if (o.suite == "effective-zero") {
    reports = suite_effective_zero(o, single);
  } else if (o.suite == "riemann") {
    reports = suite_riemann(o);
  } else if (o.suite == "unfolding") {
    reports = suite_unfolding();
  } else if (o.suite == "roots") {
    reports = suite_roots(o);
  } else {
    throw ConfigError("unknown suite '" + o.suite + "'");
  }
  bool all = true;
  for (const auto& r : reports) all = all && r.value("pass", false);
  Output out(o.out);
  out.stream() << reports.dump(2) << '\n';
  return all ? kExitPass : kExitFailure;
}

void add_scaling_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--alpha", o.alpha, "exponent in (0,1)");
  cmd->add_option("--beta", o.beta, "phi(N) = N^beta");
  cmd->add_option("--lambda", o.lambda, "phi(N) = lambda N^(1-alpha)");
  cmd->add_option("--phi-expr", o.phi_expr, "N^b | l*N^(1-alpha) | c*N^b");
  cmd->add_option("--declared-lambda", o.declared_lambda, "limit of phi/N^(1-alpha) for c*N^b");
  cmd->add_option("--n", o.n, "number of terms N");
  cmd->add_option("--window", o.window, "observation window A");
  cmd->add_option("--threads", o.threads, "worker threads");
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"pair correlations of (n^alpha)"};
  app.require_subcommand(1);
  Options o;

  auto* density = app.add_subcommand("density", "sample the limit density");
  density->add_option("--alpha", o.alpha, "exponent in (0,1)");
  density->add_option("--lambda", o.lambda, "finite lambda (default 1)");
  density->add_option("--regime", o.regime, "finite | zero | infinite");
  density->add_option("--t-min", o.t_min);
  density->add_option("--t-max", o.t_max);
  density->add_option("--step", o.step);
  density->add_flag("--scaled", o.scaled, "add the rho_scaled column");
  density->add_option("--out", o.out, "output path (default stdout)");
  density->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));

  auto* empirical = app.add_subcommand("empirical", "histogram of the empirical measure");
  add_scaling_flags(empirical, o);
  empirical->add_option("--bin-width", o.bin_width);
  empirical->add_option("--snap-bins", o.snap_bins, "bins per jump spacing alpha*lambda");
  empirical->add_option("--lo", o.range_lo, "histogram range start");
  empirical->add_option("--hi", o.range_hi, "histogram range end");
  empirical->add_option("--mode", o.mode)->check(CLI::IsMember({"materialized", "streaming"}));
  empirical->add_flag("--positive-only", o.positive_only, "positive differences only");
  empirical->add_option("--out", o.out, "output path (default stdout)");
  empirical->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  empirical->add_option("--manifest", o.manifest, "manifest path (default <out>.manifest.json)");
  empirical->add_option("--from-manifest", o.from_manifest, "replay the configuration of a manifest");

  auto* verify = app.add_subcommand("verify", "check bounds and cross-checks");
  add_scaling_flags(verify, o);
  verify->add_option("--suite", o.suite)
      ->required()
      ->check(CLI::IsMember({"linearization", "effective-zero", "riemann", "unfolding", "roots"}));
  verify->add_option("--cases", o.cases, "random cases (riemann, roots)");
  verify->add_option("--seed", o.seed);
  verify->add_option("--out", o.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  std::vector<std::string> args(argv, argv + argc);
  try {
    if (*density) return cmd_density(o);
    if (*empirical) {
      if (!o.from_manifest.empty()) {
        std::ifstream in(o.from_manifest);
        if (!in) throw ConfigError("cannot read manifest " + o.from_manifest);
        const json m = json::parse(in);
        const std::string out = o.out;
        options_from_json(m.at("config"), o);
        o.out = out;
      }
      return cmd_empirical(o, args);
    }
    const bool single = verify->count("--n") > 0 || verify->count("--beta") > 0 || verify->count("--lambda") > 0 ||
                        verify->count("--phi-expr") > 0;
    return cmd_verify(o, single);
  } catch (const ResourceError& e) {
    std::cerr << "refused: " << e.what() << " (estimated atoms " << e.requested() << ", cap " << e.cap()
              << "; use --mode streaming)\n";
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace paircorr
