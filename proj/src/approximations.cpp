#include "paircorr/approximations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "paircorr/density.hpp"
#include "paircorr/detail/compensated_sum.hpp"
#include "paircorr/detail/parallel.hpp"
#include "paircorr/detail/power_sum.hpp"
#include "paircorr/quadrature.hpp"

namespace paircorr {

namespace {

constexpr std::uint64_t kBlockSize = 1u << 14;

// Largest p <= cap with p * delta <= A.
std::uint64_t linear_p_bound(double delta, double window, std::uint64_t cap) {
  const double guess = window / delta;
  if (guess >= static_cast<double>(cap)) return cap;
  auto p = static_cast<std::uint64_t>(std::floor(guess));
  while (p > 0 && static_cast<double>(p) * delta > window) --p;
  while (p < cap && static_cast<double>(p + 1) * delta <= window) ++p;
  return p;
}

template <class Visit>
void visit_linearized(const CorrelationConfig& config, std::uint64_t begin, std::uint64_t end, Visit&& visit) {
  for (std::uint64_t m = begin; m < end; ++m) {
    const double delta = linear_step(config, m);
    const std::uint64_t last = linear_p_bound(delta, config.window(), config.n() - m);
    for (std::uint64_t p = 1; p <= last; ++p) visit(static_cast<double>(p) * delta);
  }
}

void require_window_support(const CorrelationConfig& config, const TestFunction& f) {
  if (f.lo() < -config.window() || f.hi() > config.window()) {
    throw PreconditionError("test function support " + f.describe() + " exceeds [-A, A]");
  }
}

bool check_hypothesis(bool met, HypothesisPolicy policy, const std::string& what) {
  if (!met && policy == HypothesisPolicy::Enforce) throw PreconditionError(what);
  return met;
}

double exotic_prefactor(const CorrelationConfig& config) {
  // phi^q / psi = phi^(q+1) / N^(2-alpha)
  const double q = 1.0 / (1.0 - config.alpha());
  const double nd = static_cast<double>(config.n());
  return std::exp((q + 1.0) * std::log(config.phi()) - (2.0 - config.alpha()) * std::log(nd));
}

std::uint64_t root_term_count(const CorrelationConfig& config, double t) {
  const double x = root_xNt(config, t);
  const auto k = static_cast<std::uint64_t>(std::floor(x));
  return std::min<std::uint64_t>(k, config.n() - 1);
}

}  // namespace

ExplicitConstants ExplicitConstants::for_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  ExplicitConstants c;
  c.alpha = alpha;
  c.c_alpha_prime = (std::pow(2.0, 1.0 + 3.0 * (1.0 - alpha)) +
                     std::pow(2.0, 1.0 / alpha + 4.0 - 3.0 * alpha) * (1.0 - alpha)) /
                    (3.0 * alpha * alpha);
  c.c_alpha = 2.0 * std::max({c.c_alpha_prime, (1.0 + alpha) / (2.0 * alpha), 1.0 / (2.0 * alpha * alpha)});
  return c;
}

double ExplicitConstants::c_alpha_prime_majorant() const {
  return 32.0 / 3.0 * std::pow(2.0, 1.0 / alpha) / (alpha * alpha);
}

double linearization_threshold(double alpha, double window) { return window / (std::pow(2.0, alpha) - 1.0); }

bool linearization_hypothesis(const CorrelationConfig& config) {
  return config.phi() > linearization_threshold(config.alpha(), config.window());
}

double linear_step(const CorrelationConfig& config, std::uint64_t m) {
  return config.alpha() * config.phi() / std::pow(static_cast<double>(m), 1.0 - config.alpha());
}

LinearizedMeasure linearized_measure(const CorrelationConfig& config, HypothesisPolicy policy,
                                     const EnumerationOptions& options) {
  if (config.n() < 2) return {1.0 / config.psi(), {}, config};
  check_hypothesis(linearization_hypothesis(config), policy,
                   "linearization needs phi(N) > A/(2^alpha - 1) = " +
                       std::to_string(linearization_threshold(config.alpha(), config.window())));
  std::uint64_t expected = 0;
  for (std::uint64_t m = 1; m < config.n(); ++m) {
    expected += linear_p_bound(linear_step(config, m), config.window(), config.n() - m);
    if (expected > options.atom_cap) {
      throw ResourceError("linearized measure exceeds the atom cap of " + std::to_string(options.atom_cap),
                          expected, options.atom_cap);
    }
  }
  LinearizedMeasure measure{1.0 / config.psi(), {}, config};
  measure.atoms.reserve(expected);
  visit_linearized(config, 1, config.n(), [&](double x) { measure.atoms.push_back(x); });
  return measure;
}

double evaluate(const LinearizedMeasure& measure, const TestFunction& f) {
  require_window_support(measure.config, f);
  detail::CompensatedSum acc;
  for (double x : measure.atoms) acc.add(f(x));
  return measure.weight * acc.value();
}

double evaluate_linearized_streaming(const CorrelationConfig& config, const TestFunction& f, unsigned threads) {
  require_window_support(config, f);
  const auto partial = detail::map_blocks<detail::CompensatedSum>(
      1, config.n(), kBlockSize, threads, [&](std::uint64_t begin, std::uint64_t end) {
        detail::CompensatedSum acc;
        visit_linearized(config, begin, end, [&](double x) { acc.add(f(x)); });
        return acc;
      });
  detail::CompensatedSum total;
  for (const auto& p : partial) total.merge(p);
  return total.value() / config.psi();
}

BoundReport check_linearization_bound(const CorrelationConfig& config, const TestFunction& f,
                                      HypothesisPolicy policy, unsigned threads) {
  require_window_support(config, f);
  BoundReport report;
  report.label = "linearization alpha=" + std::to_string(config.alpha()) + " N=" + std::to_string(config.n()) +
                 " phi=" + config.scaling_label() + " f=" + f.describe();
  report.hypothesis_met = check_hypothesis(linearization_hypothesis(config), policy,
                                           "linearization needs phi(N) > A/(2^alpha - 1)");
  const double exact = evaluate_streaming(config, f, Side::PositiveOnly, threads);
  const double linear = evaluate_linearized_streaming(config, f, threads);
  const auto constants = ExplicitConstants::for_alpha(config.alpha());
  const double a = config.window();
  const double nd = static_cast<double>(config.n());
  report.lhs = std::abs(exact - linear);
  report.rhs = constants.c_alpha_prime * a * a * a * f.deriv_sup_norm() /
               (std::pow(nd, config.alpha()) * config.phi());
  report.pass = report.lhs <= report.rhs;
  report.terms = {{"R_plus", exact},
                  {"mu_plus", linear},
                  {"c_alpha_prime", constants.c_alpha_prime},
                  {"phi", config.phi()},
                  {"threshold", linearization_threshold(config.alpha(), a)}};
  return report;
}

RiemannGap riemann_gap(const TestFunction& f, double delta, std::uint64_t m_terms) {
  if (!(delta > 0.0)) throw PreconditionError("riemann_gap needs delta > 0");
  if (m_terms < 1) throw PreconditionError("riemann_gap needs M >= 1");
  if (f.is_zero()) return {0.0, 0.0};
  const double top = static_cast<double>(m_terms) * delta;

  double integral = 0.0;
  const double lo = std::max(0.0, f.lo());
  const double hi = std::min(top, f.hi());
  if (hi > lo) integral = integrate([&](double t) { return f(t); }, lo, hi, 1e-14 * f.sup_norm());

  detail::CompensatedSum sum;
  const double first = std::max(1.0, std::ceil(f.lo() / delta));
  const double last = std::min(static_cast<double>(m_terms), std::floor(f.hi() / delta));
  for (double p = first; p <= last; p += 1.0) sum.add(f(p * delta));

  return {std::abs(integral - delta * sum.value()), 0.5 * f.deriv_sup_norm() * delta * std::min(f.support_radius(), top)};
}

RootForm root_form(const CorrelationConfig& config) {
  switch (classify_regime(config).kind) {
    case RegimeKind::ZeroLambda:
      return RootForm::Poisson;
    case RegimeKind::FiniteLambda:
      return RootForm::Exotic;
    case RegimeKind::InfiniteLambda:
      break;
  }
  throw PreconditionError("x_{N,t} is only defined for the zero and finite lambda regimes");
}

double root_function(RootForm form, double alpha, double phi, std::uint64_t n, double t, double x) {
  const double nd = static_cast<double>(n);
  if (form == RootForm::Poisson) return (nd - x) - t / (alpha * phi) * std::pow(x, 1.0 - alpha);
  return x - (t / alpha) * std::pow(nd - x, 1.0 - alpha) / phi;
}

RootBracket root_bracket(RootForm form, double alpha, double phi, std::uint64_t n, double t) {
  if (t < 0.0) throw PreconditionError("x_{N,t} needs t >= 0");
  const double nd = static_cast<double>(n);
  const double shrink = t / (alpha * std::pow(nd, alpha) * phi);
  RootBracket b;
  if (form == RootForm::Poisson) {
    b.lo = nd * (1.0 - shrink);
    b.hi = nd;
  } else {
    b.hi = (t / alpha) * std::pow(nd, 1.0 - alpha) / phi;
    b.lo = b.hi * std::pow(std::max(0.0, 1.0 - shrink), 1.0 - alpha);
  }
  b.lo = std::clamp(b.lo, 0.0, nd);
  b.hi = std::clamp(b.hi, 0.0, nd);
  return b;
}

double root_xNt(RootForm form, double alpha, double phi, std::uint64_t n, double t) {
  const RootBracket bracket = root_bracket(form, alpha, phi, n, t);
  const double nd = static_cast<double>(n);
  // oriented to increase in x
  auto h = [&](double x) {
    const double g = root_function(form, alpha, phi, n, t, x);
    return form == RootForm::Poisson ? -g : g;
  };
  const double tolerance = 1e-12 * nd;
  double lo = bracket.lo;
  double hi = bracket.hi;
  const double h_lo = h(lo);
  const double h_hi = h(hi);
  if (h_lo > 0.0) {
    if (h_lo <= tolerance) return lo;
    throw NumericalError("root bracket does not enclose the zero (lower end)", h_lo);
  }
  if (h_hi < 0.0) {
    if (-h_hi <= tolerance) return hi;
    throw NumericalError("root bracket does not enclose the zero (upper end)", -h_hi);
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (h(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r_lo = std::abs(h(lo));
  const double r_hi = std::abs(h(hi));
  const double x = r_lo <= r_hi ? lo : hi;
  const double residual = std::min(r_lo, r_hi);
  if (residual > tolerance) throw NumericalError("bisection residual above 1e-12 N", residual);
  return x;
}

double root_xNt(const CorrelationConfig& config, double t) {
  return root_xNt(root_form(config), config.alpha(), config.phi(), config.n(), t);
}

double theta_N(const CorrelationConfig& config, double t) {
  if (t < 0.0) throw PreconditionError("theta_N needs t >= 0");
  const RootForm form = root_form(config);
  const std::uint64_t k = root_term_count(config, t);
  const double alpha = config.alpha();
  if (form == RootForm::Poisson) {
    const double nd = static_cast<double>(config.n());
    return detail::power_sum(k, 1.0 - alpha) / (alpha * std::pow(nd, 2.0 - alpha));
  }
  if (k == 0) return 0.0;
  return exotic_prefactor(config) * exotic_piece(alpha, t, k);
}

double theta_hat_N(const CorrelationConfig& config, double t) {
  if (root_form(config) != RootForm::Exotic) throw PreconditionError("theta_hat_N is the finite lambda form");
  if (t < 0.0) throw PreconditionError("theta_hat_N needs t >= 0");
  const std::uint64_t k = root_term_count(config, t);
  return k == 0 ? 0.0 : exotic_piece(config.alpha(), t, k);
}

double theta_infinity(double alpha, double lambda, double t) {
  if (t < 0.0) throw PreconditionError("theta_infinity needs t >= 0");
  const double step = alpha * lambda;
  if (t < step) return 0.0;
  return exotic_piece(alpha, t, static_cast<std::uint64_t>(std::floor(t / step)));
}

RiemannGap theta_N_error_bound(const CorrelationConfig& config, double t) {
  if (classify_regime(config).kind != RegimeKind::ZeroLambda) {
    throw PreconditionError("theta_N error bound holds in the zero lambda regime");
  }
  const double alpha = config.alpha();
  const double nd = static_cast<double>(config.n());
  const double lhs = std::abs(theta_N(config, t) - poisson_level(alpha));
  const double rhs = (1.0 / alpha) * (1.0 / nd + t / (alpha * std::pow(nd, alpha) * config.phi()));
  return {lhs, rhs};
}

BoundReport verify_effective_bound(const CorrelationConfig& config, const TestFunction& f, HypothesisPolicy policy,
                                   unsigned threads) {
  if (classify_regime(config).kind != RegimeKind::ZeroLambda) {
    throw PreconditionError("the explicit effective bound is stated for the zero lambda regime");
  }
  require_window_support(config, f);
  BoundReport report;
  report.label = "effective-zero alpha=" + std::to_string(config.alpha()) + " N=" + std::to_string(config.n()) +
                 " phi=" + config.scaling_label() + " f=" + f.describe();
  report.hypothesis_met = check_hypothesis(linearization_hypothesis(config), policy,
                                           "effective bound needs phi(N) > A/(2^alpha - 1)");
  const double alpha = config.alpha();
  const double a = config.window();
  const double nd = static_cast<double>(config.n());
  const double phi = config.phi();
  const double empirical = evaluate_streaming(config, f, Side::Symmetric, threads);
  const double limit = rho_integral_against(DensityProfile(alpha, Regime::zero(), a), f);
  const auto constants = ExplicitConstants::for_alpha(alpha);
  const double scale_term = phi / std::pow(nd, 1.0 - alpha);
  const double linear_term = 1.0 / (std::pow(nd, alpha) * phi);
  const double count_term = 1.0 / nd;
  report.lhs = std::abs(empirical - limit);
  report.rhs = constants.c_alpha * (f.sup_norm() + f.deriv_sup_norm()) * a * a * a *
               (scale_term + linear_term + count_term);
  report.pass = report.lhs < report.rhs || (report.lhs == 0.0 && report.rhs == 0.0);
  report.terms = {{"R_N", empirical},           {"limit", limit},           {"c_alpha", constants.c_alpha},
                  {"phi_over_N1ma", scale_term}, {"inv_Na_phi", linear_term}, {"inv_N", count_term},
                  {"phi", phi}};
  return report;
}

BoundReport check_vanishing(const CorrelationConfig& config, const TestFunction& f, unsigned threads) {
  require_window_support(config, f);
  BoundReport report;
  report.label = "vanishing alpha=" + std::to_string(config.alpha()) + " N=" + std::to_string(config.n()) +
                 " phi=" + config.scaling_label();
  const double gap = empirical_repulsion_gap(config);
  report.hypothesis_met = gap > config.window();
  const std::uint64_t atoms = count_window_atoms(config, threads);
  const double value = evaluate_streaming(config, f, Side::Symmetric, threads);
  report.lhs = std::abs(value) + static_cast<double>(atoms);
  report.rhs = 0.0;
  report.pass = atoms == 0 && value == 0.0;
  report.terms = {{"gap", gap}, {"atoms", static_cast<double>(atoms)}, {"R_N", value}};
  return report;
}

FiniteLambdaDiagnostic finite_lambda_diagnostic(const CorrelationConfig& config, const TestFunction& f,
                                                unsigned threads) {
  const Regime regime = classify_regime(config);
  if (regime.kind != RegimeKind::FiniteLambda) throw PreconditionError("diagnostic needs a finite lambda regime");
  require_window_support(config, f);
  const double alpha = config.alpha();
  const double lambda = regime.lambda;
  const double a = config.window();
  const double nd = static_cast<double>(config.n());
  FiniteLambdaDiagnostic d;
  d.empirical = evaluate_streaming(config, f, Side::Symmetric, threads);
  d.limit = rho_integral_against(DensityProfile(alpha, regime, a), f);
  d.error = std::abs(d.empirical - d.limit);
  d.rate_term = std::pow(a, (3.0 - 2.0 * alpha) / (1.0 - alpha)) *
                (lambda * lambda * f.deriv_sup_norm() + lambda * f.sup_norm()) / nd;
  const double ratio = config.phi() / (lambda * std::pow(nd, 1.0 - alpha));
  d.mismatch_term = a * a * lambda * f.sup_norm() * std::abs(std::pow(ratio, (2.0 - alpha) / (1.0 - alpha)) - 1.0);
  return d;
}

}  // namespace paircorr
