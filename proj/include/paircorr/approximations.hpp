#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "paircorr/config.hpp"
#include "paircorr/empirical.hpp"
#include "paircorr/test_function.hpp"

namespace paircorr {

/// Outcome of checking one quantitative inequality lhs <= rhs.
struct BoundReport {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  /// False when the inequality's hypothesis on N was not met but the check
  /// was still evaluated (HypothesisPolicy::Report).
  bool hypothesis_met = true;
  std::map<std::string, double> terms;
};

enum class HypothesisPolicy { Enforce, Report };

/// Constants of the linearization bound (c'_alpha) and of the Poisson-regime
/// effective bound (c_alpha = 2 max{c'_alpha, (1+alpha)/(2 alpha), 1/(2 alpha^2)}).
struct ExplicitConstants {
  double alpha = 0.0;
  double c_alpha_prime = 0.0;
  double c_alpha = 0.0;

  static ExplicitConstants for_alpha(double alpha);
  /// (32/3) 2^(1/alpha) / alpha^2, a majorant of c'_alpha.
  double c_alpha_prime_majorant() const;
};

/// phi(N) must exceed A / (2^alpha - 1) for the linearization bound.
double linearization_threshold(double alpha, double window);
bool linearization_hypothesis(const CorrelationConfig& config);

/// mu_N^+: atoms p * delta_{N,m}, delta_{N,m} = alpha phi(N) / m^(1-alpha),
/// for 1 <= p <= min(N - m, floor(A / delta_{N,m})), each of mass 1/psi(N).
struct LinearizedMeasure {
  double weight = 0.0;
  std::vector<double> atoms;
  CorrelationConfig config;

  std::size_t size() const { return atoms.size(); }
};

/// delta_{N,m}.
double linear_step(const CorrelationConfig& config, std::uint64_t m);

LinearizedMeasure linearized_measure(const CorrelationConfig& config,
                                     HypothesisPolicy policy = HypothesisPolicy::Enforce,
                                     const EnumerationOptions& options = {});
double evaluate(const LinearizedMeasure& measure, const TestFunction& f);
double evaluate_linearized_streaming(const CorrelationConfig& config, const TestFunction& f, unsigned threads = 1);

/// |R_N^{alpha,+}(f) - mu_N^+(f)| <= c'_alpha A^3 ||f'|| / (N^alpha phi(N)).
BoundReport check_linearization_bound(const CorrelationConfig& config, const TestFunction& f,
                                      HypothesisPolicy policy = HypothesisPolicy::Enforce, unsigned threads = 1);

struct RiemannGap {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = |int_0^{M delta} f - delta sum_{p=1}^{M} f(p delta)|,
/// rhs = (||f'||/2) delta min{B, M delta} with supp f in [-B, B].
RiemannGap riemann_gap(const TestFunction& f, double delta, std::uint64_t m_terms);

/// Which zero x_{N,t} is meant.
///   Poisson (lambda = 0): g(x) = (N - x) - t x^(1-alpha) / (alpha phi), decreasing.
///   Exotic (finite lambda): g(x) = x - (t/alpha) (N - x)^(1-alpha) / phi, increasing.
enum class RootForm { Poisson, Exotic };

RootForm root_form(const CorrelationConfig& config);

struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Closed-form sandwich of the zero:
///   Poisson: N (1 - t / (alpha N^alpha phi)) <= x <= N.
///   Exotic:  (t/alpha)(N^(1-alpha)/phi)(1 - t/(alpha N^alpha phi))^(1-alpha) <= x <= (t/alpha) N^(1-alpha)/phi.
/// Both ends are clipped to [0, N].
RootBracket root_bracket(RootForm form, double alpha, double phi, std::uint64_t n, double t);

/// g_{N,t} for the given form.
double root_function(RootForm form, double alpha, double phi, std::uint64_t n, double t, double x);

/// Zero of g_{N,t} by bisection inside root_bracket.
double root_xNt(RootForm form, double alpha, double phi, std::uint64_t n, double t);
double root_xNt(const CorrelationConfig& config, double t);

/// Density of the Riemann measure nu_N^+ at t >= 0.
///   Poisson: (1/(alpha N^(2-alpha))) sum_{m=1}^{floor x} m^(1-alpha).
///   Exotic:  (phi^q/psi) alpha^q/(1-alpha) t^-(1+q) sum_{p=1}^{floor x} p^q, q = 1/(1-alpha).
/// Term counts are capped at N - 1.
double theta_N(const CorrelationConfig& config, double t);

/// (psi/phi^q) theta_N(t) in the exotic form, evaluated without the prefactor.
double theta_hat_N(const CorrelationConfig& config, double t);

/// Pointwise limit of theta_hat_N: alpha^q/(1-alpha) t^-(1+q) sum_{p=1}^{floor(t/(alpha lambda))} p^q.
/// With lambda = 1 this is rho_{alpha,1} on the half line.
double theta_infinity(double alpha, double lambda, double t);

/// |theta_N(t) - 1/(alpha(2-alpha))| <= (1/alpha)(1/N + t/(alpha N^alpha phi)), Poisson regime.
RiemannGap theta_N_error_bound(const CorrelationConfig& config, double t);

/// Poisson-regime effective bound
///   |R_N(f) - Leb(f)/(alpha(2-alpha))| <= c_alpha (||f|| + ||f'||) A^3 (phi/N^(1-alpha) + 1/(N^alpha phi) + 1/N).
BoundReport verify_effective_bound(const CorrelationConfig& config, const TestFunction& f,
                                   HypothesisPolicy policy = HypothesisPolicy::Enforce, unsigned threads = 1);

/// Infinite-lambda statement: once alpha phi(N)/(2N)^(1-alpha) > A, R_N(f) = 0.
/// lhs is |R_N(f)| plus the enumerated atom count, rhs is 0.
BoundReport check_vanishing(const CorrelationConfig& config, const TestFunction& f, unsigned threads = 1);

/// Finite-lambda regime: the error and the two shape terms of its bound,
/// whose constant is not explicit. No pass/fail is attached.
struct FiniteLambdaDiagnostic {
  double empirical = 0.0;
  double limit = 0.0;
  double error = 0.0;
  double rate_term = 0.0;      // A^((3-2a)/(1-a)) (lambda^2 ||f'|| + lambda ||f||) / N
  double mismatch_term = 0.0;  // A^2 lambda ||f|| |(phi/(lambda N^(1-a)))^((2-a)/(1-a)) - 1|
};

FiniteLambdaDiagnostic finite_lambda_diagnostic(const CorrelationConfig& config, const TestFunction& f,
                                                unsigned threads = 1);

}  // namespace paircorr
