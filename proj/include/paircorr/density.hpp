#pragma once

#include <cstdint>
#include <vector>

#include "paircorr/config.hpp"
#include "paircorr/test_function.hpp"

namespace paircorr {

/// Limit pair-correlation density rho_alpha for one regime.
///
/// FiniteLambda(lambda):
///   rho(t) = alpha^q/(1-alpha) * (|t|/lambda)^-(1+q) * sum_{p=1}^{floor(|t|/(alpha lambda))} p^q,
///   q = 1/(1-alpha). Zero on (-alpha lambda, alpha lambda), jumps at the
///   nonzero multiples of alpha lambda, tends to 1/(alpha(2-alpha)) at infinity.
/// ZeroLambda: the Poisson constant 1/(alpha(2-alpha)).
/// InfiniteLambda: identically zero.
///
/// At a jump point the floor is taken literally, so the value is the limit
/// from the right in |t|.
class DensityProfile {
 public:
  /// `window` bounds the list of reported discontinuities to [-window, window].
  DensityProfile(double alpha, Regime regime, double window = 8.0);
  static DensityProfile from_config(const CorrelationConfig& config);

  double alpha() const { return alpha_; }
  const Regime& regime() const { return regime_; }
  double window() const { return window_; }
  /// Spacing alpha * lambda between jumps (finite regime), 0 otherwise.
  double jump_spacing() const { return step_; }
  /// Ascending jump points +-k alpha lambda inside the window.
  const std::vector<double>& discontinuities() const { return discontinuities_; }

  double operator()(double t) const;

 private:
  double alpha_;
  Regime regime_;
  double window_;
  double step_ = 0.0;
  std::vector<double> discontinuities_;
};

/// 1/(alpha(2-alpha)).
double poisson_level(double alpha);

/// Smooth piece of the exotic density at u = |t|/lambda with the floor
/// replaced by an explicit term count k:
///   (1/((1-alpha) u)) * sum_{p=1}^{k} (alpha p / u)^(1/(1-alpha)).
double exotic_piece(double alpha, double u, std::uint64_t k);

double rho(const DensityProfile& profile, double t);

/// alpha(2-alpha) rho_{alpha,1}(alpha t); tends to 1 away from the integers.
double rho_scaled(double alpha, double t);

/// Exact integral of rho over [a, b] from the piecewise antiderivative.
double rho_mass(const DensityProfile& profile, double a, double b);

/// Integral of f * rho, quadrature split at every jump inside supp f.
double rho_integral_against(const DensityProfile& profile, const TestFunction& f, double abs_tol = 1e-10);

}  // namespace paircorr
