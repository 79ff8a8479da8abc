#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

namespace paircorr {

/// Raised when a configuration violates its invariants.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an operation's mathematical hypothesis is not met.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// phi(N) = N^beta.
struct PowerBeta {
  double beta;
};

/// phi(N) = lambda * N^(1 - alpha).
struct ScaledPower {
  double lambda;
};

/// Arbitrary positive scaling with a declared limit of phi(N)/N^(1-alpha).
/// The limit cannot be computed, so it has to be declared.
struct CustomScaling {
  std::function<double(std::uint64_t)> evaluator;
  std::optional<double> declared_lambda;  // in [0, inf]
  std::string label = "custom";
};

using ScalingSpec = std::variant<PowerBeta, ScaledPower, CustomScaling>;

enum class RegimeKind { InfiniteLambda, ZeroLambda, FiniteLambda };

struct Regime {
  RegimeKind kind = RegimeKind::ZeroLambda;
  double lambda = 0.0;  // meaningful for FiniteLambda; 0 or inf otherwise

  static Regime infinite();
  static Regime zero();
  static Regime finite(double lambda);

  friend bool operator==(const Regime&, const Regime&) = default;
};

std::string to_string(const Regime& regime);

/// Parameters of one empirical pair-correlation measure of (n^alpha).
/// Immutable once built; psi is always derived as N^(2-alpha)/phi(N).
class CorrelationConfig {
 public:
  CorrelationConfig(double alpha, ScalingSpec scaling, std::uint64_t n, double window);

  double alpha() const { return alpha_; }
  const ScalingSpec& scaling() const { return scaling_; }
  std::uint64_t n() const { return n_; }
  double window() const { return window_; }
  std::optional<double> lambda_hint() const { return lambda_hint_; }

  /// Scaling factor phi(N).
  double phi() const { return phi_; }
  /// Renormalization factor psi(N) = N^(2-alpha)/phi(N).
  double psi() const { return psi_; }

  /// Same alpha, scaling and window at a different N.
  CorrelationConfig with_n(std::uint64_t n) const;
  CorrelationConfig with_window(double window) const;

  std::string scaling_label() const;

 private:
  double alpha_;
  ScalingSpec scaling_;
  std::uint64_t n_;
  double window_;
  std::optional<double> lambda_hint_;
  double phi_;
  double psi_;
};

/// Evaluates phi at an arbitrary N for the given scaling.
double scaling_factor(const ScalingSpec& scaling, double alpha, std::uint64_t n);

/// |beta - (1 - alpha)| below this counts as the critical exponent.
inline constexpr double kCriticalBetaTolerance = 1e-12;

Regime classify_regime(const CorrelationConfig& config);

}  // namespace paircorr
