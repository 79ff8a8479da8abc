#include "paircorr/config.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace paircorr {

Regime Regime::infinite() { return {RegimeKind::InfiniteLambda, std::numeric_limits<double>::infinity()}; }
Regime Regime::zero() { return {RegimeKind::ZeroLambda, 0.0}; }
Regime Regime::finite(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("finite regime needs 0 < lambda < inf");
  }
  return {RegimeKind::FiniteLambda, lambda};
}

std::string to_string(const Regime& regime) {
  switch (regime.kind) {
    case RegimeKind::InfiniteLambda:
      return "infinite";
    case RegimeKind::ZeroLambda:
      return "zero";
    case RegimeKind::FiniteLambda: {
      std::ostringstream os;
      os.precision(17);
      os << "finite(" << regime.lambda << ")";
      return os.str();
    }
  }
  return "?";
}

namespace {

std::optional<double> forced_lambda(const ScalingSpec& scaling, double alpha) {
  if (const auto* pb = std::get_if<PowerBeta>(&scaling)) {
    const double critical = 1.0 - alpha;
    if (std::abs(pb->beta - critical) <= kCriticalBetaTolerance) return 1.0;
    return pb->beta > critical ? std::numeric_limits<double>::infinity() : 0.0;
  }
  if (const auto* sp = std::get_if<ScaledPower>(&scaling)) return sp->lambda;
  return std::get<CustomScaling>(scaling).declared_lambda;
}

}  // namespace

double scaling_factor(const ScalingSpec& scaling, double alpha, std::uint64_t n) {
  const double nd = static_cast<double>(n);
  return std::visit(
      [&](const auto& s) -> double {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, PowerBeta>) {
          return std::pow(nd, s.beta);
        } else if constexpr (std::is_same_v<S, ScaledPower>) {
          return s.lambda * std::pow(nd, 1.0 - alpha);
        } else {
          return s.evaluator(n);
        }
      },
      scaling);
}

CorrelationConfig::CorrelationConfig(double alpha, ScalingSpec scaling, std::uint64_t n, double window)
    : alpha_(alpha), scaling_(std::move(scaling)), n_(n), window_(window) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (!(window > 1.0) || !std::isfinite(window)) throw ConfigError("window A must be a finite real > 1");
  if (n < 1) throw ConfigError("N must be >= 1");
  if (const auto* pb = std::get_if<PowerBeta>(&scaling_)) {
    if (!(pb->beta > 0.0 && pb->beta < 1.0)) throw ConfigError("beta must lie in (0,1)");
  } else if (const auto* sp = std::get_if<ScaledPower>(&scaling_)) {
    if (!(sp->lambda > 0.0) || !std::isfinite(sp->lambda)) throw ConfigError("lambda must be a finite real > 0");
  } else {
    const auto& cs = std::get<CustomScaling>(scaling_);
    if (!cs.evaluator) throw ConfigError("custom scaling needs an evaluator");
    if (cs.declared_lambda && !(*cs.declared_lambda >= 0.0)) {
      throw ConfigError("declared lambda must lie in [0, inf]");
    }
  }
  lambda_hint_ = forced_lambda(scaling_, alpha_);
  phi_ = scaling_factor(scaling_, alpha_, n_);
  if (!(phi_ > 0.0) || !std::isfinite(phi_)) throw ConfigError("phi(N) must be a finite positive real");
  psi_ = std::pow(static_cast<double>(n_), 2.0 - alpha_) / phi_;
}

CorrelationConfig CorrelationConfig::with_n(std::uint64_t n) const {
  return CorrelationConfig(alpha_, scaling_, n, window_);
}

CorrelationConfig CorrelationConfig::with_window(double window) const {
  return CorrelationConfig(alpha_, scaling_, n_, window);
}

std::string CorrelationConfig::scaling_label() const {
  std::ostringstream os;
  os.precision(17);
  if (const auto* pb = std::get_if<PowerBeta>(&scaling_)) {
    os << "N^" << pb->beta;
  } else if (const auto* sp = std::get_if<ScaledPower>(&scaling_)) {
    os << sp->lambda << "*N^(1-alpha)";
  } else {
    os << std::get<CustomScaling>(scaling_).label;
  }
  return os.str();
}

Regime classify_regime(const CorrelationConfig& config) {
  const auto lambda = config.lambda_hint();
  if (!lambda) throw ConfigError("custom scaling must declare its lambda = lim phi(N)/N^(1-alpha)");
  if (std::isinf(*lambda)) return Regime::infinite();
  if (*lambda == 0.0) return Regime::zero();
  return Regime::finite(*lambda);
}

}  // namespace paircorr
