#include "paircorr/density.hpp"

#include <algorithm>
#include <cmath>

#include "paircorr/detail/power_sum.hpp"
#include "paircorr/quadrature.hpp"

namespace paircorr {

DensityProfile::DensityProfile(double alpha, Regime regime, double window)
    : alpha_(alpha), regime_(regime), window_(window) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
  if (!(window >= 0.0) || !std::isfinite(window)) throw ConfigError("density window must be finite and >= 0");
  if (regime_.kind == RegimeKind::FiniteLambda) {
    step_ = alpha_ * regime_.lambda;
    const auto count = static_cast<std::int64_t>(std::floor(window_ / step_));
    discontinuities_.reserve(2 * static_cast<std::size_t>(count));
    for (std::int64_t k = count; k >= 1; --k) discontinuities_.push_back(-static_cast<double>(k) * step_);
    for (std::int64_t k = 1; k <= count; ++k) discontinuities_.push_back(static_cast<double>(k) * step_);
  }
}

DensityProfile DensityProfile::from_config(const CorrelationConfig& config) {
  return DensityProfile(config.alpha(), classify_regime(config), config.window());
}

double DensityProfile::operator()(double t) const { return rho(*this, t); }

double poisson_level(double alpha) { return 1.0 / (alpha * (2.0 - alpha)); }

double exotic_piece(double alpha, double u, std::uint64_t k) {
  if (k == 0) return 0.0;
  const double q = 1.0 / (1.0 - alpha);
  return detail::scaled_power_sum(k, q, alpha / u) / ((1.0 - alpha) * u);
}

double rho(const DensityProfile& profile, double t) {
  switch (profile.regime().kind) {
    case RegimeKind::InfiniteLambda:
      return 0.0;
    case RegimeKind::ZeroLambda:
      return poisson_level(profile.alpha());
    case RegimeKind::FiniteLambda:
      break;
  }
  const double a = std::abs(t);
  const double step = profile.jump_spacing();
  if (a < step) return 0.0;
  const auto k = static_cast<std::uint64_t>(std::floor(a / step));
  return exotic_piece(profile.alpha(), a / profile.regime().lambda, k);
}

double rho_scaled(double alpha, double t) {
  const DensityProfile unit(alpha, Regime::finite(1.0), 0.0);
  return alpha * (2.0 - alpha) * rho(unit, alpha * t);
}

namespace {

// Integral of the exotic density over [0, x], x >= 0. On the piece
// [k s, (k+1) s), s = alpha lambda, the density is C_k t^-(1+q) and
// integrates to lambda S_k ((s/t1)^q - (s/t2)^q), S_k = sum_{p<=k} p^q.
double exotic_mass_from_zero(const DensityProfile& profile, double x) {
  const double step = profile.jump_spacing();
  if (x <= step) return 0.0;
  const double q = 1.0 / (1.0 - profile.alpha());
  const double lambda = profile.regime().lambda;
  const auto last = static_cast<std::uint64_t>(std::floor(x / step));
  long double partial = 0.0L;
  long double mass = 0.0L;
  for (std::uint64_t k = 1; k <= last; ++k) {
    partial += std::pow(static_cast<long double>(k), static_cast<long double>(q));
    const double lo = static_cast<double>(k) * step;
    const double hi = (k == last) ? x : static_cast<double>(k + 1) * step;
    if (!(hi > lo)) continue;
    const long double r_lo = std::pow(static_cast<long double>(step / lo), static_cast<long double>(q));
    const long double r_hi = std::pow(static_cast<long double>(step / hi), static_cast<long double>(q));
    mass += partial * (r_lo - r_hi);
  }
  return static_cast<double>(lambda * mass);
}

double mass_from_zero(const DensityProfile& profile, double x) {
  const double sign = x < 0.0 ? -1.0 : 1.0;
  const double ax = std::abs(x);
  switch (profile.regime().kind) {
    case RegimeKind::InfiniteLambda:
      return 0.0;
    case RegimeKind::ZeroLambda:
      return x * poisson_level(profile.alpha());
    case RegimeKind::FiniteLambda:
      return sign * exotic_mass_from_zero(profile, ax);
  }
  return 0.0;
}

}  // namespace

double rho_mass(const DensityProfile& profile, double a, double b) {
  if (!(a < b)) throw PreconditionError("rho_mass needs a < b");
  return mass_from_zero(profile, b) - mass_from_zero(profile, a);
}

double rho_integral_against(const DensityProfile& profile, const TestFunction& f, double abs_tol) {
  const Regime& regime = profile.regime();
  if (regime.kind == RegimeKind::InfiniteLambda || f.is_zero()) return 0.0;
  if (regime.kind == RegimeKind::ZeroLambda) {
    const double level = poisson_level(profile.alpha());
    return level * integrate([&](double t) { return f(t); }, f.lo(), f.hi(), abs_tol);
  }

  // Cut supp f at every jump +-k s; the repulsion zone (-s, s) contributes nothing.
  const double step = profile.jump_spacing();
  const double lambda = regime.lambda;
  const double alpha = profile.alpha();
  struct Piece {
    double lo, hi;
    std::uint64_t k;
  };
  std::vector<Piece> pieces;
  auto add_side = [&](double lo, double hi) {  // 0 <= lo < hi, in |t|
    lo = std::max(lo, step);
    if (!(hi > lo)) return;
    auto k = static_cast<std::uint64_t>(std::floor(lo / step));
    for (double cur = lo; cur < hi; ++k) {
      const double next = std::min(hi, static_cast<double>(k + 1) * step);
      if (next > cur) pieces.push_back({cur, next, k});
      cur = next;
    }
  };
  if (f.hi() > 0.0) add_side(std::max(f.lo(), 0.0), f.hi());
  std::vector<Piece> positive = std::move(pieces);
  pieces.clear();
  if (f.lo() < 0.0) add_side(std::max(-f.hi(), 0.0), -f.lo());
  std::vector<Piece> negative = std::move(pieces);

  const std::size_t count = positive.size() + negative.size();
  if (count == 0) return 0.0;
  const double tol = abs_tol / static_cast<double>(count);
  double total = 0.0;
  for (const Piece& p : positive) {
    total += integrate([&](double t) { return f(t) * exotic_piece(alpha, t / lambda, p.k); }, p.lo, p.hi, tol);
  }
  for (const Piece& p : negative) {
    total += integrate([&](double t) { return f(-t) * exotic_piece(alpha, t / lambda, p.k); }, p.lo, p.hi, tol);
  }
  return total;
}

}  // namespace paircorr
