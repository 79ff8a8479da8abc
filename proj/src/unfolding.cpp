#include "paircorr/unfolding.hpp"

#include <algorithm>
#include <cmath>

#include "paircorr/config.hpp"
#include "paircorr/density.hpp"
#include "paircorr/detail/compensated_sum.hpp"
#include "paircorr/quadrature.hpp"

namespace paircorr {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0,1)");
}

constexpr double kDiagonalThreshold = 1e-9;

}  // namespace

double g_alpha(double alpha, double x, double y) {
  require_alpha(alpha);
  if (!(x > 0.0 && x <= 1.0) || !(y > 0.0 && y <= 1.0)) {
    throw PreconditionError("g_alpha arguments must lie in (0,1]");
  }
  if (std::abs(x - y) < kDiagonalThreshold * std::max(x, y)) {
    return std::pow(0.5 * (x + y), 1.0 - alpha) / alpha;
  }
  // x^alpha - y^alpha without cancellation
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  return (hi - lo) / (std::pow(lo, alpha) * std::expm1(alpha * std::log1p((hi - lo) / lo)));
}

UnfoldingMap::UnfoldingMap(double alpha) : alpha_(alpha) { require_alpha(alpha); }

double unfolded_integral(const TestFunction& f, double alpha, double abs_tol) {
  require_alpha(alpha);
  if (f.is_zero()) return 0.0;
  if (!(f.lo() > 0.0)) throw PreconditionError("unfolded_integral needs supp f in [eps, A] with eps > 0");
  if (!std::isfinite(f.hi())) throw PreconditionError("unfolded_integral needs bounded support");

  const double q = 1.0 / (1.0 - alpha);
  const auto last = static_cast<std::uint64_t>(std::floor(f.hi() / alpha));
  if (last == 0) return 0.0;
  const double piece_tol = abs_tol / static_cast<double>(last);

  detail::CompensatedSum total;
  for (std::uint64_t p = 1; p <= last; ++p) {
    const double ap = alpha * static_cast<double>(p);
    // alpha p / t^(1-alpha) in [lo, hi]  <=>  t in [(ap/hi)^q, (ap/lo)^q]
    const double t_lo = std::pow(ap / f.hi(), q);
    const double t_hi = std::min(1.0, std::pow(ap / f.lo(), q));
    if (!(t_hi > t_lo)) continue;
    total.add(integrate([&](double t) { return f(ap / std::pow(t, 1.0 - alpha)); }, t_lo, t_hi, piece_tol));
  }
  return total.value();
}

DensityCrosscheck crosscheck_density(double alpha, const TestFunction& f) {
  DensityCrosscheck c;
  c.unfolded = unfolded_integral(f, alpha, 1e-11);
  c.direct = rho_integral_against(DensityProfile(alpha, Regime::finite(1.0), std::max(1.0, f.hi())), f, 1e-11);
  c.gap = std::abs(c.unfolded - c.direct);
  return c;
}

}  // namespace paircorr
