#include "paircorr/test_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "paircorr/config.hpp"

namespace paircorr {

TestFunction::TestFunction(BumpKind kind, double lo, double hi, double scale)
    : kind_(kind), lo_(lo), hi_(hi), scale_(scale) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ConfigError("test function support must be a finite interval lo < hi");
  }
  if (!std::isfinite(scale)) throw ConfigError("test function scale must be finite");
}

TestFunction TestFunction::bump_symmetric(double a, double scale) {
  if (!(a > 0.0)) throw ConfigError("symmetric bump needs A > 0");
  return TestFunction(BumpKind::Symmetric, -a, a, scale);
}

TestFunction TestFunction::bump_shifted(double eps, double a, double scale) {
  if (!(eps > 0.0 && eps < a)) throw ConfigError("shifted bump needs 0 < eps < A");
  return TestFunction(BumpKind::Shifted, eps, a, scale);
}

TestFunction TestFunction::bump_on(double lo, double hi, double scale) {
  const BumpKind kind = (lo == -hi) ? BumpKind::Symmetric : BumpKind::Shifted;
  return TestFunction(kind, lo, hi, scale);
}

double TestFunction::sup_norm() const { return std::abs(scale_); }

double TestFunction::deriv_sup_norm() const {
  // max |d/du (1-u^2)^2| = 4 u (1-u^2) at u = 1/sqrt(3), i.e. 8 / (3 sqrt 3)
  return std::abs(scale_) * 8.0 / (3.0 * std::sqrt(3.0) * half_width());
}

double TestFunction::support_radius() const { return std::max(std::abs(lo_), std::abs(hi_)); }

double TestFunction::operator()(double t) const {
  if (t <= lo_ || t >= hi_) return 0.0;
  const double u = (t - center()) / half_width();
  const double w = 1.0 - u * u;
  return scale_ * w * w;
}

double TestFunction::derivative(double t) const {
  if (t <= lo_ || t >= hi_) return 0.0;
  const double h = half_width();
  const double u = (t - center()) / h;
  return -4.0 * scale_ * u * (1.0 - u * u) / h;
}

double TestFunction::antiderivative(double t) const {
  // integral of (1-u^2)^2 du = u - 2u^3/3 + u^5/5, starting at u = -1
  const double u = std::clamp((t - center()) / half_width(), -1.0, 1.0);
  const double u2 = u * u;
  const double poly = u * (1.0 - u2 * (2.0 / 3.0 - u2 / 5.0));
  return scale_ * half_width() * (poly + 8.0 / 15.0);
}

double TestFunction::integral(double a, double b) const { return antiderivative(b) - antiderivative(a); }

std::string TestFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (kind_ == BumpKind::Symmetric ? "bump_symmetric" : "bump_shifted") << "[" << lo_ << "," << hi_ << "]";
  if (scale_ != 1.0) os << "*" << scale_;
  return os.str();
}

double eval_test_function(const TestFunction& f, double t) { return f(t); }

TestFunction mirror(const TestFunction& f) { return TestFunction::bump_on(-f.hi(), -f.lo(), f.scale()); }

}  // namespace paircorr
