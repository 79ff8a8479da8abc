#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace paircorr {

/// Raised when an integral does not reach its target tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved) : std::runtime_error(what), achieved_(achieved) {}
  double achieved_tolerance() const { return achieved_; }

 private:
  double achieved_;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
  long evaluations = 0;
};

namespace detail {

template <class F>
struct SimpsonState {
  const F& f;
  int max_depth;
  QuadratureResult result;

  double eval(double x) {
    ++result.evaluations;
    return f(x);
  }

  // Richardson-extrapolated adaptive Simpson on [a, b].
  double refine(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= 2 && std::abs(delta) <= 15.0 * tol) {
      result.error_estimate += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth >= max_depth || m <= a || b <= m) {
      result.converged = false;
      result.error_estimate += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    return refine(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           refine(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to an absolute tolerance.
/// The interval is first cut into `panels` equal pieces so that integrands
/// vanishing on the coarse sample points are still resolved.
template <class F>
QuadratureResult adaptive_simpson(const F& f, double a, double b, double abs_tol, int max_depth = 48,
                                  int panels = 8) {
  detail::SimpsonState<F> state{f, max_depth, {}};
  if (!(b > a)) return state.result;
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * width;
    const double hi = (i + 1 == panels) ? b : a + (i + 1) * width;
    const double mid = 0.5 * (lo + hi);
    const double flo = state.eval(lo);
    const double fmid = state.eval(mid);
    const double fhi = state.eval(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    sum += state.refine(lo, hi, flo, fmid, fhi, whole, abs_tol / panels, 0);
  }
  state.result.value = sum;
  return state.result;
}

/// Same as adaptive_simpson, throwing NumericalError on non-convergence.
template <class F>
double integrate(const F& f, double a, double b, double abs_tol) {
  const QuadratureResult r = adaptive_simpson(f, a, b, abs_tol);
  if (!r.converged && r.error_estimate > abs_tol) {
    throw NumericalError("quadrature did not converge on [" + std::to_string(a) + ", " + std::to_string(b) +
                             "], achieved ~" + std::to_string(r.error_estimate),
                         r.error_estimate);
  }
  return r.value;
}

}  // namespace paircorr
