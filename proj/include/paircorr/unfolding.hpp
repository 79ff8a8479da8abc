#pragma once

#include "paircorr/test_function.hpp"

namespace paircorr {

/// g_alpha(x, y) = (x - y)/(x^alpha - y^alpha), extended by x^(1-alpha)/alpha
/// on the diagonal. Straightens differences of powers:
/// g(n/N, m/N) N^(1-alpha) (n^alpha - m^alpha) = n - m.
double g_alpha(double alpha, double x, double y);

class UnfoldingMap {
 public:
  explicit UnfoldingMap(double alpha);
  double alpha() const { return alpha_; }
  double operator()(double x, double y) const { return g_alpha(alpha_, x, y); }

 private:
  double alpha_;
};

/// sum_{p >= 1} int_0^1 f(alpha p / t^(1-alpha)) dt for supp f in [eps, A], eps > 0.
double unfolded_integral(const TestFunction& f, double alpha, double abs_tol = 1e-10);

struct DensityCrosscheck {
  double unfolded = 0.0;
  double direct = 0.0;
  double gap = 0.0;
};

/// unfolded_integral against int_0^inf f rho_{alpha,1}.
DensityCrosscheck crosscheck_density(double alpha, const TestFunction& f);

}  // namespace paircorr
