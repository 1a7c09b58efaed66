#pragma once

// Test-only oracles, deliberately independent of the library's adaptive
// log-domain Gauss panels: composite Simpson with interval doubling in long
// double, plus dense-grid suprema. Frozen high-precision constants in the
// test files come from tests/oracles/generate_oracles.py (mpmath).

#include <cmath>
#include <functional>

namespace oracle {

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-11) {
  long double prev = 0.0L;
  bool have_prev = false;
  for (int n = 128; n <= (1 << 22); n *= 2) {
    const long double h = static_cast<long double>(b - a) / n;
    long double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
      s += ((i & 1) ? 4.0L : 2.0L) * f(a + static_cast<double>(i * h));
    s *= h / 3.0L;
    if (have_prev &&
        std::fabs(static_cast<double>(s - prev)) <=
            tol * std::fabs(static_cast<double>(s)))
      return static_cast<double>(s);
    prev = s;
    have_prev = true;
  }
  return static_cast<double>(prev);
}

inline double sup_on_grid(const std::function<double(double)>& f, double a,
                          double b, int n = 100001) {
  double best = -1e300;
  for (int i = 0; i < n; ++i) {
    double x = a + (b - a) * i / (n - 1.0);
    best = std::fmax(best, f(x));
  }
  return best;
}

}  // namespace oracle
