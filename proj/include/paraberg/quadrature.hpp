#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace paraberg {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without leaving the log domain.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  if (std::isinf(a)) return a;  // +inf saturates
  return a + std::log1p(std::exp(b - a));
}

// log(1 + exp(x)); robust for x of any sign, saturating at +inf.
inline double log1p_exp(double x) {
  if (x == kNegInf) return 0.0;
  if (x > 0) return std::isinf(x) ? x : x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

// Running sum of positive terms given in log form, kept as max + mantissa.
class LogSum {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term <= max_) {
      mantissa_ += std::exp(log_term - max_);
    } else {
      mantissa_ = mantissa_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  double log_value() const {
    if (max_ == kNegInf || mantissa_ <= 0.0) return kNegInf;
    return max_ + std::log(mantissa_);
  }

 private:
  double max_ = kNegInf;
  double mantissa_ = 0.0;
};

// Gauss-Legendre rule on [-1, 1]; nodes/weights computed once by Newton
// iteration on P_n.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_rule(int n);

struct LogQuadResult {
  double log_value = kNegInf;  // log of the integral (>= 0 integrand)
  int levels = 0;              // panel splits performed
  bool converged = false;
  double last_delta = 0.0;     // relative change over the final refinement
};

// Adaptive panel integration of exp(log_f(x)) over [a, b].
// Seed panels may be supplied (interior break points, strictly increasing);
// otherwise the interval starts as one panel. The per-panel error estimate
// compares the 15-point value against its two-half refinement, and the worst
// panel is split until the total error estimate drops below rel_tol times
// the running total.
LogQuadResult integrate_log(const std::function<double(double)>& log_f,
                            double a, double b, double rel_tol,
                            int max_panels = 4096,
                            std::span<const double> seed_breaks = {});

// Same machinery for a complex-valued integrand written as
// mantissa(x) * exp(log_scale(x)); returns the value as mantissa + log scale
// so that extreme weights never underflow.
struct ComplexLogValue {
  std::complex<double> mantissa{0.0, 0.0};
  double log_scale = kNegInf;
  std::complex<double> value() const {
    if (log_scale == kNegInf) return {0.0, 0.0};
    return mantissa * std::exp(log_scale);
  }
};
// layout_hint, when given, is a cheap positive envelope (in log form) used
// only to place the panels; the expensive mantissa then runs once per node.
ComplexLogValue integrate_complex_log(
    const std::function<std::complex<double>(double)>& mantissa,
    const std::function<double(double)>& log_scale, double a, double b,
    double rel_tol, int max_panels = 4096,
    const std::function<double(double)>& layout_hint = {});

// Golden-section maximization of a unimodal-ish bump; returns the refined
// argmax starting from bracket [a, b].
struct MaxResult {
  double arg = 0.0;
  double value = kNegInf;
};
MaxResult golden_max(const std::function<double(double)>& f, double a,
                     double b, double x_tol = 1e-12, int max_iter = 200);

// Smallest x in [lo, hi] with f(x) >= target, for nondecreasing f; returns hi
// if never reached.
double bisect_increasing(const std::function<double(double)>& f, double lo,
                         double hi, double target, int iters = 200);

}  // namespace paraberg
