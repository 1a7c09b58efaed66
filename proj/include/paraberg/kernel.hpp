#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "paraberg/norms.hpp"
#include "paraberg/series.hpp"
#include "paraberg/weights.hpp"

namespace paraberg {

struct TailTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Moments alpha_j = 2 int_0^1 r^{2j+1} omega(r) dr, stored in the log
// domain: for the iterated-exponential weights the entries underflow double
// precision long before the truncation orders the kernel sweeps need.
struct MomentTable {
  WeightSpec spec;
  int J = 0;
  double rel_tol = 1e-12;
  std::vector<double> log_alpha;  // j = 0..J
  bool all_converged = true;

  double log_alpha_at(int j) const { return log_alpha.at(j); }
  std::string content_hash() const;  // FNV-1a over the payload
  std::string to_json() const;
  static MomentTable from_json(const std::string& text);
};

// Adaptive log-domain quadrature per entry with relative tolerance rel_tol.
// The head [0, r_t] integrates in r; the tail switches to u = phi(r) (the
// family inverts in closed form), which resolves the doubly-exponential
// decay with a handful of panels. Decreasing-in-j monotonicity is validated.
MomentTable moments(const WeightEval& w, int J, double rel_tol = 1e-12);

struct KernelSeries {
  TruncatedSeries series;   // coefficients conj(a)^j / alpha_j, j <= cap
  double tail_bound = 0.0;  // geometric majorization of the dropped tail
  double partial_sum = 0.0; // sum |a|^j / alpha_j over kept j
};

// Truncated reproducing-kernel expansion at a. The moment sequence is
// log-convex, so the term ratios beyond cap are dominated by the last kept
// ratio and the geometric tail bound is rigorous. Throws TailTooLarge when
// the bound exceeds tail_rel_tol times the partial sum.
KernelSeries kernel_series(Complex a, const MomentTable& table, int cap,
                           double tail_rel_tol = 1e-10);

// Reproducing-property residual, relative to |f(a)| + 1: the max of
//  (i) the orthogonality route, where the pairing <f, K_a> collapses to the
//      moment-weighted coefficient sum, and
//  (ii) a fully numeric tensor quadrature of f conj(K_a) omega dA.
double verify_reproducing(const TruncatedSeries& f, Complex a,
                          const WeightEval& w, const MomentTable& table);

// K_a(a) * omega(a) * tau(a)^2 (log-domain diagonal sum).
double diagonal_ratio(Complex a, const WeightEval& w, const MomentTable& table,
                      double a_max = 0.9, double tail_rel_tol = 1e-10);

// ||K_a||_{A^p_{omega_p}} * omega(a)^{1/2} * tau(a)^{2-2/p}.
double kernel_norm_ratio(Complex a, const WeightEval& w, double p,
                         const MomentTable& table, int cap,
                         const QuadratureConfig& cfg,
                         double tail_rel_tol = 1e-10);

struct OffdiagPoint {
  double d_tau_upper = 0.0;
  double normalized = 0.0;      // |K_a(z)| omega^{1/2}(a) omega^{1/2}(z) tau(a) tau(z)
  double log_normalized = 0.0;
};

// Off-diagonal decay diagnostic for fitting an empirical decay exponent.
std::vector<OffdiagPoint> offdiag_profile(Complex a,
                                          const std::vector<Complex>& z_list,
                                          const WeightEval& w,
                                          const MomentTable& table, int cap);

// least-squares slope of log(normalized) against d_tau (decay exponent >= 0
// when the profile decays)
double fit_decay_exponent(const std::vector<OffdiagPoint>& points);

}  // namespace paraberg
