#pragma once

#include <stdexcept>
#include <string>

#include "paraberg/series.hpp"
#include "paraberg/weights.hpp"

namespace paraberg {

struct QuadratureConfig {
  int angular_base = 16;        // start angular count = base * (degree + 1)
  double radial_rel_tol = 1e-10;
  int max_refine = 4096;        // radial panel budget
  double r_floor_log = -700.0;  // weight-decay cutoff relative to the center
  int sup_grid = 192;           // radius sweep size for sup functionals

  void validate() const {
    if (angular_base < 16)
      throw std::invalid_argument("angular_base must be >= 16");
    if (!(radial_rel_tol > 0.0 && radial_rel_tol <= 1e-3))
      throw std::invalid_argument("radial_rel_tol must be in (0, 1e-3]");
  }
  // one refinement doubling for stability gates
  QuadratureConfig refined() const {
    QuadratureConfig c = *this;
    c.angular_base *= 2;
    c.radial_rel_tol *= 0.1;
    c.max_refine *= 2;
    c.sup_grid *= 2;
    return c;
  }
};

// Weight factor omega^q (1+phi')^beta tau^gamma inside the area integral.
struct WeightModifier {
  double beta = 0.0;
  double gamma = 0.0;
  double q = 1.0;  // exponent on omega
  static WeightModifier plain(double p) { return {0.0, 0.0, p / 2.0}; }
};

struct NormEstimate {
  double value = 0.0;
  double last_delta = 0.0;  // relative change at the final refinement
  int levels_used = 0;
  bool converged = false;
  std::string format() const;  // "value +- delta (levels=k, converged=b)"
};

// ( integral_D |f|^p omega^q (1+phi')^beta tau^gamma dA )^{1/p} with
// dA normalized by pi (radial factor 2r dr). Radial integration is adaptive
// log-domain Gauss panels on [0, r_cut]; the angular mean uses the exact
// coefficient formula when p is an even integer and doubling trapezoid
// otherwise.
NormEstimate bergman_norm(const TruncatedSeries& f, const WeightEval& w,
                          double p, const WeightModifier& mod,
                          const QuadratureConfig& cfg);

// ( |f(0)|^p + ||f'||^p with (1+phi')^{-p} damping ) / ||f||^p
double lp_ratio(const TruncatedSeries& f, const WeightEval& w, double p,
                const QuadratureConfig& cfg);

// ( sup_z q |g|^{q-1} |g'| / (1+phi') )^{1/q}: circle-max per radius on a
// grid clustered at 0 and at the provable cutoff radius, then golden-section
// polish. The reported last_delta is the change from the pre-polish grid max.
NormEstimate bloch_seminorm(const TruncatedSeries& g, const WeightEval& w,
                            double q, const QuadratureConfig& cfg);

// ( sup_r max_modulus(g, r)^q / phi(r) )^{1/q}
NormEstimate growth_norm(const TruncatedSeries& g, const WeightEval& w,
                         double q, const QuadratureConfig& cfg);

// Two-sided growth comparison with psi_alpha = (r + phi)^alpha:
//   [ sup_r M(r,g)/psi_alpha ] / [ |g(0)| + sup_r M(r,g')/psi_alpha' ].
// Degenerate (g = 0) returns 1 with the flag set.
struct PavlResult {
  double value = 1.0;
  bool degenerate = false;
};
PavlResult pavl_ratio(const TruncatedSeries& g, const WeightEval& w,
                      double alpha, const QuadratureConfig& cfg);

struct SigmaRational {
  long long num = 1;
  long long den = 1;
  double value() const { return static_cast<double>(num) / den; }
  void validate() const {
    if (num <= 0 || den <= 0)
      throw std::invalid_argument("sigma must be a positive rational");
  }
};

// L^p_{omega_p} norm of |g|^{sigma*ell} T_g^ell f. The integrand is not the
// modulus of an analytic function, so the angular mean is always computed by
// adaptive trapezoid refinement.
NormEstimate q_functional(const TruncatedSeries& f, const TruncatedSeries& g,
                          const WeightEval& w, SigmaRational sigma, int ell,
                          double p, const QuadratureConfig& cfg);

struct DegeneratePair : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// | |g(z)|^q - |g(w)|^q | / beta_phi(z, w)
double lipschitz_quotient(const TruncatedSeries& g, const WeightEval& w,
                          double q, Complex z, Complex w_point);

}  // namespace paraberg
