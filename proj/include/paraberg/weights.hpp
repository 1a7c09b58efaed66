#pragma once

#include <complex>
#include <string>
#include <vector>

namespace paraberg {

// Radial weight from the iterated-exponential family:
//   omega(r) = exp(-2 * phi(r)),  phi(r) = exp_level(c / (1 - r^2)^alpha),
// where exp_0(x) = x and exp_k(x) = e^{exp_{k-1}(x)}.
struct WeightSpec {
  int level = 0;
  double alpha = 1.0;
  double c = 1.0;

  void validate() const;
  bool extreme() const { return level > 2; }  // permitted but flagged
  std::string to_string() const;              // "w<level>:<alpha>:<c>"
  static WeightSpec parse(const std::string& text);
};

// Immutable evaluator for one weight. All magnitudes that can escape double
// range are exposed in the log domain; linear accessors saturate to +inf.
// tau is fixed as (1 + phi' + phi'')^{-1/2}: closed form, decreasing for this
// family, and finite at r = 0 where phi'/r needs a limit.
class WeightEval {
 public:
  explicit WeightEval(WeightSpec spec);

  const WeightSpec& spec() const { return spec_; }

  // linear domain (saturating)
  double phi(double r) const;
  double phi_prime(double r) const;
  double phi_second(double r) const;
  double tau(double r) const { return std::exp(log_tau(r)); }
  double psi(double r) const { return r + phi(r); }
  double psi_prime(double r) const { return 1.0 + phi_prime(r); }
  double psi_second(double r) const { return phi_second(r); }

  // log domain
  double log_phi(double r) const;
  double log_phi_prime(double r) const;   // -inf at r = 0
  double log_phi_second(double r) const;
  double log_omega(double r) const { return -2.0 * phi(r); }
  double log_one_plus_phi_prime(double r) const;
  double log_tau(double r) const;

  // Laplacian of the radial extension; 2*phi''(0) at the origin.
  double delta_phi(std::complex<double> z) const;

  double phi0() const { return phi0_; }
  double phi_second0() const { return phi_second0_; }

  // radius where phi(r) = phi(0) + x (closed-form inverse), clamped to [0,1)
  double inverse_phi_offset(double x) const;

  // Integration cutoff for integrands carrying omega^q: beyond r_cut the
  // weight factor has fallen by e^{-700} relative to the center, so panels
  // there contribute nothing at double precision.
  double r_cut(double q_exponent) const;
  double r_cut_default() const { return r_cut_cached_; }

  // largest radius where log(phi'') still fits in a double (level 2 weights
  // overflow even the log domain near the boundary)
  double max_finite_radius() const { return r_finite_; }

  // Path metrics. Both return upper-bound approximations: the minimum over
  // the straight segment, the two-leg path through the origin, and a
  // coordinate-descent refined polyline. Radial legs to the origin are exact
  // (radial segments are geodesics for a radial conformal metric).
  double beta_distance(std::complex<double> z, std::complex<double> w) const;
  double tau_distance(std::complex<double> z, std::complex<double> w) const;

 private:
  WeightSpec spec_;
  double phi0_ = 0.0;
  double phi_second0_ = 0.0;
  double r_cut_cached_ = 0.0;
  double r_finite_ = 0.0;

  double polyline_distance(std::complex<double> z, std::complex<double> w,
                           bool beta_metric) const;
  double segment_integral(std::complex<double> p, std::complex<double> q,
                          bool beta_metric) const;
  double radial_integral(double r, bool beta_metric) const;
};

struct CheckEntry {
  std::string name;
  std::vector<double> grid;
  std::vector<double> values;  // clamped to +-1e300 when saturated
  bool pass = false;
  std::string note;
};

struct CheckReport {
  WeightSpec spec;
  std::vector<CheckEntry> entries;
  double eta_estimate = 0.0;  // empirical exponent for (1+phi')*tau^eta
  double r_cut = 0.0;
  bool all_pass() const {
    for (const auto& e : entries)
      if (!e.pass) return false;
    return true;
  }
};

// Grid of 1 - 2^{-k} for k = 1..k_max, clipped to the weight's
// representable range (level >= 2 weights overflow the log domain early).
std::vector<double> default_check_grid(const WeightEval& w, int k_max = 20);

// Trend and comparability checks backing the weight-class conditions:
// tau/(1-r) -> 0, (1-r)phi' -> inf, (1+phi')tau -> inf, phi/log(1/(1-r))
// -> inf, boundedness of phi''*phi/(1+phi')^2, tau^{-2} vs the Laplacian,
// local comparability of tau and 1+phi' on discs of radius delta*tau,
// the psi = r + phi hypotheses, derivative/finite-difference agreement,
// pointwise monotonicity, and an empirical decay exponent eta.
CheckReport self_check(const WeightEval& w, const std::vector<double>& grid);

}  // namespace paraberg
