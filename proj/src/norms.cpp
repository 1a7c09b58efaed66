#include "paraberg/norms.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "paraberg/paraproducts.hpp"
#include "paraberg/quadrature.hpp"

namespace paraberg {

std::string NormEstimate::format() const {
  std::ostringstream os;
  os.precision(12);
  os << value << " +- " << last_delta << " (levels=" << levels_used
     << ", converged=" << (converged ? "true" : "false") << ")";
  return os.str();
}

namespace {

// Coefficient data prepared for scaled circle evaluation. Coefficients of
// kernel series span hundreds of orders of magnitude, so every circle pass
// factors out the dominant log scale at the working radius first.
struct ScaledSeries {
  std::vector<Complex> unit;      // c_k / |c_k| (0 where c_k = 0)
  std::vector<double> log_mag;    // log |c_k|
  int degree = -1;
  double anchor = 0.0;

  explicit ScaledSeries(const TruncatedSeries& f) {
    degree = f.effective_degree();
    unit.resize(degree + 1);
    log_mag.assign(degree + 1, kNegInf);
    for (int k = 0; k <= degree; ++k) {
      double m = std::abs(f.coeff(k));
      if (m > 0.0) {
        unit[k] = f.coeff(k) / m;
        log_mag[k] = std::log(m);
      }
    }
    // Phase anchor from the two lowest surviving coefficients: the sample
    // set then co-rotates with the series, making circle statistics exactly
    // invariant under coefficient rotations c_k -> c_k e^{-ik theta}.
    int k0 = -1, k1 = -1;
    for (int k = 0; k <= degree; ++k) {
      if (log_mag[k] == kNegInf) continue;
      if (k0 < 0) {
        k0 = k;
      } else {
        k1 = k;
        break;
      }
    }
    if (k1 > k0 && k0 >= 0)
      anchor = -std::arg(unit[k1] * std::conj(unit[k0])) / (k1 - k0);
  }

  // dominant log scale of |c_k| r^k and the index window that matters
  void window(double log_r, double& lmax, int& jhi) const {
    lmax = kNegInf;
    for (int k = 0; k <= degree; ++k) {
      double v = log_mag[k] + k * log_r;
      if (v > lmax) lmax = v;
    }
    jhi = degree;
    if (lmax == kNegInf) return;
    while (jhi > 0 && log_mag[jhi] + jhi * log_r < lmax - 45.0) --jhi;
  }

  // circle-relevant degree at radius r (high kernel orders die off fast)
  int window_degree(double r) const {
    if (degree <= 0 || r <= 0.0) return std::max(degree, 0);
    double lmax;
    int jhi;
    window(std::log(r), lmax, jhi);
    return jhi;
  }

  // log |f(r e^{i theta})| for a batch of equally spaced angles. Paired
  // series (products of two circle passes) must sample identical angles, so
  // the phase offset can be overridden by the caller.
  void circle_logs(double r, int n, std::vector<double>& out,
                   double phase = std::numeric_limits<double>::quiet_NaN())
      const {
    if (std::isnan(phase)) phase = anchor;
    out.assign(n, kNegInf);
    if (degree < 0) return;
    double log_r = (r > 0.0) ? std::log(r) : kNegInf;
    if (r == 0.0) {
      double v = (log_mag[0] == kNegInf) ? kNegInf : log_mag[0];
      out.assign(n, v);
      return;
    }
    double lmax;
    int jhi;
    window(log_r, lmax, jhi);
    if (lmax == kNegInf) return;
    std::vector<Complex> scaled(jhi + 1, Complex{0.0, 0.0});
    for (int k = 0; k <= jhi; ++k) {
      double lv = log_mag[k] + k * log_r - lmax;
      if (lv > -60.0) scaled[k] = unit[k] * std::exp(lv);
    }
    for (int j = 0; j < n; ++j) {
      double th = 2.0 * M_PI * j / n + phase;
      Complex zu{std::cos(th), std::sin(th)};
      Complex acc{0.0, 0.0};
      for (int k = jhi; k >= 0; --k) acc = acc * zu + scaled[k];
      double m = std::abs(acc);
      out[j] = (m > 0.0) ? lmax + std::log(m) : kNegInf;
    }
  }
};

// (1/n) sum exp(p * logs[j]), in the log domain
double log_mean_pow(const std::vector<double>& logs, double p) {
  LogSum s;
  for (double lv : logs) {
    if (lv != kNegInf) s.add(p * lv);
  }
  double total = s.log_value();
  if (total == kNegInf) return kNegInf;
  return total - std::log(static_cast<double>(logs.size()));
}

constexpr double kAngularStableTol = 1e-9;

// Angular mean of |f|^p by doubling trapezoid; reports the count that
// reached stability through n_used.
double angular_mean_adaptive(const ScaledSeries& f, double r, double p, int n0,
                             bool& converged, double& delta, int& n_used) {
  std::vector<double> logs;
  int n = std::max(8, n0);
  double prev = kNegInf;
  converged = false;
  for (int iter = 0; iter < 14; ++iter) {
    f.circle_logs(r, n, logs);
    double cur = log_mean_pow(logs, p);
    if (iter > 0) {
      double d = (cur == kNegInf && prev == kNegInf)
                     ? 0.0
                     : std::abs(std::exp(std::min(cur, prev) -
                                         std::max(cur, prev)) -
                                1.0);
      delta = d;
      if (d <= kAngularStableTol) {
        converged = true;
        n_used = n;
        return cur;
      }
    }
    prev = cur;
    n *= 2;
  }
  n_used = n;
  return prev;
}

struct RadialWeightTerm {
  const WeightEval* w;
  WeightModifier mod;
  double operator()(double r) const {
    double lv = -2.0 * mod.q * w->phi(r);
    if (mod.beta != 0.0) lv += mod.beta * w->log_one_plus_phi_prime(r);
    if (mod.gamma != 0.0) lv += mod.gamma * w->log_tau(r);
    return lv;
  }
};

std::vector<double> chebyshev_breaks(double rc, int count) {
  std::vector<double> breaks;
  for (int i = 1; i < count; ++i) {
    double t = std::sin(0.5 * M_PI * i / count);
    breaks.push_back(rc * t * t);
  }
  return breaks;
}

NormEstimate assemble(const LogQuadResult& rq, double p, bool angular_ok,
                      double angular_delta) {
  NormEstimate e;
  e.value = (rq.log_value == kNegInf) ? 0.0 : std::exp(rq.log_value / p);
  e.levels_used = rq.levels;
  e.converged = rq.converged && angular_ok;
  e.last_delta = std::max(rq.last_delta, angular_delta) / p;
  return e;
}

bool is_even_integer(double p) {
  return p > 0.0 && p == std::floor(p) && (static_cast<long>(p) % 2 == 0);
}

}  // namespace

NormEstimate bergman_norm(const TruncatedSeries& f, const WeightEval& w,
                          double p, const WeightModifier& mod,
                          const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(p > 0.0)) throw std::invalid_argument("bergman_norm: p must be > 0");
  if (!(mod.q > 0.0))
    throw std::invalid_argument("bergman_norm: omega exponent must be > 0");
  NormEstimate zero;
  zero.converged = true;
  if (f.is_zero()) return zero;

  const double rc =
      std::min(w.r_cut(mod.q), w.max_finite_radius() * (1.0 - 1e-9));
  RadialWeightTerm weight{&w, mod};

  std::function<double(double)> log_mean;
  bool angular_ok = true;
  double angular_delta = 0.0;

  if (is_even_integer(p)) {
    // |f|^p circle mean = sum |h_k|^2 r^{2k} with h = f^{p/2}: exact.
    const int half = static_cast<int>(p) / 2;
    double lc = 0.0;
    for (const Complex& c : f.coeffs())
      lc = std::max(lc, std::abs(c));
    // scale before powering so kernel-sized coefficients cannot overflow
    TruncatedSeries fs = scale(f, Complex{1.0 / lc, 0.0});
    TruncatedSeries h =
        (half == 1) ? fs : power(fs, half, fs.effective_degree() * half);
    auto logs = std::make_shared<std::vector<double>>();
    for (const Complex& c : h.coeffs()) {
      double m = std::abs(c);
      logs->push_back(m > 0.0 ? std::log(m) + half * std::log(lc) : kNegInf);
    }
    log_mean = [logs](double r) {
      double log_r = (r > 0.0) ? std::log(r) : kNegInf;
      LogSum s;
      for (size_t k = 0; k < logs->size(); ++k) {
        double lv = (*logs)[k];
        if (lv == kNegInf) continue;
        s.add(2.0 * lv + 2.0 * k * log_r);
      }
      return s.log_value();
    };
  } else {
    // fix the angular count from probe radii (2x the worst converged count),
    // so each radial node costs a single pass; the start count follows the
    // circle-relevant degree, not the raw cap, or kernel-length series would
    // demand absurd grids
    auto fs = std::make_shared<ScaledSeries>(f);
    int n_use = 8;
    for (double frac : {0.15, 0.35, 0.55, 0.75, 0.9, 0.97, 0.995}) {
      bool conv = false;
      double d = 0.0;
      const double r = frac * rc;
      const int n0 = cfg.angular_base * (fs->window_degree(r) + 1);
      int n_probe = n0;
      angular_mean_adaptive(*fs, r, p, n0, conv, d, n_probe);
      angular_ok = angular_ok && conv;
      angular_delta = std::max(angular_delta, d);
      n_use = std::max(n_use, n_probe);
    }
    const int n_final = 2 * n_use;
    double pp = p;
    log_mean = [fs, n_final, pp](double r) {
      std::vector<double> logs;
      fs->circle_logs(r, n_final, logs);
      return log_mean_pow(logs, pp);
    };
  }

  auto log_integrand = [&](double r) {
    if (r <= 0.0) return kNegInf;
    double lm = log_mean(r);
    if (lm == kNegInf) return kNegInf;
    return lm + weight(r) + std::log(2.0 * r);
  };
  std::vector<double> breaks = chebyshev_breaks(rc, 24);
  LogQuadResult rq = integrate_log(log_integrand, 0.0, rc, cfg.radial_rel_tol,
                                   cfg.max_refine, breaks);
  return assemble(rq, p, angular_ok, angular_delta);
}

double lp_ratio(const TruncatedSeries& f, const WeightEval& w, double p,
                const QuadratureConfig& cfg) {
  if (f.is_zero()) throw std::invalid_argument("lp_ratio: f must be nonzero");
  WeightModifier damped{-p, 0.0, p / 2.0};
  NormEstimate num = bergman_norm(derivative(f), w, p, damped, cfg);
  NormEstimate den = bergman_norm(f, w, p, WeightModifier::plain(p), cfg);
  double f0 = std::abs(evaluate(f, Complex{0.0, 0.0}));
  return (std::pow(f0, p) + std::pow(num.value, p)) / std::pow(den.value, p);
}

namespace {

// max over the circle |z| = r of q |g|^{q-1} |g'|, in the log domain,
// by the same doubling refinement as max_modulus
double circle_max_bloch(const ScaledSeries& g, const ScaledSeries& gd,
                        double q, double r, bool& ok) {
  int n = 16 * (g.degree + gd.degree + 2);
  double prev = kNegInf;
  std::vector<double> lg, ld;
  for (int iter = 0; iter < 14; ++iter) {
    // shared phase: the two factors must be sampled at identical points
    g.circle_logs(r, n, lg, g.anchor);
    gd.circle_logs(r, n, ld, g.anchor);
    double best = kNegInf;
    for (int j = 0; j < n; ++j) {
      if (ld[j] == kNegInf) continue;
      double v = std::log(q) + ld[j];
      if (q != 1.0) {
        if (lg[j] == kNegInf) continue;  // |g| = 0 kills the q > 1 numerator
        v += (q - 1.0) * lg[j];
      }
      best = std::max(best, v);
    }
    if (iter > 0 && (best == prev ||
                     std::abs(std::exp(std::min(best, prev) -
                                       std::max(best, prev)) -
                              1.0) <= 1e-9)) {
      ok = true;
      return best;
    }
    prev = best;
    n *= 2;
  }
  ok = false;
  return prev;
}

double log_circle_max(const ScaledSeries& f, double r, bool& ok) {
  int n = 16 * (f.degree + 1);
  double prev = kNegInf;
  std::vector<double> lf;
  for (int iter = 0; iter < 14; ++iter) {
    f.circle_logs(r, n, lf);
    double best = kNegInf;
    for (double v : lf) best = std::max(best, v);
    if (iter > 0 && (best == prev ||
                     std::abs(std::exp(std::min(best, prev) -
                                       std::max(best, prev)) -
                              1.0) <= 1e-9)) {
      ok = true;
      return best;
    }
    prev = best;
    n *= 2;
  }
  ok = false;
  return prev;
}

struct SweepResult {
  double log_sup = kNegInf;
  double arg = 0.0;
  double polish_delta = 0.0;
  bool converged = true;
};

// cosine grid on [0, r_hi] (clustered at both ends) + golden polish
SweepResult radius_sweep(const std::function<double(double)>& log_fn,
                         double r_hi, int grid_n) {
  SweepResult res;
  grid_n = std::max(grid_n, 16);
  std::vector<double> rs(grid_n);
  for (int i = 0; i < grid_n; ++i)
    rs[i] = r_hi * 0.5 * (1.0 - std::cos(M_PI * i / (grid_n - 1)));
  double best = kNegInf;
  int best_i = 0;
  for (int i = 0; i < grid_n; ++i) {
    double v = log_fn(rs[i]);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  double lo = rs[std::max(0, best_i - 1)];
  double hi = rs[std::min(grid_n - 1, best_i + 1)];
  MaxResult polished = golden_max(log_fn, lo, hi, 1e-12 * std::max(r_hi, 1e-6));
  res.log_sup = std::max(best, polished.value);
  res.arg = (polished.value >= best) ? polished.arg : rs[best_i];
  res.polish_delta = std::abs(std::exp(std::min(best, res.log_sup) -
                                       std::max(best, res.log_sup)) -
                              1.0);
  return res;
}

}  // namespace

NormEstimate bloch_seminorm(const TruncatedSeries& g, const WeightEval& w,
                            double q, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(q >= 1.0)) throw std::invalid_argument("bloch_seminorm: q must be >= 1");
  NormEstimate zero;
  zero.converged = true;
  TruncatedSeries gd = derivative(g);
  if (gd.is_zero()) return zero;

  ScaledSeries gs(g), gds(gd);
  bool angular_ok = true;
  auto log_h = [&](double r) {
    bool ok = true;
    double v = circle_max_bloch(gs, gds, q, r, ok) -
               w.log_one_plus_phi_prime(r);
    angular_ok = angular_ok && ok;
    return v;
  };

  const double r_lim = std::min(0.999, w.max_finite_radius() * 0.999);
  // coarse pass fixes the scale, then the provable cutoff: beyond r_star the
  // quotient sits 1e3 below the coarse maximum because the numerator is
  // bounded by its closed-disc polynomial bound
  double coarse_max = kNegInf;
  for (int i = 0; i <= 64; ++i) {
    double r = r_lim * i / 64.0;
    coarse_max = std::max(coarse_max, log_h(r));
  }
  double sum_g = 0.0, sum_gd = 0.0;
  for (const Complex& c : g.coeffs()) sum_g += std::abs(c);
  for (const Complex& c : gd.coeffs()) sum_gd += std::abs(c);
  double log_bound =
      std::log(q) + (q - 1.0) * std::log(std::max(sum_g, 1e-300)) +
      std::log(sum_gd);
  double target = log_bound - coarse_max + std::log(1e3);
  double r_star = bisect_increasing(
      [&](double r) { return w.log_one_plus_phi_prime(r); }, 0.0, r_lim,
      target);

  SweepResult sw = radius_sweep(log_h, r_star, cfg.sup_grid);
  NormEstimate e;
  e.value = std::exp(sw.log_sup / q);
  e.last_delta = sw.polish_delta / q;
  e.levels_used = cfg.sup_grid;
  e.converged = angular_ok;
  return e;
}

NormEstimate growth_norm(const TruncatedSeries& g, const WeightEval& w,
                         double q, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(q > 0.0)) throw std::invalid_argument("growth_norm: q must be > 0");
  NormEstimate zero;
  zero.converged = true;
  if (g.is_zero()) return zero;

  ScaledSeries gs(g);
  bool angular_ok = true;
  auto log_h = [&](double r) {
    bool ok = true;
    double v = q * log_circle_max(gs, r, ok) - w.log_phi(r);
    angular_ok = angular_ok && ok;
    return v;
  };
  const double r_lim = std::min(0.999, w.max_finite_radius() * 0.999);
  double coarse_max = kNegInf;
  for (int i = 0; i <= 64; ++i)
    coarse_max = std::max(coarse_max, log_h(r_lim * i / 64.0));
  double sum_g = 0.0;
  for (const Complex& c : g.coeffs()) sum_g += std::abs(c);
  double target = q * std::log(sum_g) - coarse_max + std::log(1e3);
  double r_star = bisect_increasing(
      [&](double r) { return w.log_phi(r); }, 0.0, r_lim, target);

  SweepResult sw = radius_sweep(log_h, r_star, cfg.sup_grid);
  NormEstimate e;
  e.value = std::exp(sw.log_sup / q);
  e.last_delta = sw.polish_delta / q;
  e.levels_used = cfg.sup_grid;
  e.converged = angular_ok;
  return e;
}

PavlResult pavl_ratio(const TruncatedSeries& g, const WeightEval& w,
                      double alpha, const QuadratureConfig& cfg) {
  cfg.validate();
  if (!(alpha > 0.0)) throw std::invalid_argument("pavl_ratio: alpha > 0");
  PavlResult out;
  if (g.is_zero()) {
    out.degenerate = true;
    out.value = 1.0;
    return out;
  }
  const double r_hi = std::min(0.999, w.max_finite_radius() * 0.999);
  ScaledSeries gs(g);
  bool ok_all = true;
  auto log_lhs = [&](double r) {
    bool ok = true;
    double lpsi = log_add((r > 0.0) ? std::log(r) : kNegInf, w.log_phi(r));
    double v = log_circle_max(gs, r, ok) - alpha * lpsi;
    ok_all = ok_all && ok;
    return v;
  };
  SweepResult lhs = radius_sweep(log_lhs, r_hi, cfg.sup_grid);

  double rhs = std::abs(evaluate(g, Complex{0.0, 0.0}));
  TruncatedSeries gd = derivative(g);
  if (!gd.is_zero()) {
    ScaledSeries gds(gd);
    auto log_rhs = [&](double r) {
      bool ok = true;
      double lpsi = log_add((r > 0.0) ? std::log(r) : kNegInf, w.log_phi(r));
      double lpsi_a_prime = std::log(alpha) + (alpha - 1.0) * lpsi +
                            w.log_one_plus_phi_prime(r);
      double v = log_circle_max(gds, r, ok) - lpsi_a_prime;
      ok_all = ok_all && ok;
      return v;
    };
    SweepResult sup_d = radius_sweep(log_rhs, r_hi, cfg.sup_grid);
    rhs += std::exp(sup_d.log_sup);
  }
  (void)ok_all;
  out.value = std::exp(lhs.log_sup) / rhs;
  return out;
}

NormEstimate q_functional(const TruncatedSeries& f, const TruncatedSeries& g,
                          const WeightEval& w, SigmaRational sigma, int ell,
                          double p, const QuadratureConfig& cfg) {
  cfg.validate();
  sigma.validate();
  if (ell < 1) throw std::invalid_argument("q_functional: ell >= 1");
  if (!(p > 0.0)) throw std::invalid_argument("q_functional: p > 0");
  NormEstimate zero;
  zero.converged = true;
  if (f.is_zero() || derivative(g).is_zero()) return zero;  // T_g = 0

  const int cap = std::min(2048, f.cap() + ell * std::max(1, g.effective_degree()) + 2);
  TruncatedSeries h = f.truncated(std::min(f.cap(), cap));
  for (int i = 0; i < ell; ++i) h = apply_letter(Letter::T, g, h, cap);
  if (h.is_zero()) return zero;

  const double se = sigma.value() * ell;
  auto gsp = std::make_shared<ScaledSeries>(g);
  auto hsp = std::make_shared<ScaledSeries>(h);
  const double rc =
      std::min(w.r_cut(p / 2.0), w.max_finite_radius() * (1.0 - 1e-9));

  bool angular_ok = true;
  double angular_delta = 0.0;
  const int n0 = cfg.angular_base * (gsp->degree + hsp->degree + 2);
  auto log_mean = [&](double r) {
    // always-adaptive trapezoid: |g|^{sigma ell} |h| has no symmetry shortcut
    std::vector<double> lg, lh;
    int n = n0;
    double prev = kNegInf;
    for (int iter = 0; iter < 14; ++iter) {
      gsp->circle_logs(r, n, lg, gsp->anchor);
      hsp->circle_logs(r, n, lh, gsp->anchor);
      LogSum s;
      for (int j = 0; j < n; ++j) {
        if (lh[j] == kNegInf || lg[j] == kNegInf) continue;  // |g|=0 guard
        s.add(p * (se * lg[j] + lh[j]));
      }
      double cur = s.log_value();
      cur = (cur == kNegInf) ? kNegInf : cur - std::log(static_cast<double>(n));
      if (iter > 0) {
        double d = (cur == kNegInf && prev == kNegInf)
                       ? 0.0
                       : std::abs(std::exp(std::min(cur, prev) -
                                           std::max(cur, prev)) -
                                  1.0);
        if (d <= kAngularStableTol) return cur;
        angular_delta = std::max(angular_delta, d);
      }
      prev = cur;
      n *= 2;
    }
    angular_ok = false;
    return prev;
  };
  auto log_integrand = [&](double r) {
    if (r <= 0.0) return kNegInf;
    double lm = log_mean(r);
    if (lm == kNegInf) return kNegInf;
    return lm - p * w.phi(r) + std::log(2.0 * r);
  };
  std::vector<double> breaks = chebyshev_breaks(rc, 24);
  LogQuadResult rq = integrate_log(log_integrand, 0.0, rc, cfg.radial_rel_tol,
                                   cfg.max_refine, breaks);
  return assemble(rq, p, angular_ok, angular_delta);
}

double lipschitz_quotient(const TruncatedSeries& g, const WeightEval& w,
                          double q, Complex z, Complex w_point) {
  if (z == w_point)
    throw DegeneratePair("lipschitz_quotient needs two distinct points");
  double a = std::pow(std::abs(evaluate(g, z)), q);
  double b = std::pow(std::abs(evaluate(g, w_point)), q);
  return std::abs(a - b) / w.beta_distance(z, w_point);
}

}  // namespace paraberg
