#include "paraberg/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "paraberg/quadrature.hpp"

namespace paraberg {

namespace {

double log_moment_integral(const WeightEval& w, int j, double rel_tol,
                           bool& converged) {
  const double m = 2.0 * j + 1.0;
  // head in r, tail in u = phi(r); the peak sits well inside the head
  const double r_t = std::max(
      0.35, w.inverse_phi_offset(std::max(10.0, static_cast<double>(j))));
  auto head = [&](double r) {
    if (r <= 0.0) return kNegInf;
    return m * std::log(r) - 2.0 * w.phi(r) + std::log(2.0);
  };
  LogQuadResult h =
      integrate_log(head, 0.0, r_t, rel_tol, 4096,
                    std::vector<double>{0.25 * r_t, 0.5 * r_t, 0.8 * r_t});
  converged = h.converged;

  // tail: r(u) via the closed-form inverse; du = phi'(r) dr
  LogSum total;
  total.add(h.log_value);
  double u0 = w.phi(r_t);
  auto tail = [&](double u) {
    double r = w.inverse_phi_offset(u - w.phi0());
    if (r <= 0.0 || r >= 1.0) return kNegInf;
    double lphip = w.log_phi_prime(r);
    if (!std::isfinite(lphip)) return kNegInf;
    return m * std::log(r) - 2.0 * u - lphip + std::log(2.0);
  };
  double width = 20.0;
  for (int chunk = 0; chunk < 40; ++chunk) {
    LogQuadResult t =
        integrate_log(tail, u0, u0 + width, std::min(rel_tol * 10, 1e-9), 512);
    converged = converged && t.converged;
    double before = total.log_value();
    total.add(t.log_value);
    u0 += width;
    width *= 2.0;
    if (t.log_value == kNegInf ||
        (before != kNegInf && t.log_value < before - 70.0))
      break;
  }
  return total.log_value();
}

}  // namespace

MomentTable moments(const WeightEval& w, int J, double rel_tol) {
  if (J < 0) throw std::invalid_argument("moments: J >= 0");
  MomentTable t;
  t.spec = w.spec();
  t.J = J;
  t.rel_tol = rel_tol;
  t.log_alpha.resize(J + 1);
  for (int j = 0; j <= J; ++j) {
    bool conv = true;
    t.log_alpha[j] = log_moment_integral(w, j, rel_tol, conv);
    t.all_converged = t.all_converged && conv;
  }
  for (int j = 0; j < J; ++j) {
    if (!(t.log_alpha[j + 1] < t.log_alpha[j]))
      throw std::runtime_error(
          "moment sequence failed to decrease; quadrature is broken");
  }
  return t;
}

std::string MomentTable::content_hash() const {
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const void* data, size_t len) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  std::string s = spec.to_string();
  mix(s.data(), s.size());
  mix(&J, sizeof(J));
  mix(&rel_tol, sizeof(rel_tol));
  mix(log_alpha.data(), log_alpha.size() * sizeof(double));
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

std::string MomentTable::to_json() const {
  nlohmann::json j;
  j["spec"] = spec.to_string();
  j["J"] = J;
  j["rel_tol"] = rel_tol;
  j["log_alpha"] = log_alpha;
  j["hash"] = content_hash();
  return j.dump();
}

MomentTable MomentTable::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  MomentTable t;
  t.spec = WeightSpec::parse(j.at("spec").get<std::string>());
  t.J = j.at("J").get<int>();
  t.rel_tol = j.at("rel_tol").get<double>();
  t.log_alpha = j.at("log_alpha").get<std::vector<double>>();
  if (static_cast<int>(t.log_alpha.size()) != t.J + 1)
    throw std::runtime_error("moment cache length mismatch");
  if (j.contains("hash") && j["hash"].get<std::string>() != t.content_hash())
    throw std::runtime_error("moment cache hash mismatch");
  return t;
}

KernelSeries kernel_series(Complex a, const MomentTable& table, int cap,
                           double tail_rel_tol) {
  const double ra = std::abs(a);
  if (!(ra < 1.0)) throw std::domain_error("kernel_series: |a| < 1 required");
  if (cap > table.J)
    throw std::invalid_argument("kernel_series: cap exceeds table J");
  if (cap < 0) throw std::invalid_argument("kernel_series: cap < 0");

  KernelSeries out;
  const double log_ra = (ra > 0.0) ? std::log(ra) : kNegInf;
  std::vector<Complex> coeffs(cap + 1, Complex{0.0, 0.0});
  LogSum partial;
  double log_t_prev = kNegInf, log_t_last = kNegInf;
  const Complex conj_phase =
      (ra > 0.0) ? std::conj(a) / ra : Complex{1.0, 0.0};
  Complex phase{1.0, 0.0};
  for (int j = 0; j <= cap; ++j) {
    double log_t = (j == 0 ? 0.0 : j * log_ra) - table.log_alpha_at(j);
    if (ra == 0.0 && j > 0) log_t = kNegInf;
    if (log_t != kNegInf) {
      coeffs[j] = phase * std::exp(log_t);
      partial.add(log_t);
    }
    log_t_prev = log_t_last;
    log_t_last = log_t;
    phase *= conj_phase;
  }
  out.series = TruncatedSeries(std::move(coeffs));
  out.partial_sum = std::exp(partial.log_value());

  if (ra == 0.0 || cap == 0) {
    out.tail_bound = (ra == 0.0) ? 0.0 : out.tail_bound;
    if (ra > 0.0 && cap == 0)
      throw TailTooLarge("kernel_series: cap 0 cannot bound the tail");
    return out;
  }
  // term ratios decrease toward |a| by log-convexity of the moments, so the
  // last kept ratio majorizes the dropped tail geometrically
  double rho = std::exp(log_t_last - log_t_prev);
  if (!(rho < 1.0))
    throw TailTooLarge("kernel_series: term ratio >= 1 at cap " +
                       std::to_string(cap));
  double log_tail =
      log_t_last + std::log(rho) - std::log1p(-rho);
  out.tail_bound = std::exp(log_tail);
  if (log_tail > partial.log_value() + std::log(tail_rel_tol))
    throw TailTooLarge("kernel_series: tail bound " +
                       std::to_string(out.tail_bound) +
                       " exceeds tolerance at cap " + std::to_string(cap));
  return out;
}

namespace {

// log |K_a(a)| = log sum exp(2j log|a| - log alpha_j), with the same
// geometric tail control as kernel_series
double log_diagonal(double ra, const MomentTable& table, double tail_rel_tol) {
  LogSum s;
  double log_t_prev = kNegInf, log_t_last = kNegInf;
  const double log_ra2 = (ra > 0.0) ? 2.0 * std::log(ra) : kNegInf;
  for (int j = 0; j <= table.J; ++j) {
    double log_t = (j == 0 ? 0.0 : j * log_ra2) - table.log_alpha_at(j);
    if (ra == 0.0 && j > 0) log_t = kNegInf;
    s.add(log_t);
    log_t_prev = log_t_last;
    log_t_last = log_t;
  }
  if (ra > 0.0) {
    double rho = std::exp(log_t_last - log_t_prev);
    if (!(rho < 1.0))
      throw TailTooLarge("diagonal series ratio >= 1 at J");
    double log_tail = log_t_last + std::log(rho) - std::log1p(-rho);
    if (log_tail > s.log_value() + std::log(tail_rel_tol))
      throw TailTooLarge("diagonal series tail exceeds tolerance");
  }
  return s.log_value();
}

}  // namespace

double verify_reproducing(const TruncatedSeries& f, Complex a,
                          const WeightEval& w, const MomentTable& table) {
  if (f.effective_degree() > table.J)
    throw std::invalid_argument("verify_reproducing: deg f must be <= J");
  const double ra = std::abs(a);
  if (!(ra < 1.0)) throw std::domain_error("verify_reproducing: |a| < 1");
  const Complex fa = evaluate(f, a);

  // route 1: orthogonality collapses the pairing to a moment-consistent sum
  Complex pairing{0.0, 0.0};
  const double log_ra = (ra > 0.0) ? std::log(ra) : kNegInf;
  const Complex phase_unit = (ra > 0.0) ? a / ra : Complex{1.0, 0.0};
  Complex phase{1.0, 0.0};
  for (int k = 0; k <= f.effective_degree(); ++k) {
    double log_kappa_abs =
        (k == 0 ? 0.0 : k * log_ra) - table.log_alpha_at(k);
    double weight_back = table.log_alpha_at(k);
    if (!(ra == 0.0 && k > 0))
      pairing += f.coeff(k) * phase * std::exp(log_kappa_abs + weight_back);
    phase *= phase_unit;
  }
  double res_exact = std::abs(pairing - fa);

  // route 2: fully numeric tensor quadrature of f conj(K_a) omega dA.
  // The truncation order adapts to |a| (the tail gate fails fast otherwise),
  // and panel layout runs on a cheap coefficient-envelope proxy.
  int cap = 0;
  KernelSeries ks;
  for (int trial : {32, 64, 96, 128, 192, 256, 384, 512}) {
    if (trial > table.J) break;
    cap = trial;
    try {
      ks = kernel_series(a, table, cap, 1e-6);
      break;
    } catch (const TailTooLarge&) {
      if (trial >= table.J) throw;
    }
  }
  const int n = std::max(64, f.effective_degree() + cap + 2);
  const TruncatedSeries& K = ks.series;
  auto angular = [&](double r) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      double th = 2.0 * M_PI * j / n;
      Complex z = r * Complex{std::cos(th), std::sin(th)};
      acc += evaluate(f, z) * std::conj(evaluate(K, z));
    }
    return acc / static_cast<double>(n);
  };
  auto log_scale = [&](double r) {
    if (r <= 0.0) return kNegInf;
    return -2.0 * w.phi(r) + std::log(2.0 * r);
  };
  auto envelope = [&](double r) {
    if (r <= 0.0) return kNegInf;
    double sf = 0.0, sk = 0.0, rk = 1.0;
    for (int k = 0; k <= f.effective_degree(); ++k) {
      sf += std::abs(f.coeff(k)) * rk;
      rk *= r;
    }
    rk = 1.0;
    for (int k = 0; k <= K.cap(); ++k) {
      sk += std::abs(K.coeff(k)) * rk;
      rk *= r;
    }
    if (sf <= 0.0 || sk <= 0.0) return kNegInf;
    return std::log(sf) + std::log(sk) + log_scale(r);
  };
  double rc = std::min(w.r_cut(1.0), w.max_finite_radius() * (1.0 - 1e-9));
  ComplexLogValue integral = integrate_complex_log(angular, log_scale, 0.0,
                                                   rc, 1e-11, 2048, envelope);
  double res_numeric = std::abs(integral.value() - fa);

  return std::max(res_exact, res_numeric) / (std::abs(fa) + 1.0);
}

double diagonal_ratio(Complex a, const WeightEval& w, const MomentTable& table,
                      double a_max, double tail_rel_tol) {
  const double ra = std::abs(a);
  if (!(ra < 1.0)) throw std::domain_error("diagonal_ratio: |a| < 1");
  if (ra > a_max)
    throw std::invalid_argument("diagonal_ratio: |a| exceeds a_max");
  double log_k = log_diagonal(ra, table, tail_rel_tol);
  return std::exp(log_k + w.log_omega(ra) + 2.0 * w.log_tau(ra));
}

double kernel_norm_ratio(Complex a, const WeightEval& w, double p,
                         const MomentTable& table, int cap,
                         const QuadratureConfig& cfg, double tail_rel_tol) {
  KernelSeries ks = kernel_series(a, table, cap, tail_rel_tol);
  NormEstimate nb = bergman_norm(ks.series, w, p, WeightModifier::plain(p), cfg);
  const double ra = std::abs(a);
  double log_factor =
      0.5 * w.log_omega(ra) + (2.0 - 2.0 / p) * w.log_tau(ra);
  return nb.value * std::exp(log_factor);
}

namespace {

double log_abs_eval(const TruncatedSeries& f, Complex z) {
  // scaled Horner so kernel-sized coefficients cannot overflow
  const double r = std::abs(z);
  const double log_r = (r > 0.0) ? std::log(r) : kNegInf;
  double lmax = kNegInf;
  for (int k = 0; k <= f.cap(); ++k) {
    double m = std::abs(f.coeff(k));
    if (m <= 0.0) continue;
    lmax = std::max(lmax, std::log(m) + ((k == 0) ? 0.0 : k * log_r));
  }
  if (lmax == kNegInf) return kNegInf;
  Complex zu = (r > 0.0) ? z / r : Complex{0.0, 0.0};
  Complex acc{0.0, 0.0};
  for (int k = f.cap(); k >= 0; --k) {
    acc *= zu;
    double m = std::abs(f.coeff(k));
    if (m > 0.0) {
      double lv = std::log(m) + ((k == 0) ? 0.0 : k * log_r) - lmax;
      if (lv > -60.0) acc += (f.coeff(k) / m) * std::exp(lv);
    }
  }
  double mag = std::abs(acc);
  return (mag > 0.0) ? lmax + std::log(mag) : kNegInf;
}

}  // namespace

std::vector<OffdiagPoint> offdiag_profile(Complex a,
                                          const std::vector<Complex>& z_list,
                                          const WeightEval& w,
                                          const MomentTable& table, int cap) {
  KernelSeries ks = kernel_series(a, table, cap, 1e-8);
  const double ra = std::abs(a);
  std::vector<OffdiagPoint> out;
  out.reserve(z_list.size());
  for (Complex z : z_list) {
    double rz = std::abs(z);
    OffdiagPoint p;
    p.d_tau_upper = w.tau_distance(a, z);
    p.log_normalized = log_abs_eval(ks.series, z) + 0.5 * w.log_omega(ra) +
                       0.5 * w.log_omega(rz) + w.log_tau(ra) + w.log_tau(rz);
    p.normalized = std::exp(p.log_normalized);
    out.push_back(p);
  }
  return out;
}

double fit_decay_exponent(const std::vector<OffdiagPoint>& points) {
  // slope of -log(normalized) against d_tau
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const OffdiagPoint& p : points) {
    if (!std::isfinite(p.log_normalized)) continue;
    sx += p.d_tau_upper;
    sy += -p.log_normalized;
    sxx += p.d_tau_upper * p.d_tau_upper;
    sxy += p.d_tau_upper * -p.log_normalized;
    ++n;
  }
  if (n < 2) return 0.0;
  double denom = n * sxx - sx * sx;
  if (denom <= 0.0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace paraberg
