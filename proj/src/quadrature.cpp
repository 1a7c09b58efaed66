#include "paraberg/quadrature.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace paraberg {

namespace {

GaussRule make_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
  return it->second;
}

namespace {

// One 15-point panel of exp(log_f) over [a, b], as a log value.
double panel_log(const std::function<double(double)>& log_f, double a,
                 double b) {
  const GaussRule& g = gauss_rule(15);
  const double h = 0.5 * (b - a);
  const double m = 0.5 * (a + b);
  LogSum sum;
  for (int i = 0; i < 15; ++i) {
    double lf = log_f(m + h * g.nodes[i]);
    if (lf == kNegInf) continue;
    sum.add(lf + std::log(g.weights[i] * h));
  }
  return sum.log_value();
}

struct Panel {
  double a, b;
  double log_coarse;  // single 15-pt estimate
  double log_fine;    // two-half estimate
  double log_err;     // log |fine - coarse|
};

Panel make_panel(const std::function<double(double)>& log_f, double a,
                 double b) {
  Panel p;
  p.a = a;
  p.b = b;
  p.log_coarse = panel_log(log_f, a, b);
  double mid = 0.5 * (a + b);
  double left = panel_log(log_f, a, mid);
  double right = panel_log(log_f, mid, b);
  p.log_fine = log_add(left, right);
  // |fine - coarse| computed against the larger scale
  double big = std::max(p.log_fine, p.log_coarse);
  if (big == kNegInf) {
    p.log_err = kNegInf;
  } else {
    double diff = std::abs(std::exp(p.log_fine - big) -
                           ((p.log_coarse == kNegInf)
                                ? 0.0
                                : std::exp(p.log_coarse - big)));
    p.log_err = (diff <= 0.0) ? kNegInf : big + std::log(diff);
  }
  return p;
}

}  // namespace

LogQuadResult integrate_log(const std::function<double(double)>& log_f,
                            double a, double b, double rel_tol,
                            int max_panels,
                            std::span<const double> seed_breaks) {
  LogQuadResult res;
  if (!(b > a)) return res;  // empty interval integrates to 0
  std::vector<Panel> panels;
  double left = a;
  for (double brk : seed_breaks) {
    if (brk > left && brk < b) {
      panels.push_back(make_panel(log_f, left, brk));
      left = brk;
    }
  }
  panels.push_back(make_panel(log_f, left, b));

  auto total_fine = [&panels]() {
    LogSum s;
    for (const Panel& p : panels) s.add(p.log_fine);
    return s.log_value();
  };
  auto total_err = [&panels]() {
    LogSum s;
    for (const Panel& p : panels) s.add(p.log_err);
    return s.log_value();
  };

  double prev_total = total_fine();
  const double log_tol = std::log(rel_tol);
  while (true) {
    double tot = total_fine();
    double err = total_err();
    if (err == kNegInf || (tot != kNegInf && err <= tot + log_tol)) {
      res.converged = true;
      res.log_value = tot;
      res.last_delta =
          (tot == kNegInf)
              ? 0.0
              : std::abs(std::exp(std::min(prev_total - tot, 0.0)) -
                         std::exp(std::min(tot - prev_total, 0.0)));
      return res;
    }
    if (static_cast<int>(panels.size()) >= max_panels) {
      res.converged = false;
      res.log_value = tot;
      res.last_delta = std::exp(err - tot);
      return res;
    }
    // split the worst panel (deterministic: first of maximal error)
    size_t worst = 0;
    for (size_t i = 1; i < panels.size(); ++i)
      if (panels[i].log_err > panels[worst].log_err) worst = i;
    prev_total = tot;
    Panel p = panels[worst];
    double mid = 0.5 * (p.a + p.b);
    Panel l = make_panel(log_f, p.a, mid);
    Panel r = make_panel(log_f, mid, p.b);
    panels[worst] = l;
    panels.insert(panels.begin() + static_cast<long>(worst) + 1, r);
    ++res.levels;
  }
}

ComplexLogValue integrate_complex_log(
    const std::function<std::complex<double>(double)>& mantissa,
    const std::function<double(double)>& log_scale, double a, double b,
    double rel_tol, int max_panels,
    const std::function<double(double)>& layout_hint) {
  // Integrate a positive envelope adaptively to find the panel layout, then
  // accumulate the complex value on the same panels.
  auto log_abs = [&](double x) {
    if (layout_hint) return layout_hint(x);
    double m = std::abs(mantissa(x));
    double ls = log_scale(x);
    if (m <= 0.0 || ls == kNegInf) return kNegInf;
    return std::log(m) + ls;
  };
  // Reuse the adaptive machinery to choose break points.
  std::vector<double> breaks;
  {
    std::vector<Panel> panels;
    panels.push_back(make_panel(log_abs, a, b));
    const double log_tol = std::log(rel_tol);
    while (static_cast<int>(panels.size()) < max_panels) {
      LogSum st, se;
      for (const Panel& p : panels) {
        st.add(p.log_fine);
        se.add(p.log_err);
      }
      double tot = st.log_value(), err = se.log_value();
      if (err == kNegInf || (tot != kNegInf && err <= tot + log_tol)) break;
      size_t worst = 0;
      for (size_t i = 1; i < panels.size(); ++i)
        if (panels[i].log_err > panels[worst].log_err) worst = i;
      Panel p = panels[worst];
      double mid = 0.5 * (p.a + p.b);
      panels[worst] = make_panel(log_abs, p.a, mid);
      panels.insert(panels.begin() + static_cast<long>(worst) + 1,
                    make_panel(log_abs, mid, p.b));
    }
    for (const Panel& p : panels) breaks.push_back(p.a);
    breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
  }

  // Accumulate complex panel sums against a common running scale.
  const GaussRule& g = gauss_rule(30);
  double scale = kNegInf;
  std::complex<double> acc{0.0, 0.0};
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double h = 0.5 * (breaks[k + 1] - breaks[k]);
    const double m = 0.5 * (breaks[k + 1] + breaks[k]);
    for (int i = 0; i < 30; ++i) {
      double x = m + h * g.nodes[i];
      double ls = log_scale(x);
      if (ls == kNegInf) continue;
      double lw = ls + std::log(g.weights[i] * h);
      std::complex<double> v = mantissa(x);
      if (lw <= scale) {
        acc += v * std::exp(lw - scale);
      } else {
        acc = acc * std::exp(scale - lw) + v;
        scale = lw;
      }
    }
  }
  ComplexLogValue out;
  out.mantissa = acc;
  out.log_scale = scale;
  return out;
}

MaxResult golden_max(const std::function<double(double)>& f, double a,
                     double b, double x_tol, int max_iter) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  MaxResult r;
  r.arg = 0.5 * (a + b);
  r.value = f(r.arg);
  if (f1 > r.value) {
    r.arg = x1;
    r.value = f1;
  }
  if (f2 > r.value) {
    r.arg = x2;
    r.value = f2;
  }
  return r;
}

double bisect_increasing(const std::function<double(double)>& f, double lo,
                         double hi, double target, int iters) {
  if (f(lo) >= target) return lo;
  if (f(hi) < target) return hi;
  for (int i = 0; i < iters; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace paraberg
