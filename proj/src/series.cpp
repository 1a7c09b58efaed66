#include "paraberg/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace paraberg {

TruncatedSeries TruncatedSeries::truncated(int new_cap) const {
  if (new_cap < 0) new_cap = 0;
  std::vector<Complex> v(coeffs_.begin(),
                         coeffs_.begin() + std::min<size_t>(coeffs_.size(),
                                                            new_cap + 1));
  v.resize(new_cap + 1, Complex{0.0, 0.0});
  return TruncatedSeries(std::move(v));
}

TruncatedSeries cauchy_product(const TruncatedSeries& f,
                               const TruncatedSeries& g, int cap) {
  if (cap < 0) throw std::invalid_argument("cauchy_product: cap < 0");
  std::vector<Complex> out(cap + 1, Complex{0.0, 0.0});
  const int df = std::min(f.cap(), cap);
  for (int i = 0; i <= df; ++i) {
    const Complex fi = f.coeff(i);
    if (fi == Complex{0.0, 0.0}) continue;
    const int jmax = std::min(g.cap(), cap - i);
    for (int j = 0; j <= jmax; ++j) out[i + j] += fi * g.coeff(j);
  }
  return TruncatedSeries(std::move(out));
}

TruncatedSeries add(const TruncatedSeries& f, const TruncatedSeries& g) {
  int cap = std::min(f.cap(), g.cap());
  std::vector<Complex> out(cap + 1);
  for (int k = 0; k <= cap; ++k) out[k] = f.coeff(k) + g.coeff(k);
  return TruncatedSeries(std::move(out));
}

TruncatedSeries subtract(const TruncatedSeries& f, const TruncatedSeries& g) {
  int cap = std::min(f.cap(), g.cap());
  std::vector<Complex> out(cap + 1);
  for (int k = 0; k <= cap; ++k) out[k] = f.coeff(k) - g.coeff(k);
  return TruncatedSeries(std::move(out));
}

TruncatedSeries scale(const TruncatedSeries& f, Complex lambda) {
  std::vector<Complex> out = f.coeffs();
  for (Complex& c : out) c *= lambda;
  return TruncatedSeries(std::move(out));
}

TruncatedSeries derivative(const TruncatedSeries& f) {
  if (f.cap() == 0) return TruncatedSeries::zero(0);
  std::vector<Complex> out(f.cap());
  for (int k = 0; k < f.cap(); ++k)
    out[k] = static_cast<double>(k + 1) * f.coeff(k + 1);
  return TruncatedSeries(std::move(out));
}

TruncatedSeries primitive0(const TruncatedSeries& f) {
  std::vector<Complex> out(f.cap() + 2, Complex{0.0, 0.0});
  for (int k = 0; k <= f.cap(); ++k)
    out[k + 1] = f.coeff(k) / static_cast<double>(k + 1);
  return TruncatedSeries(std::move(out));
}

Complex evaluate(const TruncatedSeries& f, Complex z) {
  Complex acc{0.0, 0.0};
  for (int k = f.cap(); k >= 0; --k) acc = acc * z + f.coeff(k);
  return acc;
}

TruncatedSeries dilate(const TruncatedSeries& f, double r) {
  if (!(r > 0.0 && r <= 1.0))
    throw std::domain_error("dilate: r must be in (0, 1]");
  std::vector<Complex> out(f.cap() + 1);
  double rk = 1.0;
  for (int k = 0; k <= f.cap(); ++k) {
    out[k] = f.coeff(k) * rk;
    rk *= r;
  }
  return TruncatedSeries(std::move(out));
}

TruncatedSeries power(const TruncatedSeries& g, int k, int cap) {
  if (k < 0) throw std::invalid_argument("power: negative exponent");
  TruncatedSeries result = TruncatedSeries::one().truncated(cap);
  TruncatedSeries base = g.truncated(cap);
  while (k > 0) {
    if (k & 1) result = cauchy_product(result, base, cap);
    base = cauchy_product(base, base, cap);
    k >>= 1;
  }
  return result;
}

double max_modulus(const TruncatedSeries& f, double r) {
  if (!(r >= 0.0 && r <= 1.0))
    throw std::domain_error("max_modulus: r must be in [0, 1]");
  int deg = f.effective_degree();
  if (deg <= 0) return std::abs(f.coeff(0));
  if (r == 0.0) return std::abs(f.coeff(0));
  TruncatedSeries fr = (r < 1.0) ? dilate(f, r) : f;
  int n = 16 * (deg + 1);
  double prev = -1.0;
  for (int iter = 0; iter < 16; ++iter) {
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      double th = 2.0 * M_PI * j / n;
      best = std::max(best,
                      std::abs(evaluate(fr, Complex{std::cos(th),
                                                    std::sin(th)})));
    }
    if (prev >= 0.0 && std::abs(best - prev) <= 1e-9 * std::max(best, 1e-300))
      return best;
    prev = best;
    n *= 2;
  }
  return prev;
}

double max_coeff_diff(const TruncatedSeries& f, const TruncatedSeries& g) {
  double m = 0.0;
  int cap = std::max(f.cap(), g.cap());
  for (int k = 0; k <= cap; ++k)
    m = std::max(m, std::abs(f.coeff(k) - g.coeff(k)));
  return m;
}

double max_abs_coeff(const TruncatedSeries& f) {
  double m = 0.0;
  for (const Complex& c : f.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

TruncatedSeries parse_poly(const std::string& text) {
  std::string body = text;
  if (body.rfind("poly:", 0) == 0) body = body.substr(5);
  std::vector<Complex> coeffs;
  std::stringstream ss(body);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    double v = std::stod(tok, &pos);
    while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos])))
      ++pos;
    if (pos != tok.size())
      throw std::invalid_argument("parse_poly: bad coefficient '" + tok + "'");
    coeffs.emplace_back(v, 0.0);
  }
  if (coeffs.empty()) throw std::invalid_argument("parse_poly: empty");
  return TruncatedSeries(std::move(coeffs));
}

std::string format_poly(const TruncatedSeries& f) {
  std::ostringstream os;
  os << "[";
  for (int k = 0; k <= f.cap(); ++k) {
    if (k) os << ",";
    os << "[" << f.coeff(k).real() << "," << f.coeff(k).imag() << "]";
  }
  os << "]";
  return os.str();
}

}  // namespace paraberg
