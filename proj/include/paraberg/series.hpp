#pragma once

#include <complex>
#include <string>
#include <vector>

namespace paraberg {

using Complex = std::complex<double>;

// Polynomial truncation of an analytic function: coefficient of z^j at
// index j, capped at degree `cap()`. Immutable value type; every operation
// returns a fresh series.
class TruncatedSeries {
 public:
  TruncatedSeries() : coeffs_(1, Complex{0.0, 0.0}) {}
  explicit TruncatedSeries(std::vector<Complex> coeffs)
      : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.assign(1, Complex{0.0, 0.0});
  }
  static TruncatedSeries zero(int cap) {
    return TruncatedSeries(std::vector<Complex>(cap + 1, Complex{0.0, 0.0}));
  }
  static TruncatedSeries one() {
    return TruncatedSeries({Complex{1.0, 0.0}});
  }
  static TruncatedSeries monomial(int k, Complex c = {1.0, 0.0}) {
    std::vector<Complex> v(k + 1, Complex{0.0, 0.0});
    v[k] = c;
    return TruncatedSeries(std::move(v));
  }

  int cap() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(int k) const {
    return (k >= 0 && k <= cap()) ? coeffs_[k] : Complex{0.0, 0.0};
  }

  // highest index with a nonzero coefficient; -1 for the zero series
  int effective_degree() const {
    for (int k = cap(); k >= 0; --k)
      if (coeffs_[k] != Complex{0.0, 0.0}) return k;
    return -1;
  }
  bool is_zero() const { return effective_degree() < 0; }
  bool in_H0() const { return coeffs_[0] == Complex{0.0, 0.0}; }

  TruncatedSeries truncated(int new_cap) const;

 private:
  std::vector<Complex> coeffs_;
};

// c_k = sum_{i+j=k} f_i g_j for k <= cap. Plain O(n^2) convolution; the
// working caps stay small enough that a transform product buys nothing.
TruncatedSeries cauchy_product(const TruncatedSeries& f,
                               const TruncatedSeries& g, int cap);

// coefficientwise sum/scale, truncated to the smaller cap unless forced
TruncatedSeries add(const TruncatedSeries& f, const TruncatedSeries& g);
TruncatedSeries subtract(const TruncatedSeries& f, const TruncatedSeries& g);
TruncatedSeries scale(const TruncatedSeries& f, Complex lambda);

TruncatedSeries derivative(const TruncatedSeries& f);

// primitive vanishing at 0: coefficient k = f_{k-1}/k, cap grows by one
TruncatedSeries primitive0(const TruncatedSeries& f);

Complex evaluate(const TruncatedSeries& f, Complex z);

// f(rz); r in (0, 1]
TruncatedSeries dilate(const TruncatedSeries& f, double r);

// g^k by repeated squaring, truncated at cap
TruncatedSeries power(const TruncatedSeries& g, int k, int cap);

// max over |z| = r of |f(z)|; adaptive angular doubling from
// 16*(effective degree + 1) points until the relative change is < 1e-9.
// Polynomials extend continuously to the closed disc, so r = 1 is allowed.
double max_modulus(const TruncatedSeries& f, double r);

// largest coefficient magnitude difference
double max_coeff_diff(const TruncatedSeries& f, const TruncatedSeries& g);
double max_abs_coeff(const TruncatedSeries& f);

// CLI shorthand "poly:1,0,2" -> 1 + 2z^2 (real coefficients, index order)
TruncatedSeries parse_poly(const std::string& text);
std::string format_poly(const TruncatedSeries& f);

}  // namespace paraberg
