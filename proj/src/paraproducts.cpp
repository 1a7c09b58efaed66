#include "paraberg/paraproducts.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace paraberg {

char letter_char(Letter l) {
  switch (l) {
    case Letter::M: return 'M';
    case Letter::S: return 'S';
    case Letter::T: return 'T';
  }
  return '?';
}

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw std::invalid_argument("empty word");
  for (Letter l : letters_) {
    if (l == Letter::M) ++m_count_;
    if (l == Letter::S) ++s_count_;
    if (l == Letter::T) ++t_count_;
  }
}

Word Word::parse(const std::string& text) {
  std::vector<Letter> ls;
  for (char ch : text) {
    switch (ch) {
      case 'M': case 'm': ls.push_back(Letter::M); break;
      case 'S': case 's': ls.push_back(Letter::S); break;
      case 'T': case 't': ls.push_back(Letter::T); break;
      default:
        throw std::invalid_argument(std::string("bad letter '") + ch +
                                    "' in word");
    }
  }
  return Word(std::move(ls));
}

double Word::s_exponent() const {
  if (t_count_ < 1)
    throw std::logic_error("s = N/n requires at least one T letter");
  return static_cast<double>(length()) / t_count_;
}

std::string Word::to_string() const {
  std::string s;
  for (Letter l : letters_) s.push_back(letter_char(l));
  return s;
}

int Word::delta_L() const {
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    if (*it == Letter::T) return 0;
    if (*it == Letter::S) return 1;
  }
  throw std::logic_error("delta_L undefined for all-M words");
}

TruncatedSeries apply_letter(Letter letter, const TruncatedSeries& g,
                             const TruncatedSeries& f, int cap) {
  if (cap < 0) throw std::invalid_argument("apply_letter: cap < 0");
  switch (letter) {
    case Letter::M:
      return cauchy_product(f, g, cap);
    case Letter::T: {
      if (cap == 0) return TruncatedSeries::zero(0);
      return primitive0(cauchy_product(f, derivative(g), cap - 1));
    }
    case Letter::S: {
      if (cap == 0) return TruncatedSeries::zero(0);
      return primitive0(cauchy_product(derivative(f), g, cap - 1));
    }
  }
  throw std::logic_error("unreachable");
}

TruncatedSeries apply_word(const Word& word, const TruncatedSeries& g,
                           const TruncatedSeries& f, int cap_max) {
  // every letter raises the degree by deg(g): multiplication directly,
  // T through f g', S through f' g followed by the primitive
  const int dg = std::max(0, g.effective_degree());
  int cap = std::min(std::max(f.effective_degree(), 0), cap_max);
  TruncatedSeries h = f.truncated(cap);
  const auto& ls = word.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
    cap = std::min(cap + dg, cap_max);
    h = apply_letter(*it, g, h, cap);
  }
  return h;
}

TruncatedSeries pi0(const TruncatedSeries& f) {
  std::vector<Complex> v = f.coeffs();
  v[0] = Complex{0.0, 0.0};
  return TruncatedSeries(std::move(v));
}

double homogeneity_check(const Word& word, const TruncatedSeries& g,
                         const TruncatedSeries& f, Complex lambda,
                         int cap_max) {
  TruncatedSeries lhs = apply_word(word, scale(g, lambda), f, cap_max);
  Complex lam_n{1.0, 0.0};
  for (int i = 0; i < word.length(); ++i) lam_n *= lambda;
  TruncatedSeries rhs = scale(apply_word(word, g, f, cap_max), lam_n);
  return max_coeff_diff(lhs, rhs);
}

}  // namespace paraberg
