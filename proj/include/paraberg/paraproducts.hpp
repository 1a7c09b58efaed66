#pragma once

#include <string>
#include <vector>

#include "paraberg/series.hpp"

namespace paraberg {

enum class Letter { M, S, T };

char letter_char(Letter l);

// A word over {M, S, T} with a shared symbol g. letters()[0] is the leftmost
// factor of the operator product, so it is applied LAST:
//   L f = L_1(L_2(...(L_N f))).
class Word {
 public:
  explicit Word(std::vector<Letter> letters);
  static Word parse(const std::string& text);  // leftmost char = L_1

  const std::vector<Letter>& letters() const { return letters_; }
  int length() const { return static_cast<int>(letters_.size()); }
  int count_m() const { return m_count_; }
  int count_s() const { return s_count_; }
  int count_t() const { return t_count_; }
  int k() const { return m_count_ + s_count_; }          // ell + m
  double s_exponent() const;                             // N / n, needs n >= 1
  std::string to_string() const;

  // delta_L of the full-space decomposition: 0 when the word ends in T M^i,
  // 1 when it ends in S M^i (scanning trailing M's from the right).
  int delta_L() const;

 private:
  std::vector<Letter> letters_;
  int m_count_ = 0, s_count_ = 0, t_count_ = 0;
};

// M_g f = f g;  T_g f = int_0^z f g';  S_g f = int_0^z f' g.
TruncatedSeries apply_letter(Letter letter, const TruncatedSeries& g,
                             const TruncatedSeries& f, int cap);

// Right-to-left fold of apply_letter. The working cap grows by one per T/S
// letter and by deg(g) per M letter, clamped at cap_max.
TruncatedSeries apply_word(const Word& word, const TruncatedSeries& g,
                           const TruncatedSeries& f, int cap_max);

// Pi_0 f = f - f(0)
TruncatedSeries pi0(const TruncatedSeries& f);

// max coefficient deviation of apply_word(word, lambda*g, f) from
// lambda^N * apply_word(word, g, f); every letter is 1-homogeneous in g.
double homogeneity_check(const Word& word, const TruncatedSeries& g,
                         const TruncatedSeries& f, Complex lambda,
                         int cap_max = 256);

}  // namespace paraberg
