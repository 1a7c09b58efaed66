#include "paraberg/decomposition.hpp"

#include <algorithm>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace paraberg {

namespace {

using Rational = boost::multiprecision::cpp_rational;
using RSeries = std::vector<Rational>;  // real rational coefficients

RSeries r_monomial(int k) {
  RSeries v(k + 1, Rational(0));
  v[k] = 1;
  return v;
}

RSeries r_truncate(const RSeries& f, size_t cap_plus1) {
  RSeries v(f.begin(), f.begin() + std::min(f.size(), cap_plus1));
  v.resize(cap_plus1, Rational(0));
  return v;
}

RSeries r_product(const RSeries& f, const RSeries& g, size_t cap_plus1) {
  RSeries out(cap_plus1, Rational(0));
  for (size_t i = 0; i < f.size() && i < cap_plus1; ++i) {
    if (f[i] == 0) continue;
    for (size_t j = 0; j < g.size() && i + j < cap_plus1; ++j)
      out[i + j] += f[i] * g[j];
  }
  return out;
}

RSeries r_derivative(const RSeries& f) {
  if (f.size() <= 1) return RSeries(1, Rational(0));
  RSeries out(f.size() - 1);
  for (size_t k = 0; k + 1 < f.size(); ++k)
    out[k] = f[k + 1] * Rational(static_cast<int>(k) + 1);
  return out;
}

RSeries r_primitive0(const RSeries& f) {
  RSeries out(f.size() + 1, Rational(0));
  for (size_t k = 0; k < f.size(); ++k)
    out[k + 1] = f[k] / Rational(static_cast<int>(k) + 1);
  return out;
}

RSeries r_pi0(RSeries f) {
  if (!f.empty()) f[0] = 0;
  return f;
}

RSeries r_apply_letter(Letter l, const RSeries& g, const RSeries& f,
                       size_t cap_plus1) {
  switch (l) {
    case Letter::M:
      return r_product(f, g, cap_plus1);
    case Letter::T:
      return r_truncate(r_primitive0(r_product(f, r_derivative(g), cap_plus1)),
                        cap_plus1);
    case Letter::S:
      return r_truncate(r_primitive0(r_product(r_derivative(f), g, cap_plus1)),
                        cap_plus1);
  }
  throw std::logic_error("unreachable");
}

RSeries r_apply_word(const Word& w, const RSeries& g, const RSeries& f,
                     size_t cap_plus1) {
  RSeries h = r_truncate(f, cap_plus1);
  const auto& ls = w.letters();
  for (auto it = ls.rbegin(); it != ls.rend(); ++it)
    h = r_apply_letter(*it, g, h, cap_plus1);
  return h;
}

RSeries r_apply_st(const RSeries& g, const RSeries& f, int s_count,
                   int t_count, size_t cap_plus1) {
  RSeries h = r_truncate(f, cap_plus1);
  for (int i = 0; i < t_count; ++i) h = r_apply_letter(Letter::T, g, h, cap_plus1);
  for (int i = 0; i < s_count; ++i) h = r_apply_letter(Letter::S, g, h, cap_plus1);
  return h;
}

// Exact Gaussian elimination of the (overdetermined, consistent) system.
// Returns true with the unique solution, false when rank deficient; throws
// when the stacked equations are inconsistent.
bool solve_exact(std::vector<std::vector<Rational>>& rows, size_t cols,
                 std::vector<Rational>& solution) {
  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows.size(); ++col) {
    size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const Rational inv = rows[rank][col];
    for (size_t j = col; j <= cols; ++j) rows[rank][j] /= inv;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == rank || rows[i][col] == 0) continue;
      const Rational factor = rows[i][col];
      for (size_t j = col; j <= cols; ++j)
        rows[i][j] -= factor * rows[rank][j];
    }
    ++rank;
  }
  for (size_t i = rank; i < rows.size(); ++i)
    if (rows[i][cols] != 0)
      throw SingularSystem("decomposition system is inconsistent");
  if (rank < cols) return false;
  solution.assign(cols, Rational(0));
  // rows 0..rank-1 are now unit rows in column order of their pivots
  for (size_t i = 0; i < rank; ++i) {
    size_t col = 0;
    while (col < cols && rows[i][col] == 0) ++col;
    if (col < cols) solution[col] = rows[i][cols];
  }
  return true;
}

long long to_integer(const Rational& q, const char* what) {
  if (boost::multiprecision::denominator(q) != 1)
    throw NonIntegerCoefficient(std::string(what) +
                                " solved to a non-integer value");
  return static_cast<long long>(boost::multiprecision::numerator(q));
}

// One solve pass under a fixed symbol. The H_0 variant solves for c_0..c_k.
// The full-space variant pins the leading term by the ending-letter rule
// (S annihilates constants, so S^k and S^k Pi_0 coincide as operators for
// no-T words and a free leading pair would be singular) and solves for the
// correction coefficients a_1..a_k, b_1..b_k.
std::vector<long long> solve_for_symbol(
    const Word& word, const RSeries& g, bool full_space,
    const std::vector<int>& input_degrees) {
  const int k = word.k();
  const int n = word.count_t();
  const size_t n_basis = full_space ? 2 * k : (k + 1);
  const int delta = full_space ? word.delta_L() : 0;
  const int max_deg =
      *std::max_element(input_degrees.begin(), input_degrees.end());
  const size_t cap_plus1 =
      static_cast<size_t>(max_deg + word.length() * 3 + 4);

  std::vector<std::vector<Rational>> rows;
  for (int deg : input_degrees) {
    RSeries f = r_monomial(deg);
    RSeries f0 = r_pi0(f);
    RSeries target = r_apply_word(word, g, f, cap_plus1);
    std::vector<RSeries> columns;
    if (full_space) {
      const RSeries& lead_in = (delta == 1) ? f0 : f;
      RSeries lead = r_apply_st(g, lead_in, k, n, cap_plus1);
      for (size_t t = 0; t < cap_plus1; ++t) target[t] -= lead[t];
      for (int j = 1; j <= k; ++j)
        columns.push_back(r_apply_st(g, f, k - j, n + j, cap_plus1));
      for (int j = 1; j <= k; ++j)
        columns.push_back(r_apply_st(g, f0, k - j, n + j, cap_plus1));
    } else {
      for (int j = 0; j <= k; ++j)
        columns.push_back(r_apply_st(g, f, k - j, n + j, cap_plus1));
    }
    for (size_t t = 0; t < cap_plus1; ++t) {
      std::vector<Rational> row(n_basis + 1);
      bool nontrivial = target[t] != 0;
      for (size_t j = 0; j < n_basis; ++j) {
        row[j] = columns[j][t];
        nontrivial = nontrivial || row[j] != 0;
      }
      if (!nontrivial) continue;
      row[n_basis] = target[t];
      rows.push_back(std::move(row));
    }
  }
  std::vector<Rational> sol;
  if (n_basis == 0) {
    // leading term only: the pinned form must already be exact
    for (const auto& row : rows)
      if (row[0] != 0)
        throw SingularSystem("pinned leading term does not reproduce word " +
                             word.to_string());
    return {};
  }
  if (!solve_exact(rows, n_basis, sol))
    throw SingularSystem("rank deficient");
  std::vector<long long> out;
  out.reserve(sol.size());
  for (const Rational& q : sol) out.push_back(to_integer(q, "coefficient"));
  return out;
}

std::vector<long long> solve_with_retry(const Word& word, const RSeries& g,
                                        bool full_space) {
  const int k = word.k();
  const int lo = full_space ? 0 : 1;
  // start with inputs z^lo .. z^{k+1}; extend degrees if rank deficient
  for (int extra = 0; extra <= 3; ++extra) {
    std::vector<int> degrees;
    for (int i = lo; i <= k + 1 + extra; ++i) degrees.push_back(i);
    try {
      return solve_for_symbol(word, g, full_space, degrees);
    } catch (const SingularSystem&) {
      if (extra == 3) throw SingularSystem(
          "basis matrix is rank deficient for word " + word.to_string());
    }
  }
  throw SingularSystem("basis matrix is rank deficient for word " +
                       word.to_string());
}

const RSeries kSymbolA = {Rational(1), Rational(1)};               // 1 + z
const RSeries kSymbolB = {Rational(1), Rational(1), Rational(1)};  // 1+z+z^2

void validate_word(const Word& word) {
  if (word.length() > 8)
    throw std::invalid_argument(
        "decomposition solver rejects words longer than 8 letters");
  if (word.count_s() + word.count_t() < 1)
    throw std::invalid_argument("decomposition needs at least one S or T");
}

}  // namespace

CanonicalForm canonical_decomposition_H0(const Word& word) {
  validate_word(word);
  CanonicalForm form;
  form.k = word.k();
  form.n0 = word.count_t();
  if (word.count_t() == 0) {
    // no-T regime: boundedness is governed by the sup norm of the symbol,
    // not by the ladder; report without solving
    form.no_t_case = true;
    form.c = {1};
    return form;
  }
  std::vector<long long> s1 = solve_with_retry(word, kSymbolA, false);
  std::vector<long long> s2 = solve_with_retry(word, kSymbolB, false);
  if (s1 != s2)
    throw NonIntegerCoefficient(
        "validation symbol produced different integers for word " +
        word.to_string());
  if (s1.empty() || s1[0] != 1)
    throw NonIntegerCoefficient("leading coefficient is not 1 for word " +
                                word.to_string());
  form.c = s1;
  form.residual = 0.0;  // exact arithmetic; mismatch would have thrown
  return form;
}

CanonicalForm full_decomposition(const Word& word) {
  validate_word(word);
  CanonicalForm form;
  form.full = true;
  form.k = word.k();
  form.n0 = word.count_t();
  // the leading term is pinned by the ending-letter rule; an exact solve
  // succeeding at all verifies the rule (a wrong delta makes the stacked
  // system inconsistent)
  form.delta_L = word.delta_L();
  std::vector<long long> s1 = solve_with_retry(word, kSymbolA, true);
  std::vector<long long> s2 = solve_with_retry(word, kSymbolB, true);
  if (s1 != s2)
    throw NonIntegerCoefficient(
        "validation symbol produced different integers for word " +
        word.to_string());
  const int k = form.k;
  form.a.assign(s1.begin(), s1.begin() + k);
  form.b.assign(s1.begin() + k, s1.end());
  form.c.assign(k + 1, 0);
  form.c[0] = 1;
  for (int j = 1; j <= k; ++j) form.c[j] = form.a[j - 1] + form.b[j - 1];
  form.residual = 0.0;
  return form;
}

TruncatedSeries apply_st_power(const TruncatedSeries& g,
                               const TruncatedSeries& f, int s_count,
                               int t_count, int cap) {
  TruncatedSeries h = f.truncated(cap);
  for (int i = 0; i < t_count; ++i) h = apply_letter(Letter::T, g, h, cap);
  for (int i = 0; i < s_count; ++i) h = apply_letter(Letter::S, g, h, cap);
  return h;
}

TruncatedSeries reconstruct(const CanonicalForm& form, const TruncatedSeries& g,
                            const TruncatedSeries& f, int cap) {
  if (form.no_t_case)
    throw std::logic_error("no-T forms are reported, not reconstructed");
  TruncatedSeries acc = TruncatedSeries::zero(cap);
  if (form.full) {
    TruncatedSeries f0 = pi0(f);
    const TruncatedSeries& lead = (form.delta_L == 1) ? f0 : f;
    acc = add(acc, apply_st_power(g, lead, form.k, form.n0, cap));
    for (int j = 1; j <= form.k; ++j) {
      double aj = static_cast<double>(form.a[j - 1]);
      double bj = static_cast<double>(form.b[j - 1]);
      if (aj != 0.0)
        acc = add(acc, scale(apply_st_power(g, f, form.k - j, form.n0 + j, cap),
                             Complex{aj, 0.0}));
      if (bj != 0.0)
        acc = add(acc, scale(apply_st_power(g, f0, form.k - j, form.n0 + j, cap),
                             Complex{bj, 0.0}));
    }
    return acc;
  }
  for (int j = 0; j <= form.k; ++j) {
    double cj = static_cast<double>(form.c[j]);
    if (cj == 0.0) continue;
    acc = add(acc, scale(apply_st_power(g, f, form.k - j, form.n0 + j, cap),
                         Complex{cj, 0.0}));
  }
  return acc;
}

std::string CanonicalForm::to_json() const {
  std::ostringstream os;
  os << "{\"leading\":{\"k\":" << k << ",\"n\":" << n0 << "}";
  if (no_t_case) {
    os << ",\"no_t_case\":true";
  } else {
    os << ",\"c\":[";
    for (size_t j = 1; j < c.size(); ++j) {
      if (j > 1) os << ",";
      os << c[j];
    }
    os << "]";
    if (full) {
      os << ",\"delta_L\":" << delta_L << ",\"a\":[";
      for (size_t j = 0; j < a.size(); ++j) {
        if (j) os << ",";
        os << a[j];
      }
      os << "],\"b\":[";
      for (size_t j = 0; j < b.size(); ++j) {
        if (j) os << ",";
        os << b[j];
      }
      os << "]";
    }
  }
  os << ",\"residual\":" << residual << "}";
  return os.str();
}

}  // namespace paraberg
