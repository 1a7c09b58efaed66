#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "paraberg/paraproducts.hpp"

namespace paraberg {

struct SingularSystem : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonIntegerCoefficient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rewriting of an N-letter word into the S^k T^n ladder. On functions
// vanishing at the origin every word with at least one S or T collapses to
//   L = S^k T^n + sum_{j=1..k} c_j S^{k-j} T^{n+j}
// with integer c_j that do not depend on the symbol. The full-space variant
// carries the correction projections:
//   L = (1-delta) S^k T^n + delta S^k T^n Pi_0
//       + sum a_j S^{k-j} T^{n+j} + sum b_j S^{k-j} T^{n+j} Pi_0.
struct CanonicalForm {
  int k = 0;
  int n0 = 0;                // T-count of the leading S^k T^n term
  std::vector<long long> c;  // c_0..c_k, c_0 == 1 (H_0 variant)
  bool no_t_case = false;    // word has no T letter: reported, not solved

  bool full = false;         // set by full_decomposition
  int delta_L = -1;
  std::vector<long long> a;  // a_1..a_k (index 0 = leading, kept separate)
  std::vector<long long> b;  // b_1..b_k

  double residual = 0.0;     // max mismatch on the validation symbol (exact 0)
  std::string to_json() const;
};

// Exact-rational solve of the H_0 decomposition. The coefficients are
// recovered from monomial inputs z^i under g = 1+z, then re-derived under
// g = 1+z+z^2 and required to match; both solves run in exact rational
// arithmetic so integrality is a hard check, not a tolerance.
// Words longer than 8 letters are rejected.
CanonicalForm canonical_decomposition_H0(const Word& word);

// Full-space variant over the enlarged basis with Pi_0 corrections;
// delta_L from the solve is verified against the ending-letter rule.
CanonicalForm full_decomposition(const Word& word);

// S^s_count T^t_count f (T letters applied first), for reconstruction tests.
TruncatedSeries apply_st_power(const TruncatedSeries& g,
                               const TruncatedSeries& f, int s_count,
                               int t_count, int cap);

// Evaluate the decomposed operator on f in double arithmetic.
TruncatedSeries reconstruct(const CanonicalForm& form, const TruncatedSeries& g,
                            const TruncatedSeries& f, int cap);

}  // namespace paraberg
