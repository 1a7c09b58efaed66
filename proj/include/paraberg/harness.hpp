#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paraberg/kernel.hpp"
#include "paraberg/norms.hpp"
#include "paraberg/paraproducts.hpp"
#include "paraberg/series.hpp"
#include "paraberg/weights.hpp"

namespace paraberg {

// Seeded family of random polynomial symbols. Coefficient law (fixed):
// c_k = (x + iy)/sqrt(2) / (k+1) with x, y standard normal drawn from a
// Box-Muller transform over mt19937_64, so families reproduce across
// platforms. Constant draws are rejected and redrawn.
struct SymbolFamily {
  std::uint64_t seed = 7;
  int count = 30;
  int max_degree = 6;
  std::vector<TruncatedSeries> generate() const;
};

struct TestSetConfig {
  bool monomials = true;
  int monomial_max = 8;
  bool kernel_offsets = true;
  std::vector<double> offsets = {0.3, 0.5, 0.7};
  int kernel_cap = 256;
  bool random_h0 = true;
  int random_count = 5;
  int random_degree = 8;
  std::uint64_t random_seed = 99;
};

struct TestFunction {
  TruncatedSeries f;  // normalized: ||f|| = 1, f(0) = 0
  std::string kind;
};

// Test functions for restricted-norm lower bounds: normalized monomials,
// normalized kernel offsets z K_a / ||z K_a||, and random H_0 polynomials.
struct TestFunctionSet {
  std::vector<TestFunction> members;
  std::string moment_hash;  // of the kernel-offset moment table, if any

  static TestFunctionSet build(const WeightEval& w, double p,
                               const QuadratureConfig& cfg,
                               const TestSetConfig& tcfg,
                               const MomentTable* table = nullptr);
};

struct RestrictedEstimate {
  NormEstimate estimate;
  std::string attained_kind;
};

// max over the normalized test set of ||L_g f||: a lower estimate of the
// restricted operator norm up to quadrature error.
RestrictedEstimate estimate_restricted_opnorm(const Word& word,
                                              const TruncatedSeries& g,
                                              const WeightEval& w, double p,
                                              const TestFunctionSet& tests,
                                              const QuadratureConfig& cfg,
                                              int cap_max = 2048);

struct ReportRow {
  std::string experiment;
  std::string weight;
  double p = 0.0;
  std::string word;
  int N = 0;
  int n = 0;
  double s = 0.0;
  int symbol_id = -1;
  double theory = 0.0;
  double estimate = 0.0;
  double ratio = 0.0;
  double refinement_delta = 0.0;
  std::string attained_kind;
  std::string flag;  // "", "lambda_check", "dilation:<r>", ...
};

struct ExperimentSummary {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double stability = 0.0;  // worst per-row refinement drift
  bool pass = true;
  std::string detail;
};

struct ExperimentReport {
  std::string name;
  std::map<std::string, std::string> config;
  std::vector<ReportRow> rows;
  ExperimentSummary summary;

  std::string to_jsonl() const;  // rows then a summary line
  std::string to_csv() const;    // stable column order
};

struct ExperimentConfig {
  WeightSpec weight{};
  double p = 2.0;
  std::uint64_t seed = 7;
  int symbol_count = 30;
  int symbol_degree = 6;
  QuadratureConfig quad{};
  TestSetConfig tests{};
  int cap_max = 2048;
  int threads = 1;
  bool with_refinement = true;  // adds drift columns from a refined rerun
  double lambda_tol = 1e-11;
  double drift_tol = 0.05;
};

// one representative word per (ell, m, n) count class with n >= 1 and
// length <= 4, plus the no-T words M, S, MS
std::vector<Word> default_word_matrix();

// Norm equivalence sweep: theory = bloch(g, s)^N for n >= 1 words and
// max_modulus(g, 1)^N for no-T words; estimate = restricted lower bound.
// Every experiment appends one lambda spot-check row (exact N-homogeneity
// under symbol rescaling) and dilation rows estimate(g_r) <= (1+tol) est(g).
ExperimentReport theorem11_experiment(const ExperimentConfig& cfg,
                                      const std::vector<Word>& words);

// max over the family of bloch(g, q1)/bloch(g, q2) for q1 < q2
ExperimentReport radicality_experiment(
    const ExperimentConfig& cfg,
    const std::vector<std::pair<double, double>>& q_pairs);

// Sum-vs-leading-term comparison: combos (L_0; L_1..L_J) must satisfy
// N_j < N_0 and s_j < s_0; invalid combos throw.
ExperimentReport corollary13_experiment(
    const ExperimentConfig& cfg,
    const std::vector<std::pair<Word, std::vector<Word>>>& combos);

// Q-operator sandwich: restricted ||Q^{sigma,ell}|| against
// bloch(g, sigma+1)^{(sigma+1) ell} (both directions) plus the sigma = m/n
// bridge against the restricted norm of S^m T^n.
ExperimentReport prop61_experiment(const ExperimentConfig& cfg,
                                   const std::vector<SigmaRational>& sigmas,
                                   const std::vector<int>& ells);

// MANIFEST.json payload for reproducibility
std::string manifest_json(const std::map<std::string, std::string>& config,
                          const std::vector<std::string>& moment_hashes);

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace paraberg
