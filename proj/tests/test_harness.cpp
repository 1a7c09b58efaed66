#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "paraberg/harness.hpp"

using namespace paraberg;

namespace {

// frozen mpmath oracle: max_k (1/(k+1)) sqrt(alpha_{k+1}/alpha_k), k <= 8
constexpr double kRestrictedTzW011 = 0.278149682619189608;

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.weight = WeightSpec::parse("w0:1:1");
  cfg.p = 2.0;
  cfg.seed = 7;
  cfg.symbol_count = 3;
  cfg.symbol_degree = 4;
  cfg.with_refinement = false;
  cfg.tests.monomial_max = 4;
  cfg.tests.offsets = {0.4};
  cfg.tests.kernel_cap = 128;
  cfg.tests.random_count = 2;
  return cfg;
}

}  // namespace

TEST_CASE("symbol family reproducibility") {
  SymbolFamily fam{123, 10, 6};
  auto a = fam.generate();
  auto b = fam.generate();
  REQUIRE(a.size() == 10);
  for (size_t i = 0; i < a.size(); ++i)
    CHECK(max_coeff_diff(a[i], b[i]) == 0.0);
  for (const TruncatedSeries& g : a) CHECK(!derivative(g).is_zero());
  SymbolFamily other{124, 10, 6};
  CHECK(max_coeff_diff(other.generate()[0], a[0]) > 0.0);
}

TEST_CASE("test function set is normalized H_0") {
  WeightEval w(WeightSpec::parse("w0:1:1"));
  QuadratureConfig quad;
  TestSetConfig tcfg;
  tcfg.monomial_max = 5;
  tcfg.offsets = {0.3, 0.5};
  tcfg.kernel_cap = 128;
  tcfg.random_count = 3;
  TestFunctionSet set = TestFunctionSet::build(w, 2.0, quad, tcfg);
  CHECK(set.members.size() == 5 + 2 + 3);
  CHECK(!set.moment_hash.empty());
  for (const TestFunction& t : set.members) {
    CHECK(t.f.in_H0());
    double nb =
        bergman_norm(t.f, w, 2.0, WeightModifier::plain(2.0), quad).value;
    CHECK(nb == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("restricted norm lower bound") {
  WeightEval w(WeightSpec::parse("w0:1:1"));
  QuadratureConfig quad;
  TestSetConfig tcfg;
  tcfg.monomial_max = 8;
  tcfg.kernel_offsets = false;
  tcfg.random_h0 = false;
  TestFunctionSet tests = TestFunctionSet::build(w, 2.0, quad, tcfg);

  // constant symbol kills T
  RestrictedEstimate zero = estimate_restricted_opnorm(
      Word::parse("T"), TruncatedSeries::monomial(0, {3, 1}), w, 2.0, tests,
      quad);
  CHECK(zero.estimate.value == 0.0);

  // g = z against monomials: closed reduction via the moment ladder
  RestrictedEstimate tz = estimate_restricted_opnorm(
      Word::parse("T"), TruncatedSeries::monomial(1), w, 2.0, tests, quad);
  CHECK(tz.estimate.value ==
        doctest::Approx(kRestrictedTzW011).epsilon(1e-8));
  CHECK(tz.attained_kind == "monomial:1");

  // exact N-homogeneity of the estimator
  Complex lambda{0.7, 1.9};
  RestrictedEstimate scaled = estimate_restricted_opnorm(
      Word::parse("ST"), scale(TruncatedSeries::monomial(1), lambda), w, 2.0,
      tests, quad);
  RestrictedEstimate plain_est = estimate_restricted_opnorm(
      Word::parse("ST"), TruncatedSeries::monomial(1), w, 2.0, tests, quad);
  CHECK(scaled.estimate.value ==
        doctest::Approx(std::norm(lambda) * plain_est.estimate.value)
            .epsilon(1e-11));
}

TEST_CASE("theorem11 report structure and determinism") {
  ExperimentConfig cfg = small_config();
  std::vector<Word> words = {Word::parse("T"), Word::parse("ST"),
                             Word::parse("M")};
  ExperimentReport rep = theorem11_experiment(cfg, words);
  // 3 words x 3 symbols x (main + 2 dilation rows) + lambda row
  CHECK(rep.rows.size() == 3 * 3 * 3 + 1);
  int lambda_rows = 0;
  for (const ReportRow& r : rep.rows) {
    if (r.flag == "lambda_check") {
      ++lambda_rows;
      CHECK(r.ratio <= 1e-11);
      continue;
    }
    if (r.flag.rfind("dilation", 0) == 0) {
      CHECK(r.ratio <= 1.0 + 1e-6);
      continue;
    }
    CHECK(r.theory > 0.0);
    CHECK(r.estimate > 0.0);
    CHECK(r.ratio > 0.0);
    CHECK(r.ratio <= 1.0 + 1e-9);  // lower estimate cannot beat the sup side
  }
  CHECK(lambda_rows == 1);
  CHECK(rep.summary.max_ratio >= rep.summary.min_ratio);
  CHECK(rep.summary.min_ratio > 0.0);

  // bit-identical rerun, and thread-count independence
  ExperimentReport rep2 = theorem11_experiment(cfg, words);
  CHECK(rep.to_jsonl() == rep2.to_jsonl());
  ExperimentConfig threaded = cfg;
  threaded.threads = 4;
  ExperimentReport rep4 = theorem11_experiment(threaded, words);
  CHECK(rep.to_jsonl() == rep4.to_jsonl());
}

TEST_CASE("theorem11 n=0 words use the sup norm") {
  ExperimentConfig cfg = small_config();
  ExperimentReport rep = theorem11_experiment(cfg, {Word::parse("M")});
  SymbolFamily fam{cfg.seed, cfg.symbol_count, cfg.symbol_degree};
  auto symbols = fam.generate();
  for (const ReportRow& r : rep.rows) {
    if (!r.flag.empty()) continue;
    CHECK(r.n == 0);
    CHECK(r.theory ==
          doctest::Approx(max_modulus(symbols[r.symbol_id], 1.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("radicality chain is submultiplicative per symbol") {
  ExperimentConfig cfg = small_config();
  ExperimentReport rep = radicality_experiment(
      cfg, {{1.0, 2.0}, {2.0, 4.0}, {1.0, 4.0}});
  // collect per-symbol ratios
  std::map<int, std::map<std::string, double>> by_symbol;
  for (const ReportRow& r : rep.rows) {
    if (!r.flag.empty()) continue;
    by_symbol[r.symbol_id][r.word] = r.ratio;
  }
  for (auto& [sid, m] : by_symbol) {
    double r12 = m.at("B[1]/B[2]");
    double r24 = m.at("B[2]/B[4]");
    double r14 = m.at("B[1]/B[4]");
    CHECK(r14 <= r12 * r24 * (1.0 + 1e-12));
    CHECK(r14 >= r12 * r24 * (1.0 - 1e-12));  // exact algebra on shared values
  }
  CHECK(rep.summary.max_ratio > 0.0);
}

TEST_CASE("corollary13 validation and triangle bound") {
  ExperimentConfig cfg = small_config();
  // ST + TT violates N_j < N_0
  CHECK_THROWS_AS(
      corollary13_experiment(cfg, {{Word::parse("ST"), {Word::parse("TT")}}}),
      std::invalid_argument);
  // SST + T is admissible: N 3 vs 1, s 3 vs 1
  ExperimentReport rep =
      corollary13_experiment(cfg, {{Word::parse("SST"), {Word::parse("T")}}});
  for (const ReportRow& r : rep.rows) {
    if (!r.flag.empty()) {
      if (r.flag == "lambda_check") CHECK(r.ratio <= 1e-11);
      continue;
    }
    CHECK(r.ratio > 0.0);
    CHECK(std::isfinite(r.ratio));
  }

  // per-test-function triangle inequality at p >= 1
  WeightEval w(cfg.weight);
  TestFunctionSet tests =
      TestFunctionSet::build(w, cfg.p, cfg.quad, cfg.tests);
  SymbolFamily fam{cfg.seed, 1, cfg.symbol_degree};
  TruncatedSeries g = fam.generate()[0];
  for (const TestFunction& t : tests.members) {
    TruncatedSeries lead = apply_word(Word::parse("SST"), g, t.f, cfg.cap_max);
    TruncatedSeries small = apply_word(Word::parse("T"), g, t.f, cfg.cap_max);
    int cap = std::max(lead.cap(), small.cap());
    TruncatedSeries sum = add(lead.truncated(cap), small.truncated(cap));
    auto nrm = [&](const TruncatedSeries& h) {
      return bergman_norm(h, w, cfg.p, WeightModifier::plain(cfg.p), cfg.quad)
          .value;
    };
    CHECK(nrm(sum) >= nrm(lead) - nrm(small) - 1e-9);
  }
}

TEST_CASE("prop61 families and bridge") {
  ExperimentConfig cfg = small_config();
  cfg.symbol_count = 2;
  ExperimentReport rep =
      prop61_experiment(cfg, {SigmaRational{1, 1}}, {1, 2});
  bool has_upper = false, has_lower = false, has_bridge = false;
  for (const ReportRow& r : rep.rows) {
    if (r.flag == "lambda_check") {
      CHECK(r.ratio <= 1e-11);
      continue;
    }
    if (r.attained_kind == "upper") has_upper = true;
    if (r.attained_kind == "lower") has_lower = true;
    if (r.attained_kind.rfind("bridge:ST", 0) == 0) has_bridge = true;
    if (r.flag.empty()) {
      CHECK(r.ratio > 0.0);
      CHECK(std::isfinite(r.ratio));
    }
  }
  CHECK(has_upper);
  CHECK(has_lower);
  CHECK(has_bridge);
}

TEST_CASE("report serialization") {
  ExperimentConfig cfg = small_config();
  ExperimentReport rep = theorem11_experiment(cfg, {Word::parse("T")});
  std::string jsonl = rep.to_jsonl();
  CHECK(jsonl.find("\"experiment\":\"theorem11\"") != std::string::npos);
  CHECK(jsonl.find("\"summary\"") != std::string::npos);
  std::string csv = rep.to_csv();
  CHECK(csv.rfind("experiment,weight,p,word,", 0) == 0);
  // one csv line per row plus header
  size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == rep.rows.size() + 1);
  std::string manifest = manifest_json({{"seed", "7"}}, {"abc123"});
  CHECK(manifest.find(kLibraryVersion) != std::string::npos);
  CHECK(manifest.find("abc123") != std::string::npos);
}

TEST_CASE("default word matrix covers the count classes") {
  std::vector<Word> words = default_word_matrix();
  std::set<std::tuple<int, int, int>> classes;
  int no_t = 0;
  for (const Word& w : words) {
    CHECK(w.length() <= 4);
    if (w.count_t() == 0) {
      ++no_t;
      continue;
    }
    classes.insert({w.count_m(), w.count_s(), w.count_t()});
  }
  CHECK(classes.size() == 20);  // every (ell,m,n) with n >= 1, N <= 4
  CHECK(no_t == 3);             // M, S, MS
}
