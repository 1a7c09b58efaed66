#include "paraberg/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "paraberg/decomposition.hpp"
#include "paraberg/harness.hpp"
#include "paraberg/kernel.hpp"
#include "paraberg/norms.hpp"
#include "paraberg/paraproducts.hpp"
#include "paraberg/quadrature.hpp"
#include "paraberg/series.hpp"
#include "paraberg/weights.hpp"

namespace paraberg {

namespace {

class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}
  Complex next_complex() {
    double u1 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    return Complex{r * std::cos(2.0 * M_PI * u2),
                   r * std::sin(2.0 * M_PI * u2)} /
           std::sqrt(2.0);
  }
  TruncatedSeries poly(int degree, bool h0 = false) {
    std::vector<Complex> c(degree + 1);
    for (int k = 0; k <= degree; ++k)
      c[k] = next_complex() / static_cast<double>(k + 1);
    if (h0) c[0] = Complex{0.0, 0.0};
    return TruncatedSeries(std::move(c));
  }

 private:
  std::mt19937_64 rng_;
};

void maybe_write_report(const AcceptanceOptions& opt,
                        const ExperimentReport& rep,
                        const std::string& file) {
  if (opt.out_dir.empty()) return;
  std::filesystem::create_directories(opt.out_dir);
  std::ofstream os(std::filesystem::path(opt.out_dir) / file);
  os << rep.to_jsonl();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

CriterionResult criterion_identities(const AcceptanceOptions& opt) {
  CriterionResult res{1, "exact operator identities", true, ""};
  GaussianSource rng(opt.seed);
  const int cap = 128;
  double worst1 = 0.0, worst2 = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    TruncatedSeries g = rng.poly(8);
    TruncatedSeries f = rng.poly(8);
    // M_g f = S_g f + T_g f + f(0) g(0)
    TruncatedSeries m = apply_letter(Letter::M, g, f, cap);
    TruncatedSeries s = apply_letter(Letter::S, g, f, cap);
    TruncatedSeries t = apply_letter(Letter::T, g, f, cap);
    TruncatedSeries rhs = add(s.truncated(cap), t.truncated(cap));
    Complex c0 = evaluate(f, Complex{0, 0}) * evaluate(g, Complex{0, 0});
    rhs = add(rhs, TruncatedSeries::monomial(0, c0).truncated(cap));
    double scale1 = std::max(1.0, max_abs_coeff(m));
    worst1 = std::max(worst1, max_coeff_diff(m, rhs) / scale1);

    // S^m T f = T_{g^{m+1}} f / (m+1)
    for (int mm = 0; mm <= 4; ++mm) {
      TruncatedSeries lhs = apply_st_power(g, f, mm, 1, cap);
      TruncatedSeries gp = power(g, mm + 1, cap);
      TruncatedSeries r2 =
          scale(apply_letter(Letter::T, gp, f, cap), 1.0 / (mm + 1.0));
      double sc = std::max(1.0, max_abs_coeff(lhs));
      worst2 = std::max(worst2, max_coeff_diff(lhs, r2) / sc);
    }
  }
  res.pass = worst1 <= 1e-13 && worst2 <= 1e-13;
  res.detail = "M=S+T+const dev " + fmt(worst1) + "; S^mT vs T_{g^{m+1}}/(m+1) dev " +
               fmt(worst2) + " (gate 1e-13)";
  return res;
}

CriterionResult criterion_decomposition(const AcceptanceOptions& opt) {
  CriterionResult res{2, "canonical decomposition", true, ""};
  GaussianSource rng(opt.seed + 2);
  int words_checked = 0;
  double worst_recon = 0.0;
  std::string failure;

  // every word of length <= 5 with at least one T
  std::vector<std::string> all;
  std::function<void(std::string, int)> gen = [&](std::string cur, int left) {
    if (!cur.empty()) all.push_back(cur);
    if (left == 0) return;
    for (char ch : {'M', 'S', 'T'}) gen(cur + ch, left - 1);
  };
  gen("", 5);

  for (const std::string& text : all) {
    Word word = Word::parse(text);
    if (word.count_t() < 1) continue;
    CanonicalForm form;
    try {
      form = canonical_decomposition_H0(word);
    } catch (const std::exception& e) {
      res.pass = false;
      failure = text + ": " + e.what();
      break;
    }
    ++words_checked;
    if (form.residual != 0.0) {
      res.pass = false;
      failure = text + ": nonzero residual";
      break;
    }
    // reconstruction on fresh random H_0 pairs
    for (int trial = 0; trial < 10; ++trial) {
      TruncatedSeries g = rng.poly(4);
      TruncatedSeries f = rng.poly(5, /*h0=*/true);
      const int cap = 64;
      TruncatedSeries direct = apply_word(word, g, f, cap);
      TruncatedSeries recon = reconstruct(form, g, f, cap);
      double sc = std::max(1.0, max_abs_coeff(direct));
      worst_recon = std::max(worst_recon, max_coeff_diff(direct, recon) / sc);
    }
  }
  if (res.pass && worst_recon > 1e-11) {
    res.pass = false;
    failure = "reconstruction deviation " + fmt(worst_recon);
  }
  // spot values
  if (res.pass) {
    CanonicalForm ts = canonical_decomposition_H0(Word::parse("TS"));
    CanonicalForm mt = canonical_decomposition_H0(Word::parse("MT"));
    if (ts.c.size() != 2 || ts.c[1] != -1) {
      res.pass = false;
      failure = "TS spot value (expected c_1 = -1)";
    } else if (mt.c.size() != 2 || mt.c[1] != 1) {
      res.pass = false;
      failure = "MT spot value (expected c_1 = +1)";
    }
  }
  res.detail = std::to_string(words_checked) +
               " words solved; reconstruction dev " + fmt(worst_recon) +
               " (gate 1e-11)" + (failure.empty() ? "" : "; FAIL " + failure);
  return res;
}

CriterionResult criterion_homogeneity(const AcceptanceOptions& opt) {
  CriterionResult res{3, "exact N-homogeneity in every experiment", true, ""};
  const double tol = 1e-11;
  double worst = 0.0;
  auto check = [&](const ExperimentReport& rep) {
    for (const ReportRow& r : rep.rows)
      if (r.flag == "lambda_check") worst = std::max(worst, r.ratio);
  };
  ExperimentConfig cfg;
  cfg.weight = WeightSpec::parse("w0:1:1");
  cfg.p = 2.0;
  cfg.seed = opt.seed;
  cfg.symbol_count = 3;
  cfg.threads = opt.threads;
  cfg.with_refinement = false;
  cfg.tests.monomial_max = 4;
  cfg.tests.offsets = {0.4};
  cfg.tests.random_count = 2;
  cfg.tests.kernel_cap = 128;

  check(theorem11_experiment(cfg, {Word::parse("ST"), Word::parse("T")}));
  check(radicality_experiment(cfg, {{1.0, 2.0}}));
  check(corollary13_experiment(cfg, {{Word::parse("SST"), {Word::parse("T")}}}));
  check(prop61_experiment(cfg, {SigmaRational{1, 1}}, {1}));

  res.pass = worst <= tol;
  res.detail = "worst lambda deviation " + fmt(worst) + " (gate 1e-11)";
  return res;
}

CriterionResult criterion_reproducing(const AcceptanceOptions& opt) {
  (void)opt;
  CriterionResult res{4, "reproducing kernel", true, ""};
  WeightEval w(WeightSpec::parse("w0:1:1"));
  MomentTable t256 = moments(w, 256, 1e-12);
  double worst = 0.0;
  for (double a : {0.0, 0.3, 0.6, 0.8}) {
    for (int k = 0; k <= 20; ++k) {
      double r = verify_reproducing(TruncatedSeries::monomial(k),
                                    Complex{a, 0.0}, w, t256);
      worst = std::max(worst, r);
    }
  }
  // truncation stability: J vs 2J
  MomentTable t64 = moments(w, 64, 1e-12);
  MomentTable t128 = moments(w, 128, 1e-12);
  double move = 0.0;
  for (int j = 0; j <= 64; ++j)
    move = std::max(move, std::abs(t64.log_alpha[j] - t128.log_alpha[j]));
  res.pass = worst <= 1e-8 && move <= 1e-11;
  res.detail = "residual " + fmt(worst) + " (gate 1e-8); J-doubling move " +
               fmt(move) + " (gate 1e-11)";
  return res;
}

CriterionResult criterion_kernel_estimates(const AcceptanceOptions& opt) {
  (void)opt;
  CriterionResult res{5, "kernel diagonal and norm estimates", true, ""};
  QuadratureConfig quad;
  quad.radial_rel_tol = 1e-9;
  const std::vector<double> grid = {0.0, 0.25, 0.5, 0.75, 0.9};
  std::ostringstream detail;
  for (const char* spec_text : {"w0:1:1", "w0:2:1"}) {
    WeightEval w(WeightSpec::parse(spec_text));
    const int J = 4096;
    MomentTable table = moments(w, J, 1e-12);
    // diagonal
    double dmin = 1e300, dmax = 0.0, dmove = 0.0;
    for (double a : grid) {
      double full = diagonal_ratio(Complex{a, 0.0}, w, table, 0.9, 1e-10);
      MomentTable half = table;
      half.J = J / 2;
      half.log_alpha.resize(J / 2 + 1);
      double probe = diagonal_ratio(Complex{a, 0.0}, w, half, 0.9, 1e-3);
      dmin = std::min(dmin, full);
      dmax = std::max(dmax, full);
      dmove = std::max(dmove, std::abs(full - probe) / full);
    }
    bool dpass = dmax / dmin <= 5.0 && dmove <= 0.01;
    res.pass = res.pass && dpass;
    detail << spec_text << " diag spread " << fmt(dmax / dmin) << " move "
           << fmt(dmove) << "; ";
    // p-norms
    for (double p : {1.0, 2.0, 4.0}) {
      double nmin = 1e300, nmax = 0.0, nmove = 0.0;
      for (double a : grid) {
        double full = kernel_norm_ratio(Complex{a, 0.0}, w, p, table, J, quad,
                                        1e-10);
        MomentTable half = table;
        half.J = J / 2;
        half.log_alpha.resize(J / 2 + 1);
        double probe = kernel_norm_ratio(Complex{a, 0.0}, w, p, half, J / 2,
                                         quad, 1e-3);
        nmin = std::min(nmin, full);
        nmax = std::max(nmax, full);
        nmove = std::max(nmove, std::abs(full - probe) / full);
      }
      bool npass = nmax / nmin <= 5.0 && nmove <= 0.01;
      res.pass = res.pass && npass;
      detail << spec_text << " p=" << p << " spread " << fmt(nmax / nmin)
             << " move " << fmt(nmove) << "; ";
    }
  }
  res.detail = detail.str() + "(gates: spread 5, move 1%)";
  return res;
}

CriterionResult criterion_littlewood_paley(const AcceptanceOptions& opt) {
  CriterionResult res{6, "Littlewood-Paley ratio band", true, ""};
  SymbolFamily family{opt.seed, 50, 6};
  std::vector<TruncatedSeries> symbols = family.generate();
  QuadratureConfig quad;
  QuadratureConfig fine = quad.refined();
  std::ostringstream detail;
  for (const char* spec_text : {"w0:1:1", "w1:1:1"}) {
    WeightEval w(WeightSpec::parse(spec_text));
    for (double p : {2.0, 4.0}) {
      double mn = 1e300, mx = 0.0, drift = 0.0;
      for (const TruncatedSeries& g : symbols) {
        double r0 = lp_ratio(g, w, p, quad);
        double r1 = lp_ratio(g, w, p, fine);
        mn = std::min(mn, r0);
        mx = std::max(mx, r0);
        drift = std::max(drift, std::abs(r1 - r0) / r1);
      }
      bool ok = (mx / mn <= 20.0) && drift <= 0.05;
      res.pass = res.pass && ok;
      detail << spec_text << " p=" << p << " band " << fmt(mx / mn)
             << " drift " << fmt(drift) << "; ";
    }
  }
  res.detail = detail.str() + "(gates: band 20, drift 5%)";
  return res;
}

CriterionResult criterion_radicality(const AcceptanceOptions& opt) {
  CriterionResult res{7, "radicality of the Bloch scale", true, ""};
  std::ostringstream detail;
  for (const char* spec_text : {"w0:1:1", "w1:1:1"}) {
    ExperimentConfig cfg;
    cfg.weight = WeightSpec::parse(spec_text);
    cfg.seed = opt.seed;
    cfg.symbol_count = 50;
    cfg.symbol_degree = 6;
    cfg.threads = opt.threads;
    ExperimentReport rep = radicality_experiment(
        cfg, {{1.0, 2.0}, {1.5, 3.0}, {2.0, 4.0}});
    maybe_write_report(opt, rep,
                       std::string("radicality_") + spec_text + ".jsonl");
    bool finite = std::isfinite(rep.summary.max_ratio) &&
                  rep.summary.max_ratio > 0.0;
    bool ok = finite && rep.summary.stability <= 0.05;
    res.pass = res.pass && ok;
    detail << spec_text << " max " << fmt(rep.summary.max_ratio) << " drift "
           << fmt(rep.summary.stability) << "; ";
  }
  res.detail = detail.str() + "(gates: finite, drift 5%)";
  return res;
}

CriterionResult criterion_theorem11(const AcceptanceOptions& opt) {
  CriterionResult res{8, "norm equivalence sandwich", true, ""};
  ExperimentConfig cfg;
  cfg.weight = WeightSpec::parse("w0:1:1");
  cfg.p = 2.0;
  cfg.seed = opt.seed;
  cfg.symbol_count = 30;
  cfg.symbol_degree = 6;
  cfg.threads = opt.threads;
  ExperimentReport rep = theorem11_experiment(cfg, default_word_matrix());
  maybe_write_report(opt, rep, "theorem11.jsonl");

  std::map<std::string, std::pair<double, double>> cell;  // word -> min/max
  double drift = 0.0, lambda_dev = 0.0;
  bool dilation_ok = true, positive = true;
  for (const ReportRow& r : rep.rows) {
    if (r.flag == "lambda_check") {
      lambda_dev = std::max(lambda_dev, r.ratio);
      continue;
    }
    if (r.flag.rfind("dilation", 0) == 0) {
      if (r.ratio > 1.0 + 1e-6) dilation_ok = false;
      continue;
    }
    positive = positive && r.ratio > 0.0;
    auto it = cell.find(r.word);
    if (it == cell.end()) {
      cell[r.word] = {r.ratio, r.ratio};
    } else {
      it->second.first = std::min(it->second.first, r.ratio);
      it->second.second = std::max(it->second.second, r.ratio);
    }
    drift = std::max(drift, r.refinement_delta);
  }
  double worst_spread = 0.0;
  std::string worst_word;
  for (const auto& [word, mm] : cell) {
    double spread = mm.second / mm.first;
    if (spread > worst_spread) {
      worst_spread = spread;
      worst_word = word;
    }
  }
  res.pass = positive && worst_spread <= 50.0 && drift <= 0.05 &&
             dilation_ok && lambda_dev <= 1e-11;
  res.detail = "worst cell spread " + fmt(worst_spread) + " (" + worst_word +
               ", gate 50); drift " + fmt(drift) + " (gate 5%); dilation " +
               (dilation_ok ? "ok" : "VIOLATED") + "; lambda " +
               fmt(lambda_dev);
  return res;
}

CriterionResult criterion_q_operator(const AcceptanceOptions& opt) {
  CriterionResult res{9, "Q-operator sandwich and bridge", true, ""};
  ExperimentConfig cfg;
  cfg.weight = WeightSpec::parse("w0:1:1");
  cfg.p = 2.0;
  cfg.seed = opt.seed;
  cfg.symbol_count = 12;
  cfg.symbol_degree = 6;
  cfg.threads = opt.threads;
  cfg.tests.monomial_max = 4;
  cfg.tests.offsets = {0.3, 0.6};
  cfg.tests.random_count = 2;
  cfg.tests.kernel_cap = 192;
  ExperimentReport rep = prop61_experiment(
      cfg, {SigmaRational{1, 2}, SigmaRational{1, 1}, SigmaRational{2, 1}},
      {1, 2});
  maybe_write_report(opt, rep, "q_operator.jsonl");

  std::map<std::string, std::pair<double, double>> families;
  double drift = 0.0;
  for (const ReportRow& r : rep.rows) {
    if (!r.flag.empty()) continue;
    std::string family = r.attained_kind.substr(0, 6);  // upper/lower/bridge
    auto it = families.find(family);
    if (it == families.end()) {
      families[family] = {r.ratio, r.ratio};
    } else {
      it->second.first = std::min(it->second.first, r.ratio);
      it->second.second = std::max(it->second.second, r.ratio);
    }
    drift = std::max(drift, r.refinement_delta);
  }
  std::ostringstream detail;
  bool bounded = families.size() >= 3;
  for (const auto& [family, mm] : families) {
    bounded = bounded && mm.first > 0.0 && std::isfinite(mm.second);
    detail << family << " in [" << fmt(mm.first) << ", " << fmt(mm.second)
           << "]; ";
  }
  res.pass = bounded && drift <= 0.05;
  res.detail = detail.str() + "drift " + fmt(drift) + " (gate 5%)";
  return res;
}

CriterionResult criterion_weights(const AcceptanceOptions& opt) {
  (void)opt;
  CriterionResult res{10, "weight family self-checks", true, ""};
  std::ostringstream detail;
  for (const char* spec_text : {"w0:1:1", "w0:2:0.5", "w1:1:1", "w2:1:1"}) {
    WeightEval w(WeightSpec::parse(spec_text));
    CheckReport rep = self_check(w, default_check_grid(w));
    bool ok = rep.all_pass();
    res.pass = res.pass && ok;
    detail << spec_text << (ok ? " ok" : " FAIL(");
    if (!ok) {
      for (const CheckEntry& e : rep.entries)
        if (!e.pass) detail << e.name << " ";
      detail << ")";
    }
    detail << "; ";
  }
  res.detail = detail.str();
  return res;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  switch (id) {
    case 1: return criterion_identities(opt);
    case 2: return criterion_decomposition(opt);
    case 3: return criterion_homogeneity(opt);
    case 4: return criterion_reproducing(opt);
    case 5: return criterion_kernel_estimates(opt);
    case 6: return criterion_littlewood_paley(opt);
    case 7: return criterion_radicality(opt);
    case 8: return criterion_theorem11(opt);
    case 9: return criterion_q_operator(opt);
    case 10: return criterion_weights(opt);
    default:
      throw std::invalid_argument("criterion id must be 1..10");
  }
}

std::vector<CriterionResult> run_all_criteria(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 10; ++id) out.push_back(run_criterion(id, opt));
  return out;
}

int criterion_id_for(const std::string& name) {
  static const std::map<std::string, int> table = {
      {"identities", 1},      {"decomposition", 2}, {"homogeneity", 3},
      {"reproducing", 4},     {"kernel-estimates", 5},
      {"littlewood-paley", 6},{"radicality", 7},    {"theorem11", 8},
      {"q-operator", 9},      {"weights", 10}};
  auto it = table.find(name);
  return (it == table.end()) ? 0 : it->second;
}

std::vector<std::string> criterion_names() {
  return {"identities",     "decomposition",    "homogeneity",
          "reproducing",    "kernel-estimates", "littlewood-paley",
          "radicality",     "theorem11",        "q-operator",
          "weights"};
}

}  // namespace paraberg
