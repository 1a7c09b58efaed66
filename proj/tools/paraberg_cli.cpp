#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "paraberg/acceptance.hpp"
#include "paraberg/decomposition.hpp"
#include "paraberg/harness.hpp"
#include "paraberg/kernel.hpp"
#include "paraberg/norms.hpp"
#include "paraberg/paraproducts.hpp"
#include "paraberg/series.hpp"
#include "paraberg/weights.hpp"

namespace {

using namespace paraberg;

nlohmann::json check_report_json(const CheckReport& rep) {
  nlohmann::json out;
  out["spec"] = rep.spec.to_string();
  out["eta_estimate"] = rep.eta_estimate;
  out["r_cut"] = rep.r_cut;
  out["pass"] = rep.all_pass();
  nlohmann::json entries = nlohmann::json::array();
  for (const CheckEntry& e : rep.entries) {
    nlohmann::json j;
    j["name"] = e.name;
    j["grid"] = e.grid;
    j["values"] = e.values;
    j["verdict"] = e.pass ? "pass" : "fail";
    if (!e.note.empty()) j["note"] = e.note;
    entries.push_back(j);
  }
  out["checks"] = entries;
  return out;
}

void write_output(const std::string& path, const std::string& payload) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file " + path);
  os << payload;
}

struct GlobalArgs {
  std::string weight = "w0:1:1";
  double p = 2.0;
  int degree = 6;
  int cap = 2048;
  std::uint64_t seed = 7;
  double tol = 1e-10;
  std::string out;
  std::string format = "jsonl";
  int threads = 1;
};

int run(int argc, char** argv) {
  CLI::App app{"analytic paraproducts on weighted Bergman spaces"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  GlobalArgs g;
  app.add_option("--weight", g.weight, "weight spec w<level>:<alpha>:<c>");
  app.add_option("--p", g.p, "integrability exponent p");
  app.add_option("--degree", g.degree, "symbol degree for experiments");
  app.add_option("--cap", g.cap, "series truncation cap");
  app.add_option("--seed", g.seed, "family seed");
  app.add_option("--tol", g.tol, "radial quadrature relative tolerance");
  app.add_option("--out", g.out, "output path ('-' = stdout)");
  app.add_option("--format", g.format, "report format: jsonl|csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  app.add_option("--threads", g.threads, "row-level parallelism");

  auto* c_check = app.add_subcommand("check-weight", "weight self-checks");
  int check_kmax = 20;
  c_check->add_option("--grid-k", check_kmax, "grid resolution 1-2^{-k}");

  auto* c_norm = app.add_subcommand("norm", "weighted Bergman norm");
  std::string norm_f = "poly:1";
  double norm_beta = 0.0, norm_gamma = 0.0, norm_q = 0.0;
  c_norm->add_option("--f", norm_f, "series, e.g. poly:1,0,2");
  c_norm->add_option("--beta", norm_beta, "(1+phi') exponent");
  c_norm->add_option("--gamma", norm_gamma, "tau exponent");
  c_norm->add_option("--q-exp", norm_q, "omega exponent (default p/2)");

  auto* c_bloch = app.add_subcommand("bloch", "Bloch-type seminorm");
  std::string bloch_g = "poly:0,1";
  double bloch_q = 1.0;
  c_bloch->add_option("--g", bloch_g, "symbol series");
  c_bloch->add_option("--q", bloch_q, "power exponent q >= 1");

  auto* c_apply = app.add_subcommand("apply-word", "apply a word operator");
  std::string aw_word = "T", aw_g = "poly:0,1", aw_f = "poly:1";
  c_apply->add_option("--word", aw_word, "letters, leftmost applied last");
  c_apply->add_option("--g", aw_g, "symbol series");
  c_apply->add_option("--f", aw_f, "input series");

  auto* c_dec = app.add_subcommand("decompose", "canonical word decomposition");
  std::string dec_word = "TS";
  bool dec_full = false;
  c_dec->add_option("--word", dec_word, "letters");
  c_dec->add_flag("--full", dec_full, "full-space variant with Pi_0 terms");

  auto* c_kernel = app.add_subcommand("kernel", "reproducing kernel numbers");
  double kernel_a = 0.5;
  int kernel_j = 256;
  std::string kernel_cache;
  c_kernel->add_option("--a", kernel_a, "kernel point in [0,1)");
  c_kernel->add_option("--J", kernel_j, "moment truncation order");
  c_kernel->add_option("--cache", kernel_cache, "moment cache path");

  auto* c_verify = app.add_subcommand("verify", "run verification gates");
  std::string verify_name = "all";
  c_verify->add_option("experiment", verify_name,
                       "identities|decomposition|homogeneity|reproducing|"
                       "kernel-estimates|littlewood-paley|radicality|"
                       "theorem11|q-operator|weights|all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  WeightSpec spec = WeightSpec::parse(g.weight);
  QuadratureConfig quad;
  quad.radial_rel_tol = g.tol;

  if (c_check->parsed()) {
    WeightEval w(spec);
    CheckReport rep = self_check(w, default_check_grid(w, check_kmax));
    write_output(g.out, check_report_json(rep).dump(2) + "\n");
    return rep.all_pass() ? 0 : 1;
  }
  if (c_norm->parsed()) {
    WeightEval w(spec);
    WeightModifier mod{norm_beta, norm_gamma,
                       (norm_q > 0.0) ? norm_q : g.p / 2.0};
    NormEstimate e = bergman_norm(parse_poly(norm_f), w, g.p, mod, quad);
    std::cout << e.format() << "\n";
    return e.converged ? 0 : 1;
  }
  if (c_bloch->parsed()) {
    WeightEval w(spec);
    NormEstimate e = bloch_seminorm(parse_poly(bloch_g), w, bloch_q, quad);
    std::cout << e.format() << "\n";
    return e.converged ? 0 : 1;
  }
  if (c_apply->parsed()) {
    TruncatedSeries out = apply_word(Word::parse(aw_word), parse_poly(aw_g),
                                     parse_poly(aw_f), g.cap);
    write_output(g.out, format_poly(out) + "\n");
    return 0;
  }
  if (c_dec->parsed()) {
    Word word = Word::parse(dec_word);
    CanonicalForm form =
        dec_full ? full_decomposition(word) : canonical_decomposition_H0(word);
    write_output(g.out, form.to_json() + "\n");
    return 0;
  }
  if (c_kernel->parsed()) {
    WeightEval w(spec);
    MomentTable table;
    bool loaded = false;
    if (!kernel_cache.empty() && std::filesystem::exists(kernel_cache)) {
      std::ifstream is(kernel_cache);
      std::string text((std::istreambuf_iterator<char>(is)),
                       std::istreambuf_iterator<char>());
      try {
        MomentTable cached = MomentTable::from_json(text);
        if (cached.spec.to_string() == spec.to_string() &&
            cached.J == kernel_j) {
          table = std::move(cached);
          loaded = true;
        }
      } catch (const std::exception&) {
        loaded = false;  // recompute on any mismatch
      }
    }
    if (!loaded) {
      table = moments(w, kernel_j, 1e-12);
      if (!kernel_cache.empty()) {
        std::ofstream os(kernel_cache);
        os << table.to_json();
      }
    }
    nlohmann::json out;
    out["spec"] = spec.to_string();
    out["J"] = table.J;
    out["hash"] = table.content_hash();
    out["cache_hit"] = loaded;
    Complex a{kernel_a, 0.0};
    KernelSeries ks = kernel_series(a, table, table.J, 1e-8);
    out["tail_bound"] = ks.tail_bound;
    out["diagonal_ratio"] = diagonal_ratio(a, w, table, 0.95, 1e-8);
    out["kernel_norm_ratio_p"] = g.p;
    out["kernel_norm_ratio"] =
        kernel_norm_ratio(a, w, g.p, table, table.J, quad, 1e-8);
    write_output(g.out, out.dump(2) + "\n");
    return 0;
  }
  if (c_verify->parsed()) {
    AcceptanceOptions opt;
    opt.seed = g.seed;
    opt.threads = g.threads;
    if (!g.out.empty() && g.out != "-") opt.out_dir = g.out;
    std::vector<CriterionResult> results;
    if (verify_name == "all") {
      results = run_all_criteria(opt);
    } else {
      int id = criterion_id_for(verify_name);
      if (id == 0) {
        std::cerr << "unknown experiment '" << verify_name << "'\n";
        return 2;
      }
      results.push_back(run_criterion(id, opt));
    }
    bool all = true;
    for (const CriterionResult& r : results) {
      std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name
                << ": " << r.detail << "\n";
      all = all && r.pass;
    }
    if (!opt.out_dir.empty()) {
      std::map<std::string, std::string> cfg = {
          {"seed", std::to_string(g.seed)},
          {"experiment", verify_name},
          {"threads", std::to_string(g.threads)}};
      std::ofstream os(std::filesystem::path(opt.out_dir) / "MANIFEST.json");
      os << manifest_json(cfg, {}) << "\n";
    }
    return all ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
