#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace paraberg {

// Verification gates for the whole artifact. Every tolerance is pinned here
// at its contractual value; the CLI `verify` subcommand and the acceptance
// test binary both run through these.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  std::uint64_t seed = 7;
  int threads = 1;
  std::string out_dir;  // when set, experiment reports land here as JSONL
};

CriterionResult criterion_identities(const AcceptanceOptions& opt);        // 1
CriterionResult criterion_decomposition(const AcceptanceOptions& opt);     // 2
CriterionResult criterion_homogeneity(const AcceptanceOptions& opt);       // 3
CriterionResult criterion_reproducing(const AcceptanceOptions& opt);       // 4
CriterionResult criterion_kernel_estimates(const AcceptanceOptions& opt);  // 5
CriterionResult criterion_littlewood_paley(const AcceptanceOptions& opt);  // 6
CriterionResult criterion_radicality(const AcceptanceOptions& opt);        // 7
CriterionResult criterion_theorem11(const AcceptanceOptions& opt);         // 8
CriterionResult criterion_q_operator(const AcceptanceOptions& opt);        // 9
CriterionResult criterion_weights(const AcceptanceOptions& opt);           // 10

CriterionResult run_criterion(int id, const AcceptanceOptions& opt);
std::vector<CriterionResult> run_all_criteria(const AcceptanceOptions& opt);

// name used by the CLI: "identities", "decomposition", ... ; returns 0 when
// unknown
int criterion_id_for(const std::string& name);
std::vector<std::string> criterion_names();

}  // namespace paraberg
