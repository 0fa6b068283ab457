#ifndef NLSDECAY_ACCEPTANCE_HPP
#define NLSDECAY_ACCEPTANCE_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace nlsdecay {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    std::filesystem::path workdir = "acceptance_work";
    std::vector<int> criteria;  // empty = all 11
};

/// Built-in verification suites.  Results come back one per requested
/// criterion; reference runs are shared across criteria and cached in the
/// workdir (rerunning an unchanged criterion reuses completed runs).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts);

/// Map a suite name (all, linear-dispersive, propagator-oracle,
/// conservation, duhamel, splitting, decay, choose-m, lemmas, strichartz,
/// pseudo-conformal, resume) to criterion ids.
std::vector<int> acceptance_suite(const std::string& name);

/// Print "[PASS]/[FAIL] criterion N: ..." lines; returns a process exit
/// code (0 iff everything passed).
int report_acceptance(const std::vector<CriterionResult>& results);

}  // namespace nlsdecay

#endif
