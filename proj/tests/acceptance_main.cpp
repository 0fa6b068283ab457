// Acceptance gate: runs every built-in verification criterion and prints
// one pass/fail line each.  Exit status is nonzero if anything failed.
#include <cstring>
#include <string>

#include "nlsdecay/acceptance.hpp"

int main(int argc, char** argv) {
    nlsdecay::AcceptanceOptions opts;
    for (int i = 1; i + 1 < argc; i += 2)
        if (std::strcmp(argv[i], "--workdir") == 0) opts.workdir = argv[i + 1];
    const auto results = nlsdecay::run_acceptance(opts);
    return nlsdecay::report_acceptance(results);
}
