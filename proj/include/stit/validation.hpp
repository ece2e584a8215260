#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace stit {

// Acceptance-suite driver shared by the `validate` CLI command and the
// acceptance test binary. Every tolerance is pinned here; `quick` reduces
// replication counts and loosens the statistical gates (documented per
// criterion in the log).
struct ValidationOptions {
    bool quick = false;
    std::uint64_t seed = 20260809ULL;  // default master seed of the suite
    int threads = 1;
    std::string only;    // run a single criterion id, e.g. "3"
    std::string mutate;  // perturb the named closed form by 25% (sensitivity hook)
};

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationReport {
    std::vector<CriterionResult> results;
    bool all_pass() const;
};

ValidationReport run_validation(const ValidationOptions& opts, std::ostream& log);

} // namespace stit
