#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace idc {

// Named verification suites A1..A9: scaling laws, exact-oracle equalities
// and adversary-model checks, each pinned to fixed parameters and
// tolerances. A criterion either passes or fails; `details` carries the
// measured values either way.
struct CriterionOutcome {
    std::string name;
    bool passed = false;
    std::string details;
};

const std::vector<std::string>& criterion_names();

// Default master seed for the verification suites. Several criteria pin
// Monte-Carlo checks whose smallest cells have single-digit expected success
// counts at the required trial budgets; the seed is fixed so those draws are
// reproducible. See the README for overriding it.
inline constexpr std::uint64_t kDefaultVerifySeed = 1;

CriterionOutcome run_criterion(const std::string& name, std::uint64_t master_seed,
                               unsigned threads = 0);
std::vector<CriterionOutcome> run_all_criteria(std::uint64_t master_seed, unsigned threads = 0);

}  // namespace idc
