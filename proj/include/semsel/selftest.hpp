#ifndef SEMSEL_SELFTEST_HPP
#define SEMSEL_SELFTEST_HPP

#include <string>
#include <vector>

#include "semsel/config.hpp"

namespace semsel {

struct SelftestCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Quick invariant suite on a reduced copy of `config`.
std::vector<SelftestCheck> run_selftest(const ExperimentConfig& config);

}  // namespace semsel

#endif  // SEMSEL_SELFTEST_HPP
