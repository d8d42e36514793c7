// verify.hpp: the end-to-end numerical checks run by `otto verify` and the
// acceptance binary.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace otto {

struct VerifyOptions {
    std::int64_t search_samples = 100000;  // per mode, optimality ceiling
    std::uint64_t seed = 7;
    int threads = 0;
};

struct CheckResult {
    std::string name;
    std::string summary;
    bool passed = false;
    std::string detail;  // measured values against thresholds
    double seconds = 0.0;
};

// Names in suite order.
const std::vector<std::string>& verification_check_names();

// Runs one named check. Library errors raised inside a check are reported as
// a failure with the error message as detail.
CheckResult run_check(const std::string& name, const VerifyOptions& opts = {});

std::vector<CheckResult> run_verification_suite(const VerifyOptions& opts = {});

}  // namespace otto
