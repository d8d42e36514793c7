// Acceptance suite: one line per criterion.
//
//   acceptance                 run every criterion
//   acceptance 3 8             run criteria 3 and 8
//   acceptance --check NAME    run one named check
//   acceptance --list
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "otto/verify.hpp"

namespace {

// criterion number -> checks it is made of
const std::vector<std::pair<int, std::vector<std::string>>> kCriteria = {
    {1, {"lorentzian_engine_power"}},
    {2, {"emp_expansion"}},
    {3, {"universal_cop_collapse"}},
    {4, {"refrigerator_power_law"}},
    {5, {"heater_closed_forms"}},
    {6, {"finite_period_exactness"}},
    {7, {"heater_finite_time_curve"}},
    {8, {"optimality_ceiling"}},
    {9, {"subcycle_identity"}},
    {10, {"quench_scaling"}},
    {11, {"lorentzian_carnot_engine", "lorentzian_carnot_refrigerator"}},
    {12, {"bound_ordering"}},
};

bool report(const std::string& label, const otto::CheckResult& r) {
    std::printf("%s %-14s %-32s %s (%.1fs)\n", r.passed ? "PASS" : "FAIL", label.c_str(),
                r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    return r.passed;
}

}  // namespace

int main(int argc, char** argv) {
    otto::VerifyOptions opts;
    if (const char* t = std::getenv("OTTO_THREADS")) opts.threads = std::atoi(t);

    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args[0] == "--list") {
        for (const auto& [n, checks] : kCriteria)
            for (const auto& c : checks) std::printf("%d %s\n", n, c.c_str());
        return 0;
    }
    if (args.size() == 2 && args[0] == "--check") {
        for (const auto& [n, checks] : kCriteria)
            for (const auto& c : checks)
                if (c == args[1]) return report("criterion " + std::to_string(n), otto::run_check(c, opts)) ? 0 : 1;
        std::fprintf(stderr, "unknown check: %s\n", args[1].c_str());
        return 2;
    }

    std::vector<int> wanted;
    for (const auto& a : args) {
        char* end = nullptr;
        const long n = std::strtol(a.c_str(), &end, 10);
        if (*end != '\0' || n < 1 || n > static_cast<long>(kCriteria.size())) {
            std::fprintf(stderr, "criteria are numbered 1..%zu, got '%s'\n", kCriteria.size(), a.c_str());
            return 2;
        }
        wanted.push_back(static_cast<int>(n));
    }
    if (wanted.empty())
        for (const auto& c : kCriteria) wanted.push_back(c.first);

    int failed = 0;
    for (int n : wanted) {
        for (const auto& c : kCriteria[n - 1].second)
            if (!report("criterion " + std::to_string(n), otto::run_check(c, opts))) ++failed;
    }
    std::printf("%d check(s) failed\n", failed);
    return failed == 0 ? 0 : 1;
}
