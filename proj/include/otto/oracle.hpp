// oracle.hpp: brute-force checks of the infinitesimal-cycle optimum.
#pragma once

#include <cstdint>
#include <vector>

#include "otto/dynamics.hpp"

namespace otto {

struct SearchConfig {
    int n_segments = 4;
    double period = 1e-3;
    std::int64_t samples = 100000;
    std::uint64_t seed = 1;
    double gap_lo = -1.0;
    double gap_hi = 1.0;
    int threads = 0;

    void validate() const;  // throws DomainError
};

struct SearchResult {
    double best_power = 0.0;
    std::vector<Segment> best_protocol;
    std::int64_t best_index = -1;
    double bound = 0.0;         // two_point_ceiling over the search box
    double ratio = 0.0;         // best_power / bound, NaN when bound is 0
    double mean_power = 0.0;
    std::int64_t evaluated = 0;
    std::int64_t positive = 0;  // samples with positive mode power
    std::int64_t above_bound = 0;  // samples exceeding bound (1 + 1e-6)
};

// Largest fast-driving power of any two-stroke cycle with gaps in the box:
// the hot/cold cycle, and cycles touching only one bath. The accelerator
// feasibility restriction is not applied.
double two_point_ceiling(OperatingMode mode, const BathPair& baths, const ConstraintBox& box);

// Random piecewise-constant protocols: gaps uniform in [gap_lo, gap_hi],
// each segment on a random bath, durations Dirichlet(1) on the period.
// Sample i draws from an engine seeded with (seed, i), so results do not
// depend on the thread count.
SearchResult random_protocol_search(OperatingMode mode, const BathPair& baths,
                                    const ConstraintBox& box, const SearchConfig& config);

struct SplitReport {
    double p_split = 0.0;
    double t_hot = 0.0;        // crossing time of p_split on the hot stroke
    double t_cold = 0.0;       // crossing time on the cold stroke
    double power = 0.0;        // composite cycle
    double power_1 = 0.0;      // lower sub-cycle (p between p(0) and p_split)
    double power_2 = 0.0;      // upper sub-cycle
    double period_1 = 0.0;
    double period_2 = 0.0;
    double weighted_mean = 0.0;
    double identity_error = 0.0;  // |power - weighted_mean| / max(|power_1|, |power_2|)
    bool bracketed = false;       // min(P1, P2) <= P <= max(P1, P2)
};

// Splits a square-wave limit cycle at p(0) + fraction (p(tau_H) - p(0)) into
// two square-wave sub-cycles and compares powers. fraction lies in (0, 1).
SplitReport subcycle_split_check(double eps_H, double eps_C, double tau_H, double tau_C,
                                 const BathPair& baths, OperatingMode mode,
                                 double fraction = 0.5);

}  // namespace otto
