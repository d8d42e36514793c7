#include "otto/oracle.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <tuple>

#include "otto/errors.hpp"
#include "otto/optimizer.hpp"
#include "otto/parallel.hpp"

namespace otto {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kCeilingTol = 1e-6;

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Segment> draw_protocol(const SearchConfig& c, std::int64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::mt19937_64 rng(seq);
    std::vector<Segment> segs;
    std::vector<double> w(static_cast<std::size_t>(c.n_segments));
    double total = 0.0;
    for (double& x : w) {
        x = -std::log1p(-unit(rng)) + std::numeric_limits<double>::min();
        total += x;
    }
    for (int k = 0; k < c.n_segments; ++k) {
        const double eps = c.gap_lo + (c.gap_hi - c.gap_lo) * unit(rng);
        const BathLabel bath = (rng() & 1u) ? BathLabel::Hot : BathLabel::Cold;
        segs.push_back(Segment::stroke(eps, bath, c.period * w[static_cast<std::size_t>(k)] / total));
    }
    return segs;
}

auto key(const Segment& s) {
    return std::make_tuple(s.eps_start, s.eps_end, s.lambda_start, s.lambda_end, s.duration);
}

// Higher power first; ties broken by the lexicographically smaller protocol.
bool better(double pa, const std::vector<Segment>& a, double pb, const std::vector<Segment>& b) {
    if (pa != pb) return pa > pb;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](const Segment& x, const Segment& y) { return key(x) < key(y); });
}

BathPair single_bath(const Bath& b) {
    return {Bath(BathLabel::Hot, b.beta(), b.model()), Bath(BathLabel::Cold, b.beta(), b.model())};
}

}  // namespace

void SearchConfig::validate() const {
    if (n_segments < 2) throw DomainError("n_segments must be >= 2");
    if (!(period > 0.0) || !std::isfinite(period)) throw DomainError("period must be finite and > 0");
    if (samples < 1) throw DomainError("samples must be >= 1");
    if (!(gap_lo < gap_hi) || !std::isfinite(gap_lo) || !std::isfinite(gap_hi))
        throw DomainError("gap range must be a finite interval with gap_lo < gap_hi");
}

double two_point_ceiling(OperatingMode mode, const BathPair& baths, const ConstraintBox& box_in) {
    ConstraintBox box = box_in;
    box.accelerator_feasibility = false;
    box.validate();
    double best = max_power(mode, baths, box).p_max;
    // A cycle on one bath alone exchanges all of its work with that bath:
    // J = G (p_1 - p_2)(eps_1 - eps_2), which is engine power on the pair (a, a).
    auto one_bath = [&](const Bath& b, double sign) {
        const auto pair = single_bath(b);
        return max_power(sign > 0 ? OperatingMode::Engine : OperatingMode::Heater, pair, box).p_max;
    };
    switch (mode) {
        case OperatingMode::Engine:
            best = std::max({best, one_bath(baths.hot, 1), one_bath(baths.cold, 1)});
            break;
        case OperatingMode::Refrigerator:
            best = std::max(best, one_bath(baths.cold, 1));
            break;
        case OperatingMode::Accelerator:
            best = std::max(best, one_bath(baths.cold, -1));
            break;
        case OperatingMode::Heater:
            best = std::max({best, one_bath(baths.hot, -1), one_bath(baths.cold, -1)});
            break;
    }
    return best;
}

SearchResult random_protocol_search(OperatingMode mode, const BathPair& baths,
                                    const ConstraintBox& box, const SearchConfig& config) {
    config.validate();
    box.validate();
    if (config.gap_lo < box.eps_min || config.gap_hi > box.eps_max)
        throw DomainError("search gap range must lie inside the constraint box");

    SearchResult res;
    res.bound = two_point_ceiling(mode, baths, box);
    const double limit = res.bound * (1.0 + kCeilingTol);

    const int threads = config.threads > 0 ? config.threads : default_threads();
    const std::size_t n = static_cast<std::size_t>(config.samples);
    const std::size_t blocks = static_cast<std::size_t>(std::max(1, threads));
    struct Partial {
        double best = -std::numeric_limits<double>::infinity();
        std::vector<Segment> protocol;
        std::int64_t index = -1;
        double sum = 0.0;
        std::int64_t positive = 0;
        std::int64_t above = 0;
    };
    std::vector<Partial> parts(blocks);
    parallel_for(blocks, threads, [&](std::size_t b) {
        Partial& part = parts[b];
        for (std::size_t i = n * b / blocks; i < n * (b + 1) / blocks; ++i) {
            auto segs = draw_protocol(config, static_cast<std::int64_t>(i));
            const auto lc = limit_cycle(Protocol(segs), baths);
            const double p = average_power(lc, mode);
            part.sum += p;
            if (p > 0.0) ++part.positive;
            if (p > limit) ++part.above;
            if (part.index < 0 || better(p, segs, part.best, part.protocol)) {
                part.best = p;
                part.protocol = std::move(segs);
                part.index = static_cast<std::int64_t>(i);
            }
        }
    });

    Partial all;
    for (auto& part : parts) {
        all.sum += part.sum;
        all.positive += part.positive;
        all.above += part.above;
        if (part.index < 0) continue;
        if (all.index < 0 || better(part.best, part.protocol, all.best, all.protocol)) {
            all.best = part.best;
            all.protocol = std::move(part.protocol);
            all.index = part.index;
        }
    }
    res.best_power = all.best;
    res.best_protocol = std::move(all.protocol);
    res.best_index = all.index;
    res.ratio = res.bound > 0.0 ? res.best_power / res.bound : kNaN;
    res.evaluated = config.samples;
    res.mean_power = all.sum / static_cast<double>(config.samples);
    res.positive = all.positive;
    res.above_bound = all.above;
    return res;
}

SplitReport subcycle_split_check(double eps_H, double eps_C, double tau_H, double tau_C,
                                 const BathPair& baths, OperatingMode mode, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError("split fraction must lie in (0, 1)");
    const auto sw = square_wave_closed_form(eps_H, eps_C, tau_H, tau_C, baths);
    const double gH = baths.hot.rate(eps_H);
    const double gC = baths.cold.rate(eps_C);
    const double pH = baths.hot.p_eq(eps_H);
    const double pC = baths.cold.p_eq(eps_C);
    const double p0 = sw.const_H + pH;
    const double p1 = sw.const_H * std::exp(-gH * tau_H) + pH;
    if (!(p0 != p1) || !(gH > 0.0) || !(gC > 0.0)) {
        std::ostringstream os;
        os << "split undefined: the cycle does not move the population (p(0) = " << p0
           << ", p(tau_H) = " << p1 << ")";
        throw SplitUndefinedError(os.str());
    }
    SplitReport r;
    r.p_split = p0 + fraction * (p1 - p0);
    r.t_hot = std::log((p0 - pH) / (r.p_split - pH)) / gH;
    r.t_cold = std::log((p1 - pC) / (r.p_split - pC)) / gC;
    if (!(r.t_hot > 0.0 && r.t_hot < tau_H) || !(r.t_cold > 0.0 && r.t_cold < tau_C))
        throw SplitUndefinedError("split level is not crossed inside both strokes");

    auto power = [&](double tH, double tC) {
        return average_power(limit_cycle(Protocol::square_wave(eps_H, eps_C, tH, tC), baths), mode);
    };
    r.power = power(tau_H, tau_C);
    r.period_1 = r.t_hot + (tau_C - r.t_cold);
    r.period_2 = (tau_H - r.t_hot) + r.t_cold;
    r.power_1 = power(r.t_hot, tau_C - r.t_cold);
    r.power_2 = power(tau_H - r.t_hot, r.t_cold);
    r.weighted_mean = (r.period_1 * r.power_1 + r.period_2 * r.power_2) / (r.period_1 + r.period_2);
    const double scale = std::max(std::abs(r.power_1), std::abs(r.power_2));
    r.identity_error = scale > 0.0 ? std::abs(r.power - r.weighted_mean) / scale
                                   : std::abs(r.power - r.weighted_mean);
    const double slack = 1e-12 * scale;
    r.bracketed = r.power >= std::min(r.power_1, r.power_2) - slack &&
                  r.power <= std::max(r.power_1, r.power_2) + slack;
    return r;
}

}  // namespace otto
