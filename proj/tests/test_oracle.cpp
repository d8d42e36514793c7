#include <doctest.h>

#include <cmath>

#include "otto/errors.hpp"
#include "otto/optimizer.hpp"
#include "otto/oracle.hpp"

using namespace otto;

namespace {

BathPair pair(RateModel hot, RateModel cold, double bH = 1.0, double bC = 2.0) {
    return {Bath(BathLabel::Hot, bH, std::move(hot)), Bath(BathLabel::Cold, bC, std::move(cold))};
}

SearchConfig small_search(double lo, double hi, std::int64_t n = 4000) {
    SearchConfig c;
    c.samples = n;
    c.gap_lo = lo;
    c.gap_hi = hi;
    c.seed = 42;
    return c;
}

}  // namespace

TEST_CASE("search config validation") {
    SearchConfig c;
    CHECK_NOTHROW(c.validate());
    c.n_segments = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.gap_lo = 2.0;
    c.gap_hi = 1.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = {};
    c.samples = 0;
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("equal-temperature engine search finds no positive power") {
    const auto baths = pair(RateModel::fermi_power(1.0, 1), RateModel::fermi_power(1.0, 1), 1.0, 1.0);
    const ConstraintBox box{-2.0, 2.0, false};
    const auto r = random_protocol_search(OperatingMode::Engine, baths, box, small_search(-2.0, 2.0));
    CHECK(r.best_power <= 1e-12);
    CHECK(r.positive == 0);
    CHECK(r.evaluated == 4000);
}

TEST_CASE("search never beats the two-point ceiling") {
    const auto baths = pair(RateModel::lorentzian(1.0, 1.0, 0.0), RateModel::lorentzian(1.0, 1.0, 0.0));
    for (auto mode : {OperatingMode::Engine, OperatingMode::Refrigerator, OperatingMode::Accelerator,
                      OperatingMode::Heater}) {
        const ConstraintBox box{-1.5, 1.5, false};
        const auto r = random_protocol_search(mode, baths, box, small_search(-1.5, 1.5));
        CHECK(r.above_bound == 0);
        CHECK(r.best_power <= r.bound * (1 + 1e-6));
        CHECK(r.best_power > 0.5 * r.bound);
        CHECK(r.best_protocol.size() == 4);
    }
}

TEST_CASE("search is reproducible and thread independent") {
    const auto baths = pair(RateModel::fermi_power(1.0, 0), RateModel::fermi_power(1.0, 0));
    const ConstraintBox box{1.0, 2.5, false};
    auto c = small_search(1.0, 2.5, 3000);
    c.threads = 1;
    const auto a = random_protocol_search(OperatingMode::Engine, baths, box, c);
    c.threads = 3;
    const auto b = random_protocol_search(OperatingMode::Engine, baths, box, c);
    CHECK(a.best_power == b.best_power);
    CHECK(a.best_index == b.best_index);
    CHECK(a.mean_power == doctest::Approx(b.mean_power).epsilon(1e-14));
    for (std::size_t i = 0; i < a.best_protocol.size(); ++i) {
        CHECK(a.best_protocol[i].eps_start == b.best_protocol[i].eps_start);
        CHECK(a.best_protocol[i].duration == b.best_protocol[i].duration);
    }
    c.seed = 43;
    CHECK(random_protocol_search(OperatingMode::Engine, baths, box, c).best_power != a.best_power);

    CHECK_THROWS_AS(random_protocol_search(OperatingMode::Engine, baths, box, small_search(0.0, 2.5)),
                    DomainError);
}

TEST_CASE("two segment scan peaks at the optimal split") {
    const auto baths = pair(RateModel::fermi_power(1.0, 1), RateModel::bose_power(0.3, 1));
    const auto opt = max_power(OperatingMode::Engine, baths, ConstraintBox::symmetric(30.0));
    REQUIRE(opt.operable);
    const double gH = baths.hot.rate(opt.eps_H_star), gC = baths.cold.rate(opt.eps_C_star);
    const double T = 1e-3 / std::max(gH, gC);
    double best_theta = 0.0, best = -1.0;
    for (int i = 1; i < 2000; ++i) {
        const double th = i / 2000.0;
        const auto lc = limit_cycle(
            Protocol::square_wave(opt.eps_H_star, opt.eps_C_star, th * T, (1 - th) * T), baths);
        const double p = average_power(lc, OperatingMode::Engine);
        if (p > best) best = p, best_theta = th;
    }
    CHECK(best_theta == doctest::Approx(opt.theta_star).epsilon(1e-3));
    CHECK(best <= opt.p_max);
    CHECK(best == doctest::Approx(opt.p_max).epsilon(1e-6));
}

TEST_CASE("sub-cycle split") {
    const auto sym = pair(RateModel::constant(1.0), RateModel::constant(1.0));
    // eps chosen so that Gamma_H = Gamma_C; theta = 1/2
    const auto s = subcycle_split_check(2.0, 0.5, 0.3, 0.3, sym, OperatingMode::Engine);
    CHECK(s.power_1 == doctest::Approx(s.power).epsilon(1e-10));
    CHECK(s.power_2 == doctest::Approx(s.power).epsilon(1e-10));

    const auto asym = pair(RateModel::fermi_power(1.0, 1), RateModel::fermi_power(2.0, 1));
    for (int i = 1; i <= 9; ++i) {
        const auto r = subcycle_split_check(2.5, 0.6, 0.4, 0.7, asym, OperatingMode::Engine, i / 10.0);
        CHECK(r.identity_error < 1e-10);
        CHECK(r.bracketed);
        CHECK(r.period_1 + r.period_2 == doctest::Approx(1.1));
        CHECK(r.power_1 != doctest::Approx(r.power_2));
        CHECK(r.power > std::min(r.power_1, r.power_2));
        CHECK(r.power < std::max(r.power_1, r.power_2));
    }
    CHECK_THROWS_AS(subcycle_split_check(2.5, 0.6, 0.4, 0.7, asym, OperatingMode::Engine, 0.0), DomainError);
    const auto flat = pair(RateModel::constant(1.0), RateModel::constant(1.0), 1.0, 1.0);
    CHECK_THROWS_AS(subcycle_split_check(1.0, 1.0, 0.4, 0.7, flat, OperatingMode::Engine), SplitUndefinedError);
}
