#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "otto/dynamics.hpp"
#include "otto/errors.hpp"

using namespace otto;

namespace {

BathPair pair(RateModel hot, RateModel cold, double bH = 1.0, double bC = 2.0) {
    return {Bath(BathLabel::Hot, bH, std::move(hot)), Bath(BathLabel::Cold, bC, std::move(cold))};
}

}  // namespace

TEST_CASE("population derivative and heat flux") {
    const Bath b(BathLabel::Hot, 1.0, RateModel::constant(2.0));
    const double p_eq = b.p_eq(0.7);
    CHECK(population_derivative(p_eq, 0.7, b) == doctest::Approx(0.0));
    CHECK(instantaneous_heat_flux(p_eq, 0.7, b) == doctest::Approx(0.0));
    CHECK(population_derivative(1.0, 800.0, b) == doctest::Approx(-2.0));
    CHECK(instantaneous_heat_flux(0.9, 0.0, b) == 0.0);
    for (double p : {0.0, 0.2, 0.6, 1.0}) {
        const double d = population_derivative(p, 0.7, b);
        CHECK((d > 0) == (p_eq > p));
    }
}

TEST_CASE("protocol construction") {
    const auto sq = Protocol::square_wave(2.0, 1.0, 0.3, 0.7);
    CHECK(sq.segments().size() == 2);
    CHECK(sq.period() == doctest::Approx(1.0));
    const auto tr = Protocol::trapezoid(2.0, 1.0, 0.3, 0.7, 0.05);
    CHECK(tr.segments().size() == 4);
    CHECK(tr.period() == doctest::Approx(1.1));
    CHECK_THROWS_AS(Protocol({}), DomainError);
    CHECK_THROWS_AS(Protocol::square_wave(2.0, 1.0, 0.0, 0.7), DomainError);
}

TEST_CASE("constant protocol stays at equilibrium") {
    const auto baths = pair(RateModel::constant(1.5), RateModel::constant(1.0));
    const Protocol proto({Segment::stroke(0.8, BathLabel::Hot, 2.0)});
    const double p_eq = baths.hot.p_eq(0.8);
    const auto traj = integrate_protocol(proto, baths, p_eq, 0.05, 3);
    for (const auto& s : traj.samples) CHECK(s.p == doctest::Approx(p_eq).epsilon(1e-14));

    const auto lc = limit_cycle(proto, baths);
    CHECK(lc.p0 == doctest::Approx(p_eq).epsilon(1e-14));
    CHECK(lc.monodromy_d == doctest::Approx(std::exp(-1.5 * 2.0)).epsilon(1e-14));
}

TEST_CASE("exponential relaxation matches closed form") {
    const auto baths = pair(RateModel::constant(1.5), RateModel::constant(1.0));
    const Protocol proto({Segment::stroke(0.8, BathLabel::Hot, 2.0)});
    const double p_eq = baths.hot.p_eq(0.8);
    const auto traj = integrate_protocol(proto, baths, 0.9, 0.01);
    for (const auto& s : traj.samples)
        CHECK(s.p == doctest::Approx((0.9 - p_eq) * std::exp(-1.5 * s.t) + p_eq).epsilon(1e-12));
}

TEST_CASE("ramps integrate like the exact solution") {
    // A ramp from eps to itself is integrated by the adaptive path.
    const auto baths = pair(RateModel::constant(1.5), RateModel::constant(1.0));
    const Protocol exact({Segment::stroke(0.8, BathLabel::Hot, 1.0)});
    const Protocol ramp({Segment::ramp(0.8, 0.8 + 1e-300, 1.0, 1.0, 1.0)});
    const auto a = propagate_period(exact, baths, 0.1);
    const auto b = propagate_period(ramp, baths, 0.1);
    CHECK(b.p_end == doctest::Approx(a.p_end).epsilon(1e-9));
    CHECK(b.Q_H == doctest::Approx(a.Q_H).epsilon(1e-8));
}

TEST_CASE("square wave cycle matches closed form") {
    const auto baths = pair(RateModel::fermi_power(1.0, 1), RateModel::fermi_power(0.7, 1));
    const double eH = 2.0, eC = 0.6, tH = 0.4, tC = 0.9;
    const auto cf = square_wave_closed_form(eH, eC, tH, tC, baths);
    const auto lc = limit_cycle(Protocol::square_wave(eH, eC, tH, tC), baths);
    CHECK(lc.avg_J_H == doctest::Approx(cf.avg_J_H).epsilon(1e-12));
    CHECK(lc.avg_J_C == doctest::Approx(cf.avg_J_C).epsilon(1e-12));
    CHECK(lc.p0 == doctest::Approx(cf.const_H + baths.hot.p_eq(eH)).epsilon(1e-12));
    CHECK(lc.p0 == doctest::Approx(cf.const_C * std::exp(-baths.cold.rate(eC) * (tH + tC)) +
                                   baths.cold.p_eq(eC)).epsilon(1e-12));

    // long simulation from an arbitrary start
    const auto proto = Protocol::square_wave(eH, eC, tH, tC);
    double p = 0.95;
    for (int i = 0; i < 200; ++i) p = propagate_period(proto, baths, p).p_end;
    const auto last = propagate_period(proto, baths, p);
    CHECK(last.Q_H / proto.period() == doctest::Approx(cf.avg_J_H).epsilon(1e-8));
    CHECK(last.Q_C / proto.period() == doctest::Approx(cf.avg_J_C).epsilon(1e-8));
}

TEST_CASE("equal equilibrium populations give zero currents") {
    const auto baths = pair(RateModel::constant(1.0), RateModel::constant(2.0), 1.0, 2.0);
    const auto cf = square_wave_closed_form(2.0, 1.0, 0.5, 0.5, baths);
    CHECK(std::abs(cf.avg_J_H) < 1e-15);
    CHECK(std::abs(cf.avg_J_C) < 1e-15);
}

TEST_CASE("first law and geometric convergence") {
    const auto baths = pair(RateModel::fermi_power(1.0, 1), RateModel::bose_power(1.0, 1));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> gap(-3.0, 3.0), dur(0.05, 1.0), lam(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Segment> segs;
        for (int k = 0; k < 3; ++k) {
            segs.push_back(Segment::ramp(gap(rng), gap(rng), lam(rng), lam(rng), dur(rng)));
            segs.push_back(Segment::stroke(gap(rng), k % 2 ? BathLabel::Hot : BathLabel::Cold, dur(rng)));
        }
        const Protocol proto(segs);
        const auto lc = limit_cycle(proto, baths);
        CHECK(lc.monodromy_d > 0.0);
        CHECK(lc.monodromy_d < 1.0);
        const double W = -(lc.avg_J_H + lc.avg_J_C) * lc.period;
        CHECK(W == doctest::Approx(lc.work).epsilon(1e-8).scale(1e-12));

        double p = 0.0;
        double err = std::abs(p - lc.p0);
        for (int i = 0; i < 3; ++i) {
            p = propagate_period(proto, baths, p).p_end;
            const double e = std::abs(p - lc.p0);
            if (e > 1e-9) CHECK(e / err == doctest::Approx(lc.monodromy_d).epsilon(1e-2));
            err = e;
        }
    }
}

TEST_CASE("second law at equal temperatures") {
    const auto baths = pair(RateModel::fermi_power(1.0, 1), RateModel::lorentzian(1.0, 0.3, 1.0), 1.0, 1.0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> gap(-3.0, 3.0), dur(0.05, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Segment> segs;
        for (int k = 0; k < 4; ++k)
            segs.push_back(Segment::stroke(gap(rng), rng() & 1 ? BathLabel::Hot : BathLabel::Cold, dur(rng)));
        const auto lc = limit_cycle(Protocol(segs), baths);
        CHECK(average_power(lc, OperatingMode::Engine) <= 1e-10);
        CHECK(average_power(lc, OperatingMode::Heater) == -average_power(lc, OperatingMode::Engine));
    }
}

TEST_CASE("no dissipation has no unique cycle") {
    const auto baths = pair(RateModel::fermi_power(1.0, 1), RateModel::fermi_power(1.0, 1));
    const Protocol proto({Segment::stroke(0.0, BathLabel::Hot, 1.0)});
    CHECK_THROWS_AS(limit_cycle(proto, baths), NoUniqueCycleError);
}

TEST_CASE("mode powers") {
    CHECK(mode_power(3.0, -1.0, OperatingMode::Engine) == 2.0);
    CHECK(mode_power(3.0, -1.0, OperatingMode::Refrigerator) == -1.0);
    CHECK(mode_power(3.0, -1.0, OperatingMode::Accelerator) == 1.0);
    CHECK(mode_power(3.0, -1.0, OperatingMode::Heater) == -2.0);
}

TEST_CASE("trajectory csv") {
    const auto baths = pair(RateModel::constant(1.0), RateModel::constant(1.0));
    const auto traj = integrate_protocol(Protocol::square_wave(1.0, 0.5, 0.5, 0.5), baths, 0.3, 0.05);
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    const std::string s = os.str();
    CHECK(s.rfind("t,p,eps,lambda_H,J_H,J_C\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == static_cast<long>(traj.samples.size() + 1));
}
