#include <doctest.h>

#include <cmath>
#include <limits>

#include "otto/errors.hpp"
#include "otto/thermal.hpp"

using namespace otto;

namespace {

const RateModel kModels[] = {
    RateModel::constant(0.7),     RateModel::fermi_power(1.3, 0), RateModel::fermi_power(1.0, 2),
    RateModel::bose_power(1.0, 0), RateModel::bose_power(0.5, 1), RateModel::lorentzian(2.0, 0.15, 1.0),
    RateModel::gaussian_x(1.0, 2.0),
};

}  // namespace

TEST_CASE("equilibrium excitation") {
    CHECK(equilibrium_excitation(1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(equilibrium_excitation(1.0, std::log(3.0)) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(equilibrium_excitation(1.0, 1e6) == 0.0);
    CHECK(equilibrium_excitation(1.0, -1e6) == 1.0);
    CHECK(std::isfinite(equilibrium_excitation(1.0, std::numeric_limits<double>::max())));

    double prev = 1.0;
    for (double x = -30.0; x <= 30.0; x += 0.25) {
        const double p = equilibrium_excitation(1.0, x);
        CHECK(p < prev);
        CHECK(p + equilibrium_excitation(1.0, -x) == doctest::Approx(1.0).epsilon(1e-15));
        prev = p;
    }
}

TEST_CASE("rate values") {
    CHECK(rate_value(RateModel::lorentzian(3.0, 0.2, 1.5), 1.5, 1.0) == 3.0);
    CHECK(rate_value(RateModel::fermi_power(1.5, 1), 2.0, 1.0) == doctest::Approx(3.0));
    // eps coth(beta eps / 2) -> 2 / beta
    const double beta = 2.5;
    const double eps = 1e-6;
    CHECK(rate_value(RateModel::bose_power(1.0, 1), eps, beta) ==
          doctest::Approx(2.0 / beta).epsilon(1e-10));
    CHECK(rate_value(RateModel::gaussian_x(2.0, 1.0), 0.5, 2.0) == doctest::Approx(2.0));
}

TEST_CASE("rates are even and bounded") {
    for (double eps : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        for (int n : {0, 1, 2}) {
            const auto f = RateModel::fermi_power(1.0, n);
            const auto b = RateModel::bose_power(1.0, n);
            CHECK(f(eps, 1.3) == f(-eps, 1.3));
            CHECK(b(eps, 1.3) == b(-eps, 1.3));
            CHECK(b(eps, 1.3) >= f(eps, 1.3));
        }
        const auto l = RateModel::lorentzian(1.0, 0.3, 2.0);
        CHECK(l(2.0 + eps, 1.0) == doctest::Approx(l(2.0 - eps, 1.0)).epsilon(1e-15));
        CHECK(l(2.0 + eps, 1.0) < 1.0);
    }
}

TEST_CASE("invalid models and singular evaluation") {
    CHECK_THROWS_AS(RateModel::constant(-1.0), DomainError);
    CHECK_THROWS_AS(RateModel::fermi_power(1.0, -1), DomainError);
    CHECK_THROWS_AS(RateModel::lorentzian(1.0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(RateModel::constant(std::nan("")), DomainError);
    CHECK_THROWS_AS(RateModel::bose_power(1.0, 0)(1e-12, 1.0), SingularityError);
    CHECK_NOTHROW(RateModel::bose_power(1.0, 1)(0.0, 1.0));
}

TEST_CASE("detailed balance") {
    for (const auto& m : kModels) {
        for (double beta : {0.3, 1.0, 4.0}) {
            const Bath bath(BathLabel::Hot, beta, m);
            for (double eps : {-5.0, -1.0, -0.2, 0.2, 1.0, 2.0, 7.0}) {
                const auto c = bath.components(eps);
                CHECK(c.up + c.down == doctest::Approx(bath.rate(eps)).epsilon(1e-14));
                CHECK(c.up / c.down == doctest::Approx(std::exp(-beta * eps)).epsilon(1e-12));
            }
        }
    }
    const Bath b(BathLabel::Cold, 1.0, RateModel::constant(2.0));
    CHECK(b.components(0.0).up == doctest::Approx(1.0));
    CHECK(b.components(0.0).down == doctest::Approx(1.0));
    CHECK(b.components(std::log(3.0)).up / b.components(std::log(3.0)).down ==
          doctest::Approx(1.0 / 3.0));
}

TEST_CASE("derivative matches finite differences") {
    for (const auto& m : kModels) {
        for (double eps : {0.4, 1.1, 2.7}) {
            const double h = 1e-6;
            const double fd = (m(eps + h, 1.2) - m(eps - h, 1.2)) / (2 * h);
            CHECK(m.derivative(eps, 1.2) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("bath construction") {
    CHECK_THROWS_AS(Bath(BathLabel::Hot, 0.0, RateModel::constant(1.0)), DomainError);
    CHECK_THROWS_AS(Bath(BathLabel::Hot, -1.0, RateModel::constant(1.0)), DomainError);
    const BathPair pair{Bath(BathLabel::Hot, 1.0, RateModel::constant(3.0)),
                        Bath(BathLabel::Cold, 2.0, RateModel::constant(1.5))};
    CHECK(pair.coupling_ratio() == doctest::Approx(2.0));
    CHECK(&pair[BathLabel::Cold] == &pair.cold);
}

TEST_CASE("mode energy quantum") {
    CHECK(mode_energy_quantum(OperatingMode::Engine, 2.0, 1.0) == 1.0);
    CHECK(mode_energy_quantum(OperatingMode::Refrigerator, 5.0, -1.0) == 1.0);
    CHECK(mode_energy_quantum(OperatingMode::Heater, 1.5, -1.5) == -3.0);
    CHECK(mode_energy_quantum(OperatingMode::Accelerator, 1.5, 0.5) == 0.5);
    for (const char* t : {"E", "R", "A", "H"}) CHECK(to_string(parse_mode(t)) == t);
    CHECK_THROWS(parse_mode("X"));
}

TEST_CASE("constraint box") {
    CHECK_NOTHROW(ConstraintBox::symmetric(2.0).validate());
    CHECK_NOTHROW((ConstraintBox{1.0, 1.0, true}.validate()));
    CHECK_THROWS_AS((ConstraintBox{2.0, 1.0, true}.validate()), DomainError);
    CHECK(ConstraintBox::symmetric(2.0).width() == 4.0);
}
