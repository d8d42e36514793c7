#include <doctest.h>

#include <cmath>
#include <limits>

#include "otto/analysis.hpp"
#include "otto/errors.hpp"
#include "otto/numerics.hpp"

using namespace otto;

namespace {

BathPair pair(RateModel hot, RateModel cold, double bH, double bC) {
    return {Bath(BathLabel::Hot, bH, std::move(hot)), Bath(BathLabel::Cold, bC, std::move(cold))};
}

OptimizationResult gaps(OperatingMode mode, double eH, double eC) {
    OptimizationResult r;
    r.mode = mode;
    r.eps_H_star = eH;
    r.eps_C_star = eC;
    r.operable = true;
    return r;
}

}  // namespace

TEST_CASE("carnot bounds") {
    const auto eq = carnot_bounds(1.0, 1.0);
    CHECK(eq.eta_c == 0.0);
    CHECK(eq.eta_CA == 0.0);
    CHECK(eq.eta_SS == 0.0);
    CHECK(std::isinf(eq.C_c));
    CHECK(carnot_bounds(1.0, 4.0).eta_CA == doctest::Approx(0.5));
    CHECK(carnot_bounds(1.0, 2.0).eta_SS == doctest::Approx(1.0 / 3.0));
    CHECK(carnot_bounds(1.0, 2.0).C_c == doctest::Approx(1.0));
    CHECK_THROWS_AS(carnot_bounds(2.0, 1.0), DomainError);
}

TEST_CASE("efficiency and cop at given gaps") {
    CHECK(emp(gaps(OperatingMode::Engine, 1.5, 1.5)) == 0.0);
    // beta_C eps_C = beta_H eps_H gives Carnot
    CHECK(emp(gaps(OperatingMode::Engine, 2.0, 1.0 / 1.6)) ==
          doctest::Approx(carnot_bounds(1.0, 3.2).eta_c));
    CHECK_THROWS_AS(emp(gaps(OperatingMode::Engine, 0.0, 1.0)), UndefinedRatioError);

    CHECK(cmp(gaps(OperatingMode::Refrigerator, 2.0, 1.0)) == doctest::Approx(1.0));
    CHECK(cmp(gaps(OperatingMode::Refrigerator, 2.0, 1.0 / 1.5)) ==
          doctest::Approx(carnot_bounds(1.0, 3.0).C_c));
    CHECK(cmp(gaps(OperatingMode::Refrigerator, 1e12, 1.3)) < 1e-11);
    CHECK_THROWS_AS(cmp(gaps(OperatingMode::Refrigerator, 1.0, 1.0)), UndefinedRatioError);
}

TEST_CASE("universal cop curve") {
    CHECK(universal_cop_curve(1.0, 1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(universal_cop_curve(0.7, std::numeric_limits<double>::infinity()) == 0.7);
    CHECK(universal_cop_curve(0.7, 1e12) == doctest::Approx(0.7));
    CHECK(universal_cop_curve(0.0, 5.0) == 0.0);
}

TEST_CASE("F0 symmetric engine follows the small eta expansion") {
    const double eta = 0.05;
    const auto baths = pair(RateModel::fermi_power(1.0, 0), RateModel::fermi_power(1.0, 0), 1.0, 1.0 / (1 - eta));
    const auto r = max_power(OperatingMode::Engine, baths, ConstraintBox::symmetric(60.0));
    CHECK(emp(r) == doctest::Approx(eta / 2 + eta * eta / 8).epsilon(1e-2));
}

TEST_CASE("refrigerator power law") {
    const auto law = refrigerator_power_law(RateModel::fermi_power(1.0, 0), 2.0, 1.0);
    const auto gs = numerics::maximize_brent([](double x) { return x / (1 + std::exp(x)); }, 0.1, 5.0);
    CHECK(law.x_star == doctest::Approx(gs.x).epsilon(1e-8));
    CHECK(law.c_n == doctest::Approx(0.25 * gs.value).epsilon(1e-10));
    CHECK(law.p_max == doctest::Approx(law.c_n / 2.0));
    CHECK(gs.value == doctest::Approx(0.2785).epsilon(1e-4));

    for (const auto& m : {RateModel::fermi_power(1.0, 1), RateModel::bose_power(1.0, 1),
                          RateModel::fermi_power(1.0, 2)}) {
        const double c = refrigerator_power_law(m, 1.5, 1.0).c_n;
        CHECK(refrigerator_power_law(m, 1.5, 0.1).c_n == doctest::Approx(c).epsilon(1e-12));
        CHECK(refrigerator_power_law(m, 1.5, 10.0).c_n == doctest::Approx(c).epsilon(1e-12));
    }
    CHECK_THROWS_AS(refrigerator_power_law(RateModel::constant(1.0), 1.0, 1.0), DomainError);
}

TEST_CASE("constrained cmp scaling") {
    const double betaC = 2.0;
    std::vector<double> deltas;
    for (int i = 0; i <= 8; ++i) deltas.push_back(std::pow(10.0, 2.0 + 0.25 * i) / betaC);
    for (const auto& m : {RateModel::fermi_power(1.0, 0), RateModel::bose_power(1.0, 1)}) {
        const auto fit = constrained_cmp_scaling(pair(m, m, 1.0, betaC), deltas);
        CHECK(fit.slope == doctest::Approx(-1.0).epsilon(0.05));
        CHECK(fit.warnings.empty());
    }
    const auto tiny = constrained_cmp_scaling(
        pair(RateModel::fermi_power(1.0, 0), RateModel::fermi_power(1.0, 0), 1.0, betaC),
        {0.5 / betaC, 1.0 / betaC, 2.0 / betaC});
    CHECK_FALSE(tiny.warnings.empty());
}

TEST_CASE("expansion closed form for constant rates") {
    const auto cf = emp_expansion_closed_form(RateModel::constant(1.0), RateModel::constant(3.0), 1.0);
    const double m0 = numerics::find_root([](double m) { return 2 - m * std::tanh(m / 2); }, 1e-3, 50.0);
    CHECK(cf.m0 == doctest::Approx(m0).epsilon(1e-10));
    CHECK(m0 == doctest::Approx(2.3994).epsilon(1e-4));
    CHECK(cf.b2 == doctest::Approx(-0.75).epsilon(1e-8));
    CHECK(cf.a2 == doctest::Approx(0.125).epsilon(1e-8));
    CHECK(std::abs(cf.dg_H) < 1e-8);
    CHECK(std::abs(cf.dg_C) < 1e-8);
}

TEST_CASE("expansion fit") {
    const auto rep = emp_expansion_fit(RateModel::constant(1.0), RateModel::constant(3.0), 1.0);
    CHECK(rep.a1 == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(rep.a2 == doctest::Approx(0.125).epsilon(4e-2));
    CHECK(rep.b1 == doctest::Approx(rep.a1 - 1));
    CHECK(rep.b2 == doctest::Approx(2 * rep.a2 - 1));
    CHECK(rep.eta_c.size() == 12);

    ExpansionWindow bad;
    bad.samples = 4;
    CHECK_THROWS_AS(emp_expansion_fit(RateModel::constant(1.0), RateModel::constant(1.0), 1.0, bad), DomainError);
    // a small box pins the optimum to its edge
    CHECK_THROWS_AS(emp_expansion_fit(RateModel::fermi_power(1.0, 1), RateModel::fermi_power(1.0, 1), 1.0, {}, 1.0),
                    ExpansionInvalidError);
}
