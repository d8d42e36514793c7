#include "otto/analysis.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "otto/errors.hpp"
#include "otto/numerics.hpp"

namespace otto {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double fermi(double x) { return equilibrium_excitation(1.0, x); }

}  // namespace

BoundSet carnot_bounds(double beta_H, double beta_C) {
    if (!(beta_H > 0.0) || !(beta_C > 0.0) || !std::isfinite(beta_H) || !std::isfinite(beta_C))
        throw DomainError("inverse temperatures must be finite and > 0");
    if (beta_H > beta_C)
        throw DomainError("beta_H > beta_C: the hot bath is colder than the cold bath");
    BoundSet b;
    b.eta_c = 1.0 - beta_H / beta_C;
    b.eta_CA = 1.0 - std::sqrt(1.0 - b.eta_c);
    b.eta_SS = b.eta_c / (2.0 - b.eta_c);
    b.C_c = beta_H == beta_C ? kInf : beta_H / (beta_C - beta_H);
    return b;
}

double emp(const OptimizationResult& engine) {
    if (!engine.operable || !(engine.eps_H_star != 0.0) || !std::isfinite(engine.eps_H_star))
        throw UndefinedRatioError("efficiency undefined: eps_H* is zero or missing");
    return 1.0 - engine.eps_C_star / engine.eps_H_star;
}

double cmp(const OptimizationResult& refrigerator) {
    const double d = refrigerator.eps_H_star - refrigerator.eps_C_star;
    if (!refrigerator.operable || !(d != 0.0) || !std::isfinite(d))
        throw UndefinedRatioError("COP undefined: eps_H* equals eps_C* or is missing");
    return refrigerator.eps_C_star / d;
}

double universal_cop_curve(double C0, double Cc) noexcept {
    if (std::isinf(Cc)) return C0;
    return C0 * Cc / (1.0 + C0 + Cc);
}

PowerLaw refrigerator_power_law(const RateModel& cold_model, double beta_C, double r) {
    if (!(beta_C > 0.0)) throw DomainError("beta_C must be > 0");
    if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("r = k_H/k_C must be finite and > 0");
    int n = 0;
    bool bose = false;
    if (const auto* m = std::get_if<rates::FermiPower>(&cold_model.variant())) {
        n = m->n;
    } else if (const auto* m = std::get_if<rates::BosePower>(&cold_model.variant())) {
        n = m->n;
        bose = true;
    } else {
        throw DomainError("refrigerator power law needs a FermiPower or BosePower model");
    }
    const double k_C = cold_model.amplitude();
    const double sr = std::sqrt(r);
    auto phi = [&](double x) {
        const double f = fermi(x);
        const double h = bose ? 1.0 / std::tanh(0.5 * x) : 1.0;
        if (n > 0) return std::pow(x, n + 1) * h * f;
        const double s = std::sqrt(h);
        return r * h / ((sr + s) * (sr + s)) * x * f;
    };
    const auto best = numerics::maximize_scan(phi, 1e-9, 60.0, 6001);
    return {best.x, best.value, best.value * k_C / std::pow(beta_C, n + 1)};
}

ScalingFit constrained_cmp_scaling(const BathPair& baths, const std::vector<double>& deltas,
                                   double residual_threshold) {
    if (deltas.size() < 2) throw DomainError("scaling fit needs at least two Delta values");
    const double bC = baths.cold.beta();
    ScalingFit fit;
    std::vector<double> lx, ly;
    for (double delta : deltas) {
        if (!(delta > 0.0)) throw DomainError("Delta must be > 0");
        const auto res = max_power(OperatingMode::Refrigerator, baths, ConstraintBox::symmetric(delta));
        const double c = cmp(res);
        fit.beta_C_Delta.push_back(bC * delta);
        fit.cmp.push_back(c);
        lx.push_back(std::log(bC * delta));
        ly.push_back(std::log(std::abs(c)));
        const double xC = bC * std::abs(res.eps_C_star);
        if (!res.boundary.eps_H()) {
            std::ostringstream os;
            os << "beta_C Delta = " << bC * delta << ": eps_H* is interior, not at the gap bound";
            fit.warnings.push_back(os.str());
        } else if (bC * delta < 10.0 * xC) {
            std::ostringstream os;
            os << "beta_C Delta = " << bC * delta << " is not large against x_C* = " << xC;
            fit.warnings.push_back(os.str());
        }
    }
    const auto pf = numerics::polyfit(lx, ly, 1);
    fit.intercept = pf.coefficients[0];
    fit.slope = pf.coefficients[1];
    fit.residual = pf.rms_residual;
    if (fit.residual > residual_threshold) {
        std::ostringstream os;
        os << "scaling not reached: fit residual " << fit.residual << " exceeds "
           << residual_threshold;
        fit.warnings.push_back(os.str());
    }
    return fit;
}

ExpansionReport emp_expansion_fit(const RateModel& hot, const RateModel& cold, double beta_H,
                                  const ExpansionWindow& window, double eps_max) {
    if (!(window.eta_min > 0.0) || !(window.eta_max <= 0.1) || !(window.eta_min < window.eta_max))
        throw DomainError("expansion window must lie inside (0, 0.1]");
    if (window.samples < 8) throw DomainError("expansion window needs at least 8 samples");
    ExpansionReport rep;
    rep.window = window;
    std::vector<double> xH;
    const ConstraintBox box{0.0, eps_max / beta_H, true};
    for (int i = 0; i < window.samples; ++i) {
        const double eta_c = window.eta_min +
                             (window.eta_max - window.eta_min) * i / (window.samples - 1);
        const double beta_C = beta_H / (1.0 - eta_c);
        const BathPair baths{Bath(BathLabel::Hot, beta_H, hot), Bath(BathLabel::Cold, beta_C, cold)};
        const auto res = max_power(OperatingMode::Engine, baths, box);
        if (!res.operable || res.boundary.any()) {
            std::ostringstream os;
            os << "engine optimum at eta_c = " << eta_c
               << (res.operable ? " sits on the gap bound" : " has zero power");
            throw ExpansionInvalidError(os.str());
        }
        rep.eta_c.push_back(eta_c);
        rep.emp_over_eta_c.push_back(emp(res) / eta_c);
        xH.push_back(beta_H * res.eps_H_star);
    }
    const auto pf = numerics::polyfit(rep.eta_c, rep.emp_over_eta_c, 4);
    const auto lower = numerics::polyfit(rep.eta_c, rep.emp_over_eta_c, 3);
    rep.a1 = pf.coefficients[0];
    rep.a2 = pf.coefficients[1];
    rep.a3 = pf.coefficients[2];
    rep.a2_stderr = pf.standard_errors[1];
    rep.a2_tolerance = std::abs(pf.coefficients[1] - lower.coefficients[1]) + 3.0 * rep.a2_stderr;
    rep.residual = pf.rms_residual;
    rep.b1 = rep.a1 - 1.0;
    rep.b2 = 2.0 * rep.a2 - 1.0;
    rep.m0 = numerics::polyfit(rep.eta_c, xH, 2).coefficients[0];
    return rep;
}

ExpansionClosedForm emp_expansion_closed_form(const RateModel& hot, const RateModel& cold,
                                              double beta_H) {
    if (!(beta_H > 0.0)) throw DomainError("beta_H must be > 0");
    auto g = [&](double xH, double xC) {
        return effective_rate(hot(xH / beta_H, beta_H), cold(xC / beta_H, beta_H));
    };
    constexpr double h = 1e-6;
    auto dH = [&](double m) { return (g(m + h, m) - g(m - h, m)) / (2.0 * h); };
    auto dC = [&](double m) { return (g(m, m + h) - g(m, m - h)) / (2.0 * h); };
    auto condition = [&](double m) {
        return g(m, m) * (2.0 - m * std::tanh(0.5 * m)) + m * (dH(m) + dC(m));
    };
    ExpansionClosedForm out;
    out.m0 = numerics::find_root(condition, 1e-3, 50.0);
    out.g0 = g(out.m0, out.m0);
    out.dg_H = dH(out.m0);
    out.dg_C = dC(out.m0);
    const double sum = out.dg_H + out.dg_C;
    if (std::abs(out.dg_H) + std::abs(out.dg_C) <= 1e-12 * std::abs(out.g0)) {
        out.b2 = -0.75;
    } else {
        out.b2 = out.m0 * std::tanh(0.5 * out.m0) / 8.0 * (out.dg_H - out.dg_C) / sum -
                 (2.0 * out.dg_H + out.dg_C) / (2.0 * sum);
    }
    out.a2 = 0.5 * (1.0 + out.b2);
    return out;
}

}  // namespace otto
