// analysis.hpp: efficiency and COP at maximum power, bounds, expansions and
// refrigerator power laws.
#pragma once

#include <string>
#include <vector>

#include "otto/optimizer.hpp"

namespace otto {

struct BoundSet {
    double eta_c;
    double eta_CA;
    double eta_SS;
    double C_c;  // +inf at equal temperatures
};

BoundSet carnot_bounds(double beta_H, double beta_C);

// 1 - eps_C* / eps_H*
double emp(const OptimizationResult& engine);
// eps_C* / (eps_H* - eps_C*)
double cmp(const OptimizationResult& refrigerator);
// C0 Cc / (1 + C0 + Cc); Cc = inf gives C0.
double universal_cop_curve(double C0, double Cc) noexcept;

struct PowerLaw {
    double x_star;  // beta_C eps_C* in the eps_H -> inf limit
    double c_n;
    double p_max;   // c_n k_C / beta_C^(n+1)
};

// cold_model must be FermiPower or BosePower; r = k_H / k_C.
PowerLaw refrigerator_power_law(const RateModel& cold_model, double beta_C, double r);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;           // rms of log CMP about the line
    std::vector<double> beta_C_Delta;
    std::vector<double> cmp;
    std::vector<std::string> warnings;  // empty when the 1/Delta regime is reached
};

// Fits log CMP against log(beta_C Delta) over boxes [-Delta, Delta].
ScalingFit constrained_cmp_scaling(const BathPair& baths, const std::vector<double>& deltas,
                                   double residual_threshold = 1e-2);

struct ExpansionWindow {
    double eta_min = 1e-3;
    double eta_max = 5e-2;
    int samples = 12;
};

struct ExpansionReport {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
    double a2_stderr = 0.0;   // least-squares standard error of a2
    // |a2 - a2 of the next lower degree fit| + 3 stderr
    double a2_tolerance = 0.0;
    double b1 = 0.0;          // a1 - 1
    double b2 = 0.0;          // 2 a2 - 1
    double m0 = 0.0;          // beta_H eps_H* extrapolated to eta_c = 0
    ExpansionWindow window;
    double residual = 0.0;    // rms of eta/eta_c about the fit
    std::vector<double> eta_c;
    std::vector<double> emp_over_eta_c;
};

// Runs the engine optimizer across the window (beta_C swept at fixed beta_H)
// and fits eta/eta_c = a1 + a2 eta_c + a3 eta_c^2 + ... through eta_c^4; the
// higher terms absorb truncation.
ExpansionReport emp_expansion_fit(const RateModel& hot, const RateModel& cold, double beta_H,
                                  const ExpansionWindow& window = {}, double eps_max = 40.0);

struct ExpansionClosedForm {
    double m0;
    double b2;
    double a2;     // (1 + b2) / 2
    double g0;     // g(m0, m0; 0)
    double dg_H;   // partial derivatives of g at (m0, m0; 0)
    double dg_C;
};

ExpansionClosedForm emp_expansion_closed_form(const RateModel& hot, const RateModel& cold,
                                              double beta_H);

}  // namespace otto
