// optimizer.hpp: fast-driving maximum power over the two stroke gaps.
#pragma once

#include <string>

#include "otto/numerics.hpp"
#include "otto/thermal.hpp"

namespace otto {

struct BoundaryFlags {
    bool eps_H_min = false;
    bool eps_H_max = false;
    bool eps_C_min = false;
    bool eps_C_max = false;

    bool eps_H() const noexcept { return eps_H_min || eps_H_max; }
    bool eps_C() const noexcept { return eps_C_min || eps_C_max; }
    bool any() const noexcept { return eps_H() || eps_C(); }
};

struct OptimizationResult {
    OperatingMode mode = OperatingMode::Engine;
    double eps_H_star = 0.0;   // NaN when the mode cannot operate
    double eps_C_star = 0.0;
    double theta_star = 0.0;
    double p_max = 0.0;
    bool operable = false;     // false: best objective <= 0, p_max reported as 0
    BoundaryFlags boundary;
    std::string hot_model;     // rate-model fingerprints
    std::string cold_model;
};

// G = Gamma_H Gamma_C / (sqrt(Gamma_H) + sqrt(Gamma_C))^2; zero if either rate is.
double effective_rate(double gamma_H, double gamma_C) noexcept;

// theta / (1 - theta) = sqrt(Gamma_C / Gamma_H). Zero rates throw DegenerateSplitError.
double optimal_time_split(double gamma_H, double gamma_C);

struct Currents {
    double J_H;
    double J_C;
};

// Infinitesimal-cycle currents at the optimal split.
Currents ideal_average_currents(double eps_H, double eps_C, const BathPair& baths);

// G (p_H - p_C) eps_tilde for the mode; the accelerator feasibility region is
// not applied here.
double power_objective(OperatingMode mode, double eps_H, double eps_C, const BathPair& baths);

// Analytic gradient of power_objective with respect to (eps_H, eps_C).
numerics::Point2 power_objective_gradient(OperatingMode mode, double eps_H, double eps_C,
                                          const BathPair& baths);

// <J_H> >= 0 region of the accelerator.
bool accelerator_feasible(double eps_H, double eps_C, double beta_H, double beta_C) noexcept;

struct MaxPowerOptions {
    int uniform_points = 100;     // per axis
    int geometric_points = 150;   // per sign, per axis, over 12 decades
    int refine_candidates = 6;
    int threads = 0;              // 0: process default
    numerics::NelderMeadOptions simplex{};
};

OptimizationResult max_power(OperatingMode mode, const BathPair& baths, const ConstraintBox& box,
                             const MaxPowerOptions& opts = {});

// Single bath, even rate: maximizes eps Gamma(eps) (1 - 2 p_eq(eps)) / 2 over [0, Delta].
OptimizationResult heater_max_power_symmetric(const RateModel& model, double beta, double Delta);

}  // namespace otto
