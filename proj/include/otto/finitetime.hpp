// finitetime.hpp: finite-period and finite-quench power corrections.
#pragma once

#include <string>

#include "otto/dynamics.hpp"

namespace otto {

enum class TimeRegime { SmallDt, Crossover, LargeDt };

std::string to_string(TimeRegime regime);

struct FiniteTimeReport {
    double dt;
    double factor;
    double gamma_tilde;
    double gamma_tilde_H;
    double gamma_tilde_C;
    TimeRegime regime;  // by max(gamma_tilde_a dt / 2): < 0.1, otherwise, > 10
};

// Ratio of the optimal-split square-wave power at period dt to its dt -> 0 limit.
FiniteTimeReport finite_period_factor(double dt, double gamma_H, double gamma_C);

// tanh(x/4) / (x/4), x = dt Gamma, for the single-bath heater.
double heater_finite_period_factor(double x);

// Largest total rate reached along the protocol.
double protocol_max_rate(const Protocol& protocol, const BathPair& baths);

// Fast-driving population: int Gamma p_eq / int Gamma over one period.
// Requires period * max Gamma <= 0.01.
double quench_average_population(const Protocol& protocol, const BathPair& baths);

struct QuenchReport {
    double tau = 0.0;
    double dt = 0.0;            // tau_H + tau_C
    double power = 0.0;
    double ideal_power = 0.0;   // same strokes with tau = 0
    double deficit = 0.0;       // 1 - power / ideal_power
    double p_bar = 0.0;
    double avg_J_H = 0.0;
    double avg_J_C = 0.0;
    // integrals of eps Gamma (p_eq - p_bar) over each of the four pieces
    double W_H = 0.0;
    double W_HC = 0.0;
    double W_C = 0.0;
    double W_CH = 0.0;
};

// Trapezoid protocol with linear quenches of duration tau (tau <= dt / 5),
// evaluated in the fast-driving limit.
QuenchReport quench_power(double eps_H, double eps_C, double tau_H, double tau_C, double tau,
                          const BathPair& baths, OperatingMode mode);

}  // namespace otto
