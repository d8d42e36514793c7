// dynamics.hpp: population master equation, protocols and limit cycles.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "otto/thermal.hpp"

namespace otto {

// One piece of a control schedule. eps and lambda_H vary linearly from the
// start to the end value; lambda_C = 1 - lambda_H.
struct Segment {
    double eps_start;
    double eps_end;
    double lambda_start;  // lambda_H at the start of the segment
    double lambda_end;
    double duration;

    bool is_constant() const noexcept {
        return eps_start == eps_end && lambda_start == lambda_end;
    }
    double eps_at(double s) const noexcept;
    double lambda_at(double s) const noexcept;

    static Segment stroke(double eps, BathLabel bath, double duration);
    static Segment ramp(double eps_from, double eps_to, double lambda_from, double lambda_to,
                        double duration);
};

class Protocol {
public:
    explicit Protocol(std::vector<Segment> segments);  // validates, throws DomainError

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    double period() const noexcept { return period_; }
    double shortest_segment() const noexcept;

    // Hot stroke (eps_H, tau_H) followed by cold stroke (eps_C, tau_C) with
    // instantaneous quenches.
    static Protocol square_wave(double eps_H, double eps_C, double tau_H, double tau_C);
    // As square_wave, with linear quenches of duration tau between strokes.
    // Period is tau_H + tau_C + 2 tau.
    static Protocol trapezoid(double eps_H, double eps_C, double tau_H, double tau_C, double tau);

private:
    std::vector<Segment> segments_;
    double period_ = 0.0;
};

// Drift of p under the active bath: -Gamma (p - p_eq).
double population_derivative(double p, double eps, const Bath& active_bath);

// Heat flux leaving the active bath: -eps Gamma (p - p_eq).
double instantaneous_heat_flux(double p, double eps, const Bath& active_bath);

struct Sample {
    double t;
    double p;
    double eps;
    double lambda_H;
    double J_H;
    double J_C;
};

struct Trajectory {
    std::vector<Sample> samples;
    double step = 0.0;
};

// Integrated quantities over one pass through a protocol.
struct PeriodIntegrals {
    double p_end = 0.0;
    double Q_H = 0.0;     // heat drawn from the hot bath
    double Q_C = 0.0;     // heat drawn from the cold bath
    double work = 0.0;    // integral of p d(eps), quench jumps included
    double log_d = 0.0;   // integral of A(t) dt
    double int_p = 0.0;   // integral of p dt
};

// Propagates p0 over one period. Constant segments use the exact exponential
// solution; ramps use an adaptive Dormand-Prince integrator (rel. tol 1e-10).
PeriodIntegrals propagate_period(const Protocol& protocol, const BathPair& baths, double p0);

// Samples the population every `step` over `periods` periods, starting from p0.
Trajectory integrate_protocol(const Protocol& protocol, const BathPair& baths, double p0,
                              double step, int periods = 1);

struct LimitCycle {
    double p0 = 0.0;            // p(0) = p(T)
    double monodromy_d = 0.0;   // exp(integral of A)
    double log_d = 0.0;
    double period = 0.0;
    double avg_J_H = 0.0;
    double avg_J_C = 0.0;
    double work = 0.0;          // per period, integral of p d(eps)
    double mean_p = 0.0;        // time average of p
    Trajectory periodic_p;      // filled only when sampling was requested
};

// Unique periodic solution p(0) = c / (1 - d).
LimitCycle limit_cycle(const Protocol& protocol, const BathPair& baths, double sample_step = 0.0);

struct SquareWaveSolution {
    double const_H;
    double const_C;
    double avg_J_H;
    double avg_J_C;
};

// Exact square-wave cycle: p = H e^{-Gamma_H t} + p_H on the hot stroke,
// p = C e^{-Gamma_C t} + p_C on the cold stroke.
SquareWaveSolution square_wave_closed_form(double eps_H, double eps_C, double tau_H,
                                           double tau_C, const BathPair& baths);

double mode_power(double avg_J_H, double avg_J_C, OperatingMode mode) noexcept;
double average_power(const LimitCycle& cycle, OperatingMode mode) noexcept;

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

}  // namespace otto
