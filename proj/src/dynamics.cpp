#include "otto/dynamics.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "otto/errors.hpp"
#include "otto/io.hpp"

namespace otto {

namespace {

constexpr double kRelTol = 1e-10;
constexpr double kAbsTol = 1e-14;
constexpr double kRangeSlack = 1e-12;

using State = std::array<double, 6>;  // p, Q_H, Q_C, work, log_d, int_p

// Effective drift at one instant: p' = -a (p - p_inf); per-bath weights.
struct Drive {
    double g_H = 0.0;  // lambda_H Gamma_H
    double g_C = 0.0;
    double p_H = 0.0;
    double p_C = 0.0;
};

Drive drive_at(double eps, double lambda_H, const BathPair& baths) {
    Drive d;
    if (lambda_H > 0.0) {
        d.g_H = lambda_H * baths.hot.rate(eps);
        d.p_H = baths.hot.p_eq(eps);
    }
    if (lambda_H < 1.0) {
        d.g_C = (1.0 - lambda_H) * baths.cold.rate(eps);
        d.p_C = baths.cold.p_eq(eps);
    }
    return d;
}

void check_population(double p, double t) {
    if (!(p >= -kRangeSlack && p <= 1.0 + kRangeSlack)) {
        std::ostringstream os;
        os.precision(17);
        os << "population left [0,1] during integration: p=" << p << " at t=" << t;
        throw IntegrationError(os.str());
    }
}

// Advances the state across [s_a, s_b] of a segment (local time).
void advance(const Segment& seg, const BathPair& baths, double s_a, double s_b, State& x) {
    const double span = s_b - s_a;
    if (span <= 0.0) return;
    if (seg.is_constant()) {
        const double eps = seg.eps_start;
        const Drive d = drive_at(eps, seg.lambda_start, baths);
        const double a = d.g_H + d.g_C;
        const double p0 = x[0];
        if (a == 0.0) {
            x[5] += p0 * span;
            return;
        }
        const double p_inf = (d.g_H * d.p_H + d.g_C * d.p_C) / a;
        const double delta = p0 - p_inf;
        const double e = -std::expm1(-a * span);  // 1 - e^{-a t}
        const double excess = delta * e / a;       // integral of (p - p_inf)
        x[0] = p_inf + delta * (1.0 - e);
        x[1] += -eps * d.g_H * ((p_inf - d.p_H) * span + excess);
        x[2] += -eps * d.g_C * ((p_inf - d.p_C) * span + excess);
        x[4] += -a * span;
        x[5] += p_inf * span + excess;
        return;
    }

    const double eps_rate = (seg.eps_end - seg.eps_start) / seg.duration;
    auto rhs = [&](const State& y, State& dy, double s) {
        const double eps = seg.eps_at(s);
        const Drive d = drive_at(eps, seg.lambda_at(s), baths);
        const double p = y[0];
        const double fH = -d.g_H * (p - d.p_H);
        const double fC = -d.g_C * (p - d.p_C);
        dy[0] = fH + fC;
        dy[1] = eps * fH;
        dy[2] = eps * fC;
        dy[3] = p * eps_rate;
        dy[4] = -(d.g_H + d.g_C);
        dy[5] = p;
    };
    namespace ode = boost::numeric::odeint;
    try {
        auto stepper = ode::make_controlled(kAbsTol, kRelTol, ode::runge_kutta_dopri5<State>());
        ode::integrate_adaptive(stepper, rhs, x, s_a, s_b, span / 16.0,
                                [&](const State& y, double s) { check_population(y[0], s); });
    } catch (const otto::Error&) {
        throw;
    } catch (const std::exception& e) {
        throw IntegrationError(std::string("ramp integration failed: ") + e.what());
    }
    check_population(x[0], s_b);
}

}  // namespace

double Segment::eps_at(double s) const noexcept {
    if (eps_start == eps_end) return eps_start;
    return eps_start + (eps_end - eps_start) * (s / duration);
}

double Segment::lambda_at(double s) const noexcept {
    if (lambda_start == lambda_end) return lambda_start;
    return lambda_start + (lambda_end - lambda_start) * (s / duration);
}

Segment Segment::stroke(double eps, BathLabel bath, double duration) {
    const double lambda = bath == BathLabel::Hot ? 1.0 : 0.0;
    return {eps, eps, lambda, lambda, duration};
}

Segment Segment::ramp(double eps_from, double eps_to, double lambda_from, double lambda_to,
                      double duration) {
    return {eps_from, eps_to, lambda_from, lambda_to, duration};
}

Protocol::Protocol(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw DomainError("protocol needs at least one segment");
    for (const auto& s : segments_) {
        if (!(s.duration > 0.0) || !std::isfinite(s.duration))
            throw DomainError("segment durations must be finite and > 0");
        if (!std::isfinite(s.eps_start) || !std::isfinite(s.eps_end))
            throw DomainError("segment gaps must be finite");
        for (double l : {s.lambda_start, s.lambda_end})
            if (!(l >= 0.0 && l <= 1.0)) throw DomainError("lambda_H must lie in [0, 1]");
        period_ += s.duration;
    }
    if (!std::isfinite(period_)) throw DomainError("protocol period must be finite");
}

double Protocol::shortest_segment() const noexcept {
    double m = segments_.front().duration;
    for (const auto& s : segments_) m = std::min(m, s.duration);
    return m;
}

Protocol Protocol::square_wave(double eps_H, double eps_C, double tau_H, double tau_C) {
    return Protocol({Segment::stroke(eps_H, BathLabel::Hot, tau_H),
                     Segment::stroke(eps_C, BathLabel::Cold, tau_C)});
}

Protocol Protocol::trapezoid(double eps_H, double eps_C, double tau_H, double tau_C, double tau) {
    if (tau == 0.0) return square_wave(eps_H, eps_C, tau_H, tau_C);
    return Protocol({Segment::stroke(eps_H, BathLabel::Hot, tau_H),
                     Segment::ramp(eps_H, eps_C, 1.0, 0.0, tau),
                     Segment::stroke(eps_C, BathLabel::Cold, tau_C),
                     Segment::ramp(eps_C, eps_H, 0.0, 1.0, tau)});
}

double population_derivative(double p, double eps, const Bath& active_bath) {
    return -active_bath.rate(eps) * (p - active_bath.p_eq(eps));
}

double instantaneous_heat_flux(double p, double eps, const Bath& active_bath) {
    return eps * population_derivative(p, eps, active_bath);
}

PeriodIntegrals propagate_period(const Protocol& protocol, const BathPair& baths, double p0) {
    const auto& segs = protocol.segments();
    State x{p0, 0.0, 0.0, 0.0, 0.0, 0.0};
    double t = 0.0;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const Segment& prev = segs[i == 0 ? segs.size() - 1 : i - 1];
        x[3] += x[0] * (segs[i].eps_start - prev.eps_end);
        advance(segs[i], baths, 0.0, segs[i].duration, x);
        t += segs[i].duration;
        check_population(x[0], t);
    }
    return {x[0], x[1], x[2], x[3], x[4], x[5]};
}

Trajectory integrate_protocol(const Protocol& protocol, const BathPair& baths, double p0,
                              double step, int periods) {
    if (!(step > 0.0)) throw DomainError("step must be > 0");
    if (step > protocol.shortest_segment() / 10.0 * (1.0 + 1e-12))
        throw DomainError("step must not exceed a tenth of the shortest segment");
    if (periods < 1) throw DomainError("periods must be >= 1");
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw DomainError("p0 must lie in [0, 1]");

    Trajectory tr;
    tr.step = step;
    State x{p0, 0.0, 0.0, 0.0, 0.0, 0.0};
    auto emit = [&](double t, double eps, double lambda) {
        const Drive d = drive_at(eps, lambda, baths);
        const double p = std::clamp(x[0], 0.0, 1.0);
        tr.samples.push_back(
            {t, p, eps, lambda, -eps * d.g_H * (x[0] - d.p_H), -eps * d.g_C * (x[0] - d.p_C)});
    };
    double t0 = 0.0;
    for (int k = 0; k < periods; ++k) {
        for (const Segment& seg : protocol.segments()) {
            const auto n = static_cast<long>(std::ceil(seg.duration / step - 1e-9));
            for (long j = 0; j < n; ++j) {
                const double s_a = seg.duration * static_cast<double>(j) / n;
                const double s_b = seg.duration * static_cast<double>(j + 1) / n;
                emit(t0 + s_a, seg.eps_at(s_a), seg.lambda_at(s_a));
                advance(seg, baths, s_a, s_b, x);
                check_population(x[0], t0 + s_b);
            }
            t0 += seg.duration;
        }
    }
    const Segment& last = protocol.segments().back();
    emit(t0, last.eps_end, last.lambda_end);
    return tr;
}

LimitCycle limit_cycle(const Protocol& protocol, const BathPair& baths, double sample_step) {
    const PeriodIntegrals from_zero = propagate_period(protocol, baths, 0.0);
    const double one_minus_d = -std::expm1(from_zero.log_d);
    if (!(one_minus_d > 1e-14)) {
        std::ostringstream os;
        os << "no unique limit cycle: monodromy d = " << std::exp(from_zero.log_d)
           << " (no dissipation over the period)";
        throw NoUniqueCycleError(os.str());
    }
    LimitCycle lc;
    lc.p0 = from_zero.p_end / one_minus_d;
    lc.log_d = from_zero.log_d;
    lc.monodromy_d = std::exp(from_zero.log_d);
    lc.period = protocol.period();
    const PeriodIntegrals r = propagate_period(protocol, baths, lc.p0);
    lc.avg_J_H = r.Q_H / lc.period;
    lc.avg_J_C = r.Q_C / lc.period;
    lc.work = r.work;
    lc.mean_p = r.int_p / lc.period;
    if (sample_step > 0.0) lc.periodic_p = integrate_protocol(protocol, baths, lc.p0, sample_step);
    return lc;
}

SquareWaveSolution square_wave_closed_form(double eps_H, double eps_C, double tau_H,
                                           double tau_C, const BathPair& baths) {
    if (!(tau_H > 0.0) || !(tau_C > 0.0)) throw DomainError("stroke durations must be > 0");
    const double gH = baths.hot.rate(eps_H);
    const double gC = baths.cold.rate(eps_C);
    const double delta = baths.cold.p_eq(eps_C) - baths.hot.p_eq(eps_H);
    const double aH = gH * tau_H;
    const double aC = gC * tau_C;
    const double T = tau_H + tau_C;
    if (aH + aC == 0.0) return {0.0, 0.0, 0.0, 0.0};
    // e^{aH/2} sinh(aC/2) / sinh((aH+aC)/2) written without overflow.
    const double den = std::expm1(-(aH + aC));
    const double h_ratio = std::expm1(-aC) / den;
    const double c_ratio = std::expm1(-aH) / den;
    SquareWaveSolution s;
    s.const_H = delta * h_ratio;
    s.const_C = -delta * std::exp(gC * tau_H) * c_ratio;
    s.avg_J_H = eps_H * s.const_H * std::expm1(-aH) / T;
    // C e^{-Gamma_C tau_H} is finite even when e^{Gamma_C tau_H} is not.
    s.avg_J_C = eps_C * (-delta * c_ratio) * std::expm1(-aC) / T;
    return s;
}

double mode_power(double avg_J_H, double avg_J_C, OperatingMode mode) noexcept {
    switch (mode) {
        case OperatingMode::Engine: return avg_J_H + avg_J_C;
        case OperatingMode::Refrigerator: return avg_J_C;
        case OperatingMode::Accelerator: return -avg_J_C;
        case OperatingMode::Heater: return -avg_J_H - avg_J_C;
    }
    return 0.0;
}

double average_power(const LimitCycle& cycle, OperatingMode mode) noexcept {
    return mode_power(cycle.avg_J_H, cycle.avg_J_C, mode);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
    io::CsvWriter w(os);
    w.header({"t", "p", "eps", "lambda_H", "J_H", "J_C"});
    for (const auto& s : trajectory.samples) w.row({s.t, s.p, s.eps, s.lambda_H, s.J_H, s.J_C});
}

}  // namespace otto
