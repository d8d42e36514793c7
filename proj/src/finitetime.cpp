#include "otto/finitetime.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "otto/errors.hpp"
#include "otto/numerics.hpp"
#include "otto/optimizer.hpp"

namespace otto {

namespace {

constexpr double kFastGate = 0.01;
constexpr double kQuadTol = 1e-12;

// Integrands over one segment, in this order:
// Gamma, Gamma p_eq, eps lH GH pH, eps lH GH, eps lC GC pC, eps lC GC
using Moments = std::array<double, 6>;

Moments moments_at(const Segment& seg, const BathPair& baths, double s) {
    const double eps = seg.eps_at(s);
    const double lH = seg.lambda_at(s);
    Moments m{};
    if (lH > 0.0) {
        const double g = lH * baths.hot.rate(eps);
        const double p = baths.hot.p_eq(eps);
        m[0] += g;
        m[1] += g * p;
        m[2] = eps * g * p;
        m[3] = eps * g;
    }
    if (lH < 1.0) {
        const double g = (1.0 - lH) * baths.cold.rate(eps);
        const double p = baths.cold.p_eq(eps);
        m[0] += g;
        m[1] += g * p;
        m[4] = eps * g * p;
        m[5] = eps * g;
    }
    return m;
}

Moments segment_moments(const Segment& seg, const BathPair& baths) {
    if (seg.is_constant()) {
        Moments m = moments_at(seg, baths, 0.0);
        for (double& v : m) v *= seg.duration;
        return m;
    }
    Moments out{};
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = numerics::integrate(
            [&](double s) { return moments_at(seg, baths, s)[k]; }, 0.0, seg.duration, kQuadTol);
    }
    return out;
}

void require_fast(const Protocol& protocol, const BathPair& baths) {
    const double gmax = protocol_max_rate(protocol, baths);
    const double x = protocol.period() * gmax;
    if (x > kFastGate) {
        std::ostringstream os;
        os << "fast-driving regime violated: period * max Gamma = " << x << " > " << kFastGate;
        throw RegimeError(os.str());
    }
}

double p_bar_from(const std::vector<Moments>& ms) {
    double num = 0.0, den = 0.0;
    for (const auto& m : ms) {
        den += m[0];
        num += m[1];
    }
    if (!(den > 0.0)) throw NoUniqueCycleError("no dissipation over the protocol period");
    return num / den;
}

}  // namespace

std::string to_string(TimeRegime regime) {
    switch (regime) {
        case TimeRegime::SmallDt: return "small-dt";
        case TimeRegime::Crossover: return "crossover";
        case TimeRegime::LargeDt: return "large-dt";
    }
    return "?";
}

FiniteTimeReport finite_period_factor(double dt, double gamma_H, double gamma_C) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be finite and > 0");
    if (!(gamma_H >= 0.0) || !(gamma_C >= 0.0)) throw DomainError("rates must be >= 0");
    FiniteTimeReport r{};
    r.dt = dt;
    r.gamma_tilde = effective_rate(gamma_H, gamma_C);
    r.gamma_tilde_H = std::sqrt(r.gamma_tilde * gamma_H);
    r.gamma_tilde_C = std::sqrt(r.gamma_tilde * gamma_C);
    const double xH = 0.5 * r.gamma_tilde_H * dt;
    const double xC = 0.5 * r.gamma_tilde_C * dt;
    if (xH == 0.0 || xC == 0.0) {
        r.factor = 1.0;
    } else {
        r.factor = (1.0 / xH + 1.0 / xC) / (1.0 / std::tanh(xH) + 1.0 / std::tanh(xC));
    }
    const double x = std::max(xH, xC);
    r.regime = x < 0.1 ? TimeRegime::SmallDt : (x > 10.0 ? TimeRegime::LargeDt : TimeRegime::Crossover);
    return r;
}

double heater_finite_period_factor(double x) {
    if (!(x >= 0.0)) throw DomainError("dt * Gamma must be >= 0");
    if (x == 0.0) return 1.0;
    const double y = 0.25 * x;
    return std::tanh(y) / y;
}

double protocol_max_rate(const Protocol& protocol, const BathPair& baths) {
    double gmax = 0.0;
    for (const auto& seg : protocol.segments()) {
        const int n = seg.is_constant() ? 1 : 33;
        for (int i = 0; i < n; ++i) {
            const double s = n == 1 ? 0.0 : seg.duration * i / (n - 1);
            gmax = std::max(gmax, moments_at(seg, baths, s)[0]);
        }
    }
    return gmax;
}

double quench_average_population(const Protocol& protocol, const BathPair& baths) {
    require_fast(protocol, baths);
    std::vector<Moments> ms;
    for (const auto& seg : protocol.segments()) ms.push_back(segment_moments(seg, baths));
    return p_bar_from(ms);
}

QuenchReport quench_power(double eps_H, double eps_C, double tau_H, double tau_C, double tau,
                          const BathPair& baths, OperatingMode mode) {
    if (!(tau >= 0.0)) throw DomainError("quench time must be >= 0");
    const double dt = tau_H + tau_C;
    if (tau > dt / 5.0) {
        std::ostringstream os;
        os << "quench time tau = " << tau << " exceeds dt/5 = " << dt / 5.0;
        throw RegimeError(os.str());
    }
    const Protocol proto = Protocol::trapezoid(eps_H, eps_C, tau_H, tau_C, tau);
    require_fast(proto, baths);

    auto evaluate = [&](const Protocol& p, QuenchReport* rep) {
        std::vector<Moments> ms;
        for (const auto& seg : p.segments()) ms.push_back(segment_moments(seg, baths));
        const double pb = p_bar_from(ms);
        double qH = 0.0, qC = 0.0;
        std::vector<double> w;
        for (const auto& m : ms) {
            const double h = m[2] - pb * m[3];
            const double c = m[4] - pb * m[5];
            qH += h;
            qC += c;
            w.push_back(h + c);
        }
        const double T = p.period();
        if (rep) {
            rep->p_bar = pb;
            rep->avg_J_H = qH / T;
            rep->avg_J_C = qC / T;
            rep->W_H = w[0];
            if (w.size() == 4) {
                rep->W_HC = w[1];
                rep->W_C = w[2];
                rep->W_CH = w[3];
            } else {
                rep->W_C = w[1];
            }
        }
        return mode_power(qH / T, qC / T, mode);
    };

    QuenchReport rep;
    rep.tau = tau;
    rep.dt = dt;
    rep.power = evaluate(proto, &rep);
    rep.ideal_power = evaluate(Protocol::square_wave(eps_H, eps_C, tau_H, tau_C), nullptr);
    rep.deficit = rep.ideal_power != 0.0 ? 1.0 - rep.power / rep.ideal_power : 0.0;
    return rep;
}

}  // namespace otto
