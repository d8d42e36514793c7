#include "otto/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>
#include <sstream>

#include "otto/errors.hpp"
#include "otto/parallel.hpp"

namespace otto {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEdgeFraction = 1e-6;

std::vector<double> axis_points(double lo, double hi, int uniform, int geometric,
                                const std::vector<double>& features) {
    std::vector<double> pts{lo, hi};
    if (hi > lo) {
        for (int i = 1; i < uniform - 1; ++i) pts.push_back(lo + (hi - lo) * i / (uniform - 1));
        if (lo < 0.0 && hi > 0.0) pts.push_back(0.0);
        const double scale = std::max(std::abs(lo), std::abs(hi));
        for (int i = 0; i < geometric; ++i) {
            const double v = scale * std::pow(10.0, -12.0 + 12.0 * i / std::max(geometric - 1, 1));
            for (double s : {v, -v})
                if (s > lo && s < hi) pts.push_back(s);
        }
        for (double f : features)
            if (f > lo && f < hi) pts.push_back(f);
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Newton iterations on the analytic gradient. Function values are flat to
// rounding well before the gradient vanishes, so acceptance is decided on the
// scaled gradient norm.
numerics::Extremum2D gradient_polish(const numerics::Objective2& f,
                                     const std::function<numerics::Point2(const numerics::Point2&)>& grad,
                                     const numerics::Box2& box, numerics::Extremum2D cur,
                                     std::array<bool, 2> frozen) {
    if (frozen[0] && frozen[1]) return cur;
    auto norm = [&](const numerics::Point2& x, const numerics::Point2& g) {
        double n = 0.0;
        for (int k = 0; k < 2; ++k)
            if (!frozen[k]) n = std::max(n, std::abs(g[k]) * std::max(std::abs(x[k]), 1e-12));
        return n;
    };
    numerics::Point2 g;
    try {
        g = grad(cur.x);
    } catch (const DomainError&) {
        return cur;
    }
    double gn = norm(cur.x, g);
    for (int iter = 0; iter < 20 && gn > 0.0; ++iter) {
        numerics::Point2 scale;
        for (int k = 0; k < 2; ++k) scale[k] = std::max(std::abs(cur.x[k]), 1e-9);
        std::array<numerics::Point2, 2> J{};
        try {
            for (int k = 0; k < 2; ++k) {
                if (frozen[k]) continue;
                const double h = 1e-6 * scale[k];
                numerics::Point2 xp = cur.x, xm = cur.x;
                xp[k] += h;
                xm[k] -= h;
                const auto gp = grad(xp), gm = grad(xm);
                for (int i = 0; i < 2; ++i) J[i][k] = (gp[i] - gm[i]) / (2.0 * h);
            }
        } catch (const DomainError&) {
            break;
        }
        numerics::Point2 step{0.0, 0.0};
        if (frozen[0] || frozen[1]) {
            const int k = frozen[0] ? 1 : 0;
            if (!(J[k][k] < 0.0)) break;
            step[k] = -g[k] / J[k][k];
        } else {
            const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
            if (!(J[0][0] < 0.0) || !(det > 0.0)) break;
            step[0] = -(J[1][1] * g[0] - J[0][1] * g[1]) / det;
            step[1] = -(-J[1][0] * g[0] + J[0][0] * g[1]) / det;
        }
        if (std::abs(step[0]) > 1e-3 * scale[0] || std::abs(step[1]) > 1e-3 * scale[1]) break;
        const numerics::Point2 trial = box.clamp({cur.x[0] + step[0], cur.x[1] + step[1]});
        const double v = f(trial);
        if (!(v >= cur.value - 1e-12 * std::abs(cur.value))) break;
        numerics::Point2 gt;
        try {
            gt = grad(trial);
        } catch (const DomainError&) {
            break;
        }
        const double nt = norm(trial, gt);
        if (!(nt < gn)) break;
        cur.x = trial;
        cur.value = v;
        g = gt;
        gn = nt;
    }
    return cur;
}

struct Candidate {
    numerics::Point2 x;
    double value;
    numerics::Point2 cell;  // local grid spacing
};

}  // namespace

double effective_rate(double gamma_H, double gamma_C) noexcept {
    if (gamma_H <= 0.0 || gamma_C <= 0.0) return 0.0;
    const double sH = std::sqrt(gamma_H), sC = std::sqrt(gamma_C);
    const double r = sH * sC / (sH + sC);
    return r * r;
}

double optimal_time_split(double gamma_H, double gamma_C) {
    if (!(gamma_H > 0.0) || !(gamma_C > 0.0)) {
        std::ostringstream os;
        os << "time split undefined for Gamma_H=" << gamma_H << ", Gamma_C=" << gamma_C;
        throw DegenerateSplitError(os.str());
    }
    const double sH = std::sqrt(gamma_H), sC = std::sqrt(gamma_C);
    return sC / (sH + sC);
}

Currents ideal_average_currents(double eps_H, double eps_C, const BathPair& baths) {
    const double g = effective_rate(baths.hot.rate(eps_H), baths.cold.rate(eps_C));
    const double bracket = baths.hot.p_eq(eps_H) - baths.cold.p_eq(eps_C);
    return {eps_H * g * bracket, -eps_C * g * bracket};
}

double power_objective(OperatingMode mode, double eps_H, double eps_C, const BathPair& baths) {
    const double g = effective_rate(baths.hot.rate(eps_H), baths.cold.rate(eps_C));
    const double bracket = baths.hot.p_eq(eps_H) - baths.cold.p_eq(eps_C);
    return g * bracket * mode_energy_quantum(mode, eps_H, eps_C);
}

numerics::Point2 power_objective_gradient(OperatingMode mode, double eps_H, double eps_C,
                                          const BathPair& baths) {
    const double gH = baths.hot.rate(eps_H), gC = baths.cold.rate(eps_C);
    const double pH = baths.hot.p_eq(eps_H), pC = baths.cold.p_eq(eps_C);
    const double g = effective_rate(gH, gC);
    const double bracket = pH - pC;
    const double q = mode_energy_quantum(mode, eps_H, eps_C);
    // d eps_tilde / d eps_H and d eps_C
    const double qH = mode_energy_quantum(mode, 1.0, 0.0);
    const double qC = mode_energy_quantum(mode, 0.0, 1.0);
    // dG/dGamma_H = (sqrt(Gamma_C) / (sqrt(Gamma_H) + sqrt(Gamma_C)))^3
    double dG_H = 0.0, dG_C = 0.0;
    if (gH > 0.0 && gC > 0.0) {
        const double sH = std::sqrt(gH), sC = std::sqrt(gC);
        const double wH = sC / (sH + sC), wC = sH / (sH + sC);
        dG_H = wH * wH * wH;
        dG_C = wC * wC * wC;
    }
    const double dpH = -baths.hot.beta() * pH * baths.hot.p_eq(-eps_H);
    const double dpC = -baths.cold.beta() * pC * baths.cold.p_eq(-eps_C);
    const double dH = dG_H * baths.hot.model().derivative(eps_H, baths.hot.beta()) * bracket * q +
                      g * dpH * q + g * bracket * qH;
    const double dC = dG_C * baths.cold.model().derivative(eps_C, baths.cold.beta()) * bracket * q -
                      g * dpC * q + g * bracket * qC;
    return {dH, dC};
}

bool accelerator_feasible(double eps_H, double eps_C, double beta_H, double beta_C) noexcept {
    const double xH = beta_H * eps_H, xC = beta_C * eps_C;
    return (eps_H >= 0.0 && xC >= xH) || (eps_H <= 0.0 && xC <= xH);
}

OptimizationResult max_power(OperatingMode mode, const BathPair& baths, const ConstraintBox& box,
                             const MaxPowerOptions& opts) {
    box.validate();
    const double bH = baths.hot.beta(), bC = baths.cold.beta();
    const bool constrain = mode == OperatingMode::Accelerator && box.accelerator_feasibility;

    numerics::Objective2 f = [&](const numerics::Point2& x) {
        if (constrain && !accelerator_feasible(x[0], x[1], bH, bC)) return kNegInf;
        try {
            const double v = power_objective(mode, x[0], x[1], baths);
            return std::isfinite(v) ? v : kNegInf;
        } catch (const DomainError&) {
            return kNegInf;
        }
    };

    auto grad = [&](const numerics::Point2& x) {
        return power_objective_gradient(mode, x[0], x[1], baths);
    };

    const auto ax_H = axis_points(box.eps_min, box.eps_max, opts.uniform_points,
                                  opts.geometric_points, baths.hot.model().feature_points(bH));
    const auto ax_C = axis_points(box.eps_min, box.eps_max, opts.uniform_points,
                                  opts.geometric_points, baths.cold.model().feature_points(bC));
    const std::size_t nH = ax_H.size(), nC = ax_C.size();
    std::vector<double> grid(nH * nC);
    parallel_for(nH, opts.threads, [&](std::size_t i) {
        for (std::size_t j = 0; j < nC; ++j) grid[i * nC + j] = f({ax_H[i], ax_C[j]});
    });

    auto spacing = [](const std::vector<double>& ax, std::size_t i) {
        const double l = i > 0 ? ax[i] - ax[i - 1] : 0.0;
        const double r = i + 1 < ax.size() ? ax[i + 1] - ax[i] : 0.0;
        return std::max(l, r);
    };

    std::vector<Candidate> cands;
    bool any_finite = false;
    for (std::size_t i = 0; i < nH; ++i) {
        for (std::size_t j = 0; j < nC; ++j) {
            const double v = grid[i * nC + j];
            if (v == kNegInf) continue;
            any_finite = true;
            bool peak = true;
            for (int di = -1; di <= 1 && peak; ++di)
                for (int dj = -1; dj <= 1 && peak; ++dj) {
                    if (!di && !dj) continue;
                    const long ii = static_cast<long>(i) + di, jj = static_cast<long>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<long>(nH) || jj >= static_cast<long>(nC))
                        continue;
                    if (grid[ii * nC + jj] > v) peak = false;
                }
            if (peak) cands.push_back({{ax_H[i], ax_C[j]}, v, {spacing(ax_H, i), spacing(ax_C, j)}});
        }
    }

    // Seeds inside the thin wedge between beta_C eps_C = beta_H eps_H and
    // eps_C = eps_H, which the grid cannot resolve at small Carnot efficiency.
    std::vector<Candidate> wedge;
    for (std::size_t i = 0; i < nH; ++i) {
        for (double s : {0.25, 0.5, 0.75}) {
            const numerics::Point2 x{ax_H[i], ax_H[i] * std::pow(bH / bC, s)};
            if (!box.contains(x[1])) continue;
            const double v = f(x);
            if (v == kNegInf) continue;
            any_finite = true;
            const double cell = std::abs(x[0] - x[1]) + 1e-12 * box.width();
            wedge.push_back({x, v, {cell, cell}});
        }
    }

    if (!any_finite) {
        if (constrain) throw InfeasibleError("accelerator feasibility region is empty in the box");
        throw DomainError("objective is undefined everywhere in the box");
    }

    auto by_value = [](const Candidate& a, const Candidate& b) { return a.value > b.value; };
    std::sort(cands.begin(), cands.end(), by_value);
    std::sort(wedge.begin(), wedge.end(), by_value);
    if (cands.size() > static_cast<std::size_t>(opts.refine_candidates))
        cands.resize(static_cast<std::size_t>(opts.refine_candidates));
    for (std::size_t k = 0; k < wedge.size() && k < 3; ++k) cands.push_back(wedge[k]);

    const numerics::Box2 b2{{box.eps_min, box.eps_min}, {box.eps_max, box.eps_max}};
    const double width = box.width();
    const double edge = kEdgeFraction * width;

    auto snap = [&](numerics::Extremum2D& e, std::array<bool, 2>& frozen) {
        for (int k = 0; k < 2; ++k) {
            if (e.x[k] - box.eps_min <= edge) {
                e.x[k] = box.eps_min;
                frozen[k] = true;
            } else if (box.eps_max - e.x[k] <= edge) {
                e.x[k] = box.eps_max;
                frozen[k] = true;
            }
        }
        e.value = f(e.x);
    };

    numerics::Extremum2D best{{kNaN, kNaN}, kNegInf, 0};
    for (const auto& c : cands) {
        if (!(c.value > 0.0) && best.value > 0.0) continue;
        auto nm = opts.simplex;
        if (width > 0.0)
            nm.initial_step = std::clamp(std::max(c.cell[0], c.cell[1]) / width, 1e-9, 0.05);
        numerics::Extremum2D e = numerics::nelder_mead_maximize(f, b2, c.x, nm);
        std::array<bool, 2> frozen{false, false};
        const numerics::Extremum2D raw = e;
        snap(e, frozen);
        if (e.value < raw.value) {
            e = raw;
            frozen = {false, false};
        }
        e = numerics::newton_polish(f, b2, e, frozen);
        if (e.value > 0.0) e = gradient_polish(f, grad, b2, e, frozen);
        if (e.value > best.value) best = e;
    }

    // A plateau flat to rounding that reaches an edge is reported at the edge.
    if (best.value > 0.0) {
        for (int k = 0; k < 2; ++k) {
            const bool upper = box.eps_max - best.x[k] <= best.x[k] - box.eps_min;
            numerics::Point2 y = best.x;
            y[k] = upper ? box.eps_max : box.eps_min;
            const double v = f(y);
            if (v >= best.value) best = {y, v, best.evaluations};
        }
        // (eps_H, eps_C) -> (-eps_H, -eps_C) ties resolve to eps_H >= 0.
        const numerics::Point2 m{-best.x[0], -best.x[1]};
        if (best.x[0] < 0.0 && box.contains(m[0]) && box.contains(m[1])) {
            const double v = f(m);
            if (v >= best.value - 1e-13 * std::abs(best.value)) best = {m, v, best.evaluations};
        }
    }

    OptimizationResult res;
    res.mode = mode;
    res.hot_model = baths.hot.model().fingerprint();
    res.cold_model = baths.cold.model().fingerprint();
    if (!(best.value > 0.0)) {
        res.eps_H_star = res.eps_C_star = res.theta_star = kNaN;
        res.p_max = 0.0;
        res.operable = false;
        return res;
    }
    res.operable = true;
    res.eps_H_star = best.x[0];
    res.eps_C_star = best.x[1];
    res.p_max = best.value;
    res.theta_star =
        optimal_time_split(baths.hot.rate(best.x[0]), baths.cold.rate(best.x[1]));
    res.boundary.eps_H_min = best.x[0] - box.eps_min <= edge;
    res.boundary.eps_H_max = box.eps_max - best.x[0] <= edge;
    res.boundary.eps_C_min = best.x[1] - box.eps_min <= edge;
    res.boundary.eps_C_max = box.eps_max - best.x[1] <= edge;
    return res;
}

OptimizationResult heater_max_power_symmetric(const RateModel& model, double beta, double Delta) {
    if (!(Delta > 0.0) || !std::isfinite(Delta)) throw DomainError("Delta must be finite and > 0");
    if (!(beta > 0.0)) throw DomainError("beta must be > 0");
    auto phi = [&](double e) {
        // 1 - 2 p_eq = tanh(beta eps / 2)
        return 0.5 * e * model(e, beta) * std::tanh(0.5 * beta * e);
    };
    auto safe = [&](double e) {
        try {
            const double v = phi(e);
            return std::isfinite(v) ? v : kNegInf;
        } catch (const DomainError&) {
            return kNegInf;
        }
    };
    numerics::Extremum1D best = numerics::maximize_scan(safe, 0.0, Delta);
    const double at_edge = safe(Delta);
    if (at_edge >= best.value) best = {Delta, at_edge};

    OptimizationResult res;
    res.mode = OperatingMode::Heater;
    res.hot_model = res.cold_model = model.fingerprint();
    if (!(best.value > 0.0)) {
        res.eps_H_star = res.eps_C_star = res.theta_star = kNaN;
        return res;
    }
    res.operable = true;
    res.eps_H_star = best.x;
    res.eps_C_star = -best.x;
    res.theta_star = 0.5;
    res.p_max = best.value;
    res.boundary.eps_H_max = Delta - best.x <= kEdgeFraction * 2.0 * Delta;
    res.boundary.eps_C_min = res.boundary.eps_H_max;
    return res;
}

}  // namespace otto
