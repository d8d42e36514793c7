#include "otto/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "otto/errors.hpp"

namespace otto::numerics {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_eval(const std::function<double(double)>& f, double x) {
    try {
        const double v = f(x);
        return std::isfinite(v) ? v : kNegInf;
    } catch (const DomainError&) {
        return kNegInf;
    }
}

double safe_eval(const Objective2& f, const Point2& x) {
    try {
        const double v = f(x);
        return std::isfinite(v) ? v : kNegInf;
    } catch (const DomainError&) {
        return kNegInf;
    }
}

}  // namespace

Extremum1D maximize_brent(const std::function<double(double)>& f, double lo, double hi, int bits,
                          int max_iter) {
    std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
    auto neg = [&](double x) {
        const double v = safe_eval(f, x);
        return v == kNegInf ? std::numeric_limits<double>::max() : -v;
    };
    const auto [x, v] = boost::math::tools::brent_find_minima(neg, lo, hi, bits, iters);
    return {x, -v};
}

Extremum1D maximize_scan(const std::function<double(double)>& f, double lo, double hi,
                         int samples) {
    if (samples < 3) samples = 3;
    std::vector<double> xs(static_cast<std::size_t>(samples));
    std::vector<double> vs(xs.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xs[i] = i + 1 == xs.size() ? hi : lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
        vs[i] = safe_eval(f, xs[i]);
        if (vs[i] > vs[best]) best = i;
    }
    Extremum1D result{xs[best], vs[best]};
    const double a = xs[best == 0 ? 0 : best - 1];
    const double b = xs[best + 1 == xs.size() ? best : best + 1];
    if (b > a) {
        const auto refined = maximize_brent(f, a, b);
        if (refined.value > result.value) result = refined;
    }
    return result;
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double rel_tol) {
    const double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        std::ostringstream os;
        os << "no sign change on [" << lo << ", " << hi << "]: f(lo)=" << flo << ", f(hi)=" << fhi;
        throw RootNotFoundError(os.str());
    }
    std::uintmax_t iters = 500;
    auto tol = [rel_tol](double a, double b) {
        return std::abs(b - a) <= rel_tol * std::max(std::abs(a), std::abs(b));
    };
    const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (a + b);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
    if (a == b) return 0.0;
    // Boost compares an error estimate taken on [-1, 1] against a tolerance
    // scaled by the interval, so short intervals never converge. Map to [-1, 1].
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double error = 0.0;
    return half * boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                      [&](double u) { return f(mid + half * u); }, -1.0, 1.0,
                      static_cast<unsigned>(max_depth), tol, &error);
}

Point2 Box2::clamp(Point2 p) const noexcept {
    for (int i = 0; i < 2; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
    return p;
}

Extremum2D nelder_mead_maximize(const Objective2& f, const Box2& box, Point2 start,
                                const NelderMeadOptions& opts) {
    int evals = 0;
    auto eval = [&](const Point2& p) {
        ++evals;
        return safe_eval(f, p);
    };
    const Point2 width{box.hi[0] - box.lo[0], box.hi[1] - box.lo[1]};

    Point2 best_x = box.clamp(start);
    double best_v = eval(best_x);

    for (int round = 0; round <= opts.restarts && evals < opts.max_evaluations; ++round) {
        const double step = opts.initial_step * std::pow(0.1, round);
        std::array<Point2, 3> s{best_x, best_x, best_x};
        for (int i = 0; i < 2; ++i) {
            double d = step * std::max(width[i], 1e-300);
            if (s[i + 1][i] + d > box.hi[i]) d = -d;
            s[i + 1][i] += d;
            s[i + 1] = box.clamp(s[i + 1]);
        }
        std::array<double, 3> v{best_v, eval(s[1]), eval(s[2])};

        while (evals < opts.max_evaluations) {
            std::array<int, 3> idx{0, 1, 2};
            std::sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
            const Point2 xb = s[idx[0]], xm = s[idx[1]], xw = s[idx[2]];
            const double vb = v[idx[0]], vm = v[idx[1]], vw = v[idx[2]];

            const double spread = std::abs(vb - vw);
            const double diam = std::max({std::abs(xb[0] - xw[0]) / std::max(width[0], 1e-300),
                                          std::abs(xb[1] - xw[1]) / std::max(width[1], 1e-300),
                                          std::abs(xb[0] - xm[0]) / std::max(width[0], 1e-300),
                                          std::abs(xb[1] - xm[1]) / std::max(width[1], 1e-300)});
            if (std::isfinite(vw) &&
                (spread <= opts.rel_tol * std::abs(vb) + 1e-300 || diam <= opts.x_tol))
                break;
            if (diam <= opts.x_tol) break;

            const Point2 c{0.5 * (xb[0] + xm[0]), 0.5 * (xb[1] + xm[1])};
            auto along = [&](double t) {
                return box.clamp(Point2{c[0] + t * (xw[0] - c[0]), c[1] + t * (xw[1] - c[1])});
            };
            const Point2 xr = along(-1.0);
            const double vr = eval(xr);
            Point2 new_x;
            double new_v;
            if (vr > vb) {
                const Point2 xe = along(-2.0);
                const double ve = eval(xe);
                if (ve > vr) {
                    new_x = xe;
                    new_v = ve;
                } else {
                    new_x = xr;
                    new_v = vr;
                }
            } else if (vr > vm) {
                new_x = xr;
                new_v = vr;
            } else {
                const bool outside = vr > vw;
                const Point2 xc = along(outside ? -0.5 : 0.5);
                const double vc = eval(xc);
                if (vc > (outside ? vr : vw)) {
                    new_x = xc;
                    new_v = vc;
                } else {
                    // shrink towards the best vertex
                    for (int k : {idx[1], idx[2]}) {
                        s[k] = box.clamp(
                            Point2{xb[0] + 0.5 * (s[k][0] - xb[0]), xb[1] + 0.5 * (s[k][1] - xb[1])});
                        v[k] = eval(s[k]);
                    }
                    continue;
                }
            }
            s[idx[2]] = new_x;
            v[idx[2]] = new_v;
        }
        int ib = 0;
        for (int k = 1; k < 3; ++k)
            if (v[k] > v[ib]) ib = k;
        const double gain = v[ib] - best_v;
        const bool improved = v[ib] > best_v;
        if (improved) {
            best_x = s[ib];
            best_v = v[ib];
        }
        if (round > 0 && (!improved || gain <= opts.rel_tol * std::abs(best_v))) break;
    }
    return {best_x, best_v, evals};
}

Derivatives2 central_derivatives(const Objective2& f, const Point2& x, const Point2& h) {
    Derivatives2 d{};
    const double f0 = f(x);
    for (int i = 0; i < 2; ++i) {
        Point2 xp = x, xm = x;
        xp[i] += h[i];
        xm[i] -= h[i];
        const double fp = f(xp), fm = f(xm);
        d.gradient[i] = (fp - fm) / (2.0 * h[i]);
        d.hessian[i][i] = (fp - 2.0 * f0 + fm) / (h[i] * h[i]);
    }
    Point2 pp{x[0] + h[0], x[1] + h[1]}, pm{x[0] + h[0], x[1] - h[1]};
    Point2 mp{x[0] - h[0], x[1] + h[1]}, mm{x[0] - h[0], x[1] - h[1]};
    const double mixed = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h[0] * h[1]);
    d.hessian[0][1] = d.hessian[1][0] = mixed;
    return d;
}

Extremum2D newton_polish(const Objective2& f, const Box2& box, Extremum2D start,
                         std::array<bool, 2> frozen, int max_iter) {
    Extremum2D cur = start;
    if (!std::isfinite(cur.value) || (frozen[0] && frozen[1])) return cur;
    const Point2 width{box.hi[0] - box.lo[0], box.hi[1] - box.lo[1]};
    constexpr double eps = std::numeric_limits<double>::epsilon();

    for (int iter = 0; iter < max_iter; ++iter) {
        Point2 scale;
        for (int i = 0; i < 2; ++i)
            scale[i] = std::max({std::abs(cur.x[i]), 1e-6 * width[i], 1e-12});
        const Point2 hh{1e-4 * scale[0], 1e-4 * scale[1]};
        Derivatives2 d;
        try {
            d = central_derivatives(f, cur.x, hh);
        } catch (const DomainError&) {
            break;
        }

        // Search directions: Hessian eigenvectors, or the single free axis.
        std::vector<Point2> dirs;
        if (frozen[0] || frozen[1]) {
            dirs.push_back(frozen[0] ? Point2{0.0, 1.0} : Point2{1.0, 0.0});
        } else {
            // work in scaled coordinates y_i = x_i / scale_i
            const double a = d.hessian[0][0] * scale[0] * scale[0];
            const double b = d.hessian[0][1] * scale[0] * scale[1];
            const double c = d.hessian[1][1] * scale[1] * scale[1];
            const double theta = 0.5 * std::atan2(2.0 * b, a - c);
            const double ct = std::cos(theta), st = std::sin(theta);
            dirs.push_back(Point2{ct * scale[0], st * scale[1]});
            dirs.push_back(Point2{-st * scale[0], ct * scale[1]});
        }

        Point2 step{0.0, 0.0};
        bool ok = true;
        for (const Point2& v0 : dirs) {
            const double n = std::hypot(v0[0] / scale[0], v0[1] / scale[1]);
            const Point2 v{v0[0] / n, v0[1] / n};
            // v is unit length in scaled coordinates; h is a scaled step.
            const double h = 1e-5;
            auto at = [&](double t) {
                return safe_eval(f, Point2{cur.x[0] + t * v[0], cur.x[1] + t * v[1]});
            };
            const double fp = at(h), fm = at(-h);
            if (!std::isfinite(fp) || !std::isfinite(fm)) {
                ok = false;
                break;
            }
            const double g = (fp - fm) / (2.0 * h);
            const double curv = (fp - 2.0 * cur.value + fm) / (h * h);
            if (!(curv < 0.0)) {
                ok = false;
                break;
            }
            const double t = -g / curv;
            step[0] += t * v[0];
            step[1] += t * v[1];
        }
        if (!ok) break;
        if (frozen[0]) step[0] = 0.0;
        if (frozen[1]) step[1] = 0.0;

        bool accepted = false;
        double alpha = 1.0;
        for (int ls = 0; ls < 8; ++ls, alpha *= 0.5) {
            const Point2 trial = box.clamp(Point2{cur.x[0] + alpha * step[0], cur.x[1] + alpha * step[1]});
            const double vt = safe_eval(f, trial);
            if (vt >= cur.value - 4.0 * eps * std::abs(cur.value)) {
                cur.x = trial;
                cur.value = vt;
                accepted = true;
                break;
            }
        }
        ++cur.evaluations;
        if (!accepted) break;
        if (std::abs(step[0]) <= 1e-15 * scale[0] && std::abs(step[1]) <= 1e-15 * scale[1]) break;
    }
    cur.value = safe_eval(f, cur.x);
    return cur;
}

PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree) {
    const std::size_t m = x.size();
    const std::size_t n = static_cast<std::size_t>(degree) + 1;
    if (y.size() != m || m < n) throw DomainError("polyfit: need at least degree+1 points");

    // Modified Gram-Schmidt QR on the Vandermonde matrix, in long double.
    std::vector<std::vector<long double>> q(n, std::vector<long double>(m));
    std::vector<std::vector<long double>> r(n, std::vector<long double>(n, 0.0L));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) q[j][i] = std::pow(static_cast<long double>(x[i]), j);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            long double dot = 0.0L;
            for (std::size_t i = 0; i < m; ++i) dot += q[k][i] * q[j][i];
            r[k][j] = dot;
            for (std::size_t i = 0; i < m; ++i) q[j][i] -= dot * q[k][i];
        }
        long double norm = 0.0L;
        for (std::size_t i = 0; i < m; ++i) norm += q[j][i] * q[j][i];
        norm = std::sqrt(norm);
        if (norm == 0.0L) throw DomainError("polyfit: rank-deficient design");
        r[j][j] = norm;
        for (std::size_t i = 0; i < m; ++i) q[j][i] /= norm;
    }
    std::vector<long double> qty(n, 0.0L);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < m; ++i) qty[j] += q[j][i] * y[i];
    std::vector<long double> c(n, 0.0L);
    for (std::size_t j = n; j-- > 0;) {
        long double s = qty[j];
        for (std::size_t k = j + 1; k < n; ++k) s -= r[j][k] * c[k];
        c[j] = s / r[j][j];
    }
    PolyFit fit;
    fit.coefficients.assign(c.begin(), c.end());
    long double ss = 0.0L;
    for (std::size_t i = 0; i < m; ++i) {
        long double pred = 0.0L;
        for (std::size_t j = n; j-- > 0;) pred = pred * x[i] + c[j];
        ss += (y[i] - pred) * (y[i] - pred);
    }
    fit.rms_residual = static_cast<double>(std::sqrt(ss / m));

    // cov = s^2 (R^T R)^{-1} = s^2 R^{-1} R^{-T}
    std::vector<std::vector<long double>> rinv(n, std::vector<long double>(n, 0.0L));
    for (std::size_t j = 0; j < n; ++j) {
        rinv[j][j] = 1.0L / r[j][j];
        for (std::size_t i = j; i-- > 0;) {
            long double s = 0.0L;
            for (std::size_t k = i + 1; k <= j; ++k) s += r[i][k] * rinv[k][j];
            rinv[i][j] = -s / r[i][i];
        }
    }
    const long double s2 = m > n ? ss / static_cast<long double>(m - n) : 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
        long double v = 0.0L;
        for (std::size_t k = 0; k < n; ++k) v += rinv[j][k] * rinv[j][k];
        fit.standard_errors.push_back(static_cast<double>(std::sqrt(s2 * v)));
    }
    return fit;
}

}  // namespace otto::numerics
