// numerics.hpp: scalar and two-dimensional numerical utilities.
//
// 1-D maximization, bracketed roots and Gauss-Kronrod quadrature are thin
// wrappers over Boost.Math. The 2-D Nelder-Mead simplex and the Newton polish
// are local to this project.
#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace otto::numerics {

struct Extremum1D {
    double x;
    double value;
};

// Brent maximization of f on [lo, hi].
Extremum1D maximize_brent(const std::function<double(double)>& f, double lo, double hi,
                          int bits = 52, int max_iter = 500);

// Dense scan over [lo, hi] followed by Brent refinement around the best
// sample; both endpoints are always candidates.
Extremum1D maximize_scan(const std::function<double(double)>& f, double lo, double hi,
                         int samples = 2001);

// Root of f on [lo, hi]; throws RootNotFoundError without a sign change.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-15);

// Adaptive Gauss-Kronrod (15 point) on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-12, int max_depth = 30);

using Point2 = std::array<double, 2>;
using Objective2 = std::function<double(const Point2&)>;

struct Box2 {
    Point2 lo;
    Point2 hi;
    Point2 clamp(Point2 p) const noexcept;
};

struct Extremum2D {
    Point2 x;
    double value;
    int evaluations = 0;
};

struct NelderMeadOptions {
    double rel_tol = 1e-10;   // on objective spread across the simplex
    double x_tol = 1e-13;     // on simplex diameter, relative to box width
    int max_evaluations = 20000;
    int restarts = 6;
    double initial_step = 0.05;  // relative to box width
};

// Maximizes f over a box. Trial points are projected onto the box.
Extremum2D nelder_mead_maximize(const Objective2& f, const Box2& box, Point2 start,
                                const NelderMeadOptions& opts = {});

// Newton iterations on central-difference derivatives. Coordinates flagged in
// `frozen` are held fixed. Returns the input when no step improves f.
Extremum2D newton_polish(const Objective2& f, const Box2& box, Extremum2D start,
                         std::array<bool, 2> frozen = {false, false}, int max_iter = 30);

struct Derivatives2 {
    Point2 gradient;
    std::array<Point2, 2> hessian;
};

Derivatives2 central_derivatives(const Objective2& f, const Point2& x, const Point2& h);

// Least-squares polynomial fit y ~ sum_k c_k x^k, k = 0..degree.
struct PolyFit {
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    double rms_residual;
};

PolyFit polyfit(std::span<const double> x, std::span<const double> y, int degree);

}  // namespace otto::numerics
