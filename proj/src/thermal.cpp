#include "otto/thermal.hpp"

#include <cmath>
#include <sstream>

#include "otto/errors.hpp"

namespace otto {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

void require_nonnegative(double v, const char* what) {
    require_finite(v, what);
    if (v < 0.0) throw DomainError(std::string(what) + " must be >= 0");
}

void require_positive(double v, const char* what) {
    require_finite(v, what);
    if (!(v > 0.0)) throw DomainError(std::string(what) + " must be > 0");
}

// |eps|^n coth(beta |eps| / 2), continuous through eps = 0 for n >= 1.
double bose_factor(double abs_eps, int n, double beta) {
    const double half = 0.5 * beta * abs_eps;
    if (half < 1e-6) {
        // coth(y) = 1/y + y/3 - ...
        const double series = (2.0 / beta) * (1.0 + half * half / 3.0);
        return n == 1 ? series : std::pow(abs_eps, n - 1) * series;
    }
    return std::pow(abs_eps, n) / std::tanh(half);
}

}  // namespace

RateModel::RateModel(Variant v) : v_(std::move(v)) {
    std::visit(overloaded{
                   [](const rates::Constant& m) { require_nonnegative(m.k, "Constant.k"); },
                   [](const rates::FermiPower& m) {
                       require_nonnegative(m.k, "FermiPower.k");
                       if (m.n < 0) throw DomainError("FermiPower.n must be >= 0");
                   },
                   [](const rates::BosePower& m) {
                       require_nonnegative(m.k, "BosePower.k");
                       if (m.n < 0) throw DomainError("BosePower.n must be >= 0");
                       require_positive(m.eps_floor, "BosePower.eps_floor");
                   },
                   [](const rates::Lorentzian& m) {
                       require_nonnegative(m.gamma, "Lorentzian.gamma");
                       require_positive(m.sigma, "Lorentzian.sigma");
                       require_finite(m.eps_bar, "Lorentzian.eps_bar");
                   },
                   [](const rates::GaussianX& m) {
                       require_nonnegative(m.k, "GaussianX.k");
                       require_finite(m.x_bar, "GaussianX.x_bar");
                   },
               },
               v_);
}

RateModel RateModel::constant(double k) { return RateModel(rates::Constant{k}); }
RateModel RateModel::fermi_power(double k, int n) { return RateModel(rates::FermiPower{k, n}); }
RateModel RateModel::bose_power(double k, int n, double eps_floor) {
    return RateModel(rates::BosePower{k, n, eps_floor});
}
RateModel RateModel::lorentzian(double gamma, double sigma, double eps_bar) {
    return RateModel(rates::Lorentzian{gamma, sigma, eps_bar});
}
RateModel RateModel::gaussian_x(double k, double x_bar) {
    return RateModel(rates::GaussianX{k, x_bar});
}

double RateModel::operator()(double eps, double beta) const {
    require_finite(eps, "eps");
    return std::visit(
        overloaded{
            [](const rates::Constant& m) { return m.k; },
            [eps](const rates::FermiPower& m) {
                return m.n == 0 ? m.k : m.k * std::pow(std::abs(eps), m.n);
            },
            [eps, beta](const rates::BosePower& m) {
                require_positive(beta, "beta");
                const double a = std::abs(eps);
                if (m.n == 0 && a < m.eps_floor) {
                    std::ostringstream os;
                    os << "BosePower(n=0) diverges at eps=0; |eps|=" << a
                       << " is below eps_floor=" << m.eps_floor;
                    throw SingularityError(os.str());
                }
                return m.k * bose_factor(a, m.n, beta);
            },
            [eps](const rates::Lorentzian& m) {
                const double d = eps - m.eps_bar;
                const double s2 = m.sigma * m.sigma;
                return m.gamma * s2 / (s2 + d * d);
            },
            [eps, beta](const rates::GaussianX& m) {
                require_positive(beta, "beta");
                const double d = beta * eps - m.x_bar;
                return m.k * std::exp(-d * d);
            },
        },
        v_);
}

double RateModel::derivative(double eps, double beta) const {
    require_finite(eps, "eps");
    const double sgn = eps > 0.0 ? 1.0 : (eps < 0.0 ? -1.0 : 0.0);
    return std::visit(
        overloaded{
            [](const rates::Constant&) { return 0.0; },
            [eps, sgn](const rates::FermiPower& m) {
                if (m.n == 0) return 0.0;
                return sgn * m.k * m.n * std::pow(std::abs(eps), m.n - 1);
            },
            [eps, beta, sgn](const rates::BosePower& m) {
                require_positive(beta, "beta");
                const double a = std::abs(eps);
                if (m.n == 0 && a < m.eps_floor)
                    throw SingularityError("BosePower(n=0) derivative diverges at eps=0");
                const double y = 0.5 * beta * a;
                double bracket;  // n coth(y) - y csch^2(y)
                if (y < 1e-4) {
                    bracket = (m.n - 1) / y + (m.n + 1) * y / 3.0;
                } else {
                    const double sh = std::sinh(y);
                    bracket = m.n / std::tanh(y) - y / (sh * sh);
                }
                return sgn * m.k * std::pow(a, m.n - 1) * bracket;
            },
            [eps](const rates::Lorentzian& m) {
                const double d = eps - m.eps_bar;
                const double s2 = m.sigma * m.sigma;
                const double den = s2 + d * d;
                return -2.0 * m.gamma * s2 * d / (den * den);
            },
            [eps, beta](const rates::GaussianX& m) {
                require_positive(beta, "beta");
                const double d = beta * eps - m.x_bar;
                return -2.0 * beta * d * m.k * std::exp(-d * d);
            },
        },
        v_);
}

std::string RateModel::kind() const {
    return std::visit(overloaded{
                          [](const rates::Constant&) { return std::string("constant"); },
                          [](const rates::FermiPower&) { return std::string("fermi_power"); },
                          [](const rates::BosePower&) { return std::string("bose_power"); },
                          [](const rates::Lorentzian&) { return std::string("lorentzian"); },
                          [](const rates::GaussianX&) { return std::string("gaussian_x"); },
                      },
                      v_);
}

std::string RateModel::fingerprint() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const rates::Constant& m) { os << "Const(k=" << m.k << ")"; },
                   [&](const rates::FermiPower& m) { os << "F" << m.n << "(k=" << m.k << ")"; },
                   [&](const rates::BosePower& m) {
                       os << "B" << m.n << "(k=" << m.k << ",eps_floor=" << m.eps_floor << ")";
                   },
                   [&](const rates::Lorentzian& m) {
                       os << "Lorentzian(gamma=" << m.gamma << ",sigma=" << m.sigma
                          << ",eps_bar=" << m.eps_bar << ")";
                   },
                   [&](const rates::GaussianX& m) {
                       os << "GaussianX(k=" << m.k << ",x_bar=" << m.x_bar << ")";
                   },
               },
               v_);
    return os.str();
}

double RateModel::amplitude() const noexcept {
    return std::visit(overloaded{
                          [](const rates::Constant& m) { return m.k; },
                          [](const rates::FermiPower& m) { return m.k; },
                          [](const rates::BosePower& m) { return m.k; },
                          [](const rates::Lorentzian& m) { return m.gamma; },
                          [](const rates::GaussianX& m) { return m.k; },
                      },
                      v_);
}

bool RateModel::depends_on_beta_eps_only() const noexcept {
    return std::visit(overloaded{
                          [](const rates::Constant&) { return true; },
                          [](const rates::FermiPower& m) { return m.n == 0; },
                          [](const rates::BosePower& m) { return m.n == 0; },
                          [](const rates::Lorentzian&) { return false; },
                          [](const rates::GaussianX&) { return true; },
                      },
                      v_);
}

std::vector<double> RateModel::feature_points(double beta) const {
    static constexpr double offsets[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    std::vector<double> pts;
    auto around = [&](double centre, double width) {
        for (double o : offsets) {
            pts.push_back(centre + o * width);
            if (o != 0.0) pts.push_back(centre - o * width);
        }
    };
    std::visit(overloaded{
                   [](const rates::Constant&) {},
                   [](const rates::FermiPower&) {},
                   [](const rates::BosePower&) {},
                   [&](const rates::Lorentzian& m) { around(m.eps_bar, m.sigma); },
                   [&](const rates::GaussianX& m) {
                       if (beta > 0.0) around(m.x_bar / beta, 1.0 / beta);
                   },
               },
               v_);
    return pts;
}

std::string to_string(BathLabel label) { return label == BathLabel::Hot ? "H" : "C"; }

Bath::Bath(BathLabel label, double beta, RateModel model)
    : label_(label), beta_(beta), model_(std::move(model)) {
    require_positive(beta, "beta");
}

double Bath::p_eq(double eps) const { return equilibrium_excitation(beta_, eps); }

RateSplit Bath::components(double eps) const { return rate_components(model_, eps, *this); }

std::string to_string(OperatingMode mode) {
    switch (mode) {
        case OperatingMode::Engine: return "E";
        case OperatingMode::Refrigerator: return "R";
        case OperatingMode::Accelerator: return "A";
        case OperatingMode::Heater: return "H";
    }
    return "?";
}

OperatingMode parse_mode(const std::string& tag) {
    if (tag == "E" || tag == "engine") return OperatingMode::Engine;
    if (tag == "R" || tag == "refrigerator") return OperatingMode::Refrigerator;
    if (tag == "A" || tag == "accelerator") return OperatingMode::Accelerator;
    if (tag == "H" || tag == "heater") return OperatingMode::Heater;
    throw DomainError("unknown operating mode '" + tag + "' (expected E, R, A or H)");
}

void ConstraintBox::validate() const {
    require_finite(eps_min, "box.eps_min");
    require_finite(eps_max, "box.eps_max");
    if (eps_min > eps_max) throw DomainError("box.eps_min must be <= box.eps_max");
}

double equilibrium_excitation(double beta, double eps) {
    require_positive(beta, "beta");
    require_finite(eps, "eps");
    const double x = beta * eps;
    if (x > 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double rate_value(const RateModel& model, double eps, double beta) { return model(eps, beta); }

RateSplit rate_components(const RateModel& model, double eps, const Bath& bath) {
    const double gamma = model(eps, bath.beta());
    const double p = equilibrium_excitation(bath.beta(), eps);
    // 1 - p computed as p(-eps) to keep full relative precision.
    return {gamma * p, gamma * equilibrium_excitation(bath.beta(), -eps)};
}

double mode_energy_quantum(OperatingMode mode, double eps_hot, double eps_cold) noexcept {
    switch (mode) {
        case OperatingMode::Engine: return eps_hot - eps_cold;
        case OperatingMode::Refrigerator: return -eps_cold;
        case OperatingMode::Accelerator: return eps_cold;
        case OperatingMode::Heater: return eps_cold - eps_hot;
    }
    return 0.0;
}

}  // namespace otto
