// thermal.hpp: baths, dissipation-rate models and thermodynamic primitives.
//
// Units: hbar = k_B = 1. Energies are expressed in units of 1/beta_H and
// rates in units of the model amplitude.
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace otto {

// --------------------------------------------------------------------------
// Rate models

namespace rates {

struct Constant {
    double k;
};

// k |eps|^n
struct FermiPower {
    double k;
    int n;
};

// k |eps|^n coth(beta |eps| / 2). For n = 0 the rate diverges at eps = 0;
// evaluation below eps_floor raises SingularityError.
struct BosePower {
    double k;
    int n;
    double eps_floor = 1e-9;
};

// gamma sigma^2 / (sigma^2 + (eps - eps_bar)^2)
struct Lorentzian {
    double gamma;
    double sigma;
    double eps_bar;
};

// k exp(-(beta eps - x_bar)^2). Depends on eps and beta only through beta*eps.
struct GaussianX {
    double k;
    double x_bar;
};

}  // namespace rates

class RateModel {
public:
    using Variant = std::variant<rates::Constant, rates::FermiPower, rates::BosePower,
                                 rates::Lorentzian, rates::GaussianX>;

    RateModel(Variant v);  // validates parameters, throws DomainError

    static RateModel constant(double k);
    static RateModel fermi_power(double k, int n);
    static RateModel bose_power(double k, int n, double eps_floor = 1e-9);
    static RateModel lorentzian(double gamma, double sigma, double eps_bar);
    static RateModel gaussian_x(double k, double x_bar);

    // Effective dissipation rate Gamma(eps) at inverse temperature beta.
    double operator()(double eps, double beta) const;
    // d Gamma / d eps; zero-slope convention at the kink of |eps|^n.
    double derivative(double eps, double beta) const;

    const Variant& variant() const noexcept { return v_; }

    // "constant", "fermi_power", "bose_power", "lorentzian", "gaussian_x".
    std::string kind() const;
    // Canonical one-line description with all parameters, e.g. "F1(k=1)".
    std::string fingerprint() const;
    // Overall amplitude: k for the power laws, gamma for the Lorentzian.
    double amplitude() const noexcept;
    // True when Gamma depends on (eps, beta) only through beta*eps.
    bool depends_on_beta_eps_only() const noexcept;
    // Energies where the rate has structure the optimizer grid must resolve.
    std::vector<double> feature_points(double beta) const;

private:
    Variant v_;
};

// --------------------------------------------------------------------------
// Baths

enum class BathLabel { Hot, Cold };

std::string to_string(BathLabel label);

struct RateSplit {
    double up;    // Gamma^(+), excitation
    double down;  // Gamma^(-), relaxation
};

class Bath {
public:
    Bath(BathLabel label, double beta, RateModel model);

    BathLabel label() const noexcept { return label_; }
    double beta() const noexcept { return beta_; }
    const RateModel& model() const noexcept { return model_; }

    double rate(double eps) const { return model_(eps, beta_); }
    double p_eq(double eps) const;
    RateSplit components(double eps) const;

private:
    BathLabel label_;
    double beta_;
    RateModel model_;
};

struct BathPair {
    Bath hot;
    Bath cold;

    const Bath& operator[](BathLabel label) const noexcept {
        return label == BathLabel::Hot ? hot : cold;
    }
    // r = k_H / k_C
    double coupling_ratio() const noexcept {
        return hot.model().amplitude() / cold.model().amplitude();
    }
};

// --------------------------------------------------------------------------
// Machine modes and gap constraints

enum class OperatingMode { Engine, Refrigerator, Accelerator, Heater };

// "E", "R", "A", "H"
std::string to_string(OperatingMode mode);
OperatingMode parse_mode(const std::string& tag);

struct ConstraintBox {
    double eps_min;
    double eps_max;
    // Mode A only: restrict to gaps with <J_H> >= 0.
    bool accelerator_feasibility = true;

    double width() const noexcept { return eps_max - eps_min; }
    bool contains(double eps) const noexcept { return eps >= eps_min && eps <= eps_max; }
    void validate() const;  // throws DomainError

    static ConstraintBox symmetric(double delta) { return {-delta, delta, true}; }
};

// --------------------------------------------------------------------------
// Primitives

// 1 / (1 + exp(beta eps)), overflow-safe.
double equilibrium_excitation(double beta, double eps);

double rate_value(const RateModel& model, double eps, double beta);

RateSplit rate_components(const RateModel& model, double eps, const Bath& bath);

// The energy quantum multiplying the fast-cycle current bracket for each mode:
// E: eps_H - eps_C, R: -eps_C, A: eps_C, H: eps_C - eps_H.
double mode_energy_quantum(OperatingMode mode, double eps_hot, double eps_cold) noexcept;

}  // namespace otto
