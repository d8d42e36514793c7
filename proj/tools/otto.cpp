// otto: command-line front end for the fast-driving Otto cycle library.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>

#include "otto/analysis.hpp"
#include "otto/config.hpp"
#include "otto/dynamics.hpp"
#include "otto/errors.hpp"
#include "otto/finitetime.hpp"
#include "otto/io.hpp"
#include "otto/optimizer.hpp"
#include "otto/parallel.hpp"
#include "otto/verify.hpp"
#include "otto/version.hpp"

using otto::config::Json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Invocation {
    std::string command;
    std::string config_path;
    std::string out_path;
    std::vector<std::string> overrides;
    std::optional<int> threads;
    std::optional<std::uint64_t> seed;
};

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw otto::ConfigError("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

int resolve_threads(const Invocation& inv, const Json& cfg) {
    if (inv.threads) return *inv.threads;
    if (const char* env = std::getenv("OTTO_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 0)
            throw otto::ConfigError(std::string("OTTO_THREADS must be a non-negative integer, got '") + env + "'");
        if (v > 0) return static_cast<int>(v);
    }
    return cfg["threads"].get<int>();
}

void csv_preamble(otto::io::CsvWriter& w, const Invocation& inv, const Json& cfg) {
    w.comment(std::string("otto ") + otto::kVersion + " " + inv.command);
    w.comment("config: " + cfg.dump());
}

Json envelope(const Invocation& inv, const Json& cfg) {
    Json j;
    j["tool"] = "otto";
    j["version"] = otto::kVersion;
    j["command"] = inv.command;
    j["config"] = cfg;
    return j;
}

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json boundary_json(const otto::BoundaryFlags& b) {
    return {{"eps_H_min", b.eps_H_min}, {"eps_H_max", b.eps_H_max},
            {"eps_C_min", b.eps_C_min}, {"eps_C_max", b.eps_C_max}};
}

otto::MaxPowerOptions serial() {
    otto::MaxPowerOptions o;
    o.threads = 1;
    return o;
}

int cmd_simulate(const Invocation& inv, const Json& cfg, std::ostream& os) {
    const Json& s = cfg["simulate"];
    const auto b = otto::config::baths(cfg);
    const std::string shape = s["shape"].get<std::string>();
    const double eH = s["eps_H"].get<double>(), eC = s["eps_C"].get<double>();
    const double tH = s["tau_H"].get<double>(), tC = s["tau_C"].get<double>();
    std::optional<otto::Protocol> proto;
    if (shape == "square_wave") proto = otto::Protocol::square_wave(eH, eC, tH, tC);
    else if (shape == "trapezoid") proto = otto::Protocol::trapezoid(eH, eC, tH, tC, s["tau"].get<double>());
    else throw otto::ConfigError("key 'simulate.shape' must be square_wave or trapezoid");
    double step = s["step"].get<double>();
    if (step <= 0.0) step = std::min(proto->period() / 400.0, proto->shortest_segment() / 10.0);
    const auto lc = otto::limit_cycle(*proto, b, step);
    const auto mode = otto::config::mode(cfg);

    otto::io::CsvWriter w(os);
    csv_preamble(w, inv, cfg);
    w.comment("p0 = " + otto::io::format_double(lc.p0) + ", d = " + otto::io::format_double(lc.monodromy_d));
    w.comment("avg_J_H = " + otto::io::format_double(lc.avg_J_H) +
              ", avg_J_C = " + otto::io::format_double(lc.avg_J_C) + ", power[" +
              otto::to_string(mode) + "] = " + otto::io::format_double(otto::average_power(lc, mode)));
    w.header({"t", "p", "eps", "lambda_H", "J_H", "J_C"});
    for (const auto& x : lc.periodic_p.samples) w.row({x.t, x.p, x.eps, x.lambda_H, x.J_H, x.J_C});
    return 0;
}

int cmd_optimize(const Invocation& inv, const Json& cfg, std::ostream& os, int threads) {
    const auto b = otto::config::baths(cfg);
    const auto mode = otto::config::mode(cfg);
    otto::MaxPowerOptions opts;
    opts.threads = threads;
    const auto r = otto::max_power(mode, b, otto::config::box(cfg), opts);
    Json res;
    res["mode"] = otto::to_string(mode);
    res["operable"] = r.operable;
    res["p_max"] = r.p_max;
    res["eps_H_star"] = num(r.eps_H_star);
    res["eps_C_star"] = num(r.eps_C_star);
    res["theta_star"] = num(r.theta_star);
    res["boundary"] = boundary_json(r.boundary);
    res["hot_model"] = r.hot_model;
    res["cold_model"] = r.cold_model;
    if (r.operable && mode == otto::OperatingMode::Engine) res["efficiency"] = num(otto::emp(r));
    if (r.operable && mode == otto::OperatingMode::Refrigerator) res["cop"] = num(otto::cmp(r));
    if (b.hot.beta() <= b.cold.beta()) {
        const auto bs = otto::carnot_bounds(b.hot.beta(), b.cold.beta());
        res["bounds"] = {{"eta_c", bs.eta_c}, {"eta_CA", bs.eta_CA}, {"eta_SS", bs.eta_SS}, {"C_c", num(bs.C_c)}};
    }
    Json out = envelope(inv, cfg);
    out["result"] = res;
    os << out.dump(2) << "\n";
    return 0;
}

int cmd_sweep_emp(const Invocation& inv, const Json& cfg, std::ostream& os, int threads) {
    const Json& s = cfg["sweep_emp"];
    const double bH = cfg["beta_H"].get<double>();
    const double eps_max = s["eps_max"].get<double>();
    std::vector<otto::RateModel> models;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < s["models"].size(); ++i) {
        const std::string where = "sweep_emp.models[" + std::to_string(i) + "]";
        models.push_back(otto::config::rate_model_from_tag_or_json(s["models"][i], where));
        names.push_back(models.back().fingerprint());
    }
    const auto etas = s["eta_c"].get<std::vector<double>>();
    for (double e : etas)
        if (!(e > 0.0 && e < 1.0)) throw otto::ConfigError("key 'sweep_emp.eta_c' values must lie in (0, 1)");
    struct Row {
        double emp = kNaN, eH = kNaN, eC = kNaN, p = 0.0;
        bool boundary = false;
    };
    std::vector<Row> rows(models.size() * etas.size());
    otto::parallel_for(rows.size(), threads, [&](std::size_t k) {
        const auto& m = models[k / etas.size()];
        const double eta = etas[k % etas.size()];
        const otto::BathPair b{otto::Bath(otto::BathLabel::Hot, bH, m),
                               otto::Bath(otto::BathLabel::Cold, bH / (1.0 - eta), m)};
        const auto r = otto::max_power(otto::OperatingMode::Engine, b, {0.0, eps_max / bH}, serial());
        Row& row = rows[k];
        row.p = r.p_max;
        row.boundary = r.boundary.any();
        if (r.operable) {
            row.eH = r.eps_H_star;
            row.eC = r.eps_C_star;
            row.emp = otto::emp(r);
        }
    });
    otto::io::CsvWriter w(os);
    csv_preamble(w, inv, cfg);
    w.header({"eta_c", "model", "emp_over_etac", "eta_CA", "eta_SS", "eps_H_star", "eps_C_star", "p_max", "boundary"});
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double eta = etas[k % etas.size()];
        const auto bs = otto::carnot_bounds(bH, bH / (1.0 - eta));
        const Row& r = rows[k];
        w.row({eta, names[k / etas.size()], r.emp / eta, bs.eta_CA, bs.eta_SS, r.eH, r.eC, r.p,
               static_cast<long long>(r.boundary)});
    }
    return 0;
}

int cmd_sweep_cmp(const Invocation& inv, const Json& cfg, std::ostream& os, int threads) {
    const auto base = otto::config::baths(cfg);
    const auto box = otto::config::box(cfg);
    const double bH = base.hot.beta();
    const auto ccs = cfg["sweep_cmp"]["C_c"].get<std::vector<double>>();
    for (double c : ccs)
        if (!(c > 0.0) || !std::isfinite(c)) throw otto::ConfigError("key 'sweep_cmp.C_c' values must be finite and > 0");
    auto at = [&](double bC) {
        const otto::BathPair b{otto::Bath(otto::BathLabel::Hot, bH, base.hot.model()),
                               otto::Bath(otto::BathLabel::Cold, bC, base.cold.model())};
        return otto::max_power(otto::OperatingMode::Refrigerator, b, box, serial());
    };
    const auto r0 = at(bH);
    const double C0 = r0.operable ? otto::cmp(r0) : kNaN;
    std::vector<otto::OptimizationResult> res(ccs.size());
    otto::parallel_for(ccs.size(), threads, [&](std::size_t i) { res[i] = at(bH * (1.0 + 1.0 / ccs[i])); });
    otto::io::CsvWriter w(os);
    csv_preamble(w, inv, cfg);
    w.header({"C_c", "beta_C", "cmp", "cmp_over_Cc", "C0", "universal", "eps_H_star", "eps_C_star", "p_max", "boundary"});
    for (std::size_t i = 0; i < ccs.size(); ++i) {
        const auto& r = res[i];
        const double c = r.operable ? otto::cmp(r) : kNaN;
        w.row({ccs[i], bH * (1.0 + 1.0 / ccs[i]), c, c / ccs[i], C0, otto::universal_cop_curve(C0, ccs[i]),
               r.eps_H_star, r.eps_C_star, r.p_max, static_cast<long long>(r.boundary.any())});
    }
    return 0;
}

int cmd_sweep_finite_time(const Invocation& inv, const Json& cfg, std::ostream& os) {
    const Json& s = cfg["sweep_finite_time"];
    const auto xs = s["x"].get<std::vector<double>>();
    for (double x : xs)
        if (!(x > 0.0) || !std::isfinite(x)) throw otto::ConfigError("key 'sweep_finite_time.x' values must be > 0");
    const std::string kind = s["kind"].get<std::string>();
    const auto b = otto::config::baths(cfg);
    otto::io::CsvWriter w(os);
    if (kind == "heater") {
        const otto::BathPair one{otto::Bath(otto::BathLabel::Hot, b.hot.beta(), b.hot.model()),
                                 otto::Bath(otto::BathLabel::Cold, b.hot.beta(), b.hot.model())};
        const double eps = s["eps"].get<double>();
        const double g = one.hot.rate(eps);
        if (!(g > 0.0) || one.hot.rate(-eps) != g)
            throw otto::DomainError("heater sweep needs an even hot-bath rate that is positive at +-eps");
        const double ideal = otto::power_objective(otto::OperatingMode::Heater, eps, -eps, one);
        csv_preamble(w, inv, cfg);
        w.header({"dt_gamma", "factor", "simulated"});
        for (double x : xs) {
            const double dt = x / g;
            const auto lc = otto::limit_cycle(otto::Protocol::square_wave(eps, -eps, dt / 2, dt / 2), one);
            w.row({x, otto::heater_finite_period_factor(x),
                   otto::average_power(lc, otto::OperatingMode::Heater) / ideal});
        }
        return 0;
    }
    if (kind != "optimum") throw otto::ConfigError("key 'sweep_finite_time.kind' must be heater or optimum");
    const auto mode = otto::config::mode(cfg);
    const auto opt = otto::max_power(mode, b, otto::config::box(cfg));
    if (!opt.operable) throw otto::InfeasibleError("mode " + otto::to_string(mode) + " cannot deliver positive power");
    const double gH = b.hot.rate(opt.eps_H_star), gC = b.cold.rate(opt.eps_C_star);
    const double th = otto::optimal_time_split(gH, gC);
    const double ideal = otto::power_objective(mode, opt.eps_H_star, opt.eps_C_star, b);
    csv_preamble(w, inv, cfg);
    w.comment("eps_H* = " + otto::io::format_double(opt.eps_H_star) +
              ", eps_C* = " + otto::io::format_double(opt.eps_C_star));
    w.header({"dt_gamma_max", "dt", "factor", "simulated", "regime"});
    for (double x : xs) {
        const double dt = x / std::max(gH, gC);
        const auto rep = otto::finite_period_factor(dt, gH, gC);
        const auto lc = otto::limit_cycle(
            otto::Protocol::square_wave(opt.eps_H_star, opt.eps_C_star, th * dt, (1.0 - th) * dt), b);
        w.row({x, dt, rep.factor, otto::average_power(lc, mode) / ideal, otto::to_string(rep.regime)});
    }
    return 0;
}

int cmd_sweep_quench(const Invocation& inv, const Json& cfg, std::ostream& os, int threads) {
    const Json& s = cfg["sweep_quench"];
    const auto b = otto::config::baths(cfg);
    const auto mode = otto::config::mode(cfg);
    const auto ratios = s["tau_over_dt"].get<std::vector<double>>();
    otto::MaxPowerOptions mo;
    mo.threads = threads;
    const auto opt = otto::max_power(mode, b, otto::config::box(cfg), mo);
    if (!opt.operable) throw otto::InfeasibleError("mode " + otto::to_string(mode) + " cannot deliver positive power");
    const double gH = b.hot.rate(opt.eps_H_star), gC = b.cold.rate(opt.eps_C_star);
    const double th = otto::optimal_time_split(gH, gC);
    const double dt = s["dt_gamma"].get<double>() / std::max(gH, gC);
    std::vector<otto::QuenchReport> reps(ratios.size());
    otto::parallel_for(ratios.size(), threads, [&](std::size_t i) {
        reps[i] = otto::quench_power(opt.eps_H_star, opt.eps_C_star, th * dt, (1.0 - th) * dt,
                                     ratios[i] * dt, b, mode);
    });
    otto::io::CsvWriter w(os);
    csv_preamble(w, inv, cfg);
    w.comment("eps_H* = " + otto::io::format_double(opt.eps_H_star) +
              ", eps_C* = " + otto::io::format_double(opt.eps_C_star) + ", dt = " + otto::io::format_double(dt));
    w.header({"tau_over_dt", "tau", "power", "ideal_power", "deficit", "p_bar", "W_H", "W_HC", "W_C", "W_CH"});
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        const auto& r = reps[i];
        w.row({ratios[i], r.tau, r.power, r.ideal_power, r.deficit, r.p_bar, r.W_H, r.W_HC, r.W_C, r.W_CH});
    }
    return 0;
}

int cmd_expansion(const Invocation& inv, const Json& cfg, std::ostream& os) {
    const Json& s = cfg["expansion"];
    const auto b = otto::config::baths(cfg);
    otto::ExpansionWindow win;
    win.eta_min = s["eta_min"].get<double>();
    win.eta_max = s["eta_max"].get<double>();
    win.samples = s["samples"].get<int>();
    const double bH = b.hot.beta();
    const auto fit = otto::emp_expansion_fit(b.hot.model(), b.cold.model(), bH, win, s["eps_max"].get<double>());
    const auto cf = otto::emp_expansion_closed_form(b.hot.model(), b.cold.model(), bH);
    Json res;
    res["fit"] = {{"a1", fit.a1}, {"a2", fit.a2}, {"a3", fit.a3}, {"a2_stderr", fit.a2_stderr},
                  {"a2_tolerance", fit.a2_tolerance}, {"b1", fit.b1}, {"b2", fit.b2}, {"m0", fit.m0},
                  {"residual", fit.residual}, {"eta_c", fit.eta_c}, {"emp_over_eta_c", fit.emp_over_eta_c}};
    res["closed_form"] = {{"m0", cf.m0}, {"b2", cf.b2}, {"a2", cf.a2}, {"g0", cf.g0},
                          {"dg_H", cf.dg_H}, {"dg_C", cf.dg_C}};
    res["a2_agreement"] = std::abs(cf.a2 - fit.a2) <= fit.a2_tolerance;
    Json out = envelope(inv, cfg);
    out["result"] = res;
    os << out.dump(2) << "\n";
    return 0;
}

int cmd_verify(const Invocation& inv, const Json& cfg, std::ostream& os, int threads) {
    otto::VerifyOptions vo;
    vo.search_samples = cfg["verify"]["search_samples"].get<std::int64_t>();
    vo.seed = cfg["seed"].get<std::uint64_t>();
    vo.threads = threads;
    if (vo.search_samples < 1) throw otto::ConfigError("key 'verify.search_samples' must be >= 1");
    std::vector<std::string> names = cfg["verify"]["checks"].get<std::vector<std::string>>();
    if (names.empty()) names = otto::verification_check_names();
    for (const auto& n : names) {
        const auto& all = otto::verification_check_names();
        if (std::find(all.begin(), all.end(), n) == all.end())
            throw otto::ConfigError("key 'verify.checks': unknown check '" + n + "'");
    }
    Json checks = Json::array();
    bool ok = true;
    for (const auto& n : names) {
        const auto r = otto::run_check(n, vo);
        std::cerr << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        checks.push_back({{"name", r.name}, {"summary", r.summary}, {"passed", r.passed},
                          {"detail", r.detail}, {"seconds", r.seconds}});
        ok = ok && r.passed;
    }
    Json out = envelope(inv, cfg);
    out["result"] = {{"passed", ok}, {"checks", checks}};
    os << out.dump(2) << "\n";
    return ok ? 0 : 4;
}

int run(const Invocation& inv) {
    Json cfg = otto::config::build(inv.config_path, inv.overrides);
    if (inv.seed) cfg["seed"] = *inv.seed;
    const int threads = resolve_threads(inv, cfg);
    otto::set_default_threads(threads);
    Output out(inv.out_path);
    std::ostream& os = out.stream();
    const std::string& c = inv.command;
    if (c == "simulate") return cmd_simulate(inv, cfg, os);
    if (c == "optimize") return cmd_optimize(inv, cfg, os, threads);
    if (c == "sweep-emp") return cmd_sweep_emp(inv, cfg, os, threads);
    if (c == "sweep-cmp") return cmd_sweep_cmp(inv, cfg, os, threads);
    if (c == "sweep-finite-time") return cmd_sweep_finite_time(inv, cfg, os);
    if (c == "sweep-quench") return cmd_sweep_quench(inv, cfg, os, threads);
    if (c == "expansion") return cmd_expansion(inv, cfg, os);
    return cmd_verify(inv, cfg, os, threads);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"otto: fast-driving two-level Otto cycles"};
    app.set_version_flag("--version", otto::kVersion);
    app.require_subcommand(1);
    Invocation inv;
    const std::vector<std::pair<const char*, const char*>> commands{
        {"simulate", "limit-cycle trajectory of a square-wave or trapezoid protocol (CSV)"},
        {"optimize", "maximum power over the stroke gaps (JSON)"},
        {"sweep-emp", "efficiency at maximum power against eta_c (CSV)"},
        {"sweep-cmp", "COP at maximum cooling power against C_c (CSV)"},
        {"sweep-finite-time", "finite-period power factor (CSV)"},
        {"sweep-quench", "power deficit from finite quench time (CSV)"},
        {"expansion", "small eta_c expansion of the EMP (JSON)"},
        {"verify", "run the numerical verification suite (JSON)"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", inv.config_path, "JSON configuration file");
        sub->add_option("--out", inv.out_path, "output file (default stdout)");
        sub->add_option("--set", inv.overrides, "override, dotted.key=value (repeatable)")
            ->expected(1)
            ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
        sub->add_option("--threads", inv.threads, "worker threads (default OTTO_THREADS, then config)")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--seed", inv.seed, "random seed");
        sub->callback([&inv, n = std::string(name)] { inv.command = n; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    try {
        return run(inv);
    } catch (const otto::ConfigError& e) {
        std::cerr << "otto: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const otto::Error& e) {
        std::cerr << "otto: " << e.what() << "\n";
        return 3;
    } catch (const Json::exception& e) {
        std::cerr << "otto: configuration error: " << e.what() << "\n";
        return 2;
    }
}
