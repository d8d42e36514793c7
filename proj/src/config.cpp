#include "otto/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "otto/errors.hpp"

namespace otto::config {

namespace {

struct Param {
    const char* name;
    bool integer;
    double fallback;
};

const std::vector<Param>& params_of(const std::string& kind) {
    static const std::vector<Param> constant{{"k", false, 1.0}};
    static const std::vector<Param> fermi{{"k", false, 1.0}, {"n", true, 0}};
    static const std::vector<Param> bose{{"k", false, 1.0}, {"n", true, 0}, {"eps_floor", false, 1e-9}};
    static const std::vector<Param> lorentz{{"gamma", false, 1.0}, {"sigma", false, 0.15}, {"eps_bar", false, 1.0}};
    static const std::vector<Param> gauss{{"k", false, 1.0}, {"x_bar", false, 2.0}};
    if (kind == "constant") return constant;
    if (kind == "fermi_power") return fermi;
    if (kind == "bose_power") return bose;
    if (kind == "lorentzian") return lorentz;
    if (kind == "gaussian_x") return gauss;
    throw ConfigError("unknown rate model '" + kind +
                      "' (expected constant, fermi_power, bose_power, lorentzian, gaussian_x)");
}

bool is_model_path(const std::string& p) { return p == "hot" || p == "cold"; }

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

const char* type_name(const Json& j) {
    if (j.is_boolean()) return "a boolean";
    if (j.is_number_integer()) return "an integer";
    if (j.is_number()) return "a number";
    if (j.is_string()) return "a string";
    if (j.is_array()) return "an array";
    if (j.is_object()) return "an object";
    return "null";
}

void check_type(const Json& expected, const Json& got, const std::string& path) {
    bool ok;
    if (expected.is_number_integer()) ok = got.is_number_integer();
    else if (expected.is_number()) ok = got.is_number();
    else if (expected.is_boolean()) ok = got.is_boolean();
    else if (expected.is_string()) ok = got.is_string();
    else if (expected.is_array()) ok = got.is_array();
    else ok = expected.type() == got.type();
    if (!ok)
        throw ConfigError("key '" + path + "' must be " + type_name(expected) + ", got " +
                          type_name(got));
    if (expected.is_array() && !expected.empty() && expected.front().is_number()) {
        for (const auto& v : got)
            if (!v.is_number()) throw ConfigError("key '" + path + "' must be an array of numbers");
    }
}

void merge(Json& target, const Json& patch, const std::string& path) {
    if (!patch.is_object())
        throw ConfigError((path.empty() ? std::string("configuration") : "key '" + path + "'") +
                          " must be an object");
    for (auto it = patch.begin(); it != patch.end(); ++it) {
        const std::string p = join(path, it.key());
        if (!target.contains(it.key())) throw ConfigError("unknown key '" + p + "'");
        Json& t = target[it.key()];
        if (is_model_path(p)) {
            rate_model_from_json(it.value(), p);
            t = it.value();
        } else if (t.is_object()) {
            merge(t, it.value(), p);
        } else {
            check_type(t, it.value(), p);
            t = it.value();
        }
    }
}

// Line of the first occurrence of "key" in text, 0 if absent.
int locate(const std::string& text, const std::string& dotted) {
    const auto dot = dotted.rfind('.');
    const std::string key = "\"" + (dot == std::string::npos ? dotted : dotted.substr(dot + 1)) + "\"";
    const auto pos = text.find(key);
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

std::string quoted_key(const std::string& msg) {
    const auto a = msg.find('\'');
    const auto b = msg.find('\'', a + 1);
    if (a == std::string::npos || b == std::string::npos) return {};
    return msg.substr(a + 1, b - a - 1);
}

}  // namespace

Json default_config() {
    return Json::parse(R"({
  "beta_H": 1.0,
  "beta_C": 2.0,
  "hot": {"model": "fermi_power", "k": 1.0, "n": 0},
  "cold": {"model": "fermi_power", "k": 1.0, "n": 0},
  "mode": "E",
  "box": {"eps_min": -20.0, "eps_max": 20.0, "accelerator_feasibility": true},
  "seed": 1,
  "threads": 0,
  "simulate": {"shape": "square_wave", "eps_H": 2.0, "eps_C": 1.0, "tau_H": 0.5, "tau_C": 0.5,
               "tau": 0.0, "step": 0.0},
  "sweep_emp": {"models": ["F0", "F1", "B0", "B1"],
                "eta_c": [0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5,
                          0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95],
                "eps_max": 60.0},
  "sweep_cmp": {"C_c": [1.0, 2.0, 5.0, 10.0, 20.0]},
  "sweep_finite_time": {"kind": "heater", "eps": 2.0,
                        "x": [0.01, 0.03, 0.1, 0.3, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0, 20.0, 50.0]},
  "sweep_quench": {"dt_gamma": 0.001,
                   "tau_over_dt": [0.01, 0.0129, 0.0167, 0.0215, 0.0278, 0.0359, 0.0464,
                                   0.0599, 0.0774, 0.1]},
  "expansion": {"eta_min": 0.001, "eta_max": 0.05, "samples": 12, "eps_max": 40.0},
  "verify": {"search_samples": 100000, "checks": []}
})");
}

Json parse_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << source << ":" << line << ":" << col << ": JSON syntax error: " << e.what();
        throw ConfigError(os.str());
    }
}

Json load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

Json resolve(const Json& user) {
    Json cfg = default_config();
    merge(cfg, user, "");
    baths(cfg);
    box(cfg);
    mode(cfg);
    return cfg;
}

void apply_override(Json& resolved, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' is not of the form key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    Json value;
    try {
        value = Json::parse(text);
    } catch (const Json::parse_error&) {
        value = text;
    }
    std::vector<std::string> parts;
    std::stringstream ks(key);
    for (std::string part; std::getline(ks, part, '.');) {
        if (part.empty()) throw ConfigError("override key '" + key + "' has an empty component");
        parts.push_back(part);
    }
    if (parts.size() == 2 && is_model_path(parts[0])) {
        Json model = resolved[parts[0]];
        model[parts[1]] = value;
        rate_model_from_json(model, parts[0]);
        resolved[parts[0]] = model;
    } else {
        Json patch = value;
        for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = Json{{*it, patch}};
        merge(resolved, patch, "");
    }
    baths(resolved);
    box(resolved);
    mode(resolved);
}

Json build(const std::string& path, const std::vector<std::string>& overrides) {
    Json cfg;
    if (path.empty()) {
        cfg = resolve(Json::object());
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot read configuration file '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        const std::string text = ss.str();
        const Json user = parse_text(text, path);
        try {
            cfg = resolve(user);
        } catch (const ConfigError& e) {
            const int line = locate(text, quoted_key(e.what()));
            if (line == 0) throw ConfigError(path + ": " + e.what());
            throw ConfigError(path + ":" + std::to_string(line) + ": " + e.what());
        }
    }
    for (const auto& o : overrides) {
        try {
            apply_override(cfg, o);
        } catch (const ConfigError& e) {
            throw ConfigError("--set " + o + ": " + e.what());
        }
    }
    return cfg;
}

RateModel rate_model_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError("key '" + where + "' must be a rate model object");
    if (!j.contains("model") || !j["model"].is_string())
        throw ConfigError("key '" + where + ".model' must name the rate model");
    const std::string kind = j["model"].get<std::string>();
    const auto& ps = params_of(kind);
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "model") continue;
        bool known = false;
        for (const auto& p : ps) known = known || it.key() == p.name;
        if (!known)
            throw ConfigError("unknown key '" + where + "." + it.key() + "' for model " + kind);
    }
    auto get = [&](const Param& p) {
        if (!j.contains(p.name)) return p.fallback;
        const Json& v = j[p.name];
        if (p.integer ? !v.is_number_integer() : !v.is_number())
            throw ConfigError("key '" + where + "." + p.name + "' must be " +
                              (p.integer ? "an integer" : "a number"));
        return v.get<double>();
    };
    try {
        if (kind == "constant") return RateModel::constant(get(ps[0]));
        if (kind == "fermi_power") return RateModel::fermi_power(get(ps[0]), static_cast<int>(get(ps[1])));
        if (kind == "bose_power")
            return RateModel::bose_power(get(ps[0]), static_cast<int>(get(ps[1])), get(ps[2]));
        if (kind == "lorentzian") return RateModel::lorentzian(get(ps[0]), get(ps[1]), get(ps[2]));
        return RateModel::gaussian_x(get(ps[0]), get(ps[1]));
    } catch (const DomainError& e) {
        throw ConfigError("key '" + where + "': " + e.what());
    }
}

RateModel rate_model_from_tag_or_json(const Json& j, const std::string& where) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s.size() == 2 && (s[0] == 'F' || s[0] == 'B') && s[1] >= '0' && s[1] <= '9') {
            const int n = s[1] - '0';
            return s[0] == 'F' ? RateModel::fermi_power(1.0, n) : RateModel::bose_power(1.0, n);
        }
        throw ConfigError("key '" + where + "': unknown model tag '" + s + "' (expected F<n> or B<n>)");
    }
    return rate_model_from_json(j, where);
}

Json rate_model_to_json(const RateModel& model) {
    return std::visit(
        [](const auto& m) -> Json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, rates::Constant>)
                return {{"model", "constant"}, {"k", m.k}};
            else if constexpr (std::is_same_v<T, rates::FermiPower>)
                return {{"model", "fermi_power"}, {"k", m.k}, {"n", m.n}};
            else if constexpr (std::is_same_v<T, rates::BosePower>)
                return {{"model", "bose_power"}, {"k", m.k}, {"n", m.n}, {"eps_floor", m.eps_floor}};
            else if constexpr (std::is_same_v<T, rates::Lorentzian>)
                return {{"model", "lorentzian"}, {"gamma", m.gamma}, {"sigma", m.sigma}, {"eps_bar", m.eps_bar}};
            else
                return {{"model", "gaussian_x"}, {"k", m.k}, {"x_bar", m.x_bar}};
        },
        model.variant());
}

BathPair baths(const Json& cfg) {
    try {
        return {Bath(BathLabel::Hot, cfg["beta_H"].get<double>(), rate_model_from_json(cfg["hot"], "hot")),
                Bath(BathLabel::Cold, cfg["beta_C"].get<double>(), rate_model_from_json(cfg["cold"], "cold"))};
    } catch (const DomainError& e) {
        throw ConfigError(std::string("baths: ") + e.what());
    }
}

ConstraintBox box(const Json& cfg) {
    const Json& b = cfg["box"];
    ConstraintBox out{b["eps_min"].get<double>(), b["eps_max"].get<double>(),
                      b["accelerator_feasibility"].get<bool>()};
    try {
        out.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("key 'box': ") + e.what());
    }
    return out;
}

OperatingMode mode(const Json& cfg) {
    try {
        return parse_mode(cfg["mode"].get<std::string>());
    } catch (const Error& e) {
        throw ConfigError(std::string("key 'mode': ") + e.what());
    }
}

}  // namespace otto::config
