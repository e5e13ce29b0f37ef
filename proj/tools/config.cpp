#include "config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include "arrival/errors.hpp"
#include "arrival/grid.hpp"
#include "arrival/operators.hpp"

namespace arrival::cli {

using nlohmann::json;

namespace {

template <class T>
void read_field(const json& j, const std::string& key, T& out) {
    try {
        if constexpr (std::is_same_v<T, std::size_t>) {
            if (!j.is_number_integer() || j.get<long long>() < 0)
                throw ConfigError("config field '" + key + "': expected a non-negative integer");
        } else if constexpr (std::is_same_v<T, double>) {
            if (!j.is_number()) throw ConfigError("config field '" + key + "': expected a number");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!j.is_boolean()) throw ConfigError("config field '" + key + "': expected true or false");
        } else {
            if (!j.is_string()) throw ConfigError("config field '" + key + "': expected a string");
        }
        out = j.get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config field '" + key + "': " + e.what());
    }
}

using Binder = std::function<void(RunConfig&, const json&)>;

#define ARRIVAL_FIELD(name) {#name, [](RunConfig& c, const json& v) { read_field(v, #name, c.name); }}

const std::map<std::string, Binder>& binders() {
    static const std::map<std::string, Binder> table = {
        ARRIVAL_FIELD(preset),     ARRIVAL_FIELD(p0),          ARRIVAL_FIELD(x0),
        ARRIVAL_FIELD(sigma_p),    ARRIVAL_FIELD(state),       ARRIVAL_FIELD(mass),        ARRIVAL_FIELD(hbar),
        ARRIVAL_FIELD(n),          ARRIVAL_FIELD(p_max),       ARRIVAL_FIELD(tau_min),
        ARRIVAL_FIELD(tau_max),    ARRIVAL_FIELD(tau_count),   ARRIVAL_FIELD(tau_spacing),
        ARRIVAL_FIELD(family),     ARRIVAL_FIELD(kijowski),    ARRIVAL_FIELD(ked),
        ARRIVAL_FIELD(eigen_tau),  ARRIVAL_FIELD(length),      ARRIVAL_FIELD(mode),
        ARRIVAL_FIELD(x1),         ARRIVAL_FIELD(half_width),  ARRIVAL_FIELD(t1),
        ARRIVAL_FIELD(dt),         ARRIVAL_FIELD(x2_min),      ARRIVAL_FIELD(x2_max),
        ARRIVAL_FIELD(x2_step),    ARRIVAL_FIELD(smoothing),   ARRIVAL_FIELD(fit_tau_min),
        ARRIVAL_FIELD(fit_tau_max), ARRIVAL_FIELD(fit_tau_count), ARRIVAL_FIELD(p_min),
        ARRIVAL_FIELD(p_hi),       ARRIVAL_FIELD(p_count),
    };
    return table;
}

#undef ARRIVAL_FIELD

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError("config field '" + field + "': " + what);
}

}  // namespace

RunConfig preset(const std::string& name) {
    RunConfig c;
    c.preset = name;
    if (name == "fast") return c;
    if (name == "reflected") {
        c.n = 16384;
        c.p_max = 320.0;
        c.p0 = 0.5;
        c.x0 = -20.0;
        c.sigma_p = 0.125;
        c.state = "reflected";
        c.family = "new";
        c.tau_min = 1e-8;
        c.tau_max = 1e-7;
        c.tau_count = 11;
        c.tau_spacing = "log";
        c.ked = true;
        c.mode = "zeno";
        return c;
    }
    if (name == "broad" || name == "narrow") {
        // 4096 samples over |x| <= 120
        c.n = 4096;
        c.p_max = 4096 * (std::numbers::pi / 120.0) / 2.0;
        c.p0 = -5.0;
        c.mode = "conditional";
        if (name == "broad") {
            c.x0 = 60.0;
            c.sigma_p = 0.5 / 15.0;
            c.x1 = 40.0;
            c.t1 = 12.0;
        } else {
            c.x0 = 40.0;
            c.sigma_p = 0.5;
            c.x1 = 15.0;
            c.t1 = 5.0;
        }
        return c;
    }
    throw ConfigError("config field 'preset': unknown preset '" + name + "' (expected fast, reflected, broad, narrow)");
}

void apply_json(RunConfig& cfg, const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        const auto it = binders().find(key);
        if (it == binders().end()) throw ConfigError("config field '" + key + "': unknown field");
        it->second(cfg, value);
    }
}

json to_json(const RunConfig& c) {
    return json{
        {"preset", c.preset},         {"p0", c.p0},
        {"x0", c.x0},                 {"sigma_p", c.sigma_p},
        {"state", c.state},
        {"mass", c.mass},             {"hbar", c.hbar},
        {"n", c.n},                   {"p_max", c.p_max},
        {"tau_min", c.tau_min},       {"tau_max", c.tau_max},
        {"tau_count", c.tau_count},   {"tau_spacing", c.tau_spacing},
        {"family", c.family},         {"kijowski", c.kijowski},
        {"ked", c.ked},               {"eigen_tau", c.eigen_tau},
        {"length", c.length},         {"mode", c.mode},
        {"x1", c.x1},                 {"half_width", c.half_width},
        {"t1", c.t1},                 {"dt", c.dt},
        {"x2_min", c.x2_min},         {"x2_max", c.x2_max},
        {"x2_step", c.x2_step},       {"smoothing", c.smoothing},
        {"fit_tau_min", c.fit_tau_min}, {"fit_tau_max", c.fit_tau_max},
        {"fit_tau_count", c.fit_tau_count}, {"p_min", c.p_min},
        {"p_hi", c.p_hi},             {"p_count", c.p_count},
    };
}

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": invalid JSON");
    }
}

void validate(const RunConfig& c) {
    auto finite = [](double v) { return std::isfinite(v); };
    require(c.n >= 16 && c.n % 2 == 0, "n", "must be an even integer >= 16");
    require(finite(c.p_max) && c.p_max > 0.0, "p_max", "must be > 0");
    require(finite(c.mass) && c.mass > 0.0, "mass", "must be > 0");
    require(finite(c.hbar) && c.hbar > 0.0, "hbar", "must be > 0");
    require(finite(c.sigma_p) && c.sigma_p > 0.0, "sigma_p", "must be > 0");
    require(finite(c.p0), "p0", "must be finite");
    require(finite(c.x0), "x0", "must be finite");
    require(c.state == "gaussian" || c.state == "reflected", "state", "must be 'gaussian' or 'reflected'");
    require(c.tau_spacing == "linear" || c.tau_spacing == "log", "tau_spacing", "must be 'linear' or 'log'");
    require(c.tau_count >= 2, "tau_count", "must be >= 2");
    require(finite(c.tau_min) && finite(c.tau_max) && c.tau_max > c.tau_min, "tau_max", "must exceed tau_min");
    if (c.tau_spacing == "log") require(c.tau_min > 0.0, "tau_min", "must be > 0 for log spacing");
    try {
        parse_family(c.family);
    } catch (const DomainError&) {
        throw ConfigError("config field 'family': unknown family '" + c.family + "' (expected ab, kdm, mi, t3, new)");
    }
    require(finite(c.eigen_tau), "eigen_tau", "must be finite");
    require(finite(c.length) && c.length > 0.0, "length", "must be > 0");
    require(c.mode == "conditional" || c.mode == "crossing" || c.mode == "zeno", "mode",
            "must be conditional, crossing or zeno");
    require(finite(c.half_width) && c.half_width > 0.0, "half_width", "must be > 0");
    require(finite(c.x1), "x1", "must be finite");
    require(finite(c.t1) && c.t1 >= 0.0, "t1", "must be >= 0");
    require(finite(c.dt) && c.dt > 0.0, "dt", "must be > 0");
    require(finite(c.x2_step) && c.x2_step > 0.0, "x2_step", "must be > 0");
    require(finite(c.x2_min) && finite(c.x2_max) && c.x2_max > c.x2_min, "x2_max", "must exceed x2_min");
    require(finite(c.smoothing) && c.smoothing > 0.0, "smoothing", "must be > 0");
    require(c.fit_tau_min > 0.0 && c.fit_tau_max > c.fit_tau_min, "fit_tau_max", "must exceed fit_tau_min > 0");
    require(c.fit_tau_count >= 2, "fit_tau_count", "must be >= 2");
    require(finite(c.p_min) && finite(c.p_hi) && c.p_min > 0.0 && c.p_hi > c.p_min, "p_hi", "must exceed p_min > 0");
    require(c.p_count >= 1, "p_count", "must be >= 1");
}

}  // namespace arrival::cli
