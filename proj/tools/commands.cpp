#include "commands.hpp"

#include <cmath>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "arrival/errors.hpp"
#include "arrival/measurement.hpp"
#include "arrival/operators.hpp"
#include "arrival/verify.hpp"

namespace arrival::cli {

using nlohmann::json;

namespace {

GridSpec grid_of(const RunConfig& c) { return GridSpec(c.n, c.p_max); }
PhysConsts consts_of(const RunConfig& c) { return {c.mass, c.hbar}; }
GaussianSpec packet_of(const RunConfig& c) { return {c.p0, c.x0, c.sigma_p, consts_of(c)}; }

std::vector<double> spaced(double lo, double hi, std::size_t count, bool log) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
        out[i] = log ? lo * std::pow(hi / lo, f) : lo + (hi - lo) * f;
    }
    return out;
}

std::vector<double> tau_grid(const RunConfig& c) {
    return spaced(c.tau_min, c.tau_max, c.tau_count, c.tau_spacing == "log");
}

json check(const std::string& name, double value, double tolerance, bool passed) {
    return {{"name", name},
            {"value", std::isfinite(value) ? json(value) : json(nullptr)},
            {"tolerance", tolerance},
            {"passed", passed}};
}

WaveFunction input_state(const RunConfig& c) {
    if (c.state == "reflected") return make_reflected_state(packet_of(c), grid_of(c));
    return make_gaussian(packet_of(c), grid_of(c));
}

Table measure_conditional(const RunConfig& c) {
    const GridSpec g = grid_of(c);
    const auto psi = to_position(make_antisymmetrized(packet_of(c), g, HalfLine::positive));
    std::vector<double> xs;
    for (double x = c.x2_min; x <= c.x2_max + 1e-12; x += c.x2_step) xs.push_back(x);
    const auto r = conditional_distribution(psi, {c.x1, c.half_width}, c.t1, c.t1 + c.dt, xs, c.half_width);
    Table t{{"x2", "conditional_probability"}, {}, json::array()};
    for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back({xs[i], r.values[i]});
    t.checks.push_back(check("first_detection_probability", r.first_probability, 0.0, r.first_probability > 0.0));
    try {
        const auto pk = locate_two_peaks(xs, r.values, c.x1, c.smoothing);
        const double speed = std::abs(c.p0) / c.mass;
        const double width = 2.0 * c.half_width;
        const double dl = pk.left - (c.x1 - speed * c.dt);
        const double dr = pk.right - (c.x1 + speed * c.dt);
        t.checks.push_back(check("peak.direct_offset", dl, width, std::abs(dl) <= width));
        t.checks.push_back(check("peak.reflected_offset", dr, width, std::abs(dr) <= width));
        t.checks.push_back(check("peak.reflected_over_direct", pk.right_height / pk.left_height, 0.0, true));
    } catch (const NumericError&) {
        t.checks.push_back(check("peak.two_maxima_found", NAN, 0.0, false));
    }
    return t;
}

Table measure_crossing(const RunConfig& c) {
    const auto psi = make_gaussian(packet_of(c), grid_of(c));
    Table t{{"tau", "projector_form", "current_form"}, {}, json::array()};
    double worst = 0.0;
    for (double tau : tau_grid(c)) {
        const auto r = crossing_probability(psi, std::max(tau, 0.0));
        t.rows.push_back({tau, r.projector_form, r.current_form});
        worst = std::max(worst, std::abs(r.projector_form - r.current_form));
    }
    t.checks.push_back(check("crossing.form_agreement", worst, 1e-4, worst <= 1e-4));
    return t;
}

Table measure_zeno(const RunConfig& c) {
    const auto rs = build_reflected_state(packet_of(c), grid_of(c));
    const auto taus = spaced(c.fit_tau_min, c.fit_tau_max, c.fit_tau_count, true);
    const auto fit = small_time_current_law(rs, taus);
    Table t{{"tau", "current", "fitted_current", "exponent", "prefactor"}, {}, json::array()};
    for (std::size_t i = 0; i < taus.size(); ++i)
        t.rows.push_back({taus[i], fit.current[i], fit.amplitude * std::pow(taus[i], fit.exponent), fit.exponent,
                          fit.prefactor});
    t.checks.push_back(check("current_law.exponent", fit.exponent, 0.02, std::abs(fit.exponent - 0.5) <= 0.02));
    t.checks.push_back(check("current_law.fit_residual", fit.residual, 0.05, !fit.regime_warning));
    return t;
}

}  // namespace

Table cmd_distribution(const RunConfig& c) {
    const auto family = parse_family(c.family);
    const auto psi = input_state(c);
    const auto taus = tau_grid(c);
    const auto d = distribution(psi, family, taus);
    Table t;
    t.columns = {"tau", "pi_" + std::string(family_name(family))};
    if (c.kijowski) t.columns.push_back("kijowski");
    double ked_value = 0.0;
    if (c.ked) {
        t.columns.push_back("ked_reference");
        ked_value = low_momentum_coefficient(psi.consts) * kinetic_energy_density(psi).abs_p_delta_abs_p;
    }
    double low = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
        std::vector<double> row{taus[i], d.values[i]};
        if (c.kijowski) row.push_back(kijowski_distribution(psi, taus[i]));
        if (c.ked) row.push_back(taus[i] >= 0.0 ? ked_value * std::sqrt(taus[i]) : NAN);
        low = std::min(low, d.values[i]);
        t.rows.push_back(std::move(row));
    }
    t.checks.push_back(check("distribution.min_value", low, -1e-12, low >= -1e-12));
    if (c.tau_spacing == "linear")
        t.checks.push_back(check("distribution.integral", numerics::integrate(d.values, taus[1] - taus[0]), 0.0, true));
    return t;
}

Table cmd_verify(const RunConfig& c, bool& all_passed) {
    VerifySettings s;
    s.grid = grid_of(c);
    s.consts = consts_of(c);
    s.packet = packet_of(c);
    Table t;
    all_passed = true;
    for (const auto& r : run_verification(s)) {
        json j = check(r.name, r.value, r.tolerance, r.passed);
        if (!r.detail.empty()) j["detail"] = r.detail;
        t.checks.push_back(std::move(j));
        all_passed = all_passed && r.passed;
    }
    return t;
}

Table cmd_measure(const RunConfig& c) {
    if (c.mode == "conditional") return measure_conditional(c);
    if (c.mode == "zeno") return measure_zeno(c);
    return measure_crossing(c);
}

Table cmd_spectrum(const RunConfig& c) {
    const auto family = parse_family(c.family);
    const GridSpec g = grid_of(c);
    const PhysConsts k = consts_of(c);
    Table t{{"p", "re", "im", "abs"}, {}, json::array()};
    for (double p : g.momenta()) {
        const cdouble v = eigenstate(family, c.eigen_tau, p, k);
        t.rows.push_back({p, v.real(), v.imag(), std::abs(v)});
    }
    return t;
}

Table cmd_classical(const RunConfig& c) {
    Table t{{"x", "p", "arrival", "stopwatch", "current_moment"}, {}, json::array()};
    for (double p : spaced(c.p_min, c.p_hi, c.p_count, false)) {
        const double arrival = classical_arrival(c.x0, p, c.mass);
        const double horizon = 2.0 * std::max(arrival, 0.0) + 1.0;
        t.rows.push_back({c.x0, p, arrival, classical_stopwatch(c.x0, p, horizon, c.mass),
                          classical_current_moment(c.x0, p, c.mass)});
    }
    return t;
}

namespace {

struct Overrides {
    std::optional<std::string> config_path, preset, state, tau_spacing, family, mode;
    std::optional<double> p0, x0, sigma_p, mass, hbar, p_max, tau_min, tau_max, eigen_tau, length, x1, half_width,
        t1, dt, x2_min, x2_max, x2_step, smoothing, fit_tau_min, fit_tau_max, p_min, p_hi;
    std::optional<std::size_t> n, tau_count, fit_tau_count, p_count;
    bool kijowski = false, ked = false;
    std::string output = "-";
    std::string format = "csv";
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config_path, "JSON config file; flags override its fields");
    app->add_option("--preset", o.preset, "fast | reflected | broad | narrow");
    app->add_option("--output,-o", o.output, "output file, '-' for stdout");
    app->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    app->add_option("--p0", o.p0);
    app->add_option("--x0", o.x0);
    app->add_option("--sigma-p", o.sigma_p);
    app->add_option("--state", o.state, "gaussian | reflected");
    app->add_option("--mass", o.mass);
    app->add_option("--hbar", o.hbar);
    app->add_option("--n", o.n);
    app->add_option("--p-max", o.p_max);
    app->add_option("--tau-min", o.tau_min);
    app->add_option("--tau-max", o.tau_max);
    app->add_option("--tau-count", o.tau_count);
    app->add_option("--tau-spacing", o.tau_spacing, "linear | log");
    app->add_option("--family", o.family, "ab | kdm | mi | t3 | new");
}

RunConfig resolve(const Overrides& o) {
    json file;
    if (o.config_path) file = load_config_file(*o.config_path);
    std::string name = "fast";
    if (file.is_object() && file.contains("preset") && file["preset"].is_string()) name = file["preset"].get<std::string>();
    if (o.preset) name = *o.preset;
    RunConfig c = preset(name);
    if (o.config_path) apply_json(c, file);
    c.preset = name;
    auto set = [](auto& field, const auto& opt) {
        if (opt) field = *opt;
    };
    set(c.p0, o.p0);
    set(c.x0, o.x0);
    set(c.sigma_p, o.sigma_p);
    set(c.state, o.state);
    set(c.mass, o.mass);
    set(c.hbar, o.hbar);
    set(c.n, o.n);
    set(c.p_max, o.p_max);
    set(c.tau_min, o.tau_min);
    set(c.tau_max, o.tau_max);
    set(c.tau_count, o.tau_count);
    set(c.tau_spacing, o.tau_spacing);
    set(c.family, o.family);
    set(c.mode, o.mode);
    set(c.eigen_tau, o.eigen_tau);
    set(c.length, o.length);
    set(c.x1, o.x1);
    set(c.half_width, o.half_width);
    set(c.t1, o.t1);
    set(c.dt, o.dt);
    set(c.x2_min, o.x2_min);
    set(c.x2_max, o.x2_max);
    set(c.x2_step, o.x2_step);
    set(c.smoothing, o.smoothing);
    set(c.fit_tau_min, o.fit_tau_min);
    set(c.fit_tau_max, o.fit_tau_max);
    set(c.fit_tau_count, o.fit_tau_count);
    set(c.p_min, o.p_min);
    set(c.p_hi, o.p_hi);
    set(c.p_count, o.p_count);
    if (o.kijowski) c.kijowski = true;
    if (o.ked) c.ked = true;
    validate(c);
    return c;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Arrival-time operators, distributions and measurement models"};
    app.require_subcommand(1);
    Overrides o;

    auto* dist = app.add_subcommand("distribution", "arrival-time distribution for one eigenstate family");
    add_common(dist, o);
    dist->add_flag("--kijowski", o.kijowski, "add a Kijowski column");
    dist->add_flag("--ked", o.ked, "add the low-momentum reference column");

    auto* verify = app.add_subcommand("verify", "operator and measurement invariant suite");
    add_common(verify, o);

    auto* measure = app.add_subcommand("measure", "measurement-model simulations");
    add_common(measure, o);
    measure->add_option("--mode", o.mode, "conditional | crossing | zeno");
    measure->add_option("--x1", o.x1);
    measure->add_option("--half-width", o.half_width);
    measure->add_option("--t1", o.t1);
    measure->add_option("--dt", o.dt, "t2 - t1");
    measure->add_option("--x2-min", o.x2_min);
    measure->add_option("--x2-max", o.x2_max);
    measure->add_option("--x2-step", o.x2_step);
    measure->add_option("--smoothing", o.smoothing);
    measure->add_option("--fit-tau-min", o.fit_tau_min);
    measure->add_option("--fit-tau-max", o.fit_tau_max);
    measure->add_option("--fit-tau-count", o.fit_tau_count);

    auto* spectrum = app.add_subcommand("spectrum", "eigenstate table on the momentum grid");
    add_common(spectrum, o);
    spectrum->add_option("--eigen-tau", o.eigen_tau);

    auto* classical = app.add_subcommand("classical", "classical arrival, stopwatch and current-moment table");
    add_common(classical, o);
    classical->add_option("--p-min", o.p_min);
    classical->add_option("--p-hi", o.p_hi);
    classical->add_option("--p-count", o.p_count);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const RunConfig cfg = resolve(o);
        Table table;
        bool passed = true;
        if (dist->parsed()) table = cmd_distribution(cfg);
        else if (verify->parsed()) table = cmd_verify(cfg, passed);
        else if (measure->parsed()) table = cmd_measure(cfg);
        else if (spectrum->parsed()) table = cmd_spectrum(cfg);
        else table = cmd_classical(cfg);

        std::string text;
        if (o.format == "json") text = to_json_text(to_json(cfg), table);
        else if (verify->parsed()) text = checks_to_csv(table.checks);
        else text = to_csv(table);
        write_output(o.output, text);

        if (!passed) {
            for (const auto& c : table.checks)
                if (!c["passed"].get<bool>()) std::cerr << "check failed: " << c["name"].get<std::string>() << "\n";
            return 1;
        }
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace arrival::cli
