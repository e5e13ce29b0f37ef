#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "json.hpp"

namespace arrival::cli {

// Bad configuration input; maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string preset = "fast";

    double p0 = 10.0;
    double x0 = -5.0;
    double sigma_p = 1.0;
    std::string state = "gaussian";  // gaussian | reflected
    double mass = 1.0;
    double hbar = 1.0;
    std::size_t n = 1024;
    double p_max = 40.0;

    double tau_min = 0.0;
    double tau_max = 1.5;
    std::size_t tau_count = 601;
    std::string tau_spacing = "linear";  // linear | log
    std::string family = "new";
    bool kijowski = false;     // companion Kijowski column
    bool ked = false;          // companion low-momentum reference column

    double eigen_tau = 1.0;    // spectrum
    double length = 0.5;       // dwell length L

    std::string mode = "crossing";  // measure: conditional | crossing | zeno
    double x1 = 40.0;
    double half_width = 1.0;
    double t1 = 12.0;
    double dt = 1.5;
    double x2_min = 1.0;
    double x2_max = 118.0;
    double x2_step = 0.125;
    double smoothing = 0.5;    // peak-location smoothing width
    double fit_tau_min = 1e-3;
    double fit_tau_max = 1e-2;
    std::size_t fit_tau_count = 11;

    double p_min = 0.5;        // classical table
    double p_hi = 20.0;
    std::size_t p_count = 40;
};

// fast | reflected | broad | narrow
RunConfig preset(const std::string& name);

// Applies the fields present in `j` on top of `cfg`; unknown keys and wrong
// types raise ConfigError naming the field.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& cfg);

// Reads a JSON config file; syntax errors report line and column.
nlohmann::json load_config_file(const std::string& path);

void validate(const RunConfig& cfg);

}  // namespace arrival::cli
