#pragma once

#include <span>
#include <vector>

#include "arrival/states.hpp"

namespace arrival {

struct WindowSpec {
    double center = 0.0;
    double half_width = 1.0;

    void validate() const;
    bool contains(double x) const { return x >= center - half_width && x <= center + half_width; }
};

enum class Propagator { free, halfline_dirichlet_neg, halfline_dirichlet_pos };

struct MeasurementEvent {
    double time;
    WindowSpec window;
};

// Position-representation chain on the conjugate grid of `initial.grid`.
struct MeasurementChain {
    WaveFunction initial;
    std::vector<MeasurementEvent> events;
    Propagator propagator = Propagator::free;
    double t0 = 0.0;

    void validate() const;
};

enum class HalflineMethod {
    spectral,  // odd extension, exact free evolution, restriction
    kernel,    // direct-minus-image kernel by midpoint quadrature
};

// Free evolution of a conjugate-grid position state.
WaveFunction free_propagate(const WaveFunction& psi, double dt);

// Dirichlet half-line evolution from t0 to t1 on the side selected by `side`
// (halfline_dirichlet_pos keeps x > 0).
WaveFunction halfline_propagate(const WaveFunction& psi, double t1, double t0, Propagator side,
                                HalflineMethod method = HalflineMethod::spectral);

WaveFunction window_project(const WaveFunction& psi, const WindowSpec& w);

// Propagate-project alternation; returns the final unnormalized state.
WaveFunction run_chain(const MeasurementChain& chain);
double sequential_probability(const MeasurementChain& chain);

struct ConditionalResult {
    double first_probability;
    std::vector<double> values;  // p(x2, t2 | x1, t1) per candidate window
};

ConditionalResult conditional_distribution(const WaveFunction& psi, const WindowSpec& first, double t1,
                                           double t2, std::span<const double> x2_centers,
                                           double half_width,
                                           Propagator propagator = Propagator::halfline_dirichlet_pos);

// Gaussian smoothing of a sampled profile on uniform abscissae; removes
// fringes finer than `width` before peak location.
std::vector<double> smooth_profile(std::span<const double> x, std::span<const double> values, double width);

struct TwoPeaks {
    double left;   // dominant maximum of the smoothed profile with x < split
    double right;  // dominant maximum with x > split
    double left_height;
    double right_height;
};

// Peaks are refined by a parabola through the three nearest samples.
TwoPeaks locate_two_peaks(std::span<const double> x, std::span<const double> values, double split,
                          double smoothing);

struct CrossingResult {
    double projector_form;  // <P- P(tau) P-> + <P P-(tau) P>
    double current_form;    // integral of the projected currents over [0, tau]
};

// psi in momentum representation; n_t = 0 picks the time quadrature size.
CrossingResult crossing_probability(const WaveFunction& psi, double tau, std::size_t n_t = 0);

struct CurrentLawFit {
    double exponent;
    double amplitude;   // J ~ amplitude tau^exponent
    double prefactor;   // amplitude / ((hbar/m)^{3/2} |psi'(0)|^2)
    double residual;    // max relative deviation of J from the fit
    bool regime_warning;
    std::vector<double> current;
};

CurrentLawFit small_time_current_law(const WaveFunction& reflected, cdouble slope,
                                     std::span<const double> tau_samples);
CurrentLawFit small_time_current_law(const ReflectedState& reflected, std::span<const double> tau_samples);

double fidelity(const WaveFunction& a, const WaveFunction& b);

double classical_arrival(double x, double p, double mass = 1.0);
double classical_stopwatch(double x, double p, double horizon, double mass = 1.0);
double classical_current_moment(double x, double p, double mass = 1.0);

}  // namespace arrival
