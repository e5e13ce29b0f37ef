#include "arrival/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "arrival/errors.hpp"
#include "arrival/operators.hpp"

namespace arrival {

namespace {

constexpr double pi = std::numbers::pi;

void require_grid_position(const WaveFunction& psi, const char* what) {
    if (psi.rep != Representation::position || !psi.on_grid())
        throw DomainError(std::string(what) + " needs a state on the conjugate position grid");
}

double peak(const WaveFunction& psi) {
    double mx = 0.0;
    for (const auto& v : psi.values) mx = std::max(mx, std::abs(v));
    return mx;
}

bool allowed(Propagator side, double x) {
    switch (side) {
        case Propagator::halfline_dirichlet_pos: return x > 0.0;
        case Propagator::halfline_dirichlet_neg: return x < 0.0;
        case Propagator::free: return true;
    }
    return true;
}

void check_support(const WaveFunction& psi, Propagator side) {
    const double pk = peak(psi);
    for (std::size_t j = 0; j < psi.values.size(); ++j)
        if (!allowed(side, psi.abscissae[j]) && std::abs(psi.values[j]) > 1e-8 * pk)
            throw DomainError("state is not supported on the half-line of the propagator");
}

WaveFunction propagate(const WaveFunction& psi, double dt, Propagator prop) {
    if (dt == 0.0) return psi;
    if (prop == Propagator::free) return free_propagate(psi, dt);
    return halfline_propagate(psi, dt, 0.0, prop);
}

// Integral of |psi(x)|^2 over (0, x_max) for the band-limited interpolant of
// a momentum-grid state; closed form per pair of plane waves.
double positive_half_probability(const WaveFunction& psi_p) {
    const GridSpec& g = psi_p.grid;
    const double hbar = psi_p.consts.hbar;
    const std::size_t n = g.n();
    const double xm = g.x_max(hbar);
    // I(d) = integral_0^{x_max} exp(i d dp x / hbar) dx, d = k - j.
    std::vector<cdouble> kernel(2 * n - 1);
    for (std::size_t i = 0; i < kernel.size(); ++i) {
        const long d = static_cast<long>(i) - static_cast<long>(n - 1);
        if (d == 0) {
            kernel[i] = xm;
        } else {
            const double sgn = (d % 2 == 0) ? 1.0 : -1.0;
            kernel[i] = (sgn - 1.0) / cdouble(0.0, static_cast<double>(d) * g.dp() / hbar);
        }
    }
    cdouble s{};
    for (std::size_t j = 0; j < n; ++j) {
        cdouble row{};
        for (std::size_t k = 0; k < n; ++k) row += kernel[k + n - 1 - j] * psi_p.values[k];
        s += std::conj(psi_p.values[j]) * row;
    }
    return std::real(s) * g.dp() * g.dp() / (2.0 * pi * hbar);
}

}  // namespace

void WindowSpec::validate() const {
    if (!std::isfinite(center)) throw DomainError("window center must be finite");
    if (!(half_width > 0.0) || !std::isfinite(half_width)) throw DomainError("window half-width must be positive");
}

void MeasurementChain::validate() const {
    require_grid_position(initial, "measurement chain");
    double t = t0;
    bool first = true;
    const double xm = initial.grid.x_max(initial.consts.hbar);
    for (const auto& e : events) {
        e.window.validate();
        if (!std::isfinite(e.time)) throw DomainError("event times must be finite");
        if (first ? e.time < t : e.time <= t) throw DomainError("event times must be strictly increasing");
        if (e.window.center - e.window.half_width < -xm * (1 + 1e-12) ||
            e.window.center + e.window.half_width > xm * (1 + 1e-12))
            throw DomainError("measurement window lies outside the position grid");
        if (propagator == Propagator::halfline_dirichlet_pos && e.window.center - e.window.half_width < 0.0)
            throw DomainError("window extends into x < 0 for the x > 0 half-line");
        if (propagator == Propagator::halfline_dirichlet_neg && e.window.center + e.window.half_width > 0.0)
            throw DomainError("window extends into x > 0 for the x < 0 half-line");
        t = e.time;
        first = false;
    }
}

WaveFunction free_propagate(const WaveFunction& psi, double dt) {
    require_grid_position(psi, "free propagation");
    return to_position(evolve_free(to_momentum(psi), dt));
}

WaveFunction halfline_propagate(const WaveFunction& psi, double t1, double t0, Propagator side,
                                HalflineMethod method) {
    require_grid_position(psi, "half-line propagation");
    if (side == Propagator::free) throw DomainError("half-line propagation needs a half-line side");
    if (!(t1 > t0)) throw DomainError("half-line propagation needs t1 > t0");
    check_support(psi, side);
    const double dt = t1 - t0;
    const GridSpec& grid = psi.grid;
    const std::size_t n = grid.n();
    const auto& x = psi.abscissae;

    if (method == HalflineMethod::spectral) {
        WaveFunction ext = psi;
        for (std::size_t j = 0; j < n; ++j)
            ext.values[j] = allowed(side, x[j]) ? psi.values[j] : -psi.values[grid.mirror(j)];
        WaveFunction out = free_propagate(ext, dt);
        for (std::size_t j = 0; j < n; ++j)
            if (!allowed(side, x[j])) out.values[j] = 0.0;
        return out;
    }

    const double m = psi.consts.mass;
    const double hbar = psi.consts.hbar;
    const double dx = grid.dx(hbar);
    const cdouble pref = std::sqrt(m / (2.0 * pi * hbar * dt)) * std::polar(1.0, -pi / 4.0);
    const double c = m / (2.0 * hbar * dt);
    WaveFunction out = psi;
    for (std::size_t i = 0; i < n; ++i) {
        if (!allowed(side, x[i])) {
            out.values[i] = 0.0;
            continue;
        }
        cdouble s{};
        for (std::size_t j = 0; j < n; ++j) {
            if (!allowed(side, x[j]) || psi.values[j] == 0.0) continue;
            const double dm = x[i] - x[j];
            const double dpl = x[i] + x[j];
            s += (std::polar(1.0, c * dm * dm) - std::polar(1.0, c * dpl * dpl)) * psi.values[j];
        }
        out.values[i] = pref * dx * s;
    }
    return out;
}

WaveFunction window_project(const WaveFunction& psi, const WindowSpec& w) {
    require_grid_position(psi, "window projection");
    w.validate();
    const double xm = psi.grid.x_max(psi.consts.hbar);
    if (w.center + w.half_width < -xm || w.center - w.half_width > xm)
        throw DomainError("window lies outside the position grid");
    WaveFunction out = psi;
    for (std::size_t j = 0; j < out.values.size(); ++j)
        if (!w.contains(out.abscissae[j])) out.values[j] = 0.0;
    return out;
}

WaveFunction run_chain(const MeasurementChain& chain) {
    chain.validate();
    WaveFunction state = chain.initial;
    double t = chain.t0;
    for (const auto& e : chain.events) {
        state = propagate(state, e.time - t, chain.propagator);
        state = window_project(state, e.window);
        t = e.time;
    }
    return state;
}

double sequential_probability(const MeasurementChain& chain) { return run_chain(chain).norm_squared(); }

ConditionalResult conditional_distribution(const WaveFunction& psi, const WindowSpec& first, double t1,
                                           double t2, std::span<const double> x2_centers,
                                           double half_width, Propagator propagator) {
    require_grid_position(psi, "conditional distribution");
    if (!(t1 >= 0.0) || !(t2 > t1)) throw DomainError("conditional distribution needs 0 <= t1 < t2");
    MeasurementChain chain{psi, {{t1, first}}, propagator, 0.0};
    const WaveFunction after1 = run_chain(chain);
    const double p1 = after1.norm_squared();
    if (!(p1 > 1e-12)) throw DomainError("first detection probability is below 1e-12; cannot condition on it");
    const WaveFunction evolved = propagate(after1, t2 - t1, propagator);
    ConditionalResult out{p1, std::vector<double>(x2_centers.size())};
    for (std::size_t i = 0; i < x2_centers.size(); ++i)
        out.values[i] = window_project(evolved, {x2_centers[i], half_width}).norm_squared() / p1;
    return out;
}

std::vector<double> smooth_profile(std::span<const double> x, std::span<const double> values, double width) {
    if (x.size() != values.size() || x.size() < 3) throw DomainError("profile needs >= 3 matching samples");
    if (!(width > 0.0)) throw DomainError("smoothing width must be > 0");
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        double wsum = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double d = (x[j] - x[i]) / width;
            if (std::abs(d) > 6.0) continue;
            const double w = std::exp(-0.5 * d * d);
            acc += w * values[j];
            wsum += w;
        }
        out[i] = acc / wsum;
    }
    return out;
}

TwoPeaks locate_two_peaks(std::span<const double> x, std::span<const double> values, double split,
                          double smoothing) {
    const std::vector<double> v = smooth_profile(x, values, smoothing);
    auto peak = [&](bool right_side, double& height) {
        std::size_t best = 0;
        height = -1.0;
        for (std::size_t i = 1; i + 1 < v.size(); ++i) {
            if ((x[i] > split) != right_side) continue;
            if (v[i] > v[i - 1] && v[i] >= v[i + 1] && v[i] > height) {
                height = v[i];
                best = i;
            }
        }
        if (best == 0) throw NumericError("no interior maximum on one side of the split");
        const double a = v[best - 1], b = v[best], c = v[best + 1];
        const double denom = a - 2.0 * b + c;
        const double shift = denom != 0.0 ? 0.5 * (a - c) / denom : 0.0;
        return x[best] + shift * (x[best + 1] - x[best]);
    };
    TwoPeaks out{};
    out.left = peak(false, out.left_height);
    out.right = peak(true, out.right_height);
    return out;
}

CrossingResult crossing_probability(const WaveFunction& psi, double tau, std::size_t n_t) {
    if (psi.rep != Representation::momentum || !psi.on_grid())
        throw DomainError("crossing probability needs a momentum-grid state");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError("crossing time must be >= 0");
    const WaveFunction px = to_position(psi);
    WaveFunction right = px;
    WaveFunction left = px;
    for (std::size_t j = 0; j < px.values.size(); ++j)
        (px.abscissae[j] > 0.0 ? left : right).values[j] = 0.0;
    if (tau == 0.0) return {0.0, 0.0};

    const WaveFunction left_p = to_momentum(left);
    const WaveFunction right_p = to_momentum(right);
    const double proj = positive_half_probability(evolve_free(left_p, tau)) +
                        (right_p.norm_squared() - positive_half_probability(evolve_free(right_p, tau)));

    // A state cut at x = 0 has J(t) ~ t^{-1/2} at the start; t = s^2 makes the
    // integrand smooth.
    if (n_t == 0) n_t = std::max<std::size_t>(201, static_cast<std::size_t>(std::ceil(tau * 800.0)));
    if (n_t % 2 == 0) ++n_t;
    const double ds = std::sqrt(tau) / static_cast<double>(n_t - 1);
    std::vector<double> flux(n_t);
    for (std::size_t i = 1; i < n_t; ++i) {
        const double s = ds * static_cast<double>(i);
        flux[i] = 2.0 * s * (current_expectation(left_p, s * s) - current_expectation(right_p, s * s));
    }
    return {proj, numerics::integrate(flux, ds)};
}

CurrentLawFit small_time_current_law(const WaveFunction& reflected, cdouble slope,
                                     std::span<const double> tau_samples) {
    if (tau_samples.size() < 2) throw DomainError("current-law fit needs at least two tau samples");
    const std::size_t n = tau_samples.size();
    CurrentLawFit fit{};
    fit.current.resize(n);
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = tau_samples[i];
        if (!(tau > 0.0)) throw DomainError("current-law tau samples must be positive");
        fit.current[i] = current_expectation(reflected, tau);
        if (!(fit.current[i] > 0.0))
            throw NumericError("current is not positive at tau = " + std::to_string(tau));
        lx[i] = std::log(tau);
        ly[i] = std::log(fit.current[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("current-law tau samples must not all coincide");
    fit.exponent = sxy / sxx;
    fit.amplitude = std::exp(my - fit.exponent * mx);
    fit.residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double model = fit.amplitude * std::pow(tau_samples[i], fit.exponent);
        fit.residual = std::max(fit.residual, std::fabs(fit.current[i] / model - 1.0));
    }
    fit.regime_warning = fit.residual > 0.05;
    const double hm = reflected.consts.hbar / reflected.consts.mass;
    const double s2 = std::norm(slope);
    if (!(s2 > 0.0)) throw DomainError("edge slope must be nonzero");
    fit.prefactor = fit.amplitude / (std::pow(hm, 1.5) * s2);
    return fit;
}

CurrentLawFit small_time_current_law(const ReflectedState& reflected, std::span<const double> tau_samples) {
    return small_time_current_law(reflected.psi, reflected.edge_slope, tau_samples);
}

double fidelity(const WaveFunction& a, const WaveFunction& b) {
    const double na = a.norm_squared();
    const double nb = b.norm_squared();
    if (!(na > 0.0) || !(nb > 0.0)) throw DomainError("fidelity needs nonzero states");
    return std::norm(inner_product(a, b)) / (na * nb);
}

double classical_arrival(double x, double p, double mass) {
    if (p == 0.0) throw DomainError("classical arrival time needs p != 0");
    return -mass * x / p;
}

double classical_stopwatch(double x, double p, double horizon, double mass) {
    if (!(p > 0.0)) throw DomainError("stopwatch integral needs p > 0");
    if (!(mass > 0.0)) throw DomainError("mass must be positive");
    auto inside = [&](double t) { return -x - p * t / mass > 0.0; };
    if (!inside(0.0)) return 0.0;
    if (inside(horizon))
        throw DomainError("stopwatch horizon T is too short: the particle is still in x < 0 at T");
    // Bracket the exit time by bisection on the indicator, then integrate the
    // constant pieces with Simpson.
    double lo = 0.0;
    double hi = horizon;
    for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (inside(mid) ? lo : hi) = mid;
    }
    const double edge = 0.5 * (lo + hi);
    const double ones[3] = {1.0, 1.0, 1.0};
    return numerics::integrate(std::span<const double>(ones, 3), 0.5 * edge);
}

double classical_current_moment(double x, double p, double mass) {
    if (p == 0.0) throw DomainError("current moment needs p != 0");
    // t* = -m x / p with weight (p/m) * (m/|p|) = sign(p) from the delta-function
    // Jacobian; multiplying by the sign keeps the result exact.
    const double t_star = -mass * x / p;
    return p > 0.0 ? t_star : -t_star;
}

}  // namespace arrival
