#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "arrival/errors.hpp"
#include "arrival/operators.hpp"

namespace arrival {

namespace {

using State = std::array<double, 2>;  // (y, y')

// y'' = (2/p) y' - b p^2 y
State rhs(double p, const State& s, double b) { return {s[1], 2.0 / p * s[1] - b * p * p * s[0]}; }

// Odd solution y = sum_k c_k p^{3+4k}, c_0 = 1.
State series_start(double p, double b) {
    double c = 1.0;
    double y = 0.0;
    double dy = 0.0;
    for (int k = 0; k < 200; ++k) {
        if (k > 0) c *= -b / ((3.0 + 4.0 * k) * (4.0 * k));
        const double e = 3.0 + 4.0 * k;
        const double t = c * std::pow(p, e);
        y += t;
        dy += e * t / p;
        if (std::fabs(t) <= 1e-18 * std::fabs(y)) return {y, dy};
    }
    throw NumericError("eigenvalue ODE series start did not converge; choose a smaller start momentum");
}

// Adaptive Dormand-Prince 5(4) from p0 to p1.
class Dopri5 {
public:
    Dopri5(double b, double rtol) : b_(b), rtol_(rtol) {}

    State advance(double p0, double p1, State y, double& h) {
        constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        constexpr double a21 = 1.0 / 5;
        constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                         a54 = -212.0 / 729;
        constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                         a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                         b6 = 11.0 / 84;
        constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                         e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
        double p = p0;
        int steps = 0;
        while (p < p1) {
            if (++steps > 10'000'000) throw NumericError("eigenvalue ODE exceeded the step budget");
            const bool last = p + h >= p1;
            const double hh = last ? p1 - p : h;
            if (hh < 1e-14 * std::max(1.0, std::fabs(p)))
                throw NumericError("eigenvalue ODE step size collapsed at p = " + std::to_string(p));
            auto at = [&](const State& base, std::initializer_list<std::pair<double, const State*>> ks) {
                State r = base;
                for (const auto& [w, k] : ks)
                    for (int i = 0; i < 2; ++i) r[i] += hh * w * (*k)[i];
                return r;
            };
            const State k1 = rhs(p, y, b_);
            const State k2 = rhs(p + c2 * hh, at(y, {{a21, &k1}}), b_);
            const State k3 = rhs(p + c3 * hh, at(y, {{a31, &k1}, {a32, &k2}}), b_);
            const State k4 = rhs(p + c4 * hh, at(y, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), b_);
            const State k5 = rhs(p + c5 * hh, at(y, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), b_);
            const State k6 =
                rhs(p + hh, at(y, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), b_);
            const State yn = at(y, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
            const State k7 = rhs(p + hh, yn, b_);
            double err = 0.0;
            for (int i = 0; i < 2; ++i) {
                const double e = hh * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                       e7 * k7[i]);
                scale_[i] = std::max(scale_[i], std::max(std::fabs(y[i]), std::fabs(yn[i])));
                const double sc = rtol_ * scale_[i];
                err = std::max(err, std::fabs(e) / sc);
            }
            if (!std::isfinite(err)) throw NumericError("eigenvalue ODE produced non-finite values");
            if (err <= 1.0) {
                p = last ? p1 : p + hh;
                y = yn;
            }
            const double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
            const double hnew = hh * std::clamp(fac, 0.2, 5.0);
            if (!last || err > 1.0) h = hnew;
        }
        return y;
    }

private:
    double b_;
    double rtol_;
    // Running amplitude scale per component; the solution oscillates through
    // zero, so a pointwise relative test would stall the step size there.
    State scale_{0.0, 0.0};
};

std::size_t panel_count(double tau, double p_lo, double p_hi, const PhysConsts& c) {
    const double dz = (p_hi * p_hi - p_lo * p_lo) * tau / (2.0 * c.mass * c.hbar);
    return std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(dz / 6.0)));
}

// Panel edges equally spaced in p^2 so each carries a similar phase range.
std::vector<double> panel_edges(std::size_t panels, double p_lo, double p_hi) {
    std::vector<double> e(panels + 1);
    for (std::size_t i = 0; i <= panels; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(panels);
        e[i] = std::sqrt(p_lo * p_lo + s * (p_hi * p_hi - p_lo * p_lo));
    }
    return e;
}

constexpr std::size_t cheb_nodes = 40;

void check_interval(double tau, double p_lo, double p_hi) {
    if (!(tau > 0.0)) throw DomainError("residual checks need tau > 0");
    if (!(p_lo > 0.0) || !(p_hi > p_lo)) throw DomainError("residual interval must satisfy 0 < p_lo < p_hi");
}

}  // namespace

WaveFunction solve_eigen_ode(double tau, const GridSpec& grid, const PhysConsts& consts) {
    consts.validate();
    if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("solve_eigen_ode needs tau > 0");
    const double mh = consts.mass * consts.hbar;
    const double b = (tau / mh) * (tau / mh);
    const std::size_t n = grid.n();
    const std::size_t first = n / 2;  // smallest positive momentum
    std::vector<cdouble> values(n);

    State y = series_start(grid.momentum(first), b);
    Dopri5 solver(b, 1e-12);
    double h = grid.dp() / 4.0;
    for (std::size_t k = first; k < n; ++k) {
        const double p = grid.momentum(k);
        if (k > first) y = solver.advance(grid.momentum(k - 1), p, y, h);
        const double sym = mh / (tau * p) * y[1];
        values[k] = cdouble(sym, y[0]);
        values[grid.mirror(k)] = cdouble(sym, -y[0]);
    }
    return WaveFunction::in_momentum(grid, consts, std::move(values));
}

double eigen_residual(double tau, double p_lo, double p_hi, const PhysConsts& consts) {
    check_interval(tau, p_lo, p_hi);
    const double mh = consts.mass * consts.hbar;
    const auto edges = panel_edges(panel_count(tau, p_lo, p_hi, consts), p_lo, p_hi);
    double rmax = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        const auto p = numerics::chebyshev_nodes(cheb_nodes, a, b);
        std::vector<cdouble> sym(p.size()), anti(p.size()), sym_over_p(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            const cdouble fp = eigenstate(EigenFamily::new_op, tau, p[j], consts);
            const cdouble fm = eigenstate(EigenFamily::new_op, tau, -p[j], consts);
            sym[j] = 0.5 * (fp + fm);
            anti[j] = 0.5 * (fp - fm);
            sym_over_p[j] = sym[j] / p[j];
        }
        const auto d_sym = numerics::chebyshev_derivative(sym_over_p, a, b);
        const auto d_anti = numerics::chebyshev_derivative(anti, a, b);
        for (std::size_t j = 0; j < p.size(); ++j) {
            const cdouble lhs = cdouble(0.0, -mh) * (d_sym[j] + d_anti[j] / p[j]);
            const cdouble rhs = tau * (sym[j] + anti[j]);
            rmax = std::max(rmax, std::abs(lhs - rhs));
            scale = std::max(scale, std::abs(rhs));
        }
    }
    return rmax / scale;
}

double second_order_residual(double tau, double nu, double p_lo, double p_hi, const PhysConsts& consts) {
    check_interval(tau, p_lo, p_hi);
    const double mh = consts.mass * consts.hbar;
    const double b = (tau / mh) * (tau / mh);
    const auto edges = panel_edges(panel_count(tau, p_lo, p_hi, consts), p_lo, p_hi);
    double rmax = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto p = numerics::chebyshev_nodes(cheb_nodes, edges[i], edges[i + 1]);
        std::vector<cdouble> y(p.size());
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double z = p[j] * p[j] * tau / (2.0 * mh);
            y[j] = std::pow(p[j], 1.5) * numerics::bessel_j(nu, z);
        }
        const auto dy = numerics::chebyshev_derivative(y, edges[i], edges[i + 1]);
        const auto d2y = numerics::chebyshev_derivative(dy, edges[i], edges[i + 1]);
        for (std::size_t j = 0; j < p.size(); ++j) {
            const cdouble pot = b * p[j] * p[j] * y[j];
            const cdouble r = d2y[j] - 2.0 / p[j] * dy[j] + pot;
            rmax = std::max(rmax, std::abs(r));
            scale = std::max({scale, std::abs(d2y[j]), std::abs(pot)});
        }
    }
    return rmax / scale;
}

}  // namespace arrival
