#include "arrival/verify.hpp"

#include <cmath>
#include <exception>
#include <functional>

#include "arrival/measurement.hpp"
#include "arrival/operators.hpp"

namespace arrival {

namespace {

struct Probe {
    std::vector<cdouble> v;
};

Probe make_probe(const GridSpec& grid, const PhysConsts& c) {
    const double scale = grid.p_max() / 40.0;
    return {probe_vector(grid, 20.0 * scale, 1.5 * scale, 1.0 / scale, c.hbar)};
}

// [H,T] v - i hbar eps v, max over interior rows, in units of hbar.
double commutator_h_error(const GridSpec& grid, const PhysConsts& c) {
    const auto v = make_probe(grid, c).v;
    const auto comm = commutator(build_operator(OperatorKind::hamiltonian, grid, c),
                                 build_operator(OperatorKind::t_new_via_kdm, grid, c));
    OperatorMatrix target = build_operator(OperatorKind::sign_p, grid, c);
    target.m *= cdouble(0.0, c.hbar);
    return action_deviation(comm, target, v) / c.hbar;
}

double commutator_xi_error(const GridSpec& grid, const PhysConsts& c, OperatorKind t, double half) {
    const auto v = make_probe(grid, c).v;
    const auto comm = commutator(build_operator(OperatorKind::pseudo_energy, grid, c), build_operator(t, grid, c));
    OperatorMatrix target = build_operator(OperatorKind::reflection, grid, c);
    target.m *= cdouble(0.0, c.hbar * half);
    SparseMatrix id(target.m.rows(), target.m.cols());
    id.setIdentity();
    target.m += cdouble(0.0, c.hbar) * id;
    return action_deviation(comm, target, v) / c.hbar;
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifySettings& s) {
    const GridSpec& g = s.grid;
    const PhysConsts& c = s.consts;
    std::vector<CheckResult> out;
    auto check = [&](const std::string& name, double tol, const std::function<double()>& f,
                     const std::string& detail = "") {
        try {
            const double v = f();
            out.push_back({name, v, tol, std::isfinite(v) && v <= tol, detail});
        } catch (const std::exception& e) {
            out.push_back({name, NAN, tol, false, e.what()});
        }
    };

    const std::pair<const char*, OperatorKind> hermitian_kinds[] = {
        {"hamiltonian", OperatorKind::hamiltonian},     {"pseudo_energy", OperatorKind::pseudo_energy},
        {"reflection", OperatorKind::reflection},       {"sign_p", OperatorKind::sign_p},
        {"t_kdm", OperatorKind::t_kdm},                 {"t_new_sym", OperatorKind::t_new_sym},
        {"t_new_via_kdm", OperatorKind::t_new_via_kdm}, {"t_dwell", OperatorKind::t_dwell},
        {"j_current", OperatorKind::j_current},
    };
    for (const auto& [name, kind] : hermitian_kinds)
        check(std::string("hermiticity.") + name, 1e-10, [&, kind = kind] {
            return hermiticity_defect(build_operator(kind, g, c, {0.1, 0.3}));
        });

    check("identity.t_new_sym_vs_via_kdm", 1e-8, [&] {
        const auto v = make_probe(g, c).v;
        const auto a = build_operator(OperatorKind::t_new_sym, g, c);
        const auto b = build_operator(OperatorKind::t_new_via_kdm, g, c);
        const auto av = a.apply(v);
        double scale = 0.0;
        for (std::size_t j = fd_boundary_rows; j + fd_boundary_rows < av.size(); ++j)
            scale = std::max(scale, std::abs(av[j]));
        return action_deviation(a, b, v) / scale;
    }, "probe action, relative to max |T v|");

    check("commutator.h_t_new", 1e-6, [&] { return commutator_h_error(g, c); }, "units of hbar");
    check("commutator.xi_t_kdm", 1e-6, [&] { return commutator_xi_error(g, c, OperatorKind::t_kdm, 0.0); },
          "units of hbar");
    check("commutator.xi_t_new", 1e-6,
          [&] { return commutator_xi_error(g, c, OperatorKind::t_new_sym, 0.5); }, "units of hbar");
    check("commutator.h_t_new_convergence", 0.25, [&] {
        const GridSpec fine(2 * g.n(), g.p_max());
        return commutator_h_error(fine, c) / commutator_h_error(g, c);
    }, "error ratio after doubling n");

    check("reflection.square_is_identity", 0.0, [&] {
        const auto r = build_operator(OperatorKind::reflection, g, c);
        SparseMatrix id(r.m.rows(), r.m.cols());
        id.setIdentity();
        const SparseMatrix rr = r.m * r.m;
        const SparseMatrix d = rr - id;
        double mx = 0.0;
        for (Eigen::Index i = 0; i < d.outerSize(); ++i)
            for (SparseMatrix::InnerIterator it(d, i); it; ++it) mx = std::max(mx, std::abs(it.value()));
        return mx;
    });
    check("reflection.anticommutes_with_sign", 0.0, [&] {
        const auto r = build_operator(OperatorKind::reflection, g, c);
        const auto e = build_operator(OperatorKind::sign_p, g, c);
        const SparseMatrix rer = r.m * e.m * r.m;
        const SparseMatrix d = rer + e.m;
        double mx = 0.0;
        for (Eigen::Index i = 0; i < d.outerSize(); ++i)
            for (SparseMatrix::InnerIterator it(d, i); it; ++it) mx = std::max(mx, std::abs(it.value()));
        return mx;
    });

    check("eigenstate.new_conjugate_symmetry", 1e-12, [&] {
        double mx = 0.0;
        for (double tau : {0.01, 0.2, 1.0, 5.0})
            for (std::size_t k = g.n() / 2; k < g.n(); ++k) {
                const double p = g.momentum(k);
                const cdouble a = eigenstate(EigenFamily::new_op, tau, p, c);
                const cdouble b = eigenstate(EigenFamily::new_op, tau, -p, c);
                mx = std::max(mx, std::abs(b - std::conj(a)) / std::max(1.0, std::abs(a)));
            }
        return mx;
    });
    check("eigenstate.new_branch_bridge_z35", 1e-6, [&] {
        double mx = 0.0;
        for (double tau : {0.2, 1.0, 5.0}) {
            const double p = std::sqrt(2.0 * c.mass * c.hbar * 35.0 / tau);
            for (double s : {1.0, -1.0}) {
                const cdouble a = new_family::bessel_form(tau, s * p, c);
                const cdouble b = new_family::asymptotic_form(tau, s * p, c);
                mx = std::max(mx, std::abs(a - b) / std::abs(a));
            }
        }
        return mx;
    });
    check("eigenstate.new_low_momentum_slope", 1e-4, [&] {
        double mx = 0.0;
        for (double tau : {0.2, 1.0, 5.0}) {
            const double p = std::sqrt(2.0 * c.mass * c.hbar * 1e-3 / tau);
            const double ratio = std::abs(eigenstate(EigenFamily::new_op, tau, p, c)) / p;
            const double slope = new_family::low_momentum_slope(tau, c);
            mx = std::max(mx, std::fabs(ratio / slope - 1.0));
        }
        return mx;
    });

    check("distribution.kijowski_equals_ab_overlap", 1e-10, [&] {
        const WaveFunction psi = make_gaussian(s.packet, g);
        double mx = 0.0;
        for (double t : {0.2, 0.4, 0.5, 0.6, 0.8}) {
            const double k = kijowski_distribution(psi, t);
            const double a = std::norm(overlap(psi, EigenFamily::ab, t));
            mx = std::max(mx, std::fabs(k - a) / std::max(k, 1e-300));
        }
        return mx;
    });
    check("distribution.kdm_phase_covariance", 1e-8, [&] {
        const WaveFunction psi = make_gaussian(s.packet, g);
        double mx = 0.0;
        for (double t : {0.1, 0.3}) {
            const WaveFunction pt = evolve_free(psi, t);
            for (double tau : {0.3, 0.5, 0.7}) {
                const double a = std::abs(overlap(pt, EigenFamily::kdm, tau));
                const double b = std::abs(overlap(psi, EigenFamily::kdm, tau + t));
                mx = std::max(mx, std::fabs(a - b));
            }
        }
        return mx;
    }, "psi_t overlap at tau against psi overlap at tau + t");

    check("dwell.low_momentum", 0.02, [&] {
        const double length = 0.05 * c.hbar / (g.p_max() / 2.0);
        return dwell_low_momentum_check(length, g, c).deviation;
    });
    check("dwell.shift_identity", 1e-6, [&] {
        const auto v = make_probe(g, c).v;
        return dwell_shift_deviation(0.05 * c.hbar / g.p_max(), g, c, v);
    }, "T_D against exp(-iLp) T exp(iLp) - T by probe action");

    check("classical.stopwatch_equals_current_moment", 1e-9, [&] {
        double mx = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double x = -0.37 * i;
            const double p = 0.21 * i + 0.5;
            const double sw = classical_stopwatch(x, p, 2.0 * (-c.mass * x / p) + 1.0, c.mass);
            mx = std::max(mx, std::fabs(sw - classical_current_moment(x, p, c.mass)));
        }
        return mx;
    });
    return out;
}

}  // namespace arrival
