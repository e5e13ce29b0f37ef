#include "arrival/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

constexpr double pi = std::numbers::pi;
using Triplet = Eigen::Triplet<cdouble>;

double sign(double p) { return p > 0.0 ? 1.0 : -1.0; }

void check_momentum(double p) {
    if (p == 0.0 || !std::isfinite(p)) throw DomainError("eigenstates are defined for finite p != 0");
}

SparseMatrix from_triplets(std::size_t n, const std::vector<Triplet>& t) {
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    return m;
}

template <class F>
SparseMatrix diagonal(const GridSpec& grid, F f) {
    std::vector<Triplet> t;
    t.reserve(grid.n());
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        t.emplace_back(i, i, f(grid.momentum(k)));
    }
    return from_triplets(grid.n(), t);
}

// diag(f(p)) R: row k has f(p_k) at the column of -p_k.
template <class F>
SparseMatrix diagonal_times_reflection(const GridSpec& grid, F f) {
    std::vector<Triplet> t;
    t.reserve(grid.n());
    for (std::size_t k = 0; k < grid.n(); ++k)
        t.emplace_back(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(grid.mirror(k)),
                       f(grid.momentum(k)));
    return from_triplets(grid.n(), t);
}

SparseMatrix position_matrix(const GridSpec& grid, double hbar) {
    const std::size_t n = grid.n();
    constexpr int half = 3;
    constexpr int width = 2 * half + 1;
    if (n < static_cast<std::size_t>(width + 1))
        throw DomainError("grid too small for the position stencil (need n >= 8)");
    const cdouble scale(0.0, hbar / grid.dp());
    std::vector<Triplet> t;
    t.reserve(n * width);
    auto add_row = [&](std::size_t row, std::size_t first) {
        std::vector<double> nodes(width);
        for (int i = 0; i < width; ++i)
            nodes[i] = static_cast<double>(first + i) - static_cast<double>(row);
        const std::vector<double> w = numerics::derivative_weights(nodes, 0.0);
        for (int i = 0; i < width; ++i)
            if (w[i] != 0.0)
                t.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(first + i),
                               scale * w[i]);
    };
    for (std::size_t r = 0; r < n; ++r) {
        if (r < half)
            add_row(r, 0);
        else if (r + half >= n)
            add_row(r, n - width);
        else
            add_row(r, r - half);
    }
    return from_triplets(n, t);
}

SparseMatrix identity(std::size_t n) {
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setIdentity();
    return m;
}

}  // namespace

std::string_view family_name(EigenFamily family) {
    switch (family) {
        case EigenFamily::ab: return "ab";
        case EigenFamily::kdm: return "kdm";
        case EigenFamily::mi: return "mi";
        case EigenFamily::t3: return "t3";
        case EigenFamily::new_op: return "new";
    }
    return "unknown";
}

EigenFamily parse_family(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    if (s == "ab") return EigenFamily::ab;
    if (s == "kdm") return EigenFamily::kdm;
    if (s == "mi") return EigenFamily::mi;
    if (s == "t3") return EigenFamily::t3;
    if (s == "new") return EigenFamily::new_op;
    throw DomainError("unknown eigenstate family '" + std::string(name) +
                      "' (expected ab, kdm, mi, t3 or new)");
}

namespace new_family {

cdouble bessel_form(double tau, double p, const PhysConsts& consts) {
    check_momentum(p);
    if (!(tau >= 0.0)) throw DomainError("NEW eigenstates are defined here for tau >= 0");
    const double mh = consts.mass * consts.hbar;
    const double ap = std::fabs(p);
    const double z = p * p * tau / (2.0 * mh);
    const double c = std::sqrt(tau) / (std::sqrt(8.0) * mh);
    if (z < numerics::bessel_switchover) {
        // Scaled series keeps the small-z limit finite: J_nu = (z/2)^nu S_nu.
        const double a = std::pow(tau, 0.25) * ap * std::pow(4.0 * mh, 0.25) / (std::sqrt(8.0) * mh);
        const double b = std::pow(tau, 1.25) * p * ap * ap /
                         (std::pow(4.0 * mh, 0.75) * std::sqrt(8.0) * mh);
        return {a * numerics::bessel_j_scaled(-0.25, z), b * numerics::bessel_j_scaled(0.75, z)};
    }
    const double sq = std::sqrt(ap);
    return {c * ap * sq * numerics::bessel_j(-0.25, z), c * p * sq * numerics::bessel_j(0.75, z)};
}

cdouble asymptotic_form(double tau, double p, const PhysConsts& consts) {
    check_momentum(p);
    if (!(tau > 0.0)) throw DomainError("asymptotic NEW branch needs tau > 0");
    const double mh = consts.mass * consts.hbar;
    const double z = p * p * tau / (2.0 * mh);
    const double amp = std::sqrt(std::fabs(p) / (2.0 * pi * mh));
    const auto [p1, q1] = numerics::hankel_pq(-0.25, z);
    const auto [p2, q2] = numerics::hankel_pq(0.75, z);
    const double chi1 = z - pi / 8.0;
    const double chi2 = z - 5.0 * pi / 8.0;
    return amp * cdouble(p1 * std::cos(chi1) - q1 * std::sin(chi1),
                         sign(p) * (p2 * std::cos(chi2) - q2 * std::sin(chi2)));
}

cdouble leading_large_momentum(double tau, double p, const PhysConsts& consts) {
    check_momentum(p);
    const double mh = consts.mass * consts.hbar;
    const double z = p * p * tau / (2.0 * mh);
    return std::sqrt(std::fabs(p) / (2.0 * pi * mh)) * std::polar(1.0, sign(p) * (z - pi / 8.0));
}

double low_momentum_slope(double tau, const PhysConsts& consts) {
    if (!(tau >= 0.0)) throw DomainError("tau must be >= 0");
    const double mh = consts.mass * consts.hbar;
    return std::pow(tau, 0.25) / (2.0 * numerics::gamma_fn(0.75) * std::pow(mh, 0.75));
}

}  // namespace new_family

cdouble eigenstate(EigenFamily family, double tau, double p, const PhysConsts& consts) {
    check_momentum(p);
    consts.validate();
    if (!std::isfinite(tau)) throw DomainError("tau must be finite");
    const double mh = consts.mass * consts.hbar;
    const double ap = std::fabs(p);
    const double z = p * p * tau / (2.0 * mh);
    switch (family) {
        case EigenFamily::ab:
            return std::sqrt(ap / (2.0 * pi * mh)) * std::polar(1.0, z);
        case EigenFamily::kdm:
            return std::sqrt(ap / (2.0 * pi * mh)) * std::polar(1.0, sign(p) * z);
        case EigenFamily::mi:
            if (tau < 0.0) throw DomainError("MI eigenstates need tau >= 0");
            return std::sqrt(ap / (pi * mh)) * std::sin(z);
        case EigenFamily::t3:
            // +tau lives on p > 0, -tau on p < 0.
            if ((tau >= 0.0) != (p > 0.0)) return 0.0;
            return std::sqrt(2.0 * ap / (pi * mh)) * std::sin(std::fabs(z));
        case EigenFamily::new_op:
            if (tau < 0.0) throw DomainError("NEW eigenstates are available for tau >= 0 only");
            if (tau == 0.0) return 0.0;
            if (z > new_family::asymptotic_switch) return new_family::asymptotic_form(tau, p, consts);
            return new_family::bessel_form(tau, p, consts);
    }
    throw DomainError("unknown eigenstate family");
}

std::vector<cdouble> OperatorMatrix::apply(std::span<const cdouble> v) const {
    if (v.size() != grid.n()) throw DomainError("vector length does not match operator size");
    Eigen::Map<const Eigen::VectorXcd> x(v.data(), static_cast<Eigen::Index>(v.size()));
    const Eigen::VectorXcd y = m * x;
    return {y.data(), y.data() + y.size()};
}

double OperatorMatrix::max_abs() const {
    double mx = 0.0;
    for (Eigen::Index r = 0; r < m.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) mx = std::max(mx, std::abs(it.value()));
    return mx;
}

OperatorMatrix build_operator(OperatorKind kind, const GridSpec& grid, const PhysConsts& consts,
                              OperatorParams params) {
    consts.validate();
    const double m = consts.mass;
    const double hbar = consts.hbar;
    const std::size_t n = grid.n();
    OperatorMatrix out{SparseMatrix{}, grid, consts, true};

    auto inv_abs = [&] { return diagonal(grid, [](double p) { return cdouble(1.0 / std::fabs(p)); }); };
    auto reflection = [&] { return diagonal_times_reflection(grid, [](double) { return cdouble(1.0); }); };
    auto t_kdm = [&] {
        const SparseMatrix x = position_matrix(grid, hbar);
        const SparseMatrix a = inv_abs();
        return SparseMatrix(cdouble(-0.5 * m) * SparseMatrix(x * a + a * x));
    };

    switch (kind) {
        case OperatorKind::hamiltonian:
            out.m = diagonal(grid, [&](double p) { return cdouble(p * p / (2.0 * m)); });
            break;
        case OperatorKind::pseudo_energy:
            out.m = diagonal(grid, [&](double p) { return cdouble(p * std::fabs(p) / (2.0 * m)); });
            break;
        case OperatorKind::reflection:
            out.m = reflection();
            break;
        case OperatorKind::sign_p:
            out.m = diagonal(grid, [](double p) { return cdouble(sign(p)); });
            break;
        case OperatorKind::position:
            out.m = position_matrix(grid, hbar);
            break;
        case OperatorKind::t_kdm:
            out.m = t_kdm();
            break;
        case OperatorKind::t_new_sym: {
            const SparseMatrix x = position_matrix(grid, hbar);
            const SparseMatrix ar = SparseMatrix(inv_abs() * SparseMatrix(identity(n) + reflection()));
            out.m = cdouble(-0.5 * m) * SparseMatrix(x * ar + ar * x);
            break;
        }
        case OperatorKind::t_new_via_kdm: {
            const SparseMatrix extra = diagonal_times_reflection(
                grid, [&](double p) { return cdouble(0.0, hbar * m / (2.0 * p * std::fabs(p))); });
            out.m = t_kdm() + extra;
            break;
        }
        case OperatorKind::t_dwell: {
            const double L = params.length;
            if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("dwell length L must be positive");
            const SparseMatrix d = diagonal(grid, [&](double p) { return cdouble(m * L / std::fabs(p)); });
            const SparseMatrix r = diagonal_times_reflection(grid, [&](double p) {
                const double th = p * L / hbar;
                return (m * L / std::fabs(p)) * std::polar(1.0, -th) * (std::sin(th) / th);
            });
            out.m = d + r;
            break;
        }
        case OperatorKind::j_current: {
            const double t = params.time;
            if (!std::isfinite(t)) throw DomainError("current time must be finite");
            const double c = grid.dp() / (2.0 * pi * hbar * 2.0 * m);
            std::vector<Triplet> trip;
            trip.reserve(n * n);
            std::vector<cdouble> ph(n);
            for (std::size_t k = 0; k < n; ++k) {
                const double p = grid.momentum(k);
                ph[k] = std::polar(1.0, p * p * t / (2.0 * m * hbar));
            }
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k)
                    trip.emplace_back(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k),
                                      c * (grid.momentum(j) + grid.momentum(k)) * ph[j] * std::conj(ph[k]));
            out.m = from_triplets(n, trip);
            break;
        }
    }
    return out;
}

OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (!(a.grid == b.grid) || a.m.rows() != b.m.rows())
        throw DomainError("commutator needs operators on the same grid");
    OperatorMatrix out{SparseMatrix(a.m * b.m - b.m * a.m), a.grid, a.consts, false};
    out.m.prune(cdouble(0.0));
    return out;
}

double hermiticity_defect(const OperatorMatrix& op, std::size_t margin) {
    const auto n = static_cast<Eigen::Index>(op.grid.n());
    const auto lo = static_cast<Eigen::Index>(margin);
    if (2 * lo >= n) throw DomainError("margin leaves no interior block");
    const SparseMatrix adj = op.m.adjoint();
    const SparseMatrix diff = op.m - adj;
    auto inside = [&](Eigen::Index i) { return i >= lo && i < n - lo; };
    double dmax = 0.0;
    double mmax = 0.0;
    for (Eigen::Index r = lo; r < n - lo; ++r) {
        for (SparseMatrix::InnerIterator it(diff, r); it; ++it)
            if (inside(it.col())) dmax = std::max(dmax, std::abs(it.value()));
        for (SparseMatrix::InnerIterator it(op.m, r); it; ++it)
            if (inside(it.col())) mmax = std::max(mmax, std::abs(it.value()));
    }
    return mmax > 0.0 ? dmax / mmax : dmax;
}

std::vector<cdouble> probe_vector(const GridSpec& grid, double center, double sigma, double x_shift,
                                  double hbar) {
    if (!(sigma > 0.0)) throw DomainError("probe width must be positive");
    std::vector<cdouble> v(grid.n());
    const cdouble rel = 0.8 * std::polar(1.0, pi / 3.0);
    double peak = 0.0;
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const double p = grid.momentum(k);
        const double a = (p - center) / sigma;
        const double b = (p + 0.9 * center) / sigma;
        v[k] = (std::exp(-0.25 * a * a) + rel * std::exp(-0.25 * b * b)) * std::polar(1.0, -p * x_shift / hbar);
        peak = std::max(peak, std::abs(v[k]));
    }
    for (auto& x : v) x /= peak;
    return v;
}

double action_deviation(const OperatorMatrix& a, const OperatorMatrix& b, std::span<const cdouble> v,
                        std::size_t margin) {
    const auto av = a.apply(v);
    const auto bv = b.apply(v);
    double mx = 0.0;
    for (std::size_t j = margin; j + margin < av.size(); ++j) mx = std::max(mx, std::abs(av[j] - bv[j]));
    return mx;
}

namespace {

void require_momentum_state(const WaveFunction& psi) {
    if (psi.rep != Representation::momentum || !psi.on_grid())
        throw DomainError("expected a wavefunction on its momentum grid");
}

}  // namespace

cdouble overlap(const WaveFunction& psi, EigenFamily family, double tau) {
    require_momentum_state(psi);
    cdouble s{};
    for (std::size_t k = 0; k < psi.values.size(); ++k)
        s += std::conj(psi.values[k]) * eigenstate(family, tau, psi.abscissae[k], psi.consts);
    return s * psi.grid.dp();
}

Distribution distribution(const WaveFunction& psi, EigenFamily family, std::span<const double> tau_grid) {
    if (!std::is_sorted(tau_grid.begin(), tau_grid.end())) throw DomainError("tau grid must be sorted");
    Distribution d{std::vector<double>(tau_grid.begin(), tau_grid.end()),
                   std::vector<double>(tau_grid.size()), std::string(family_name(family))};
    for (std::size_t i = 0; i < tau_grid.size(); ++i) d.values[i] = std::norm(overlap(psi, family, tau_grid[i]));
    return d;
}

double kijowski_distribution(const WaveFunction& psi, double t) {
    require_momentum_state(psi);
    const WaveFunction pt = evolve_free(psi, t);
    cdouble s{};
    for (std::size_t k = 0; k < pt.values.size(); ++k) s += std::sqrt(std::fabs(pt.abscissae[k])) * pt.values[k];
    s *= psi.grid.dp();
    return std::norm(s) / (psi.consts.mass * 2.0 * pi * psi.consts.hbar);
}

double current_expectation(const WaveFunction& psi, double t) {
    require_momentum_state(psi);
    const WaveFunction pt = evolve_free(psi, t);
    const double hbar = psi.consts.hbar;
    cdouble f{};
    cdouble df{};
    for (std::size_t k = 0; k < pt.values.size(); ++k) {
        f += pt.values[k];
        df += cdouble(0.0, pt.abscissae[k] / hbar) * pt.values[k];
    }
    const double scale = psi.grid.dp() / std::sqrt(2.0 * pi * hbar);
    f *= scale;
    df *= scale;
    return hbar / psi.consts.mass * std::imag(std::conj(f) * df);
}

KineticEnergyDensity kinetic_energy_density(const WaveFunction& psi) {
    require_momentum_state(psi);
    cdouble a{};
    cdouble b{};
    for (std::size_t k = 0; k < psi.values.size(); ++k) {
        a += psi.abscissae[k] * psi.values[k];
        b += std::fabs(psi.abscissae[k]) * psi.values[k];
    }
    const double dp = psi.grid.dp();
    const double c = 1.0 / (2.0 * pi * psi.consts.hbar);
    return {c * std::norm(a * dp), c * std::norm(b * dp)};
}

double low_momentum_coefficient(const PhysConsts& consts) {
    const double g = numerics::gamma_fn(0.75);
    return pi / (2.0 * g * g) / (std::pow(consts.mass, 1.5) * std::sqrt(consts.hbar));
}

CompletenessReport completeness_check(EigenFamily family, const WaveFunction& psi, double tau_min,
                                      double tau_max, std::size_t tau_n) {
    require_momentum_state(psi);
    if (!(tau_max > tau_min)) throw DomainError("tau range must have tau_max > tau_min");
    const auto& grid = psi.grid;
    const PhysConsts& c = psi.consts;
    if (tau_n == 0) {
        const double omega = grid.p_max() * grid.p_max() / (2.0 * c.mass * c.hbar);
        const double step = 2.0 * pi / omega / 8.0;
        tau_n = static_cast<std::size_t>(std::ceil((tau_max - tau_min) / step)) + 1;
    }
    if (tau_n % 2 == 0) ++tau_n;
    if (tau_n < 3) tau_n = 3;
    const double dtau = (tau_max - tau_min) / static_cast<double>(tau_n - 1);
    const std::size_t n = grid.n();
    std::vector<cdouble> rec_pos(n, cdouble{});
    std::vector<cdouble> rec_neg(n, cdouble{});
    std::vector<cdouble> phi(n);
    double mass = 0.0;
    for (std::size_t i = 0; i < tau_n; ++i) {
        const double tau = tau_min + dtau * static_cast<double>(i);
        const double w = (i == 0 || i + 1 == tau_n) ? dtau / 3.0 : (i % 2 == 1 ? 4.0 : 2.0) * dtau / 3.0;
        cdouble c_pos{};
        cdouble c_neg{};
        for (std::size_t k = 0; k < n; ++k) {
            phi[k] = eigenstate(family, tau, grid.momentum(k), c);
            (k >= n / 2 ? c_pos : c_neg) += std::conj(phi[k]) * psi.values[k];
        }
        c_pos *= grid.dp();
        c_neg *= grid.dp();
        mass += w * std::norm(c_pos + c_neg);
        for (std::size_t k = 0; k < n; ++k) {
            rec_pos[k] += w * c_pos * phi[k];
            rec_neg[k] += w * c_neg * phi[k];
        }
    }
    double num = 0.0;
    double num_sector = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        num += std::norm(rec_pos[k] + rec_neg[k] - psi.values[k]);
        num_sector += std::norm((k >= n / 2 ? rec_pos[k] : rec_neg[k]) - psi.values[k]);
        den += std::norm(psi.values[k]);
    }
    if (!(den > 0.0)) throw DomainError("completeness check needs a nonzero state");
    const double norm2 = den * grid.dp();
    return {std::sqrt(num / den), std::sqrt(num_sector / den), mass, std::fabs(norm2 - mass) > 1e-4 * norm2};
}

DwellReport dwell_relation_check(double length, const GridSpec& grid, const PhysConsts& consts,
                                 double theta_lo, double theta_hi) {
    consts.validate();
    if (!(length > 0.0)) throw DomainError("dwell length L must be positive");
    const double m = consts.mass;
    const double hbar = consts.hbar;
    DwellReport rep{0, 0.0, 0.0};
    double dmax = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const double p = grid.momentum(k);
        const double th = std::fabs(p) * length / hbar;
        if (th < theta_lo || th > theta_hi) continue;
        ++rep.rows;
        const double a = m * length / std::fabs(p);
        const double ths = p * length / hbar;
        // Diagonal parts agree identically; the R entries carry the deviation.
        const cdouble exact = a * std::polar(1.0, -ths) * (std::sin(ths) / ths);
        const double dev = std::abs(exact - cdouble(a));
        dmax = std::max(dmax, dev);
        scale = std::max(scale, a);
        rep.pointwise_deviation = std::max(rep.pointwise_deviation, dev / a);
    }
    if (rep.rows == 0) throw DomainError("dwell sub-block is empty for this L and grid");
    rep.deviation = dmax / scale;
    return rep;
}

DwellReport dwell_low_momentum_check(double length, const GridSpec& grid, const PhysConsts& consts) {
    return dwell_relation_check(length, grid, consts, 0.0, 0.05);
}

double dwell_shift_deviation(double length, const GridSpec& grid, const PhysConsts& consts,
                             std::span<const cdouble> probe) {
    const OperatorMatrix td = build_operator(OperatorKind::t_dwell, grid, consts, {length, 0.0});
    const OperatorMatrix t = build_operator(OperatorKind::t_new_via_kdm, grid, consts);
    const std::size_t n = grid.n();
    std::vector<cdouble> u(n);
    for (std::size_t k = 0; k < n; ++k) u[k] = std::polar(1.0, grid.momentum(k) * length / consts.hbar);
    std::vector<cdouble> uv(n);
    for (std::size_t k = 0; k < n; ++k) uv[k] = u[k] * probe[k];
    const auto tuv = t.apply(uv);
    const auto tv = t.apply(probe);
    const auto dv = td.apply(probe);
    double dmax = 0.0;
    double scale = 0.0;
    for (std::size_t j = fd_boundary_rows; j + fd_boundary_rows < n; ++j) {
        const cdouble shifted = std::conj(u[j]) * tuv[j] - tv[j];
        dmax = std::max(dmax, std::abs(shifted - dv[j]));
        scale = std::max(scale, std::abs(dv[j]));
    }
    return scale > 0.0 ? dmax / scale : dmax;
}

}  // namespace arrival
