#include "arrival/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "arrival/errors.hpp"

namespace arrival {

namespace {

constexpr double pi = std::numbers::pi;

bool same_samples(std::span<const double> a, const std::vector<double>& b, double scale) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::fabs(a[i] - b[i]) > 1e-12 * scale) return false;
    return true;
}

double uniform_spacing(std::span<const double> x) {
    if (x.size() < 2) throw DomainError("need at least two abscissae");
    const double h = (x.back() - x.front()) / static_cast<double>(x.size() - 1);
    for (std::size_t i = 1; i < x.size(); ++i)
        if (std::fabs((x[i] - x[i - 1]) - h) > 1e-9 * std::fabs(h))
            throw DomainError("abscissae are not uniformly spaced");
    if (!(h > 0.0)) throw DomainError("abscissae must be increasing");
    return h;
}

void require_momentum(const WaveFunction& psi, const char* what) {
    if (psi.rep != Representation::momentum || !psi.on_grid())
        throw DomainError(std::string(what) + " needs a momentum-grid wavefunction");
}

void require_conjugate_position(const WaveFunction& psi, const char* what) {
    if (psi.rep != Representation::position || !psi.on_grid())
        throw DomainError(std::string(what) + " needs a wavefunction on the conjugate position grid");
}

}  // namespace

WaveFunction WaveFunction::in_momentum(const GridSpec& grid, const PhysConsts& consts,
                                       std::vector<cdouble> values) {
    consts.validate();
    if (values.size() != grid.n()) throw DomainError("sample count does not match grid size");
    return {Representation::momentum, grid, consts, grid.momenta(), std::move(values)};
}

WaveFunction WaveFunction::in_position(const GridSpec& grid, const PhysConsts& consts,
                                       std::vector<cdouble> values) {
    consts.validate();
    if (values.size() != grid.n()) throw DomainError("sample count does not match grid size");
    return {Representation::position, grid, consts, grid.positions(consts.hbar), std::move(values)};
}

bool WaveFunction::on_grid() const {
    if (rep == Representation::momentum) return same_samples(abscissae, grid.momenta(), grid.p_max());
    return same_samples(abscissae, grid.positions(consts.hbar), grid.x_max(consts.hbar));
}

double WaveFunction::norm_squared() const {
    if (values.size() != abscissae.size()) throw DomainError("abscissae and values differ in length");
    std::vector<double> dens(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) dens[i] = std::norm(values[i]);
    double s;
    if (on_grid()) {
        const double h = rep == Representation::momentum ? grid.dp() : grid.dx(consts.hbar);
        s = numerics::integrate(dens, h, numerics::Rule::midpoint);
    } else {
        s = numerics::integrate(dens, uniform_spacing(abscissae));
    }
    if (!std::isfinite(s)) throw NumericError("wavefunction norm is not finite");
    return s;
}

WaveFunction WaveFunction::normalized() const {
    const double n2 = norm_squared();
    if (!(n2 > 0.0)) throw NumericError("cannot normalize a zero wavefunction");
    WaveFunction out = *this;
    const double s = 1.0 / std::sqrt(n2);
    for (auto& v : out.values) v *= s;
    return out;
}

void GaussianSpec::validate() const {
    consts.validate();
    if (!(sigma_p > 0.0) || !std::isfinite(sigma_p)) throw DomainError("sigma_p must be positive");
    if (!std::isfinite(p0) || !std::isfinite(x0)) throw DomainError("p0 and x0 must be finite");
}

WaveFunction make_gaussian(const GaussianSpec& spec, const GridSpec& grid) {
    spec.validate();
    if (grid.p_max() < std::fabs(spec.p0) + 6.0 * spec.sigma_p)
        throw DomainError("grid does not cover p0 +/- 6 sigma_p: need p_max >= " +
                          std::to_string(std::fabs(spec.p0) + 6.0 * spec.sigma_p));
    const double amp = std::pow(2.0 * pi * spec.sigma_p * spec.sigma_p, -0.25);
    std::vector<cdouble> v(grid.n());
    for (std::size_t k = 0; k < grid.n(); ++k) {
        const double p = grid.momentum(k);
        const double d = (p - spec.p0) / spec.sigma_p;
        v[k] = amp * std::exp(-0.25 * d * d) * std::polar(1.0, -p * spec.x0 / spec.consts.hbar);
    }
    return WaveFunction::in_momentum(grid, spec.consts, std::move(v)).normalized();
}

ReflectedState build_reflected_state(const GaussianSpec& base, const GridSpec& grid, double t) {
    if (!(base.p0 > 0.0)) throw DomainError("reflected state needs a right-moving base packet (p0 > 0)");
    if (!std::isfinite(t)) throw DomainError("evolution time must be finite");
    const WaveFunction phi0 = make_gaussian(base, grid);
    const double hbar = base.consts.hbar;
    const double dx = grid.dx(hbar);
    const std::size_t n = grid.n();

    const WaveFunction phi0_x = to_position(phi0);
    double leak = 0.0;
    for (std::size_t j = n / 2; j < n; ++j) leak += std::norm(phi0_x.values[j]) * dx;
    if (leak > 1e-6)
        throw DomainError("base packet leaks into x > 0 (probability " + std::to_string(leak) + ")");

    const WaveFunction phi_t = evolve_free(phi0, t);
    const WaveFunction phi_x = to_position(phi_t);
    std::vector<cdouble> psi_x(n, cdouble{});
    double norm2 = 0.0;
    for (std::size_t j = 0; j < n / 2; ++j) {
        psi_x[j] = phi_x.values[j] - phi_x.values[grid.mirror(j)];
        norm2 += std::norm(psi_x[j]) * dx;
    }
    if (!(norm2 > 1e-300)) throw NumericError("reflected state has zero norm");
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& v : psi_x) v *= scale;

    cdouble dphi{};
    for (std::size_t k = 0; k < n; ++k)
        dphi += cdouble(0.0, grid.momentum(k) / hbar) * phi_t.values[k];
    dphi *= grid.dp() / std::sqrt(2.0 * pi * hbar);

    ReflectedState out{to_momentum(WaveFunction::in_position(grid, base.consts, std::move(psi_x))),
                       2.0 * scale * dphi};
    return out;
}

WaveFunction make_antisymmetrized(const GaussianSpec& base, const GridSpec& grid, HalfLine side, double t) {
    if (!std::isfinite(t)) throw DomainError("evolution time must be finite");
    const WaveFunction phi_x = to_position(evolve_free(make_gaussian(base, grid), t));
    std::vector<cdouble> psi_x(grid.n(), cdouble{});
    for (std::size_t j = 0; j < grid.n(); ++j) {
        const bool keep = (side == HalfLine::positive) == (phi_x.abscissae[j] > 0.0);
        if (keep) psi_x[j] = phi_x.values[j] - phi_x.values[grid.mirror(j)];
    }
    return to_momentum(WaveFunction::in_position(grid, base.consts, std::move(psi_x)).normalized());
}

WaveFunction make_reflected_state(const GaussianSpec& base, const GridSpec& grid, double t) {
    return build_reflected_state(base, grid, t).psi;
}

WaveFunction evolve_free(const WaveFunction& psi, double t) {
    require_momentum(psi, "free evolution");
    WaveFunction out = psi;
    const double c = t / (2.0 * psi.consts.mass * psi.consts.hbar);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        const double p = out.abscissae[k];
        out.values[k] *= std::polar(1.0, -p * p * c);
    }
    return out;
}

WaveFunction to_position(const WaveFunction& psi) {
    require_momentum(psi, "to_position");
    return WaveFunction::in_position(
        psi.grid, psi.consts, numerics::momentum_to_position(psi.grid, psi.values, psi.consts.hbar));
}

WaveFunction to_position(const WaveFunction& psi, std::span<const double> x_grid) {
    require_momentum(psi, "to_position");
    WaveFunction out{Representation::position, psi.grid, psi.consts,
                     std::vector<double>(x_grid.begin(), x_grid.end()),
                     numerics::momentum_to_points(psi.grid, psi.values, x_grid, psi.consts.hbar)};
    return out;
}

WaveFunction to_momentum(const WaveFunction& psi) {
    require_conjugate_position(psi, "to_momentum");
    return WaveFunction::in_momentum(
        psi.grid, psi.consts, numerics::position_to_momentum(psi.grid, psi.values, psi.consts.hbar));
}

WaveFunction sample_near_origin(const WaveFunction& psi, double h, std::size_t half) {
    if (!(h > 0.0)) throw DomainError("stencil spacing must be positive");
    std::vector<double> x(2 * half + 1);
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = (static_cast<double>(i) - static_cast<double>(half)) * h;
    return to_position(psi, x);
}

cdouble derivative_at_origin(const WaveFunction& psi) {
    if (psi.rep != Representation::position)
        throw DomainError("derivative_at_origin needs a position-representation wavefunction");
    const auto& x = psi.abscissae;
    if (x.size() < 5 || psi.values.size() != x.size())
        throw DomainError("derivative_at_origin needs at least 5 samples around x = 0");
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return std::fabs(x[a]) < std::fabs(x[b]); });
    std::size_t count = 5;
    if (x.size() > 5) {
        const double r5 = std::fabs(x[idx[4]]);
        const double r6 = std::fabs(x[idx[5]]);
        if (std::fabs(r6 - r5) <= 1e-9 * std::max(r5, 1e-300)) count = 6;
    }
    idx.resize(count);
    double lo = x[idx[0]];
    double hi = lo;
    for (auto i : idx) {
        lo = std::min(lo, x[i]);
        hi = std::max(hi, x[i]);
    }
    if (lo > 0.0 || hi < 0.0) throw DomainError("derivative stencil does not straddle x = 0");

    std::vector<double> nodes(count);
    for (std::size_t a = 0; a < count; ++a) nodes[a] = x[idx[a]];
    const std::vector<double> w = numerics::derivative_weights(nodes, 0.0);
    cdouble d{};
    for (std::size_t a = 0; a < count; ++a) d += w[a] * psi.values[idx[a]];
    return d;
}

cdouble inner_product(const WaveFunction& a, const WaveFunction& b) {
    if (a.rep != b.rep || !(a.grid == b.grid) || !a.on_grid() || !b.on_grid())
        throw DomainError("inner product needs two wavefunctions on the same grid");
    cdouble s{};
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::conj(a.values[i]) * b.values[i];
    const double h = a.rep == Representation::momentum ? a.grid.dp() : a.grid.dx(a.consts.hbar);
    return s * h;
}

double mean_momentum(const WaveFunction& psi) {
    require_momentum(psi, "mean_momentum");
    double s = 0.0;
    for (std::size_t k = 0; k < psi.values.size(); ++k) s += psi.abscissae[k] * std::norm(psi.values[k]);
    return s * psi.grid.dp() / psi.norm_squared();
}

double mean_position(const WaveFunction& psi) {
    const WaveFunction px = psi.rep == Representation::momentum ? to_position(psi) : psi;
    require_conjugate_position(px, "mean_position");
    double s = 0.0;
    for (std::size_t j = 0; j < px.values.size(); ++j) s += px.abscissae[j] * std::norm(px.values[j]);
    return s * px.grid.dx(px.consts.hbar) / px.norm_squared();
}

}  // namespace arrival
