#include <cmath>
#include <numbers>
#include <vector>

#include "arrival/errors.hpp"
#include "arrival/operators.hpp"
#include "arrival/states.hpp"
#include "doctest.h"

using namespace arrival;
using std::numbers::pi;

TEST_CASE("gaussian construction") {
    const GridSpec g(512, 16.0);
    const PhysConsts c;
    const auto psi = make_gaussian({0.0, 0.0, 1.0, c}, g);
    CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-10);
    for (std::size_t k = 0; k < g.n(); ++k) {
        CHECK(std::abs(psi.values[k].imag()) < 1e-15);
        CHECK(std::abs(psi.values[k] - psi.values[g.mirror(k)]) < 1e-15);
    }

    const auto moving = make_gaussian({5.0, 2.0, 1.0, c}, g);
    CHECK(std::abs(mean_momentum(moving) - 5.0) < 1e-6);
    CHECK(std::abs(mean_position(moving) - 2.0) < 1e-5);

    CHECK_THROWS_AS(make_gaussian({12.0, 0.0, 1.0, c}, g), DomainError);
    CHECK_THROWS_AS(make_gaussian({0.0, 0.0, -1.0, c}, g), DomainError);
}

TEST_CASE("gaussian moments against closed form") {
    const GridSpec g(1024, 40.0);
    const PhysConsts c{2.0, 0.5};
    const GaussianSpec spec{-3.0, 4.0, 1.5, c};
    const auto psi = make_gaussian(spec, g);
    // <p^2> = p0^2 + sigma_p^2 as a direct moment sum
    double p2 = 0.0;
    for (std::size_t k = 0; k < g.n(); ++k) p2 += std::norm(psi.values[k]) * std::pow(g.momentum(k), 2) * g.dp();
    CHECK(p2 == doctest::Approx(9.0 + 2.25).epsilon(1e-10));
    CHECK(std::abs(mean_position(psi) - 4.0) < 1e-5);
}

TEST_CASE("position round trip") {
    const GridSpec g(256, 20.0);
    const auto psi = make_gaussian({3.0, -1.0, 2.0, {}}, g);
    const auto x = to_position(psi);
    CHECK(x.rep == Representation::position);
    CHECK(std::abs(x.norm_squared() - 1.0) < 1e-10);
    const auto back = to_momentum(x);
    for (std::size_t k = 0; k < g.n(); ++k) CHECK(std::abs(back.values[k] - psi.values[k]) < 1e-12);

    const std::vector<double> pts{-1.2, -1.0, 0.5};
    const auto at = to_position(psi, pts);
    const double sx = 0.25;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = pts[i] + 1.0;
        const double amp = std::pow(2.0 * pi * sx * sx, -0.25) * std::exp(-d * d / (4 * sx * sx));
        CHECK(std::abs(std::abs(at.values[i]) - amp) < 1e-8);
    }
}

TEST_CASE("free evolution keeps the norm and moves the centre") {
    const GridSpec g(1024, 40.0);
    const auto psi = make_gaussian({10.0, -5.0, 1.0, {}}, g);
    const auto later = evolve_free(psi, 0.5);
    CHECK(std::abs(later.norm_squared() - 1.0) < 1e-12);
    CHECK(std::abs(mean_position(later)) < 1e-5);
}

TEST_CASE("derivative at origin") {
    const PhysConsts c;
    std::vector<double> xs;
    for (int i = -3; i <= 3; ++i) xs.push_back(0.01 * i);
    WaveFunction even{Representation::position, GridSpec(4, 1.0), c, xs, {}};
    WaveFunction odd = even;
    for (double x : xs) {
        even.values.emplace_back(std::exp(-x * x));
        odd.values.emplace_back(x * std::exp(-x * x));
    }
    CHECK(std::abs(derivative_at_origin(even)) < 1e-8);
    CHECK(std::abs(derivative_at_origin(odd) - 1.0) < 1e-6);

    // half-offset samples: six-point stencil
    WaveFunction shifted{Representation::position, GridSpec(4, 1.0), c, {}, {}};
    for (int i = -3; i < 3; ++i) {
        const double x = 0.01 * (i + 0.5);
        shifted.abscissae.push_back(x);
        shifted.values.emplace_back(std::sin(2.0 * x) + 0.3);
    }
    CHECK(std::abs(derivative_at_origin(shifted) - 2.0) < 1e-6);

    WaveFunction small = even;
    small.abscissae.resize(3);
    small.values.resize(3);
    CHECK_THROWS_AS(derivative_at_origin(small), DomainError);
}

TEST_CASE("reflected state") {
    const GridSpec g(2048, 40.0);
    const GaussianSpec base{2.0, -5.0, 0.5, {}};
    const auto r = build_reflected_state(base, g);
    CHECK(std::abs(r.psi.norm_squared() - 1.0) < 1e-10);

    const auto x = to_position(r.psi);
    double peak = 0.0, right = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        peak = std::max(peak, std::abs(x.values[j]));
        if (x.abscissae[j] > 0.0) right = std::max(right, std::abs(x.values[j]));
    }
    CHECK(right <= 1e-8 * peak);

    // The band-limited interpolant misses the kink at 0 by slope dx / 2 pi.
    const std::vector<double> origin{0.0};
    const double at0 = std::abs(to_position(r.psi, origin).values[0]);
    const double kink = std::abs(r.edge_slope) * g.dx(1.0) / (2.0 * pi);
    CHECK(at0 == doctest::Approx(kink).epsilon(1e-3));
    const GridSpec fine(2 * g.n(), 2 * g.p_max());
    const double at0_fine = std::abs(to_position(build_reflected_state(base, fine).psi, origin).values[0]);
    CHECK(at0_fine == doctest::Approx(0.5 * at0).epsilon(1e-3));

    const auto near = sample_near_origin(r.psi, 1e-3);
    const cdouble fd = derivative_at_origin(near);
    CHECK(std::abs(fd) > 1e-3);
    // one-sided kink: the centred stencil sees half the slope
    CHECK(std::abs(fd - 0.5 * r.edge_slope) < 1e-6 * std::abs(r.edge_slope));

    const auto ked = kinetic_energy_density(r.psi);
    const double hbar = 1.0;
    CHECK(ked.p_delta_p == doctest::Approx(hbar * hbar * std::norm(fd)).epsilon(1e-6));

    CHECK_THROWS_AS(build_reflected_state({2.0, 0.5, 1.0, {}}, g), DomainError);
    CHECK_THROWS_AS(build_reflected_state({-2.0, -8.0, 1.0, {}}, g), DomainError);
}

TEST_CASE("antisymmetrized states vanish on the excluded side") {
    const GridSpec g(1024, 20.0);
    const auto psi = make_antisymmetrized({-3.0, 10.0, 0.5, {}}, g, HalfLine::positive);
    const auto x = to_position(psi);
    double peak = 0.0, left = 0.0;
    for (std::size_t j = 0; j < g.n(); ++j) {
        peak = std::max(peak, std::abs(x.values[j]));
        if (x.abscissae[j] < 0.0) left = std::max(left, std::abs(x.values[j]));
    }
    CHECK(left <= 1e-8 * peak);
    CHECK(std::abs(psi.norm_squared() - 1.0) < 1e-10);
}

TEST_CASE("inner product is sesquilinear") {
    const GridSpec g(256, 20.0);
    const auto a = make_gaussian({1.0, 0.0, 1.0, {}}, g);
    auto b = make_gaussian({1.5, 0.3, 1.2, {}}, g);
    const cdouble ab = inner_product(a, b);
    const cdouble phase = std::polar(1.0, 0.7);
    for (auto& v : b.values) v *= phase;
    CHECK(std::abs(inner_product(a, b) - phase * ab) < 1e-14);
    CHECK(std::abs(inner_product(a, a) - 1.0) < 1e-12);
}
