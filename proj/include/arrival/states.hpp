#pragma once

#include <span>
#include <vector>

#include "arrival/grid.hpp"
#include "arrival/numerics.hpp"

namespace arrival {

enum class Representation { momentum, position };

// Samples of a state on a momentum grid, on its conjugate position grid, or
// at arbitrary positions. `grid` is always the underlying momentum grid.
struct WaveFunction {
    Representation rep = Representation::momentum;
    GridSpec grid{4, 1.0};
    PhysConsts consts;
    std::vector<double> abscissae;
    std::vector<cdouble> values;

    static WaveFunction in_momentum(const GridSpec& grid, const PhysConsts& consts,
                                    std::vector<cdouble> values);
    // Samples on the conjugate position grid.
    static WaveFunction in_position(const GridSpec& grid, const PhysConsts& consts,
                                    std::vector<cdouble> values);

    // True when abscissae are the grid's own momentum or conjugate samples.
    bool on_grid() const;
    // Midpoint rule on grid samples, Simpson on other uniform abscissae.
    double norm_squared() const;
    WaveFunction normalized() const;
};

struct GaussianSpec {
    double p0 = 10.0;
    double x0 = -5.0;
    double sigma_p = 1.0;
    PhysConsts consts;

    double sigma_x() const { return consts.hbar / (2.0 * sigma_p); }
    void validate() const;
};

WaveFunction make_gaussian(const GaussianSpec& spec, const GridSpec& grid);

// theta(-x)(phi(x) - phi(-x)) built from the base packet freely evolved by t,
// normalized and returned in momentum representation.
WaveFunction make_reflected_state(const GaussianSpec& base, const GridSpec& grid, double t = 0.0);

enum class HalfLine { negative, positive };

// theta(+-x)(phi(x) - phi(-x)) for the base packet evolved by t, normalized,
// in momentum representation. No support precondition on the base.
WaveFunction make_antisymmetrized(const GaussianSpec& base, const GridSpec& grid, HalfLine side,
                                  double t = 0.0);

struct ReflectedState {
    WaveFunction psi;
    // psi'(0-) of the normalized state, from the smooth odd extension 2 phi'(0).
    cdouble edge_slope;
};
ReflectedState build_reflected_state(const GaussianSpec& base, const GridSpec& grid, double t = 0.0);

WaveFunction evolve_free(const WaveFunction& psi, double t);

// Conjugate-grid transforms (exactly unitary) and evaluation at arbitrary x.
WaveFunction to_position(const WaveFunction& psi);
WaveFunction to_position(const WaveFunction& psi, std::span<const double> x_grid);
WaveFunction to_momentum(const WaveFunction& psi);

// Position samples at x = (i - half) h, i = 0..2 half, around the origin.
WaveFunction sample_near_origin(const WaveFunction& psi, double h, std::size_t half = 2);

// Lagrange stencil on the samples nearest x = 0 (five, or six when the
// fifth is a tie); the standard 5-point central formula when 0 is sampled.
cdouble derivative_at_origin(const WaveFunction& psi);

cdouble inner_product(const WaveFunction& a, const WaveFunction& b);
double mean_momentum(const WaveFunction& psi);
double mean_position(const WaveFunction& psi);

}  // namespace arrival
