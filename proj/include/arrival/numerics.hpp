#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "arrival/grid.hpp"

namespace arrival {

using cdouble = std::complex<double>;

namespace numerics {

// J_nu uses the ascending series for z < bessel_switchover and the Hankel
// expansion above it.
inline constexpr double bessel_switchover = 10.0;

double bessel_j(double nu, double z);
double bessel_j_series(double nu, double z);
double bessel_j_asymptotic(double nu, double z);
double bessel_j_derivative(double nu, double z);

// J_nu(z) / (z/2)^nu; entire in z, finite at z = 0 for any order.
double bessel_j_scaled(double nu, double z);

// Hankel amplitude sums: J_nu(z) = sqrt(2/(pi z)) (P cos chi - Q sin chi),
// chi = z - nu pi/2 - pi/4. Truncated at the smallest term.
std::pair<double, double> hankel_pq(double nu, double z);

double gamma_fn(double x);

enum class Rule {
    simpson,   // composite Simpson, trapezoid on the last panel for even counts
    midpoint,  // samples are cell midpoints (half-offset grids)
};

cdouble integrate(std::span<const cdouble> samples, double dx, Rule rule = Rule::simpson);
double integrate(std::span<const double> samples, double dx, Rule rule = Rule::simpson);

// Unnormalized DFT, out[j] = sum_k exp(sign 2 pi i jk/n) in[k].
// Radix-2 for power-of-two sizes, direct sum otherwise.
std::vector<cdouble> dft(std::span<const cdouble> in, int sign);

// Midpoint-rule Fourier pair between a momentum grid and its conjugate
// position grid; exactly unitary on the grid.
std::vector<cdouble> momentum_to_position(const GridSpec& grid, std::span<const cdouble> psi_p,
                                          double hbar);
std::vector<cdouble> position_to_momentum(const GridSpec& grid, std::span<const cdouble> psi_x,
                                          double hbar);

// psi(x) = (2 pi hbar)^{-1/2} sum_k dp exp(i p_k x / hbar) psi_k at arbitrary x.
std::vector<cdouble> momentum_to_points(const GridSpec& grid, std::span<const cdouble> psi_p,
                                        std::span<const double> x, double hbar);

// Weights w_i with f'(at) ~ sum_i w_i f(nodes_i) (Lagrange interpolant).
std::vector<double> derivative_weights(std::span<const double> nodes, double at);

// Chebyshev-Lobatto nodes on [a, b] (descending order, x_0 = b) and the
// spectral derivative of samples taken at those nodes.
std::vector<double> chebyshev_nodes(std::size_t n, double a, double b);
std::vector<cdouble> chebyshev_derivative(std::span<const cdouble> f, double a, double b);

}  // namespace numerics
}  // namespace arrival
