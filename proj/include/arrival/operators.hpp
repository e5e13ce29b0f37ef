#pragma once

#include <Eigen/Sparse>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "arrival/grid.hpp"
#include "arrival/numerics.hpp"
#include "arrival/states.hpp"

namespace arrival {

enum class EigenFamily { ab, kdm, mi, t3, new_op };

std::string_view family_name(EigenFamily family);
EigenFamily parse_family(std::string_view name);

// phi_tau(p) for the chosen family; p must be nonzero.
cdouble eigenstate(EigenFamily family, double tau, double p, const PhysConsts& consts);

namespace new_family {

// Above this z = p^2 tau / 2 m hbar the amplitude-phase form is used.
inline constexpr double asymptotic_switch = 35.0;

cdouble bessel_form(double tau, double p, const PhysConsts& consts);
cdouble asymptotic_form(double tau, double p, const PhysConsts& consts);
// e^{-i pi eps/8} (|p|/2 pi m hbar)^{1/2} e^{i eps z}
cdouble leading_large_momentum(double tau, double p, const PhysConsts& consts);
// lim_{p -> 0} |phi_tau(p)| / |p|
double low_momentum_slope(double tau, const PhysConsts& consts);

}  // namespace new_family

using SparseMatrix = Eigen::SparseMatrix<cdouble, Eigen::RowMajor>;

enum class OperatorKind {
    hamiltonian,
    pseudo_energy,
    reflection,
    sign_p,
    position,
    t_kdm,
    t_new_sym,
    t_new_via_kdm,
    t_dwell,
    j_current,
};

struct OperatorParams {
    double length = 0.0;  // T_DWELL region [0, L]
    double time = 0.0;    // J_CURRENT(t)
};

// M[j,k] ~ <p_j|O|p_k> dp, so M acts directly on momentum samples.
struct OperatorMatrix {
    SparseMatrix m;
    GridSpec grid{4, 1.0};
    PhysConsts consts;
    bool hermitian = false;

    std::vector<cdouble> apply(std::span<const cdouble> v) const;
    double max_abs() const;
};

// x-hat = i hbar d/dp uses 6th-order central differences with one-sided
// 7-point stencils on the first and last `fd_boundary_rows` rows.
inline constexpr std::size_t fd_boundary_rows = 3;

OperatorMatrix build_operator(OperatorKind kind, const GridSpec& grid, const PhysConsts& consts,
                              OperatorParams params = {});
OperatorMatrix commutator(const OperatorMatrix& a, const OperatorMatrix& b);

// max |M - M^dagger| over rows and columns at least `margin` from each edge,
// relative to max |M| over the same block.
double hermiticity_defect(const OperatorMatrix& op, std::size_t margin = fd_boundary_rows);

// Smooth test vector: Gaussian bumps at +center and -0.9 center (width sigma),
// the second with a relative phase, times e^{-i p x_shift / hbar}; unit peak.
std::vector<cdouble> probe_vector(const GridSpec& grid, double center, double sigma, double x_shift,
                                  double hbar);

// max over rows at least `margin` from each edge of |(a v)_j - (b v)_j|.
double action_deviation(const OperatorMatrix& a, const OperatorMatrix& b, std::span<const cdouble> v,
                        std::size_t margin = fd_boundary_rows);

cdouble overlap(const WaveFunction& psi, EigenFamily family, double tau);

struct Distribution {
    std::vector<double> tau;
    std::vector<double> values;
    std::string source;
};

Distribution distribution(const WaveFunction& psi, EigenFamily family, std::span<const double> tau_grid);

// (1/m)(1/2 pi hbar) |sum dp |p|^{1/2} psi_t(p)|^2
double kijowski_distribution(const WaveFunction& psi, double t);

// Probability current at x = 0 after free evolution by t.
double current_expectation(const WaveFunction& psi, double t);

struct KineticEnergyDensity {
    double p_delta_p;          // <p delta(x) p>
    double abs_p_delta_abs_p;  // <|p| delta(x) |p|>
};
KineticEnergyDensity kinetic_energy_density(const WaveFunction& psi);

// Low-momentum prefactor pi / (2 Gamma(3/4)^2) m^{-3/2} hbar^{-1/2}.
double low_momentum_coefficient(const PhysConsts& consts);

// Integrates the second-order eigenvalue equation for the odd part from
// p = 0+ and returns phi_tau on the grid (unnormalized, arbitrary phase).
WaveFunction solve_eigen_ode(double tau, const GridSpec& grid, const PhysConsts& consts);

// Residual of the first-order eigenvalue equation for the closed-form NEW
// state, by Chebyshev differentiation on panels of [p_lo, p_hi] (p_lo > 0).
// Relative to max |tau phi| on the interval.
double eigen_residual(double tau, double p_lo, double p_hi, const PhysConsts& consts);

// Residual of y'' - (2/p) y' + (tau/m hbar)^2 p^2 y = 0 for
// y = |p|^{3/2} J_{nu}(p^2 tau / 2 m hbar) (nu = -3/4 or 3/4 with the
// p|p|^{1/2} prefactor), relative to the largest term.
double second_order_residual(double tau, double nu, double p_lo, double p_hi, const PhysConsts& consts);

struct CompletenessReport {
    double error;          // ||psi_rec - psi|| / ||psi||
    // Each momentum sector reconstructed from its own component and
    // restricted to that sector: P+ rec(P+ psi) + P- rec(P- psi).
    double sector_error;
    double captured_mass;  // integral of |<phi_tau|psi>|^2 over the range
    bool outside_mass_warning;
};

// tau_n = 0 picks a step resolving the fastest grid phase p_max^2 / 2 m hbar.
CompletenessReport completeness_check(EigenFamily family, const WaveFunction& psi, double tau_min,
                                      double tau_max, std::size_t tau_n = 0);

struct DwellReport {
    std::size_t rows;            // sub-block size
    double deviation;            // max |T_D - (mL/|p|)(1+R)| / max mL/|p| on the block
    double pointwise_deviation;  // max over rows of the per-row relative deviation
};

// Rows with theta_lo <= |p| L / hbar <= theta_hi.
DwellReport dwell_relation_check(double length, const GridSpec& grid, const PhysConsts& consts,
                                 double theta_lo, double theta_hi);
DwellReport dwell_low_momentum_check(double length, const GridSpec& grid, const PhysConsts& consts);

// Probe action of T_D against e^{-iLp/hbar} T e^{iLp/hbar} - T, relative to
// max |T_D v| on interior rows.
double dwell_shift_deviation(double length, const GridSpec& grid, const PhysConsts& consts,
                             std::span<const cdouble> probe);

}  // namespace arrival
