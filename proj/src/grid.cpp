#include "arrival/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "arrival/errors.hpp"

namespace arrival {

void PhysConsts::validate() const {
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw DomainError("mass must be a finite positive number");
    if (!(hbar > 0.0) || !std::isfinite(hbar))
        throw DomainError("hbar must be a finite positive number");
}

GridSpec::GridSpec(std::size_t n, double p_max) : n_(n), p_max_(p_max) {
    if (n < 4 || n % 2 != 0)
        throw DomainError("grid size n must be even and >= 4, got " + std::to_string(n));
    if (!(p_max > 0.0) || !std::isfinite(p_max))
        throw DomainError("p_max must be a finite positive number");
    dp_ = 2.0 * p_max / static_cast<double>(n);
}

double GridSpec::momentum(std::size_t k) const {
    return dp_ * (static_cast<double>(k) + 0.5 - 0.5 * static_cast<double>(n_));
}

std::vector<double> GridSpec::momenta() const {
    std::vector<double> p(n_);
    for (std::size_t k = 0; k < n_; ++k) p[k] = momentum(k);
    return p;
}

double GridSpec::x_max(double hbar) const { return std::numbers::pi * hbar / dp_; }

double GridSpec::dx(double hbar) const { return 2.0 * x_max(hbar) / static_cast<double>(n_); }

double GridSpec::position(std::size_t j, double hbar) const {
    return dx(hbar) * (static_cast<double>(j) + 0.5 - 0.5 * static_cast<double>(n_));
}

std::vector<double> GridSpec::positions(double hbar) const {
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) x[j] = position(j, hbar);
    return x;
}

}  // namespace arrival
