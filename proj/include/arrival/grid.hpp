#pragma once

#include <cstddef>
#include <vector>

namespace arrival {

struct PhysConsts {
    double mass = 1.0;
    double hbar = 1.0;

    void validate() const;
};

// Uniform momentum grid p_k = -p_max + (k + 1/2) dp with n even, so p = 0 is
// never sampled and every p has a mirror sample -p at index n - 1 - k.
//
// The conjugate position grid has the same n, spacing dx = 2 pi hbar / (n dp)
// and the same half-offset layout on [-x_max, x_max], x_max = pi hbar / dp.
class GridSpec {
public:
    GridSpec(std::size_t n, double p_max);

    std::size_t n() const { return n_; }
    double p_max() const { return p_max_; }
    double dp() const { return dp_; }

    double momentum(std::size_t k) const;
    std::vector<double> momenta() const;
    std::size_t mirror(std::size_t k) const { return n_ - 1 - k; }

    double x_max(double hbar) const;
    double dx(double hbar) const;
    double position(std::size_t j, double hbar) const;
    std::vector<double> positions(double hbar) const;

    bool operator==(const GridSpec& other) const = default;

private:
    std::size_t n_;
    double p_max_;
    double dp_;
};

}  // namespace arrival
