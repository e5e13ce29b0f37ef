#include "arrival/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "arrival/errors.hpp"

namespace arrival::numerics {

namespace {

constexpr double pi = std::numbers::pi;

void check_bessel_args(double nu, double z) {
    if (!std::isfinite(nu)) throw DomainError("Bessel order must be finite");
    if (!(z >= 0.0) || !std::isfinite(z))
        throw DomainError("Bessel argument must be finite and >= 0, got " + std::to_string(z));
}

bool is_negative_integer(double nu) { return nu < 0.0 && nu == std::floor(nu); }

// Coefficients c_k = (-1)^k / (k! Gamma(k + nu + 1)) applied to (z/2)^{2k},
// accumulated in long double. Returns sum_k c_k (z/2)^{2k} w_k where
// w_k = 1 for the function and (2k + nu) for the derivative numerator.
long double scaled_series(double nu, double z, bool derivative) {
    const long double h = 0.5L * z;
    const long double q = -h * h;
    long double term = 1.0L / std::tgamma(static_cast<long double>(nu) + 1.0L);
    long double sum = 0.0L;
    constexpr int min_terms = 40;
    constexpr int max_terms = 600;
    int small_run = 0;
    for (int k = 0; k < max_terms; ++k) {
        const long double weight = derivative ? (2.0L * k + nu) : 1.0L;
        const long double contrib = term * weight;
        sum += contrib;
        if (!std::isfinite(static_cast<double>(sum)))
            throw NumericError("Bessel series overflow at z = " + std::to_string(z));
        if (std::fabs(contrib) <= 1e-21L * std::fabs(sum) || contrib == 0.0L)
            ++small_run;
        else
            small_run = 0;
        if (k + 1 >= min_terms && small_run >= 2) return sum;
        term *= q / ((k + 1.0L) * (k + 1.0L + nu));
    }
    throw NumericError("Bessel series did not converge at z = " + std::to_string(z));
}

}  // namespace

double bessel_j_scaled(double nu, double z) {
    check_bessel_args(nu, z);
    if (is_negative_integer(nu)) {
        // J_{-n} = (-1)^n J_n; the scaled form then carries (z/2)^{2n}.
        const int n = static_cast<int>(-nu);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return sign * std::pow(0.5 * z, 2 * n) * static_cast<double>(scaled_series(n, z, false));
    }
    return static_cast<double>(scaled_series(nu, z, false));
}

double bessel_j_series(double nu, double z) {
    check_bessel_args(nu, z);
    if (is_negative_integer(nu)) {
        const int n = static_cast<int>(-nu);
        return ((n % 2 == 0) ? 1.0 : -1.0) * bessel_j_series(n, z);
    }
    if (z == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        throw NumericError("J_nu(0) is singular for negative non-integer order");
    }
    const long double s = scaled_series(nu, z, false);
    const long double v = std::pow(0.5L * z, static_cast<long double>(nu)) * s;
    if (!std::isfinite(static_cast<double>(v)))
        throw NumericError("Bessel series overflow at z = " + std::to_string(z));
    return static_cast<double>(v);
}

std::pair<double, double> hankel_pq(double nu, double z) {
    check_bessel_args(nu, z);
    if (z <= 0.0) throw DomainError("Hankel expansion requires z > 0");
    const double mu = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = 1.0;
    constexpr int max_terms = 64;
    for (int k = 1; k < max_terms; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * (mu - odd * odd) / (k * 8.0 * z);
        if (next == 0.0) break;
        if (std::fabs(next) >= std::fabs(last)) break;  // past the smallest term
        term = next;
        last = std::fabs(next);
        // a_k / z^k enters P for even k and Q for odd k with alternating signs.
        switch (k % 4) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            default: p += term; break;
        }
        if (last < 1e-17) break;
    }
    return {p, q};
}

double bessel_j_asymptotic(double nu, double z) {
    check_bessel_args(nu, z);
    if (z == 0.0) throw DomainError("asymptotic Bessel branch requires z > 0");
    const auto [p, q] = hankel_pq(nu, z);
    const double chi = z - 0.5 * nu * pi - 0.25 * pi;
    return std::sqrt(2.0 / (pi * z)) * (p * std::cos(chi) - q * std::sin(chi));
}

double bessel_j(double nu, double z) {
    check_bessel_args(nu, z);
    return z < bessel_switchover ? bessel_j_series(nu, z) : bessel_j_asymptotic(nu, z);
}

double bessel_j_derivative(double nu, double z) {
    check_bessel_args(nu, z);
    if (z >= bessel_switchover)
        return 0.5 * (bessel_j_asymptotic(nu - 1.0, z) - bessel_j_asymptotic(nu + 1.0, z));
    if (is_negative_integer(nu)) {
        const int n = static_cast<int>(-nu);
        return ((n % 2 == 0) ? 1.0 : -1.0) * bessel_j_derivative(n, z);
    }
    if (z == 0.0) {
        if (nu == 0.0 || nu > 1.0) return 0.0;
        if (nu == 1.0) return 0.5;
        throw NumericError("J_nu'(0) is singular for order < 1");
    }
    // d/dz (z/2)^{2k+nu} = (2k+nu) (z/2)^{2k+nu} / z
    const long double s = scaled_series(nu, z, true);
    return static_cast<double>(std::pow(0.5L * z, static_cast<long double>(nu)) * s / z);
}

double gamma_fn(double x) {
    if (!std::isfinite(x)) throw DomainError("Gamma argument must be finite");
    if (x <= 0.0 && x == std::floor(x))
        throw DomainError("Gamma has a pole at " + std::to_string(x));
    return std::tgamma(x);
}

namespace {

template <class T>
T integrate_impl(std::span<const T> f, double dx, Rule rule) {
    if (!(dx > 0.0)) throw DomainError("integration step must be positive");
    const std::size_t n = f.size();
    if (rule == Rule::midpoint) {
        if (n < 1) throw DomainError("midpoint rule needs at least one sample");
        T s{};
        for (const auto& v : f) s += v;
        return s * dx;
    }
    if (n < 3) throw DomainError("Simpson rule needs at least 3 samples, got " + std::to_string(n));
    const std::size_t m = (n % 2 == 1) ? n : n - 1;
    T odd{};
    T even{};
    for (std::size_t i = 1; i + 1 < m; ++i) {
        if (i % 2 == 1)
            odd += f[i];
        else
            even += f[i];
    }
    T s = (f[0] + f[m - 1] + 4.0 * odd + 2.0 * even) * (dx / 3.0);
    if (m != n) s += 0.5 * dx * (f[n - 2] + f[n - 1]);
    return s;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// exp(i pi r / d) for integer r, reduced exactly before the trig call.
cdouble exact_phase(long long r, long long d) {
    long long m = r % (2 * d);
    if (m < 0) m += 2 * d;
    const double angle = pi * static_cast<double>(m) / static_cast<double>(d);
    return {std::cos(angle), std::sin(angle)};
}

void fft_radix2(std::vector<cdouble>& a, int sign) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    std::vector<cdouble> w(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        w[k] = exact_phase(sign * 2 * static_cast<long long>(k), static_cast<long long>(n));
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cdouble u = a[i + k];
                const cdouble v = a[i + k + len / 2] * w[k * stride];
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

// Shared body of the grid transforms; sign = +1 for momentum -> position.
std::vector<cdouble> grid_transform(const GridSpec& grid, std::span<const cdouble> in, double scale,
                                    int sign) {
    const std::size_t n = grid.n();
    if (in.size() != n) throw DomainError("sample count does not match grid size");
    const long long nn = static_cast<long long>(n);
    // p_k x_j / hbar = (2 pi / n)(k + a)(j + a), a = (1 - n)/2.
    std::vector<cdouble> buf(n);
    for (std::size_t k = 0; k < n; ++k)
        buf[k] = in[k] * exact_phase(sign * (1 - nn) * static_cast<long long>(k), nn);
    buf = dft(buf, sign);
    const cdouble global = exact_phase(sign * (1 - nn) * (1 - nn), 2 * nn);
    for (std::size_t j = 0; j < n; ++j)
        buf[j] *= scale * global * exact_phase(sign * (1 - nn) * static_cast<long long>(j), nn);
    return buf;
}

}  // namespace

cdouble integrate(std::span<const cdouble> samples, double dx, Rule rule) {
    return integrate_impl(samples, dx, rule);
}

double integrate(std::span<const double> samples, double dx, Rule rule) {
    return integrate_impl(samples, dx, rule);
}

std::vector<cdouble> dft(std::span<const cdouble> in, int sign) {
    if (sign != 1 && sign != -1) throw DomainError("DFT sign must be +1 or -1");
    std::vector<cdouble> out(in.begin(), in.end());
    const std::size_t n = out.size();
    if (n <= 1) return out;
    if (is_power_of_two(n)) {
        fft_radix2(out, sign);
        return out;
    }
    const long long nn = static_cast<long long>(n);
    for (std::size_t j = 0; j < n; ++j) {
        cdouble s{};
        for (std::size_t k = 0; k < n; ++k)
            s += in[k] * exact_phase(sign * 2 * static_cast<long long>((j * k) % n), nn);
        out[j] = s;
    }
    return out;
}

std::vector<cdouble> momentum_to_position(const GridSpec& grid, std::span<const cdouble> psi_p,
                                          double hbar) {
    return grid_transform(grid, psi_p, grid.dp() / std::sqrt(2.0 * pi * hbar), +1);
}

std::vector<cdouble> position_to_momentum(const GridSpec& grid, std::span<const cdouble> psi_x,
                                          double hbar) {
    return grid_transform(grid, psi_x, grid.dx(hbar) / std::sqrt(2.0 * pi * hbar), -1);
}

std::vector<cdouble> momentum_to_points(const GridSpec& grid, std::span<const cdouble> psi_p,
                                        std::span<const double> x, double hbar) {
    if (psi_p.size() != grid.n()) throw DomainError("sample count does not match grid size");
    const double scale = grid.dp() / std::sqrt(2.0 * pi * hbar);
    std::vector<cdouble> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) throw DomainError("position samples must be finite");
        const cdouble step = std::polar(1.0, grid.dp() * x[i] / hbar);
        cdouble phase{};
        cdouble s{};
        for (std::size_t k = 0; k < grid.n(); ++k) {
            if (k % 64 == 0)
                phase = std::polar(1.0, grid.momentum(k) * x[i] / hbar);
            else
                phase *= step;
            s += phase * psi_p[k];
        }
        out[i] = scale * s;
    }
    return out;
}

std::vector<double> derivative_weights(std::span<const double> nodes, double at) {
    const std::size_t n = nodes.size();
    if (n < 2) throw DomainError("derivative stencil needs at least 2 nodes");
    std::vector<double> w(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t m = 0; m < n; ++m) {
            if (m == a) continue;
            if (nodes[a] == nodes[m]) throw DomainError("derivative stencil has repeated nodes");
            double prod = 1.0 / (nodes[a] - nodes[m]);
            for (std::size_t l = 0; l < n; ++l) {
                if (l == a || l == m) continue;
                prod *= (at - nodes[l]) / (nodes[a] - nodes[l]);
            }
            w[a] += prod;
        }
    }
    return w;
}

std::vector<double> chebyshev_nodes(std::size_t n, double a, double b) {
    if (n < 2) throw DomainError("Chebyshev grid needs at least 2 nodes");
    std::vector<double> x(n);
    const double nm = static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j)
        x[j] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(pi * static_cast<double>(j) / nm);
    return x;
}

std::vector<cdouble> chebyshev_derivative(std::span<const cdouble> f, double a, double b) {
    const std::size_t n = f.size();
    if (n < 2) throw DomainError("Chebyshev derivative needs at least 2 nodes");
    const double nm = static_cast<double>(n - 1);
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = std::cos(pi * static_cast<double>(j) / nm);
    auto c = [n](std::size_t i) {
        const double base = (i == 0 || i == n - 1) ? 2.0 : 1.0;
        return (i % 2 == 0) ? base : -base;
    };
    std::vector<cdouble> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        cdouble s{};
        double diag = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double d = c(i) / (c(j) * (x[i] - x[j]));
            s += d * f[j];
            diag -= d;
        }
        s += diag * f[i];
        out[i] = s * (2.0 / (b - a));
    }
    return out;
}

}  // namespace arrival::numerics
