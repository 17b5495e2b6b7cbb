#include "dsm/specfun.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "dsm/errors.hpp"

namespace dsm::specfun {
namespace {

constexpr double euler_gamma = 0.57721566490153286061;
constexpr double series_radius = 12.0;
constexpr double neumann_limit = 25.0;
constexpr double rescale_threshold = 1e250;
constexpr double rescale_factor = 1e-250;

// Largest Miller start index used for x <= max_argument and orders <= 61.
constexpr int max_miller_start = 320;

int miller_start(double x, int nmax) {
    const double m = std::max(static_cast<double>(nmax), x);
    const int n = static_cast<int>(std::ceil((m + 30.0 + 5.0 * std::sqrt(m)) / 2.0));
    return 2 * n;
}

void check_envelope(int order, double modulus) {
    if (std::abs(order) > max_order) {
        throw DomainError("Bessel order " + std::to_string(order) + " outside |p| <= " +
                          std::to_string(max_order));
    }
    if (!(modulus <= max_argument)) {
        throw DomainError("Bessel argument modulus " + std::to_string(modulus) +
                          " outside |z| <= " + std::to_string(max_argument));
    }
}

inline int reflection_sign(int order) { return (order < 0 && (order & 1)) ? -1 : 1; }

// Miller recurrence for real x in (0, max_argument]; j[0..n] normalised by
// J_0 + 2 sum J_2m = 1. Returns the start index actually used (entries above
// nmax are valid too, which the Neumann sums rely on).
int real_miller(double x, int nmax, std::array<double, max_miller_start + 2>& j) {
    const int start = miller_start(x, nmax);
    j[start + 1] = 0.0;
    j[start] = 1.0;
    const double two_over_x = 2.0 / x;
    for (int m = start; m >= 1; --m) {
        j[m - 1] = m * two_over_x * j[m] - j[m + 1];
        if (std::abs(j[m - 1]) > rescale_threshold) {
            for (int i = m - 1; i <= start + 1; ++i) {
                j[i] *= rescale_factor;
            }
        }
    }
    double norm = j[0];
    for (int m = 2; m <= start; m += 2) {
        norm += 2.0 * j[m];
    }
    const double scale = 1.0 / norm;
    for (int m = 0; m <= start; ++m) {
        j[m] *= scale;
    }
    return start;
}

struct Asymptotic01 {
    double j0, j1, y0, y1;
};

// Hankel's expansion; accurate to rounding for x >= 25.
Asymptotic01 hankel_asymptotic(double x) {
    auto pq = [x](double mu, double& p, double& q) {
        p = 1.0;
        q = 0.0;
        double term = 1.0;
        double last = 1.0;
        for (int k = 1; k < 200; ++k) {
            const double odd = 2.0 * k - 1.0;
            term *= (mu - odd * odd) / (k * 8.0 * x);
            const double mag = std::abs(term);
            if (mag > last) {
                break;
            }
            last = mag;
            const int quarter = k % 4;
            // k = 1: +Q, 2: -P, 3: -Q, 4: +P
            switch (quarter) {
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
            default: p += term; break;
            }
            if (mag < 1e-18) {
                break;
            }
        }
    };
    double p0, q0, p1, q1;
    pq(0.0, p0, q0);
    pq(4.0, p1, q1);
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double r2 = 1.0 / std::sqrt(2.0);
    // chi_0 = x - pi/4, chi_1 = x - 3 pi/4
    const double cos0 = (c + s) * r2, sin0 = (s - c) * r2;
    const double cos1 = (s - c) * r2, sin1 = -(s + c) * r2;
    const double amp = std::sqrt(2.0 / (pi * x));
    return {amp * (p0 * cos0 - q0 * sin0), amp * (p1 * cos1 - q1 * sin1),
            amp * (p0 * sin0 + q0 * cos0), amp * (p1 * sin1 + q1 * cos1)};
}

// Neumann series for Y_0, Y_1 given a normalised Miller array.
void neumann_y01(double x, const std::array<double, max_miller_start + 2>& j, int start,
                 double& y0, double& y1) {
    const double lg = std::log(0.5 * x) + euler_gamma;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int m = 1; 2 * m + 1 <= start + 1; ++m) {
        const double sign = (m & 1) ? -1.0 : 1.0;
        s0 += sign * j[2 * m] / m;
        s1 += sign * (j[2 * m - 1] - j[2 * m + 1]) / m;
    }
    y0 = (2.0 / pi) * (lg * j[0] - 2.0 * s0);
    y1 = (2.0 / pi) * (-j[0] / x + lg * j[1] + s1);
}

cplx bessel_j_series(int p, cplx z) {
    const cplx half = 0.5 * z;
    cplx term = 1.0;
    for (int i = 1; i <= p; ++i) {
        term *= half / static_cast<double>(i);
    }
    const cplx q = -half * half;
    const double half_mod = std::abs(half);
    cplx sum = term;
    for (int m = 1; m < 400; ++m) {
        term *= q / (static_cast<double>(m) * (m + p));
        sum += term;
        if (m > half_mod && std::abs(term) <= 1e-17 * std::abs(sum)) {
            break;
        }
    }
    return sum;
}

cplx bessel_j_miller(int p, cplx z) {
    const int start = miller_start(std::abs(z), p);
    std::vector<cplx> j(start + 2);
    j[start + 1] = 0.0;
    j[start] = 1.0;
    const cplx two_over_z = 2.0 / z;
    for (int m = start; m >= 1; --m) {
        j[m - 1] = static_cast<double>(m) * two_over_z * j[m] - j[m + 1];
        if (std::abs(j[m - 1]) > rescale_threshold) {
            for (int i = m - 1; i <= start + 1; ++i) {
                j[i] *= rescale_factor;
            }
        }
    }
    // Jacobi-Anger at theta = pi (upper half plane) or theta = 0 (lower).
    const bool upper = z.imag() >= 0.0;
    const cplx unit = upper ? cplx(0.0, -1.0) : cplx(0.0, 1.0);
    const cplx target = upper ? std::exp(-I * z) : std::exp(I * z);
    cplx sum = j[0];
    cplx power = 1.0;
    for (int m = 1; m <= start; ++m) {
        power *= unit;
        sum += 2.0 * power * j[m];
    }
    return j[p] * (target / sum);
}

// Real J_0..J_n and Y_0..Y_n with n <= 61, x > 0.
void real_sequences(double x, int n, std::span<double> jv, std::span<double> yv) {
    double y0, y1;
    if (x <= max_argument) {
        std::array<double, max_miller_start + 2> j{};
        const int start = real_miller(x, n, j);
        for (int m = 0; m <= n; ++m) {
            jv[m] = j[m];
        }
        if (x <= neumann_limit) {
            neumann_y01(x, j, start, y0, y1);
        } else {
            const auto a = hankel_asymptotic(x);
            y0 = a.y0;
            y1 = a.y1;
        }
    } else {
        // Upward recurrence is stable for J_m while m < x.
        const auto a = hankel_asymptotic(x);
        jv[0] = a.j0;
        if (n >= 1) {
            jv[1] = a.j1;
        }
        for (int m = 1; m < n; ++m) {
            jv[m + 1] = 2.0 * m / x * jv[m] - jv[m - 1];
        }
        y0 = a.y0;
        y1 = a.y1;
    }
    yv[0] = y0;
    if (n >= 1) {
        yv[1] = y1;
    }
    for (int m = 1; m < n; ++m) {
        yv[m + 1] = 2.0 * m / x * yv[m] - yv[m - 1];
    }
}

void check_positive(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw DomainError("Hankel function needs a finite positive argument, got " +
                          std::to_string(x));
    }
}

} // namespace

cplx bessel_j(int order, cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw DomainError("Bessel argument is not finite");
    }
    check_envelope(order, std::abs(z));
    const int p = std::abs(order);
    const double sign = reflection_sign(order);
    if (z == cplx(0.0)) {
        return p == 0 ? cplx(1.0) : cplx(0.0);
    }
    const cplx value = std::abs(z) <= series_radius ? bessel_j_series(p, z) : bessel_j_miller(p, z);
    return sign * value;
}

cplx bessel_j_prime(int order, cplx z) {
    check_envelope(order, std::abs(z));
    if (order == 0) {
        return -bessel_j(1, z);
    }
    // bessel_j rejects |order| = 61, so the outer neighbour goes through the
    // reflection-free internal path.
    auto j = [&](int m) -> cplx {
        const int p = std::abs(m);
        const double sign = reflection_sign(m);
        if (z == cplx(0.0)) {
            return p == 0 ? cplx(1.0) : cplx(0.0);
        }
        return sign * (std::abs(z) <= series_radius ? bessel_j_series(p, z) : bessel_j_miller(p, z));
    };
    return 0.5 * (j(order - 1) - j(order + 1));
}

double bessel_j(int order, double x) {
    if (!std::isfinite(x)) {
        throw DomainError("Bessel argument is not finite");
    }
    check_envelope(order, std::abs(x));
    const int p = std::abs(order);
    double sign = reflection_sign(order);
    if (x < 0.0 && (p & 1)) {
        sign = -sign;
    }
    const double ax = std::abs(x);
    if (ax == 0.0) {
        return p == 0 ? 1.0 : 0.0;
    }
    std::array<double, max_miller_start + 2> j{};
    real_miller(ax, p, j);
    return sign * j[p];
}

double bessel_y(int order, double x) {
    check_positive(x);
    if (std::abs(order) > max_order) {
        throw DomainError("Bessel order " + std::to_string(order) + " outside |p| <= " +
                          std::to_string(max_order));
    }
    const int p = std::abs(order);
    std::array<double, max_order + 2> jv{};
    std::array<double, max_order + 2> yv{};
    real_sequences(x, std::max(p, 1), std::span(jv), std::span(yv));
    return reflection_sign(order) * yv[p];
}

cplx hankel1(int order, double x) {
    check_positive(x);
    if (std::abs(order) > max_order) {
        throw DomainError("Hankel order " + std::to_string(order) + " outside |p| <= " +
                          std::to_string(max_order));
    }
    const int p = std::abs(order);
    std::array<double, max_order + 2> jv{};
    std::array<double, max_order + 2> yv{};
    real_sequences(x, std::max(p, 1), std::span(jv), std::span(yv));
    return static_cast<double>(reflection_sign(order)) * cplx(jv[p], yv[p]);
}

cplx hankel1_prime(int order, double x) {
    check_positive(x);
    if (std::abs(order) > max_order) {
        throw DomainError("Hankel order " + std::to_string(order) + " outside |p| <= " +
                          std::to_string(max_order));
    }
    const int p = std::abs(order);
    std::array<double, max_order + 3> jv{};
    std::array<double, max_order + 3> yv{};
    real_sequences(x, p + 1, std::span(jv), std::span(yv));
    auto h = [&](int m) {
        const int a = std::abs(m);
        return static_cast<double>(reflection_sign(m)) * cplx(jv[a], yv[a]);
    };
    return 0.5 * (h(order - 1) - h(order + 1));
}

Hankel01 hankel1_01(double x) {
    check_positive(x);
    if (x > neumann_limit) {
        const auto a = hankel_asymptotic(x);
        return {cplx(a.j0, a.y0), cplx(a.j1, a.y1)};
    }
    std::array<double, max_miller_start + 2> j{};
    const int start = real_miller(x, 1, j);
    double y0, y1;
    neumann_y01(x, j, start, y0, y1);
    return {cplx(j[0], y0), cplx(j[1], y1)};
}

Bessel01 bessel_j01(double x) {
    const double ax = std::abs(x);
    if (!std::isfinite(x)) {
        throw DomainError("Bessel argument is not finite");
    }
    if (ax == 0.0) {
        return {1.0, 0.0};
    }
    if (ax > neumann_limit) {
        const auto a = hankel_asymptotic(ax);
        return {a.j0, x < 0.0 ? -a.j1 : a.j1};
    }
    std::array<double, max_miller_start + 2> j{};
    real_miller(ax, 1, j);
    return {j[0], x < 0.0 ? -j[1] : j[1]};
}

void hankel1_sequence(double x, std::span<cplx> out) {
    check_positive(x);
    if (out.empty()) {
        return;
    }
    const int n = static_cast<int>(out.size()) - 1;
    if (n > max_order + 1) {
        throw DomainError("Hankel sequence longer than supported order range");
    }
    std::array<double, max_order + 3> jv{};
    std::array<double, max_order + 3> yv{};
    real_sequences(x, std::max(n, 1), std::span(jv), std::span(yv));
    for (int m = 0; m <= n; ++m) {
        out[m] = cplx(jv[m], yv[m]);
    }
}

} // namespace dsm::specfun
