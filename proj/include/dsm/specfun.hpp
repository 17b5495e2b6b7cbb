#pragma once

// Cylindrical functions of integer order.
//
// J_p is available for complex arguments inside the envelope |p| <= 60,
// |z| <= 200. Y_p and H^(1)_p are only ever needed at real positive
// arguments (k r, k |x - y|), so only that case is provided.
//
// Evaluation:
//   * |z| <= 12: ascending power series.
//   * |z| > 12: Miller backward recurrence, normalised through the
//     Jacobi-Anger sum exp(-/+ i z) = J_0 + 2 sum (-/+ i)^m J_m, picking the
//     sign for which |exp(...)| >= 1 so the sum never cancels.
//   * Real sequences J_0..J_n: Miller recurrence normalised by
//     J_0 + 2 sum J_2m = 1; Y_0 and Y_1 by the Neumann series in J_m for
//     x <= 25 and by Hankel's asymptotic expansion beyond; Y_n by upward
//     recurrence.
// Relative accuracy is about 1e-12 inside the envelope, away from zeros.

#include <complex>
#include <span>

#include "dsm/types.hpp"

namespace dsm::specfun {

inline constexpr int max_order = 60;
inline constexpr double max_argument = 200.0;

cplx bessel_j(int order, cplx z);
cplx bessel_j_prime(int order, cplx z);

double bessel_j(int order, double x);
double bessel_y(int order, double x);

cplx hankel1(int order, double x);
cplx hankel1_prime(int order, double x);

// H^(1)_0(x) and H^(1)_1(x) in one pass; the boundary-element kernels call
// this millions of times.
struct Hankel01 {
    cplx h0;
    cplx h1;
};
Hankel01 hankel1_01(double x);

// J_0(x) and J_1(x) for real x >= 0 (no upper bound).
struct Bessel01 {
    double j0;
    double j1;
};
Bessel01 bessel_j01(double x);

// Fills out[m] = H^(1)_m(x) for m = 0..out.size()-1; x > 0.
void hankel1_sequence(double x, std::span<cplx> out);

} // namespace dsm::specfun
