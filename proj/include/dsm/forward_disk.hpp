#pragma once

#include <utility>
#include <vector>

#include "dsm/geometry.hpp"
#include "dsm/measurement.hpp"
#include "dsm/types.hpp"

namespace dsm {

// Disk B(0, R) with A = a I, constant n and eta.
struct Material2D {
    double k = 1.0;
    cplx a = 1.0;
    cplx n = 1.0;
    cplx eta = 0.0;
    double radius = 1.0;

    void validate() const;
};

// Modal amplitudes of
//   u^s = sum_p i^p us_p H_p(k r) e^{i p (theta - phi)},        r > R
//   u   = sum_p i^p ui_p J_p(k sqrt(n/a) r) e^{i p (theta - phi)}, r < R
// for p = -P..P; index p + P.
struct ModalCoefficients {
    Material2D material;
    int order = 15;
    std::vector<cplx> scattered;
    std::vector<cplx> interior;

    cplx us(int p) const { return scattered[p + order]; }
    cplx ui(int p) const { return interior[p + order]; }
};

inline constexpr int default_truncation = 15;

// Cramer's rule on the 2x2 transmission system of each mode. The square
// roots sqrt(n/a) and sqrt(n a) use the principal branch.
ModalCoefficients modal_solve(const Material2D& mat, int order = default_truncation);

// u_inf(theta) = (4 / i) sum_p us_p e^{i p (theta - phi)}.
cplx far_field_disk(const ModalCoefficients& coeffs, double theta_obs, double phi_inc);

struct FieldSample {
    cplx value;
    cplx derivative; // radial (disk) or normal (general) derivative
};

// u^s and d_r u^s at (r, theta), r > R, for incidence angle phi.
FieldSample scattered_field_disk(const ModalCoefficients& coeffs, double r, double theta,
                                 double phi_inc);

// Interior total field u and d_r u at (r, theta), r < R.
FieldSample interior_field_disk(const ModalCoefficients& coeffs, double r, double theta,
                                double phi_inc);

// Far-field matrix F(i, j) = (2 pi / M) u_inf(x_i, y_j) and Cauchy matrices on
// the circle of radius measurement_radius.
std::pair<FarFieldMatrix, CauchyDataSet> assemble_disk_data(const Material2D& mat,
                                                            const DirectionSet& dirs,
                                                            double measurement_radius,
                                                            int order = default_truncation);

} // namespace dsm
