#include "dsm/forward_disk.hpp"

#include <cmath>
#include <string>

#include "dsm/errors.hpp"
#include "dsm/specfun.hpp"

namespace dsm {
namespace {

cplx ipow(int p) {
    switch (((p % 4) + 4) % 4) {
    case 0: return 1.0;
    case 1: return I;
    case 2: return -1.0;
    default: return -I;
    }
}

// H_p and H'_p for p = -P..P at x (index p + P).
void hankel_table(int order, double x, std::vector<cplx>& h, std::vector<cplx>& dh) {
    std::vector<cplx> seq(order + 2);
    specfun::hankel1_sequence(x, seq);
    h.assign(2 * order + 1, 0.0);
    dh.assign(2 * order + 1, 0.0);
    auto signed_h = [&](int m) {
        const int a = std::abs(m);
        return (m < 0 && (a & 1)) ? -seq[a] : seq[a];
    };
    for (int p = -order; p <= order; ++p) {
        h[p + order] = signed_h(p);
        dh[p + order] = 0.5 * (signed_h(p - 1) - signed_h(p + 1));
    }
}

void check_order(int order) {
    if (order < 0 || order >= specfun::max_order) {
        throw ConfigError("truncation order must lie in [0, " +
                          std::to_string(specfun::max_order - 1) + "], got " +
                          std::to_string(order));
    }
}

} // namespace

void Material2D::validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ConfigError("wavenumber must be positive, got " + std::to_string(k));
    }
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ConfigError("disk radius must be positive, got " + std::to_string(radius));
    }
    if (a == cplx(0.0)) {
        throw ConfigError("anisotropy coefficient a must be nonzero");
    }
    if (n == cplx(0.0)) {
        throw ConfigError("refractive index n must be nonzero");
    }
}

ModalCoefficients modal_solve(const Material2D& mat, int order) {
    mat.validate();
    check_order(order);
    const double k = mat.k;
    const double kr = k * mat.radius;
    const cplx root_ratio = std::sqrt(mat.n / mat.a);
    const cplx root_product = std::sqrt(mat.n * mat.a);
    const cplx kin = k * root_ratio * mat.radius;

    std::vector<cplx> h, dh;
    hankel_table(order, kr, h, dh);

    ModalCoefficients out;
    out.material = mat;
    out.order = order;
    out.scattered.resize(2 * order + 1);
    out.interior.resize(2 * order + 1);
    for (int p = -order; p <= order; ++p) {
        const cplx hp = h[p + order];
        const cplx dhp = dh[p + order];
        const cplx jp = specfun::bessel_j(p, cplx(kr));
        const cplx djp = specfun::bessel_j_prime(p, cplx(kr));
        const cplx jin = specfun::bessel_j(p, kin);
        const cplx djin = specfun::bessel_j_prime(p, kin);

        const cplx m00 = hp;
        const cplx m01 = -I * mat.eta * k * root_product * djin - jin;
        const cplx m10 = k * dhp;
        const cplx m11 = -k * root_product * djin;
        const cplx b0 = -jp;
        const cplx b1 = -k * djp;

        const cplx det = m00 * m11 - m01 * m10;
        // Column-scaled test: the columns differ by many orders of magnitude
        // for high modes (H_p blows up, J_p vanishes).
        const double scale = std::hypot(std::abs(m00), std::abs(m10)) *
                             std::hypot(std::abs(m01), std::abs(m11));
        if (!(std::abs(det) > 1e-14 * scale)) {
            throw SingularSystemError("modal system is singular for mode p = " + std::to_string(p) +
                                      " at k = " + std::to_string(k));
        }
        out.scattered[p + order] = (b0 * m11 - m01 * b1) / det;
        out.interior[p + order] = (m00 * b1 - b0 * m10) / det;
    }
    return out;
}

cplx far_field_disk(const ModalCoefficients& coeffs, double theta_obs, double phi_inc) {
    const double psi = theta_obs - phi_inc;
    cplx sum = 0.0;
    for (int p = -coeffs.order; p <= coeffs.order; ++p) {
        sum += coeffs.us(p) * std::polar(1.0, p * psi);
    }
    return (4.0 / I) * sum;
}

FieldSample scattered_field_disk(const ModalCoefficients& coeffs, double r, double theta,
                                 double phi_inc) {
    if (!(r > coeffs.material.radius)) {
        throw DomainError("scattered-field series is only valid outside the disk (r = " +
                          std::to_string(r) + ")");
    }
    const double k = coeffs.material.k;
    std::vector<cplx> h, dh;
    hankel_table(coeffs.order, k * r, h, dh);
    const double psi = theta - phi_inc;
    FieldSample s{0.0, 0.0};
    for (int p = -coeffs.order; p <= coeffs.order; ++p) {
        const cplx common = ipow(p) * coeffs.us(p) * std::polar(1.0, p * psi);
        s.value += common * h[p + coeffs.order];
        s.derivative += common * dh[p + coeffs.order];
    }
    s.derivative *= k;
    return s;
}

FieldSample interior_field_disk(const ModalCoefficients& coeffs, double r, double theta,
                                double phi_inc) {
    const auto& mat = coeffs.material;
    if (!(r >= 0.0 && r < mat.radius)) {
        throw DomainError("interior series is only valid inside the disk (r = " +
                          std::to_string(r) + ")");
    }
    const cplx kin = mat.k * std::sqrt(mat.n / mat.a);
    const double psi = theta - phi_inc;
    FieldSample s{0.0, 0.0};
    for (int p = -coeffs.order; p <= coeffs.order; ++p) {
        const cplx common = ipow(p) * coeffs.ui(p) * std::polar(1.0, p * psi);
        s.value += common * specfun::bessel_j(p, kin * r);
        s.derivative += common * kin * specfun::bessel_j_prime(p, kin * r);
    }
    return s;
}

std::pair<FarFieldMatrix, CauchyDataSet> assemble_disk_data(const Material2D& mat,
                                                            const DirectionSet& dirs,
                                                            double measurement_radius,
                                                            int order) {
    if (!(measurement_radius > mat.radius)) {
        throw ConfigError("measurement radius " + std::to_string(measurement_radius) +
                          " must exceed the disk radius " + std::to_string(mat.radius));
    }
    const ModalCoefficients coeffs = modal_solve(mat, order);
    const int m = dirs.size();
    const double k = mat.k;

    std::vector<cplx> h, dh;
    hankel_table(order, k * measurement_radius, h, dh);

    // Both matrices depend on i - j only; evaluate one row of differences.
    std::vector<cplx> ff(m), us(m), dus(m);
    for (int d = 0; d < m; ++d) {
        const double psi = dirs.angle(d);
        cplx f = 0.0, u = 0.0, du = 0.0;
        for (int p = -order; p <= order; ++p) {
            const cplx e = std::polar(1.0, p * psi);
            f += coeffs.us(p) * e;
            const cplx common = ipow(p) * coeffs.us(p) * e;
            u += common * h[p + order];
            du += common * dh[p + order];
        }
        ff[d] = (4.0 / I) * f;
        us[d] = u;
        dus[d] = k * du;
    }

    FarFieldMatrix far;
    far.values.resize(m, m);
    far.k = k;
    far.provenance = Provenance::series;
    CauchyDataSet cauchy;
    cauchy.us.resize(m, m);
    cauchy.dus.resize(m, m);
    cauchy.radius = measurement_radius;
    cauchy.k = k;
    cauchy.provenance = Provenance::series;
    const double weight = 2.0 * pi / m;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const int d = ((i - j) % m + m) % m;
            far.values(i, j) = weight * ff[d];
            cauchy.us(i, j) = us[d];
            cauchy.dus(i, j) = dus[d];
        }
    }
    return {std::move(far), std::move(cauchy)};
}

} // namespace dsm
