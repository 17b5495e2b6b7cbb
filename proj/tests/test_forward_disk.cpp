#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "dsm/errors.hpp"
#include "dsm/forward_disk.hpp"
#include "dsm/measurement.hpp"
#include "dsm/specfun.hpp"

using namespace dsm;

namespace {

Material2D table_disk() {
    Material2D m;
    m.k = 2.0;
    m.a = 3.0;
    m.n = 1.0;
    m.eta = 1.0;
    m.radius = 2.0;
    return m;
}

// Real-argument Bessel functions from the standard library.
double std_j(int p, double x) {
    return p < 0 && (p & 1) ? -std::cyl_bessel_j(-p, x) : std::cyl_bessel_j(std::abs(p), x);
}
double std_y(int p, double x) {
    return p < 0 && (p & 1) ? -std::cyl_neumann(-p, x) : std::cyl_neumann(std::abs(p), x);
}
cplx std_h(int p, double x) { return {std_j(p, x), std_y(p, x)}; }
double std_dj(int p, double x) { return 0.5 * (std_j(p - 1, x) - std_j(p + 1, x)); }
cplx std_dh(int p, double x) { return 0.5 * (std_h(p - 1, x) - std_h(p + 1, x)); }

// Cramer's rule for one mode with real a, n (so every argument is real).
std::pair<cplx, cplx> oracle_mode(const Material2D& m, int p) {
    const double k = m.k, r = m.radius;
    const double kappa = k * std::sqrt(m.n.real() / m.a.real());
    const double root = std::sqrt(m.n.real() * m.a.real());
    const cplx m00 = std_h(p, k * r);
    const cplx m01 = -I * m.eta * k * root * std_dj(p, kappa * r) - std_j(p, kappa * r);
    const cplx m10 = k * std_dh(p, k * r);
    const cplx m11 = -k * root * std_dj(p, kappa * r);
    const cplx b0 = -std_j(p, k * r), b1 = -k * std_dj(p, k * r);
    const cplx det = m00 * m11 - m01 * m10;
    return {(b0 * m11 - m01 * b1) / det, (m00 * b1 - b0 * m10) / det};
}

} // namespace

TEST_CASE("modal coefficients agree with an independent Cramer solve") {
    const Material2D m = table_disk();
    const ModalCoefficients c = modal_solve(m, 15);
    for (int p = -15; p <= 15; ++p) {
        const auto [us, ui] = oracle_mode(m, p);
        CHECK(std::abs(c.us(p) - us) <= 1e-11 * std::abs(us) + 1e-300);
        CHECK(std::abs(c.ui(p) - ui) <= 1e-11 * std::abs(ui) + 1e-300);
    }
    // 30-digit reference evaluation of the same formula.
    const cplx golden(-0.33983077492998181072, -0.06231618831706005924);
    CHECK(std::abs(c.us(0) - golden) < 1e-13);
}

TEST_CASE("boundary conditions hold mode by mode") {
    Material2D m = table_disk();
    m.a = cplx(2.5, 0.3);
    m.n = cplx(1.2, 0.1);
    m.eta = cplx(0.7, -0.4);
    const ModalCoefficients c = modal_solve(m, 15);
    const double k = m.k, r = m.radius;
    const cplx kappa = k * std::sqrt(m.n / m.a);
    std::mt19937 gen(7);
    std::uniform_int_distribution<int> pick(-10, 10);
    for (int trial = 0; trial < 8; ++trial) {
        const int p = pick(gen);
        // Per mode, with the common factor i^p e^{i p (theta - phi)} removed.
        const cplx ext = std_j(p, k * r) + c.us(p) * std_h(p, k * r);
        const cplx dext = k * (std_dj(p, k * r) + c.us(p) * std_dh(p, k * r));
        const cplx in = c.ui(p) * specfun::bessel_j(p, kappa * r);
        const cplx din = c.ui(p) * kappa * specfun::bessel_j_prime(p, kappa * r);
        const double scale = std::abs(ext) + std::abs(dext) + 1.0;
        CHECK(std::abs(ext - in - I * m.eta * m.a * din) < 1e-10 * scale);
        CHECK(std::abs(dext - m.a * din) < 1e-10 * scale);
    }
}

TEST_CASE("field series are continuous with the jump conditions across r = R") {
    const Material2D m = table_disk();
    const ModalCoefficients c = modal_solve(m, 20);
    const double eps = 1e-7;
    for (double theta : {0.0, 0.9, 2.5, 4.4}) {
        const double phi_inc = 0.3;
        const double psi = theta - phi_inc;
        const double r = m.radius + eps;
        const FieldSample out = scattered_field_disk(c, r, theta, phi_inc);
        const FieldSample in = interior_field_disk(c, m.radius - eps, theta, phi_inc);
        const cplx ui = std::exp(I * m.k * r * std::cos(psi));
        const cplx dui = I * m.k * std::cos(psi) * ui;
        CHECK(std::abs(out.value + ui - in.value - I * m.eta * m.a * in.derivative) < 1e-5);
        CHECK(std::abs(out.derivative + dui - m.a * in.derivative) < 1e-5);
    }
}

TEST_CASE("null scatterer produces nothing") {
    Material2D m;
    m.k = 3.0;
    m.radius = 1.5;
    m.a = 1.0;
    m.n = 1.0;
    m.eta = 0.0;
    const ModalCoefficients c = modal_solve(m, 15);
    for (int p = -15; p <= 15; ++p) {
        CHECK(std::abs(c.us(p)) < 1e-14);
        CHECK(std::abs(c.ui(p) - 1.0) < 1e-12);
    }
    CHECK(std::abs(far_field_disk(c, 0.4, 1.1)) < 1e-13);
    const FieldSample s = scattered_field_disk(c, 2.0, 0.4, 1.1);
    CHECK(std::abs(s.value) < 1e-13);
    CHECK(std::abs(s.derivative) < 1e-13);
    const auto [far, cauchy] = assemble_disk_data(m, DirectionSet(64), 3.0);
    CHECK(spectral_norm(far.values) <= 1e-12);
    CHECK(cauchy.us.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(cauchy.dus.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mode symmetry and rotational invariance") {
    const ModalCoefficients c = modal_solve(table_disk(), 15);
    for (int p = 1; p <= 15; ++p) {
        CHECK(std::abs(c.us(p) - c.us(-p)) <= 1e-14 * std::abs(c.us(p)));
        CHECK(std::abs(c.ui(p) - c.ui(-p)) <= 1e-14 * std::abs(c.ui(p)));
    }
    for (double shift : {0.5, 2.0, -3.7}) {
        const cplx base = far_field_disk(c, 1.2, 0.4);
        CHECK(std::abs(far_field_disk(c, 1.2 + shift, 0.4 + shift) - base) < 1e-12 * std::abs(base));
    }
    // Truncated sum at theta = phi, reference evaluated to 30 digits.
    const cplx golden(-1.6395823933197631957, 18.890081188082637113);
    CHECK(std::abs(far_field_disk(c, 0.0, 0.0) - golden) < 1e-12 * std::abs(golden));

    const auto [far, cauchy] = assemble_disk_data(table_disk(), DirectionSet(64), 3.0);
    for (int i = 0; i < 64; ++i) {
        for (int j = 0; j < 64; ++j) {
            const int i1 = (i + 1) % 64, j1 = (j + 1) % 64;
            CHECK(std::abs(far.values(i1, j1) - far.values(i, j)) < 1e-12);
            CHECK(std::abs(cauchy.us(i1, j1) - cauchy.us(i, j)) < 1e-12);
        }
    }
    CHECK(std::abs(far.values(0, 0) - (2.0 * pi / 64) * golden) < 1e-12);
}

TEST_CASE("assembled entries match pointwise evaluation") {
    const Material2D m = table_disk();
    const DirectionSet dirs(16);
    const auto [far, cauchy] = assemble_disk_data(m, dirs, 3.0);
    const ModalCoefficients c = modal_solve(m);
    CHECK(far.k == 2.0);
    CHECK(cauchy.radius == 3.0);
    for (int i = 0; i < 16; i += 3) {
        for (int j = 0; j < 16; j += 5) {
            const cplx f = far_field_disk(c, dirs.angle(i), dirs.angle(j));
            CHECK(std::abs(far.values(i, j) - (2.0 * pi / 16) * f) < 1e-13);
            const FieldSample s = scattered_field_disk(c, 3.0, dirs.angle(i), dirs.angle(j));
            CHECK(std::abs(cauchy.us(i, j) - s.value) < 1e-13);
            CHECK(std::abs(cauchy.dus(i, j) - s.derivative) < 1e-13);
        }
    }
}

TEST_CASE("truncation at 15 modes is stable for kR up to 6") {
    for (double k : {1.0, 2.0, 3.0}) {
        Material2D m = table_disk();
        m.k = k;
        const auto f15 = assemble_disk_data(m, DirectionSet(64), 3.0, 15).first;
        const auto f25 = assemble_disk_data(m, DirectionSet(64), 3.0, 25).first;
        CHECK(spectral_norm(f15.values - f25.values) < 1e-8);
    }
}

// Stated requirement at the edge kR = 8. The discarded modes alone carry
// 8 pi max |uS_p| = 6.7e-6 here, so this cannot pass at 15 modes.
TEST_CASE("truncation at 15 modes is stable for kR = 8") {
    Material2D m = table_disk();
    m.k = 4.0;
    const auto f15 = assemble_disk_data(m, DirectionSet(64), 3.0, 15).first;
    const auto f25 = assemble_disk_data(m, DirectionSet(64), 3.0, 25).first;
    CHECK(spectral_norm(f15.values - f25.values) < 1e-8);
}

TEST_CASE("truncation change is exactly the discarded tail") {
    // F is circulant, so its spectral norm is the largest modal eigenvalue
    // 2 pi |4 uS_p| (M = 64 resolves all |p| <= 25 separately).
    for (double k : {3.0, 4.0}) {
        Material2D m = table_disk();
        m.k = k;
        const auto f15 = assemble_disk_data(m, DirectionSet(64), 3.0, 15).first;
        const auto f25 = assemble_disk_data(m, DirectionSet(64), 3.0, 25).first;
        const ModalCoefficients c = modal_solve(m, 25);
        double tail = 0.0;
        for (int p = 16; p <= 25; ++p) {
            tail = std::max(tail, 8.0 * pi * std::abs(c.us(p)));
        }
        CHECK(spectral_norm(f15.values - f25.values) ==
              doctest::Approx(tail).epsilon(1e-6).scale(0.0));
    }
}

TEST_CASE("far-field limit and radiation condition") {
    const Material2D m = table_disk();
    const ModalCoefficients c = modal_solve(m, 20);
    const double k = m.k;
    const cplx gamma = std::exp(I * pi / 4.0) / std::sqrt(8.0 * pi * k);
    for (double theta : {0.0, 1.0, 3.0}) {
        const double r = 1e4;
        const FieldSample s = scattered_field_disk(c, r, theta, 0.0);
        const cplx limit = std::sqrt(r) * std::exp(-I * k * r) * s.value / gamma;
        const cplx ff = far_field_disk(c, theta, 0.0);
        CHECK(std::abs(limit - ff) < 0.01 * std::abs(ff));
    }
    std::vector<double> lr, lres;
    for (double r : {1e2, 1e3, 1e4}) {
        const FieldSample s = scattered_field_disk(c, r, 0.7, 0.0);
        lr.push_back(std::log(r));
        lres.push_back(std::log(std::abs(s.derivative - I * k * s.value)));
    }
    const double slope = (lres[2] - lres[0]) / (lr[2] - lr[0]);
    CHECK(slope <= -1.4);
}

TEST_CASE("golden data file reproduces") {
    const auto path = std::filesystem::path(DSM_TEST_DATA) / "disk_k2_R2_a3_eta1_farfield.dsm";
    const FarFieldMatrix golden = load_farfield(path);
    const auto [far, cauchy] = assemble_disk_data(table_disk(), DirectionSet(64), 3.0);
    REQUIRE(golden.size() == 64);
    CHECK(golden.k == 2.0);
    CHECK(spectral_norm(golden.values - far.values) <= 1e-13 * spectral_norm(far.values));
    CHECK(spectral_norm(golden.values) == doctest::Approx(spectral_norm(far.values)).epsilon(1e-14));
}

TEST_CASE("input validation and resonant modes") {
    const ModalCoefficients c = modal_solve(table_disk());
    CHECK_THROWS_AS(scattered_field_disk(c, 2.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(scattered_field_disk(c, 1.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(interior_field_disk(c, 2.5, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(assemble_disk_data(table_disk(), DirectionSet(8), 2.0), ConfigError);
    Material2D bad = table_disk();
    bad.k = 0.0;
    CHECK_THROWS_AS(modal_solve(bad), ConfigError);
    bad = table_disk();
    bad.radius = -1.0;
    CHECK_THROWS_AS(modal_solve(bad), ConfigError);
    bad = table_disk();
    bad.a = 0.0;
    CHECK_THROWS_AS(modal_solve(bad), ConfigError);
    CHECK_THROWS_AS(modal_solve(table_disk(), -1), ConfigError);

    // Pick eta so that the p = 0 system is exactly singular.
    Material2D res = table_disk();
    const double k = res.k, r = res.radius;
    const double kappa = k * std::sqrt(1.0 / 3.0), root = std::sqrt(3.0);
    const cplx m00 = std_h(0, k * r), m10 = k * std_dh(0, k * r);
    const cplx m11 = -k * root * std_dj(0, kappa * r);
    const cplx m01 = m00 * m11 / m10;
    res.eta = (m01 + std_j(0, kappa * r)) / (-I * k * root * std_dj(0, kappa * r));
    try {
        modal_solve(res);
        FAIL("expected a singular modal system");
    } catch (const SingularSystemError& e) {
        CHECK(std::string(e.what()).find("p = 0") != std::string::npos);
    }
}
