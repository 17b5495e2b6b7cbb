#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dsm/errors.hpp"
#include "dsm/geometry.hpp"

using namespace dsm;

namespace {

std::vector<BoundaryCurve> all_shapes() {
    return {BoundaryCurve::circle(2.0), BoundaryCurve::kite(), BoundaryCurve::peanut()};
}

// Shoelace area of a fine polygon, independent of the curve's own quadrature.
double polygon_area(const BoundaryCurve& c, int n) {
    double a = 0.0;
    for (int i = 0; i < n; ++i) {
        const Vec2 p = c.point(2.0 * pi * i / n);
        const Vec2 q = c.point(2.0 * pi * (i + 1) / n);
        a += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * a;
}

double arclength(const CollocationMesh& mesh) {
    double s = 0.0;
    for (double w : mesh.weights()) {
        s += w;
    }
    return s;
}

} // namespace

TEST_CASE("printed shape formulas") {
    const CurvePoint c = BoundaryCurve::circle(2.0).sample(0.0);
    CHECK((c.point - Vec2(2.0, 0.0)).norm() < 1e-15);
    CHECK((c.normal - Vec2(1.0, 0.0)).norm() < 1e-15);
    // cos(pi/2) + 0.65 cos(pi) - 0.65 = -1.3
    CHECK((BoundaryCurve::kite().point(pi / 2) - Vec2(-1.5, -1.3)).norm() < 1e-14);
    CHECK((BoundaryCurve::peanut().point(0.0) - Vec2(2.0 * std::sqrt(0.1), 0.0)).norm() < 1e-15);
    const Vec2 shift(0.3, -0.2);
    CHECK((BoundaryCurve::kite(shift).point(1.0) - BoundaryCurve::kite().point(1.0) - shift)
              .norm() < 1e-15);
}

TEST_CASE("frame invariants and derivatives") {
    for (const auto& curve : all_shapes()) {
        for (int i = 0; i < 50; ++i) {
            const double t = 2.0 * pi * (i + 0.37) / 50;
            const CurvePoint p = curve.sample(t);
            CHECK(p.speed > 0.0);
            CHECK(std::abs(p.normal.dot(p.tangent)) < 1e-14);
            CHECK(std::abs(p.normal.norm() - 1.0) < 1e-14);
            const double h = 1e-6;
            const Vec2 fd = (curve.point(t + h) - curve.point(t - h)) / (2.0 * h);
            CHECK((fd - curve.derivative(t)).norm() < 1e-8);
            CHECK(std::abs(fd.norm() - p.speed) < 1e-8);
        }
        // Counterclockwise orientation: positive signed area.
        CHECK(polygon_area(curve, 4000) > 0.0);
    }
}

TEST_CASE("area, centroid and normals point outward") {
    CHECK(BoundaryCurve::circle(2.0).area() == doctest::Approx(4.0 * pi).epsilon(1e-13));
    for (const auto& curve : all_shapes()) {
        CHECK(curve.area() == doctest::Approx(polygon_area(curve, 20000)).epsilon(1e-7));
        const Vec2 c = curve.centroid();
        const CollocationMesh mesh(curve, 40);
        for (const auto& node : mesh.nodes()) {
            CHECK((node.point - c).dot(node.normal) > 0.0);
        }
    }
    CHECK(BoundaryCurve::peanut().centroid().norm() < 1e-12);
    CHECK(std::abs(BoundaryCurve::kite().centroid().x()) < 1e-12);
}

TEST_CASE("containment and distance") {
    const auto disk = BoundaryCurve::circle(0.75);
    CHECK(disk.contains(Vec2(0.1, 0.2)));
    CHECK_FALSE(disk.contains(Vec2(0.8, 0.0)));
    CHECK(disk.distance(Vec2(2.0, 0.0)) == doctest::Approx(1.25));
    const auto kite = BoundaryCurve::kite();
    CHECK(kite.contains(kite.centroid()));
    CHECK(kite.contains(Vec2(0.0, 0.5)));
    CHECK_FALSE(kite.contains(Vec2(0.0, 1.2)));
    CHECK(kite.distance(Vec2(0.0, 1.0)) < 1e-12); // the curve at t = 0
    CHECK(kite.distance(Vec2(0.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-6));
    const auto peanut = BoundaryCurve::peanut();
    CHECK(peanut.contains(Vec2::Zero()));
    CHECK(peanut.distance(Vec2(0.0, 3.0)) ==
          doctest::Approx(3.0 - std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("shape names and factory") {
    CHECK(curve_kind_from_string("kite") == CurveKind::kite);
    CHECK(to_string(CurveKind::peanut) == "peanut");
    CHECK_THROWS_AS(curve_kind_from_string("star"), ConfigError);
    CHECK_THROWS_AS(make_curve(CurveKind::circle, 0.0), ConfigError);
    CHECK(make_curve(CurveKind::circle, 3.0).radius() == 3.0);
}

TEST_CASE("collocation mesh layout") {
    const CollocationMesh mesh(BoundaryCurve::circle(2.0), 10);
    CHECK(mesh.size() == 30);
    for (int i = 0; i < mesh.size(); ++i) {
        CHECK(std::abs(mesh.node(i).point.norm() - 2.0) < 1e-14);
        if (i > 0) {
            CHECK(mesh.node(i).t > mesh.node(i - 1).t);
        }
        const double local = (mesh.node(i).t - mesh.face_start(i / 3)) / mesh.face_width();
        CHECK(local == doctest::Approx(CollocationMesh::local_nodes[i % 3]));
    }
    CHECK(CollocationMesh(BoundaryCurve::kite(), 80).size() == 240);
    CHECK_THROWS_AS(CollocationMesh(BoundaryCurve::kite(), 3), ConfigError);
}

TEST_CASE("quadratic basis is interpolatory and reproduces quadratics") {
    for (int m = 0; m < 3; ++m) {
        const auto b = CollocationMesh::basis(CollocationMesh::local_nodes[m]);
        for (int l = 0; l < 3; ++l) {
            CHECK(b[l] == doctest::Approx(m == l ? 1.0 : 0.0));
        }
    }
    for (double s : {0.0, 0.3, 0.77, 1.0}) {
        const auto b = CollocationMesh::basis(s);
        double one = 0.0, sq = 0.0;
        for (int l = 0; l < 3; ++l) {
            one += b[l];
            sq += b[l] * CollocationMesh::local_nodes[l] * CollocationMesh::local_nodes[l];
        }
        CHECK(one == doctest::Approx(1.0));
        CHECK(sq == doctest::Approx(s * s));
    }
}

TEST_CASE("arclength quadrature converges with order at least 3") {
    // Exact for the circle (constant speed); the kite exercises the rule.
    CHECK(std::abs(arclength(CollocationMesh(BoundaryCurve::circle(2.0), 40)) - 4.0 * pi) < 1e-8);
    const BoundaryCurve kite = BoundaryCurve::kite();
    double exact = 0.0;
    const int n = 20000; // periodic trapezoid rule, spectrally accurate
    for (int i = 0; i < n; ++i) {
        exact += kite.sample(2.0 * pi * i / n).speed;
    }
    exact *= 2.0 * pi / n;
    double prev = std::abs(arclength(CollocationMesh(kite, 10)) - exact);
    for (int faces : {20, 40}) {
        const double err = std::abs(arclength(CollocationMesh(kite, faces)) - exact);
        CHECK(prev / err >= 8.0);
        prev = err;
    }
}

TEST_CASE("directions and sampling grid") {
    const DirectionSet dirs;
    CHECK(dirs.size() == 64);
    CHECK(dirs.angle(16) == doctest::Approx(pi / 2));
    for (int i = 0; i < dirs.size(); ++i) {
        CHECK(std::abs(dirs.direction(i).norm() - 1.0) < 1e-15);
    }
    CHECK_THROWS_AS(DirectionSet(0), ConfigError);

    const SamplingGrid grid;
    CHECK(grid.size() == 10000);
    CHECK((grid.point(0) - Vec2(-2.0, -2.0)).norm() < 1e-15);
    CHECK((grid.point(grid.size() - 1) - Vec2(2.0, 2.0)).norm() < 1e-15);
    CHECK((grid.point(1) - grid.point(0)).norm() == doctest::Approx(4.0 / 99.0));
    CHECK((grid.point(100) - grid.point(3, 1) + Vec2(3.0 * 4.0 / 99.0, 0.0)).norm() < 1e-14);
    CHECK_THROWS_AS(SamplingGrid(-2, 2, -2, 2, 0, 10), ConfigError);
}

TEST_CASE("SPD square roots") {
    const SpdRoot id = sqrt_spd(Mat2::Identity());
    CHECK((id.sqrt - Mat2::Identity()).norm() < 1e-15);
    const SpdRoot four = sqrt_spd(4.0 * Mat2::Identity());
    CHECK((four.sqrt - 2.0 * Mat2::Identity()).norm() < 1e-15);
    CHECK(four.det_sqrt == doctest::Approx(4.0));

    Mat2 a;
    a << 4, 1, 1, 4;
    const SpdRoot r = sqrt_spd(a);
    const double s5 = std::sqrt(5.0), s3 = std::sqrt(3.0);
    Mat2 expected;
    expected << (s5 + s3) / 2, (s5 - s3) / 2, (s5 - s3) / 2, (s5 + s3) / 2;
    CHECK((r.sqrt - expected).norm() < 1e-14);
    CHECK((r.sqrt * r.sqrt - a).norm() < 1e-12);
    CHECK((r.inv_sqrt * r.sqrt - Mat2::Identity()).norm() < 1e-12);
    CHECK(r.det_sqrt == doctest::Approx(std::sqrt(15.0)));

    Mat2 skew;
    skew << 1, 2, 0, 1;
    CHECK_THROWS_AS(sqrt_spd(skew), DomainError);
    Mat2 indefinite;
    indefinite << 1, 2, 2, 1;
    CHECK_THROWS_AS(sqrt_spd(indefinite), DomainError);
}
