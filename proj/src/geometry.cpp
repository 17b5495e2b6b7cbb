#include "dsm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "dsm/errors.hpp"

namespace dsm {
namespace {

constexpr int polygon_resolution = 4096;

} // namespace

std::string_view to_string(CurveKind kind) {
    switch (kind) {
    case CurveKind::circle: return "circle";
    case CurveKind::kite: return "kite";
    case CurveKind::peanut: return "peanut";
    }
    return "unknown";
}

CurveKind curve_kind_from_string(std::string_view name) {
    if (name == "circle") return CurveKind::circle;
    if (name == "kite") return CurveKind::kite;
    if (name == "peanut") return CurveKind::peanut;
    throw ConfigError("unknown shape '" + std::string(name) + "' (expected circle, kite or peanut)");
}

BoundaryCurve BoundaryCurve::circle(double radius, Vec2 center) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ConfigError("circle radius must be positive, got " + std::to_string(radius));
    }
    return BoundaryCurve(CurveKind::circle, radius, std::move(center));
}

BoundaryCurve BoundaryCurve::kite(Vec2 offset) {
    return BoundaryCurve(CurveKind::kite, 0.0, std::move(offset));
}

BoundaryCurve BoundaryCurve::peanut(Vec2 offset) {
    return BoundaryCurve(CurveKind::peanut, 0.0, std::move(offset));
}

BoundaryCurve make_curve(CurveKind kind, double radius, Vec2 offset) {
    switch (kind) {
    case CurveKind::circle: return BoundaryCurve::circle(radius, std::move(offset));
    case CurveKind::kite: return BoundaryCurve::kite(std::move(offset));
    case CurveKind::peanut: return BoundaryCurve::peanut(std::move(offset));
    }
    throw ConfigError("unknown curve kind");
}

Vec2 BoundaryCurve::point(double t) const {
    const double c = std::cos(t);
    const double s = std::sin(t);
    switch (kind_) {
    case CurveKind::circle: return offset_ + radius_ * Vec2(c, s);
    case CurveKind::kite: return offset_ + Vec2(-1.5 * s, c + 0.65 * std::cos(2.0 * t) - 0.65);
    case CurveKind::peanut: {
        const double r = 2.0 * std::sqrt(0.5 * s * s + 0.1 * c * c);
        return offset_ + r * Vec2(c, s);
    }
    }
    return offset_;
}

Vec2 BoundaryCurve::derivative(double t) const {
    const double c = std::cos(t);
    const double s = std::sin(t);
    switch (kind_) {
    case CurveKind::circle: return radius_ * Vec2(-s, c);
    case CurveKind::kite: return Vec2(-1.5 * c, -s - 1.3 * std::sin(2.0 * t));
    case CurveKind::peanut: {
        const double g = 0.1 + 0.4 * s * s;
        const double root = std::sqrt(g);
        const double r = 2.0 * root;
        const double dr = 0.4 * std::sin(2.0 * t) / root;
        return Vec2(dr * c - r * s, dr * s + r * c);
    }
    }
    return Vec2::Zero();
}

CurvePoint BoundaryCurve::sample(double t) const {
    const Vec2 d = derivative(t);
    const double speed = d.norm();
    const Vec2 tangent = d / speed;
    return {point(t), tangent, Vec2(tangent.y(), -tangent.x()), speed};
}

BoundaryCurve BoundaryCurve::translated(const Vec2& shift) const {
    return BoundaryCurve(kind_, radius_, offset_ + shift);
}

double BoundaryCurve::area() const {
    const int n = polygon_resolution;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * pi * i / n;
        const Vec2 x = point(t) - offset_;
        const Vec2 d = derivative(t);
        sum += x.x() * d.y() - x.y() * d.x();
    }
    return 0.5 * sum * (2.0 * pi / n);
}

Vec2 BoundaryCurve::centroid() const {
    const int n = polygon_resolution;
    double cx = 0.0;
    double cy = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = 2.0 * pi * i / n;
        const Vec2 x = point(t) - offset_;
        const Vec2 d = derivative(t);
        cx += x.x() * x.x() * d.y();
        cy -= x.y() * x.y() * d.x();
    }
    const double scale = (2.0 * pi / n) / (2.0 * area());
    return offset_ + scale * Vec2(cx, cy);
}

double BoundaryCurve::circumradius() const {
    double r = 0.0;
    for (int i = 0; i < polygon_resolution; ++i) {
        r = std::max(r, (point(2.0 * pi * i / polygon_resolution) - offset_).norm());
    }
    return r;
}

bool BoundaryCurve::contains(const Vec2& z) const {
    if (kind_ == CurveKind::circle) {
        return (z - offset_).norm() < radius_;
    }
    bool inside = false;
    Vec2 prev = point(0.0);
    for (int i = 1; i <= polygon_resolution; ++i) {
        const Vec2 cur = point(2.0 * pi * i / polygon_resolution);
        if ((cur.y() > z.y()) != (prev.y() > z.y())) {
            const double xcross =
                prev.x() + (z.y() - prev.y()) * (cur.x() - prev.x()) / (cur.y() - prev.y());
            if (z.x() < xcross) {
                inside = !inside;
            }
        }
        prev = cur;
    }
    return inside;
}

double BoundaryCurve::distance(const Vec2& z) const {
    if (kind_ == CurveKind::circle) {
        return std::abs((z - offset_).norm() - radius_);
    }
    double best = std::numeric_limits<double>::infinity();
    Vec2 prev = point(0.0);
    for (int i = 1; i <= polygon_resolution; ++i) {
        const Vec2 cur = point(2.0 * pi * i / polygon_resolution);
        const Vec2 seg = cur - prev;
        const double lam = std::clamp((z - prev).dot(seg) / seg.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (prev + lam * seg - z).norm());
        prev = cur;
    }
    return best;
}

CollocationMesh::CollocationMesh(BoundaryCurve curve, int faces)
    : curve_(std::move(curve)), faces_(faces), width_(0.0) {
    if (faces < min_faces) {
        throw ConfigError("collocation mesh needs at least " + std::to_string(min_faces) +
                          " faces, got " + std::to_string(faces));
    }
    width_ = 2.0 * pi / faces;
    constexpr std::array<double, 3> rule{3.0 / 8.0, 1.0 / 4.0, 3.0 / 8.0};
    nodes_.reserve(3 * faces);
    weights_.reserve(3 * faces);
    for (int f = 0; f < faces; ++f) {
        for (int m = 0; m < 3; ++m) {
            const double t = face_start(f) + local_nodes[m] * width_;
            const CurvePoint p = curve_.sample(t);
            nodes_.push_back({t, p.point, p.normal, p.speed});
            weights_.push_back(rule[m] * width_ * p.speed);
        }
    }
}

std::array<double, 3> CollocationMesh::basis(double s) {
    constexpr double a = local_nodes[0];
    constexpr double b = local_nodes[1];
    constexpr double c = local_nodes[2];
    return {(s - b) * (s - c) / ((a - b) * (a - c)), (s - a) * (s - c) / ((b - a) * (b - c)),
            (s - a) * (s - b) / ((c - a) * (c - b))};
}

DirectionSet::DirectionSet(int count) : count_(count) {
    if (count < 1) {
        throw ConfigError("direction count must be positive, got " + std::to_string(count));
    }
}

double DirectionSet::angle(int i) const { return 2.0 * pi * i / count_; }

Vec2 DirectionSet::direction(int i) const {
    const double a = angle(i);
    return {std::cos(a), std::sin(a)};
}

SamplingGrid::SamplingGrid(double xmin, double xmax, double ymin, double ymax, int nx, int ny)
    : xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax), nx_(nx), ny_(ny) {
    if (nx < 1 || ny < 1) {
        throw ConfigError("sampling grid must have at least one point per axis");
    }
    if (!(xmax >= xmin) || !(ymax >= ymin)) {
        throw ConfigError("sampling grid bounds are inverted");
    }
}

Vec2 SamplingGrid::point(int ix, int iy) const {
    const double x = nx_ == 1 ? 0.5 * (xmin_ + xmax_) : xmin_ + (xmax_ - xmin_) * ix / (nx_ - 1);
    const double y = ny_ == 1 ? 0.5 * (ymin_ + ymax_) : ymin_ + (ymax_ - ymin_) * iy / (ny_ - 1);
    return {x, y};
}

Vec2 SamplingGrid::point(int index) const { return point(index % nx_, index / nx_); }

SpdRoot sqrt_spd(const Mat2& a) {
    const double scale = a.cwiseAbs().maxCoeff();
    if (!a.allFinite() || std::abs(a(0, 1) - a(1, 0)) > 1e-12 * std::max(scale, 1.0)) {
        throw DomainError("anisotropy matrix must be finite and symmetric");
    }
    const Mat2 sym = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Mat2> eig(sym);
    const Eigen::Vector2d lambda = eig.eigenvalues();
    if (!(lambda.minCoeff() > 0.0)) {
        throw DomainError("anisotropy matrix must be positive definite");
    }
    const Mat2& v = eig.eigenvectors();
    const Eigen::Vector2d root = lambda.cwiseSqrt();
    SpdRoot r;
    r.sqrt = v * root.asDiagonal() * v.transpose();
    r.inv_sqrt = v * root.cwiseInverse().asDiagonal() * v.transpose();
    r.det_sqrt = root.prod();
    return r;
}

AnisotropyMatrix::AnisotropyMatrix(const Mat2& a) : a_(a), root_(sqrt_spd(a)) {}

} // namespace dsm
