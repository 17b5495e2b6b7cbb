#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "dsm/types.hpp"

namespace dsm {

enum class CurveKind { circle, kite, peanut };

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view name);

// Point of a parametrised boundary with its local frame.
struct CurvePoint {
    Vec2 point;
    Vec2 tangent; // unit
    Vec2 normal;  // unit, outward
    double speed; // |x'(t)|
};

// Closed, counterclockwise C^2 curve t in [0, 2 pi) -> R^2.
//   circle: center + R (cos t, sin t)
//   kite:   (-1.5 sin t, cos t + 0.65 cos 2t - 0.65)
//   peanut: 2 sqrt(sin^2 t / 2 + cos^2 t / 10) (cos t, sin t)
// Every shape can be translated by an offset.
class BoundaryCurve {
public:
    static BoundaryCurve circle(double radius, Vec2 center = Vec2::Zero());
    static BoundaryCurve kite(Vec2 offset = Vec2::Zero());
    static BoundaryCurve peanut(Vec2 offset = Vec2::Zero());

    CurveKind kind() const { return kind_; }
    double radius() const { return radius_; }
    Vec2 offset() const { return offset_; }

    Vec2 point(double t) const;
    Vec2 derivative(double t) const;
    CurvePoint sample(double t) const;

    BoundaryCurve translated(const Vec2& shift) const;

    // Enclosed area and area centroid (Green's theorem, spectrally accurate
    // trapezoidal rule).
    double area() const;
    Vec2 centroid() const;
    // max |x - offset| over the curve.
    double circumradius() const;

    // Point-in-region test by winding number of a fine polygon.
    bool contains(const Vec2& z) const;
    // Distance from z to the curve (0 on the curve), via a fine polygon.
    double distance(const Vec2& z) const;

private:
    BoundaryCurve(CurveKind kind, double radius, Vec2 offset)
        : kind_(kind), radius_(radius), offset_(std::move(offset)) {}

    CurveKind kind_;
    double radius_;
    Vec2 offset_;
};

// Factory for the CLI: radius only matters for circles.
BoundaryCurve make_curve(CurveKind kind, double radius = 1.0, Vec2 offset = Vec2::Zero());

struct CollocationNode {
    double t;
    Vec2 point;
    Vec2 normal;
    double speed;
};

// Uniform partition of [0, 2 pi) into faces; each face carries a quadratic
// density interpolant through three collocation nodes at the local
// parameters 1/6, 1/2, 5/6 (strictly inside the face).
class CollocationMesh {
public:
    static constexpr std::array<double, 3> local_nodes{1.0 / 6.0, 0.5, 5.0 / 6.0};
    static constexpr int min_faces = 4;

    CollocationMesh(BoundaryCurve curve, int faces);

    const BoundaryCurve& curve() const { return curve_; }
    int faces() const { return faces_; }
    int size() const { return 3 * faces_; }
    double face_width() const { return width_; }
    double face_start(int face) const { return face * width_; }

    const std::vector<CollocationNode>& nodes() const { return nodes_; }
    const CollocationNode& node(int i) const { return nodes_[i]; }
    // Node quadrature weights (interpolatory rule 3/8, 1/4, 3/8 per face
    // times face width and speed); sum approximates the arclength.
    const std::vector<double>& weights() const { return weights_; }

    // Quadratic Lagrange basis on the local nodes, s in [0, 1].
    static std::array<double, 3> basis(double s);

private:
    BoundaryCurve curve_;
    int faces_;
    double width_;
    std::vector<CollocationNode> nodes_;
    std::vector<double> weights_;
};

// M equidistant unit directions theta_i = 2 pi i / M, i = 0..M-1.
class DirectionSet {
public:
    explicit DirectionSet(int count = 64);

    int size() const { return count_; }
    double angle(int i) const;
    Vec2 direction(int i) const;

private:
    int count_;
};

// Row-major grid of equally spaced points over [xmin, xmax] x [ymin, ymax],
// endpoints included. Row index runs over y, column index over x.
class SamplingGrid {
public:
    SamplingGrid(double xmin = -2.0, double xmax = 2.0, double ymin = -2.0, double ymax = 2.0,
                 int nx = 100, int ny = 100);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int size() const { return nx_ * ny_; }
    double xmin() const { return xmin_; }
    double xmax() const { return xmax_; }
    double ymin() const { return ymin_; }
    double ymax() const { return ymax_; }

    Vec2 point(int index) const;
    Vec2 point(int ix, int iy) const;

private:
    double xmin_, xmax_, ymin_, ymax_;
    int nx_, ny_;
};

// Principal square root of a real symmetric positive definite 2x2 matrix.
struct SpdRoot {
    Mat2 sqrt;
    Mat2 inv_sqrt;
    double det_sqrt;
};

SpdRoot sqrt_spd(const Mat2& a);

// Real SPD anisotropy coefficient with its cached square roots. Complex A is
// only supported by the disk solver, through a scalar a.
class AnisotropyMatrix {
public:
    explicit AnisotropyMatrix(const Mat2& a);
    static AnisotropyMatrix identity() { return AnisotropyMatrix(Mat2::Identity()); }
    static AnisotropyMatrix scalar(double a) { return AnisotropyMatrix(a * Mat2::Identity()); }

    const Mat2& matrix() const { return a_; }
    const Mat2& sqrt() const { return root_.sqrt; }
    const Mat2& inv_sqrt() const { return root_.inv_sqrt; }
    double det_sqrt() const { return root_.det_sqrt; }

private:
    Mat2 a_;
    SpdRoot root_;
};

} // namespace dsm
