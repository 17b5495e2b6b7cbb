#include "dsm/forward_bie.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dsm/errors.hpp"
#include "dsm/quadrature.hpp"
#include "dsm/specfun.hpp"

namespace dsm {
namespace {

// One quadrature sample on a face: local parameter, geometry, and the
// combined weight (Gauss weight * face width * speed).
struct FaceSample {
    Vec2 point;
    std::array<double, 3> basis;
    double weight;
};

struct FaceRule {
    std::vector<FaceSample> samples;
};

FaceSample make_sample(const CollocationMesh& mesh, int face, double s, double w) {
    const double t = mesh.face_start(face) + s * mesh.face_width();
    const CurvePoint p = mesh.curve().sample(t);
    return {p.point, CollocationMesh::basis(s), w * mesh.face_width() * p.speed};
}

FaceRule gauss_face(const CollocationMesh& mesh, int face, int n) {
    const GaussRule& g = gauss_legendre(n);
    FaceRule rule;
    rule.samples.reserve(n);
    for (int q = 0; q < n; ++q) {
        rule.samples.push_back(make_sample(mesh, face, g.nodes[q], g.weights[q]));
    }
    return rule;
}

// Graded rule on the face, split at local parameter s0 and clustered there:
// s = s0 -/+ len u^grading.
FaceRule graded_face(const CollocationMesh& mesh, int face, double s0, int n, int grading) {
    const GaussRule& g = gauss_legendre(n);
    FaceRule rule;
    rule.samples.reserve(2 * n);
    for (const double dir : {-1.0, 1.0}) {
        const double len = dir < 0.0 ? s0 : 1.0 - s0;
        for (int q = 0; q < n; ++q) {
            const double u = g.nodes[q];
            const double up = std::pow(u, grading - 1);
            const double s = s0 + dir * len * up * u;
            const double w = g.weights[q] * len * grading * up;
            rule.samples.push_back(make_sample(mesh, face, s, w));
        }
    }
    return rule;
}

double face_length(const CollocationMesh& mesh, int face) {
    double len = 0.0;
    for (int m = 0; m < 3; ++m) {
        len += mesh.weights()[3 * face + m];
    }
    return len;
}

double face_distance(const CollocationMesh& mesh, int face, const Vec2& x) {
    double d = std::numeric_limits<double>::infinity();
    for (int m = 0; m < 3; ++m) {
        d = std::min(d, (mesh.node(3 * face + m).point - x).norm());
    }
    const BoundaryCurve& c = mesh.curve();
    d = std::min(d, (c.point(mesh.face_start(face)) - x).norm());
    d = std::min(d, (c.point(mesh.face_start(face) + mesh.face_width()) - x).norm());
    return d;
}

// Precomputed rules of every face at the three regular sizes.
struct MeshRules {
    std::vector<FaceRule> near, mid, far;
    std::vector<double> length;
};

MeshRules build_rules(const CollocationMesh& mesh, double k_eff, const QuadratureOptions& quad) {
    MeshRules r;
    const int nf = mesh.faces();
    r.near.reserve(nf);
    r.mid.reserve(nf);
    r.far.reserve(nf);
    r.length.resize(nf);
    for (int f = 0; f < nf; ++f) {
        r.length[f] = face_length(mesh, f);
        const int oscillation = static_cast<int>(std::ceil(k_eff * r.length[f])) + 6;
        r.near.push_back(gauss_face(mesh, f, std::max(quad.near_points, oscillation)));
        r.mid.push_back(gauss_face(mesh, f, std::max(quad.mid_points, oscillation)));
        r.far.push_back(gauss_face(mesh, f, std::max(quad.far_points, oscillation)));
    }
    return r;
}

const FaceRule& pick_rule(const MeshRules& rules, int face, double distance) {
    const double ratio = distance / rules.length[face];
    if (ratio < 0.5) {
        return rules.near[face];
    }
    if (ratio < 2.0) {
        return rules.mid[face];
    }
    return rules.far[face];
}

// Isotropic and anisotropic kernels at one (collocation point, source) pair.
struct KernelValues {
    cplx single, dlayer, single_aniso, dlayer_aniso;
};

struct KernelContext {
    double k;
    Mat2 inv_sqrt;
    double inv_det;
    bool isotropic;
};

KernelValues kernels(const KernelContext& ctx, const Vec2& x, const Vec2& nu, const Vec2& nu_a,
                     const Vec2& y) {
    const Vec2 diff = x - y;
    const double r = diff.norm();
    const auto h = specfun::hankel1_01(ctx.k * r);
    KernelValues v;
    v.single = 0.25 * I * h.h0;
    v.dlayer = -0.25 * I * ctx.k * h.h1 * diff.dot(nu) / r;
    if (ctx.isotropic) {
        v.single_aniso = v.single;
        v.dlayer_aniso = v.dlayer;
        return v;
    }
    const Vec2 d = ctx.inv_sqrt * diff;
    const double rho = d.norm();
    const auto ha = specfun::hankel1_01(ctx.k * rho);
    v.single_aniso = 0.25 * I * ha.h0 * ctx.inv_det;
    v.dlayer_aniso = -0.25 * I * ctx.k * ha.h1 * nu_a.dot(d) / rho * ctx.inv_det;
    return v;
}

double effective_wavenumber(const BieMaterial& mat) {
    return mat.k * std::max(1.0, mat.A.inv_sqrt().norm());
}

void check_measurement_radius(const CollocationMesh& mesh, double radius) {
    double reach = 0.0;
    for (const auto& n : mesh.nodes()) {
        reach = std::max(reach, n.point.norm());
    }
    if (!(radius > reach)) {
        throw ConfigError("measurement radius " + std::to_string(radius) +
                          " does not enclose the scatterer (reach " + std::to_string(reach) + ")");
    }
}

} // namespace

void BieMaterial::validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw ConfigError("wavenumber must be positive, got " + std::to_string(k));
    }
    if (!std::isfinite(eta.real()) || !std::isfinite(eta.imag())) {
        throw ConfigError("conductivity must be finite");
    }
}

cplx phi(double k, const Vec2& x, const Vec2& y) {
    const double r = (x - y).norm();
    if (!(r > 0.0)) {
        throw DomainError("fundamental solution evaluated at coincident points");
    }
    return 0.25 * I * specfun::hankel1(0, k * r);
}

cplx phi_tilde(double k, const AnisotropyMatrix& A, const Vec2& x, const Vec2& y) {
    const double rho = (A.inv_sqrt() * (x - y)).norm();
    if (!(rho > 0.0)) {
        throw DomainError("fundamental solution evaluated at coincident points");
    }
    return 0.25 * I * specfun::hankel1(0, k * rho) / A.det_sqrt();
}

cplx phi_tilde_conormal(double k, const AnisotropyMatrix& A, const Vec2& x, const Vec2& nu,
                        const Vec2& y) {
    const Vec2 d = A.inv_sqrt() * (x - y);
    const double rho = d.norm();
    if (!(rho > 0.0)) {
        throw DomainError("fundamental solution evaluated at coincident points");
    }
    const Vec2 nu_a = A.sqrt() * nu;
    return -0.25 * I * k * specfun::hankel1(1, k * rho) * nu_a.dot(d) / rho / A.det_sqrt();
}

BoundaryOperators assemble_operators(const CollocationMesh& mesh, const BieMaterial& mat,
                                     const QuadratureOptions& quad) {
    mat.validate();
    const int n = mesh.size();
    const int nf = mesh.faces();
    const MeshRules rules = build_rules(mesh, effective_wavenumber(mat), quad);
    const KernelContext ctx{mat.k, mat.A.inv_sqrt(), 1.0 / mat.A.det_sqrt(),
                            mat.A.matrix().isApprox(Mat2::Identity(), 0.0)};

    BoundaryOperators ops;
    ops.single = CMatrix::Zero(n, n);
    ops.single_aniso = CMatrix::Zero(n, n);
    ops.adjoint_double = CMatrix::Zero(n, n);
    ops.adjoint_double_aniso = CMatrix::Zero(n, n);

    for (int i = 0; i < n; ++i) {
        const CollocationNode& node = mesh.node(i);
        const Vec2 nu_a = mat.A.sqrt() * node.normal;
        const int own_face = i / 3;
        const double own_s = CollocationMesh::local_nodes[i % 3];
        for (int f = 0; f < nf; ++f) {
            std::array<cplx, 3> s{}, sa{}, d{}, da{};
            auto accumulate = [&](const FaceRule& rule, bool singles, bool doubles) {
                for (const FaceSample& q : rule.samples) {
                    const KernelValues kv = kernels(ctx, node.point, node.normal, nu_a, q.point);
                    for (int m = 0; m < 3; ++m) {
                        const double w = q.weight * q.basis[m];
                        if (singles) {
                            s[m] += w * kv.single;
                            sa[m] += w * kv.single_aniso;
                        }
                        if (doubles) {
                            d[m] += w * kv.dlayer;
                            da[m] += w * kv.dlayer_aniso;
                        }
                    }
                }
            };
            if (f == own_face) {
                // The double-layer kernels are bounded but nu . (x - y) cancels
                // badly at the points a strong grading packs next to x.
                accumulate(graded_face(mesh, f, own_s, quad.self_points, quad.grading), true,
                           false);
                accumulate(graded_face(mesh, f, own_s, quad.self_points, quad.dlayer_grading),
                           false, true);
            } else {
                accumulate(pick_rule(rules, f, face_distance(mesh, f, node.point)), true, true);
            }
            for (int m = 0; m < 3; ++m) {
                const int col = 3 * f + m;
                ops.single(i, col) = s[m];
                ops.single_aniso(i, col) = sa[m];
                ops.adjoint_double(i, col) = d[m];
                ops.adjoint_double_aniso(i, col) = da[m];
            }
        }
    }
    if (!ops.single.allFinite() || !ops.single_aniso.allFinite() ||
        !ops.adjoint_double.allFinite() || !ops.adjoint_double_aniso.allFinite()) {
        throw SingularSystemError("boundary operator assembly produced non-finite entries");
    }
    return ops;
}

KernelBlockSystem assemble_system(const CollocationMesh& mesh, const BieMaterial& mat,
                                  const QuadratureOptions& quad) {
    KernelBlockSystem sys{mesh, mat, assemble_operators(mesh, mat, quad), {}, {}, 0.0};
    const int n = mesh.size();
    const CMatrix id = CMatrix::Identity(n, n);
    const auto& b = sys.blocks;
    sys.matrix.resize(2 * n, 2 * n);
    sys.matrix.topLeftCorner(n, n) = -0.5 * id + b.adjoint_double;
    sys.matrix.topRightCorner(n, n) = -0.5 * id - b.adjoint_double_aniso;
    sys.matrix.bottomLeftCorner(n, n) = b.single;
    sys.matrix.bottomRightCorner(n, n) =
        -b.single_aniso - I * mat.eta * (0.5 * id + b.adjoint_double_aniso);
    sys.lu.compute(sys.matrix);
    sys.rcond = sys.lu.rcond();
    return sys;
}

CVector incident_rhs(const KernelBlockSystem& system, const Vec2& incident) {
    const int n = system.mesh.size();
    const double k = system.material.k;
    CVector rhs(2 * n);
    for (int i = 0; i < n; ++i) {
        const CollocationNode& node = system.mesh.node(i);
        const cplx ui = std::polar(1.0, k * node.point.dot(incident));
        rhs(i) = -I * k * node.normal.dot(incident) * ui;
        rhs(n + i) = -ui;
    }
    return rhs;
}

namespace {

void check_conditioning(const KernelBlockSystem& system) {
    if (!(system.rcond > 1e-14)) {
        throw SingularSystemError("boundary integral system is numerically singular at k = " +
                                  std::to_string(system.material.k) + " (rcond " +
                                  std::to_string(system.rcond) + ")");
    }
}

} // namespace

DensityPair solve_densities(const KernelBlockSystem& system, const Vec2& incident) {
    check_conditioning(system);
    const int n = system.mesh.size();
    const CVector rhs = incident_rhs(system, incident);
    const CVector x = system.lu.solve(rhs);
    DensityPair out;
    out.phi = x.head(n);
    out.psi = x.tail(n);
    out.residual = (system.matrix * x - rhs).norm() / rhs.norm();
    return out;
}

CMatrix solve_exterior_densities(const KernelBlockSystem& system, const DirectionSet& dirs) {
    check_conditioning(system);
    const int n = system.mesh.size();
    CMatrix rhs(2 * n, dirs.size());
    for (int j = 0; j < dirs.size(); ++j) {
        rhs.col(j) = incident_rhs(system, dirs.direction(j));
    }
    const CMatrix x = system.lu.solve(rhs);
    return x.topRows(n);
}

CVector farfield_row(const CollocationMesh& mesh, double k, const Vec2& xhat) {
    CVector row = CVector::Zero(mesh.size());
    for (int f = 0; f < mesh.faces(); ++f) {
        const int n = std::max(10, static_cast<int>(std::ceil(k * face_length(mesh, f))) + 6);
        const FaceRule rule = gauss_face(mesh, f, n);
        for (const FaceSample& q : rule.samples) {
            const cplx e = std::polar(1.0, -k * xhat.dot(q.point));
            for (int m = 0; m < 3; ++m) {
                row(3 * f + m) += q.weight * q.basis[m] * e;
            }
        }
    }
    return row;
}

std::pair<CVector, CVector> scattered_rows(const CollocationMesh& mesh, double k, const Vec2& x,
                                           const Vec2& normal) {
    CVector value = CVector::Zero(mesh.size());
    CVector deriv = CVector::Zero(mesh.size());
    for (int f = 0; f < mesh.faces(); ++f) {
        const double len = face_length(mesh, f);
        const double ratio = face_distance(mesh, f, x) / len;
        int n = ratio < 0.5 ? 32 : ratio < 2.0 ? 20 : 12;
        n = std::max(n, static_cast<int>(std::ceil(k * len)) + 6);
        const FaceRule rule = gauss_face(mesh, f, n);
        for (const FaceSample& q : rule.samples) {
            const Vec2 diff = x - q.point;
            const double r = diff.norm();
            if (!(r > 0.0)) {
                throw DomainError("scattered field evaluated on the boundary");
            }
            const auto h = specfun::hankel1_01(k * r);
            const cplx g = 0.25 * I * h.h0;
            const cplx dg = -0.25 * I * k * h.h1 * diff.dot(normal) / r;
            for (int m = 0; m < 3; ++m) {
                const double w = q.weight * q.basis[m];
                value(3 * f + m) += w * g;
                deriv(3 * f + m) += w * dg;
            }
        }
    }
    return {std::move(value), std::move(deriv)};
}

ScatteredSample eval_scattered(const CollocationMesh& mesh, double k, const CVector& phi,
                               const Vec2& x, const Vec2& normal) {
    if (phi.size() != mesh.size()) {
        throw ConfigError("density length does not match the mesh");
    }
    const auto [value, deriv] = scattered_rows(mesh, k, x, normal);
    double nearest = std::numeric_limits<double>::infinity();
    double longest = 0.0;
    for (int f = 0; f < mesh.faces(); ++f) {
        nearest = std::min(nearest, face_distance(mesh, f, x));
        longest = std::max(longest, face_length(mesh, f));
    }
    return {value.transpose() * phi, deriv.transpose() * phi, nearest < 2.0 * longest};
}

cplx eval_farfield(const CollocationMesh& mesh, double k, const CVector& phi, const Vec2& xhat) {
    if (phi.size() != mesh.size()) {
        throw ConfigError("density length does not match the mesh");
    }
    return farfield_row(mesh, k, xhat).transpose() * phi;
}

std::pair<FarFieldMatrix, CauchyDataSet> assemble_bie_data(const CollocationMesh& mesh,
                                                           const BieMaterial& mat,
                                                           const DirectionSet& dirs,
                                                           double measurement_radius,
                                                           const QuadratureOptions& quad) {
    check_measurement_radius(mesh, measurement_radius);
    const KernelBlockSystem system = assemble_system(mesh, mat, quad);
    const CMatrix densities = solve_exterior_densities(system, dirs);

    const int m = dirs.size();
    const int n = mesh.size();
    CMatrix far_rows(m, n), us_rows(m, n), dus_rows(m, n);
    for (int i = 0; i < m; ++i) {
        const Vec2 d = dirs.direction(i);
        far_rows.row(i) = farfield_row(mesh, mat.k, d).transpose();
        auto [u, du] = scattered_rows(mesh, mat.k, measurement_radius * d, d);
        us_rows.row(i) = u.transpose();
        dus_rows.row(i) = du.transpose();
    }

    FarFieldMatrix far;
    far.values = (2.0 * pi / m) * (far_rows * densities);
    far.k = mat.k;
    far.provenance = Provenance::bie;
    CauchyDataSet cauchy;
    cauchy.us = us_rows * densities;
    cauchy.dus = dus_rows * densities;
    cauchy.radius = measurement_radius;
    cauchy.k = mat.k;
    cauchy.provenance = Provenance::bie;
    return {std::move(far), std::move(cauchy)};
}

} // namespace dsm
