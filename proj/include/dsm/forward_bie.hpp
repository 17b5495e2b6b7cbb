#pragma once

#include <utility>
#include <vector>

#include <Eigen/LU>

#include "dsm/forward_disk.hpp"
#include "dsm/geometry.hpp"
#include "dsm/measurement.hpp"
#include "dsm/types.hpp"

namespace dsm {

// Exterior background: Delta + k^2. Interior: div A grad + k^2 (n = 1).
struct BieMaterial {
    double k = 1.0;
    AnisotropyMatrix A = AnisotropyMatrix::identity();
    cplx eta = 0.0;

    void validate() const;
};

// Phi(x, y) = (i/4) H_0(k |x - y|).
cplx phi(double k, const Vec2& x, const Vec2& y);
// Phi~(x, y) = Phi_k(A^{-1/2} x, A^{-1/2} y) / det(A^{1/2}).
cplx phi_tilde(double k, const AnisotropyMatrix& A, const Vec2& x, const Vec2& y);
// nu . A grad_x Phi~(x, y).
cplx phi_tilde_conormal(double k, const AnisotropyMatrix& A, const Vec2& x, const Vec2& nu,
                        const Vec2& y);

struct QuadratureOptions {
    int self_points = 16;  // per side of the collocation node, graded
    int grading = 4;       // s = s_i +- L u^grading on the self face
    int dlayer_grading = 2; // same, for the bounded double-layer kernels
    int near_points = 24;  // faces within half a face length
    int mid_points = 16;   // faces within two face lengths
    int far_points = 10;   // everything else (raised with k * face length)
};

// Collocation matrices of the four boundary operators, each size x size with
// column index 3 * face + local node:
//   S   phi(x_i) = int Phi(x_i, y) phi(y) ds
//   S~  psi(x_i) = int Phi~(x_i, y) psi(y) ds
//   K'  phi(x_i) = int d_nu(x_i) Phi(x_i, y) phi(y) ds
//   K~' psi(x_i) = int d_nuA(x_i) Phi~(x_i, y) psi(y) ds
struct BoundaryOperators {
    CMatrix single;
    CMatrix single_aniso;
    CMatrix adjoint_double;
    CMatrix adjoint_double_aniso;
};

BoundaryOperators assemble_operators(const CollocationMesh& mesh, const BieMaterial& mat,
                                     const QuadratureOptions& quad = {});

// [ -1/2 I + K'    -1/2 I - K~'                 ] [phi]     [d_nu u^i]
// [  S             -S~ - i eta (1/2 I + K~')     ] [psi] = - [ u^i    ]
struct KernelBlockSystem {
    CollocationMesh mesh;
    BieMaterial material;
    BoundaryOperators blocks;
    CMatrix matrix;
    Eigen::PartialPivLU<CMatrix> lu;
    double rcond = 0.0;

    int unknowns() const { return static_cast<int>(matrix.rows()); }
};

KernelBlockSystem assemble_system(const CollocationMesh& mesh, const BieMaterial& mat,
                                  const QuadratureOptions& quad = {});

// Right-hand side -(d_nu u^i, u^i) at the collocation nodes.
CVector incident_rhs(const KernelBlockSystem& system, const Vec2& incident);

struct DensityPair {
    CVector phi; // exterior single-layer density
    CVector psi; // interior single-layer density
    double residual = 0.0; // ||M x - b|| / ||b||
};

// Throws SingularSystemError when the condition estimate exceeds 1e14.
DensityPair solve_densities(const KernelBlockSystem& system, const Vec2& incident);

// Exterior densities phi for every incident direction, one column each.
CMatrix solve_exterior_densities(const KernelBlockSystem& system, const DirectionSet& dirs);

struct ScatteredSample {
    cplx value;
    cplx normal_derivative;
    bool near_boundary; // closer than two face lengths: accuracy not guaranteed
};

// u^s = SL_k phi and nu . grad u^s at an exterior point.
ScatteredSample eval_scattered(const CollocationMesh& mesh, double k, const CVector& phi,
                               const Vec2& x, const Vec2& normal);

// u_inf(xhat) = int exp(-i k xhat . y) phi(y) ds(y).
cplx eval_farfield(const CollocationMesh& mesh, double k, const CVector& phi, const Vec2& xhat);

// Linear functionals of the nodal density as row vectors (size 3 N_f), so
// many densities can be evaluated with one matrix product.
CVector farfield_row(const CollocationMesh& mesh, double k, const Vec2& xhat);
std::pair<CVector, CVector> scattered_rows(const CollocationMesh& mesh, double k, const Vec2& x,
                                           const Vec2& normal);

// Far-field matrix (weight 2 pi / M) and Cauchy data on the circle of radius
// measurement_radius, M = dirs.size() incident and observation directions.
std::pair<FarFieldMatrix, CauchyDataSet> assemble_bie_data(const CollocationMesh& mesh,
                                                           const BieMaterial& mat,
                                                           const DirectionSet& dirs,
                                                           double measurement_radius,
                                                           const QuadratureOptions& quad = {});

} // namespace dsm
