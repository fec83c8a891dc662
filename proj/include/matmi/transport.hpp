#pragma once

#include <vector>

#include "matmi/fem.hpp"

namespace matmi {

inline constexpr double kStabilizationEpsilon = 1e-12;

/// tau_e = h_e / (2|w_e| + eps)
double stabilization_tau(double diameter, const Vec2& w);
/// Gradient of stabilization_tau with respect to w (zero at w = 0).
Vec2 stabilization_tau_gradient(double diameter, const Vec2& w);

/// Streamline-upwind Petrov-Galerkin discretization of
///     w . grad(sigma) + sigma = g
/// i.e. div(sigma w) = g with div(w) = 1 used in its exact form. Test functions
/// are psi_i + tau_e w . grad(psi_i) on every term, so both the operator D and
/// the test-function mass M~ are built here; M~^{-1} D reproduces constants
/// exactly.
class AdvectionOperator {
public:
    AdvectionOperator(MeshPtr mesh, VectorField velocity);

    const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
    const Mesh& mesh() const { return *mesh_; }
    const VectorField& velocity() const noexcept { return velocity_; }
    /// D_ij = sum_e int (w.grad phi_j + phi_j)(phi_i + tau_e w.grad phi_i)
    const SparseMatrix& matrix() const noexcept { return matrix_; }
    /// M~_ij = sum_e int phi_j (phi_i + tau_e w.grad phi_i)
    const SparseMatrix& test_mass() const noexcept { return test_mass_; }
    const std::vector<double>& tau() const noexcept { return tau_; }

private:
    MeshPtr mesh_;
    VectorField velocity_;
    SparseMatrix matrix_;
    SparseMatrix test_mass_;
    std::vector<double> tau_;
};

AdvectionOperator assemble_advection(const MeshPtr& mesh, const VectorField& w);

/// Solves M~ x = load.
ScalarField solve_test_mass(const AdvectionOperator& op, const Eigen::VectorXd& load,
                            SolveStats* stats = nullptr);

/// M~^{-1} D sigma: the nodal representation of w.grad(sigma) + sigma.
ScalarField apply_projected(const AdvectionOperator& op, const ScalarField& sigma);

/// Solves D sigma = M~ g in the interior with sigma = boundary_value strongly
/// imposed on every boundary node.
ScalarField transport_solve(const AdvectionOperator& op, const ScalarField& g,
                            const ScalarField& boundary_value, SolveStats* stats = nullptr);

/// The Dirichlet system solved by transport_solve.
SparseSystem transport_system(const AdvectionOperator& op, const ScalarField& g,
                              const ScalarField& boundary_value);

} // namespace matmi
