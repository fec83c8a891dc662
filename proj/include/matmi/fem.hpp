#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "matmi/mesh.hpp"

namespace matmi {

using MeshPtr = std::shared_ptr<const Mesh>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// P1 nodal field: one coefficient per mesh node.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(MeshPtr mesh, double value = 0.0);
    ScalarField(MeshPtr mesh, Eigen::VectorXd values);

    const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
    const Mesh& mesh() const { return *mesh_; }

    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    const Eigen::VectorXd& values() const noexcept { return values_; }
    Eigen::VectorXd& values() noexcept { return values_; }
    double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
    double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

    double min() const { return values_.minCoeff(); }
    double max() const { return values_.maxCoeff(); }

    /// Vertex average on element e (the one-point quadrature value).
    double element_mean(std::size_t e) const;
    /// Constant gradient on element e.
    Vec2 element_gradient(std::size_t e) const;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);

private:
    MeshPtr mesh_;
    Eigen::VectorXd values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

/// Elementwise-constant 2-vector field.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(MeshPtr mesh);
    VectorField(MeshPtr mesh, std::vector<Vec2> values);

    const MeshPtr& mesh_ptr() const noexcept { return mesh_; }
    const Mesh& mesh() const { return *mesh_; }

    std::size_t size() const noexcept { return values_.size(); }
    const Vec2& operator[](std::size_t e) const { return values_[e]; }
    Vec2& operator[](std::size_t e) { return values_[e]; }
    const std::vector<Vec2>& values() const noexcept { return values_; }

private:
    MeshPtr mesh_;
    std::vector<Vec2> values_;
};

/// Elementwise gradient of a P1 field.
VectorField gradient(const ScalarField& f);

/// v x B0 with B0 the out-of-plane unit vector: (v1, v2) -> (v2, -v1).
inline Vec2 cross_b0(const Vec2& v) { return {v.y(), -v.x()}; }
VectorField cross_b0(const VectorField& v);

/// Throws PreconditionError unless both objects live on the same mesh.
void require_same_mesh(const Mesh& a, const Mesh& b);

/// Throws InadmissibleConductivityError naming the first node with
/// coefficient <= floor.
void require_positive(const ScalarField& sigma, double floor = 0.0);

enum class SystemKind { SymmetricSingularNeumann, NonsymmetricDirichlet };

struct SparseSystem {
    SparseMatrix matrix;
    Eigen::VectorXd rhs;
    SystemKind kind = SystemKind::SymmetricSingularNeumann;
    std::vector<int> dirichlet_nodes;
};

/// Checks the structural invariants of a system of the given kind: vanishing
/// row sums for the Neumann kind, unit Dirichlet rows for the Dirichlet kind.
bool satisfies_invariants(const SparseSystem& system, double tol = 1e-12);

struct SolveStats {
    int iterations = 0;
    double relative_residual = 0.0;
    std::vector<double> residual_history;
};

inline constexpr double kSolverTolerance = 1e-12;

/// K_ij = sum_e sigma_e |e| grad(phi_i).grad(phi_j), sigma_e the vertex average.
SparseMatrix assemble_weighted_stiffness(const Mesh& mesh, const ScalarField& sigma);

/// b_i = -sum_e |e| field_e . grad(phi_i)
Eigen::VectorXd assemble_weak_divergence_rhs(const Mesh& mesh, const VectorField& field);

SparseMatrix assemble_mass(const Mesh& mesh);
Eigen::VectorXd lumped_mass(const Mesh& mesh);

/// Jacobi-preconditioned conjugate gradients on the mean-projected system.
/// Returns the zero-integral representative. Throws SolverError if the
/// relative residual does not reach kSolverTolerance within 10*N iterations.
Eigen::VectorXd solve_neumann(const SparseSystem& system, const Mesh& mesh,
                              SolveStats* stats = nullptr);
ScalarField solve_neumann(const SparseSystem& system, const MeshPtr& mesh,
                          SolveStats* stats = nullptr);

/// Sparse LU with one step of iterative refinement; Dirichlet entries are
/// copied from the rhs so they match bit-exactly.
Eigen::VectorXd solve_dirichlet(const SparseSystem& system, SolveStats* stats = nullptr);

/// Mean-projected relative residual used by the Neumann solver.
double neumann_relative_residual(const SparseSystem& system, const Eigen::VectorXd& x);
double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b);

double l2_inner(const ScalarField& a, const ScalarField& b);
double l2_norm(const ScalarField& f);
double l2_norm(const VectorField& f);
/// Integral of a P1 field.
double integral(const ScalarField& f);

/// max nodal |f| + max elementwise |grad f|
double w1inf_norm(const ScalarField& f);
double max_gradient_norm(const ScalarField& f);

/// Interpolates a field given on a mesh refined by an integer factor onto a
/// coarser nested mesh by nodal injection.
ScalarField restrict_to(const ScalarField& fine, const MeshPtr& coarse);

} // namespace matmi
