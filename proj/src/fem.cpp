#include "matmi/fem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/SparseLU>

#include "matmi/error.hpp"

namespace matmi {

// ---------------------------------------------------------------- fields

ScalarField::ScalarField(MeshPtr mesh, double value)
    : mesh_(std::move(mesh)),
      values_(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(mesh_->num_nodes()), value))
{
}

ScalarField::ScalarField(MeshPtr mesh, Eigen::VectorXd values)
    : mesh_(std::move(mesh)), values_(std::move(values))
{
    if (static_cast<std::size_t>(values_.size()) != mesh_->num_nodes()) {
        throw PreconditionError("scalar field has " + std::to_string(values_.size())
                                + " coefficients for " + std::to_string(mesh_->num_nodes())
                                + " nodes");
    }
}

double ScalarField::element_mean(std::size_t e) const
{
    const auto& t = mesh_->element(e);
    return (values_[t[0]] + values_[t[1]] + values_[t[2]]) / 3.0;
}

Vec2 ScalarField::element_gradient(std::size_t e) const
{
    const auto& t = mesh_->element(e);
    const auto& g = mesh_->gradients(e);
    return values_[t[0]] * g[0] + values_[t[1]] * g[1] + values_[t[2]] * g[2];
}

ScalarField& ScalarField::operator+=(const ScalarField& other)
{
    require_same_mesh(mesh(), other.mesh());
    values_ += other.values_;
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other)
{
    require_same_mesh(mesh(), other.mesh());
    values_ -= other.values_;
    return *this;
}

ScalarField& ScalarField::operator*=(double s)
{
    values_ *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

VectorField::VectorField(MeshPtr mesh)
    : mesh_(std::move(mesh)), values_(mesh_->num_elements(), Vec2::Zero())
{
}

VectorField::VectorField(MeshPtr mesh, std::vector<Vec2> values)
    : mesh_(std::move(mesh)), values_(std::move(values))
{
    if (values_.size() != mesh_->num_elements()) {
        throw PreconditionError("vector field has " + std::to_string(values_.size())
                                + " entries for " + std::to_string(mesh_->num_elements())
                                + " elements");
    }
}

VectorField gradient(const ScalarField& f)
{
    VectorField g(f.mesh_ptr());
    for (std::size_t e = 0; e < g.size(); ++e) {
        g[e] = f.element_gradient(e);
    }
    return g;
}

VectorField cross_b0(const VectorField& v)
{
    VectorField w(v.mesh_ptr());
    for (std::size_t e = 0; e < v.size(); ++e) {
        w[e] = cross_b0(v[e]);
    }
    return w;
}

void require_same_mesh(const Mesh& a, const Mesh& b)
{
    if (&a == &b) {
        return;
    }
    if (a.nx() != b.nx() || a.ny() != b.ny() || !(a.bounds() == b.bounds())) {
        throw PreconditionError("fields are defined on different meshes");
    }
}

void require_positive(const ScalarField& sigma, double floor)
{
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        if (!(sigma[i] > floor)) {
            throw InadmissibleConductivityError(
                "conductivity must exceed " + std::to_string(floor), i, sigma[i]);
        }
    }
}

// ---------------------------------------------------------------- assembly

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(std::size_t n, const Triplets& triplets)
{
    SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

} // namespace

SparseMatrix assemble_weighted_stiffness(const Mesh& mesh, const ScalarField& sigma)
{
    require_same_mesh(mesh, sigma.mesh());
    require_positive(sigma);

    Triplets trip;
    trip.reserve(9 * mesh.num_elements());
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto& t = mesh.element(e);
        const auto& g = mesh.gradients(e);
        const double weight = sigma.element_mean(e) * mesh.area(e);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                trip.emplace_back(t[a], t[b], weight * g[a].dot(g[b]));
            }
        }
    }
    return from_triplets(mesh.num_nodes(), trip);
}

Eigen::VectorXd assemble_weak_divergence_rhs(const Mesh& mesh, const VectorField& field)
{
    require_same_mesh(mesh, field.mesh());
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto& t = mesh.element(e);
        const auto& g = mesh.gradients(e);
        for (int a = 0; a < 3; ++a) {
            b[t[a]] -= mesh.area(e) * field[e].dot(g[a]);
        }
    }
    return b;
}

SparseMatrix assemble_mass(const Mesh& mesh)
{
    Triplets trip;
    trip.reserve(9 * mesh.num_elements());
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto& t = mesh.element(e);
        const double a12 = mesh.area(e) / 12.0;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                trip.emplace_back(t[a], t[b], a == b ? 2.0 * a12 : a12);
            }
        }
    }
    return from_triplets(mesh.num_nodes(), trip);
}

Eigen::VectorXd lumped_mass(const Mesh& mesh)
{
    Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        for (int node : mesh.element(e)) {
            m[node] += mesh.area(e) / 3.0;
        }
    }
    return m;
}

bool satisfies_invariants(const SparseSystem& system, double tol)
{
    const SparseMatrix& a = system.matrix;
    if (a.rows() != a.cols() || a.rows() != system.rhs.size()) {
        return false;
    }
    if (system.kind == SystemKind::SymmetricSingularNeumann) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            double sum = 0.0;
            double scale = 0.0;
            for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
                sum += it.value();
                scale = std::max(scale, std::abs(it.value()));
            }
            if (std::abs(sum) > tol * scale) {
                return false;
            }
        }
        return true;
    }
    for (int node : system.dirichlet_nodes) {
        for (SparseMatrix::InnerIterator it(a, node); it; ++it) {
            const double expected = (it.col() == node) ? 1.0 : 0.0;
            if (it.value() != expected) {
                return false;
            }
        }
        if (a.coeff(node, node) != 1.0) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- solvers

namespace {

void project_mean(Eigen::VectorXd& v)
{
    if (v.size() > 0) {
        v.array() -= v.mean();
    }
}

} // namespace

double relative_residual(const SparseMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b)
{
    const double bn = b.norm();
    const double rn = (b - a * x).norm();
    return bn > 0.0 ? rn / bn : rn;
}

double neumann_relative_residual(const SparseSystem& system, const Eigen::VectorXd& x)
{
    Eigen::VectorXd b = system.rhs;
    project_mean(b);
    Eigen::VectorXd r = b - system.matrix * x;
    project_mean(r);
    const double bn = b.norm();
    return bn > 0.0 ? r.norm() / bn : r.norm();
}

Eigen::VectorXd solve_neumann(const SparseSystem& system, const Mesh& mesh, SolveStats* stats)
{
    if (system.kind != SystemKind::SymmetricSingularNeumann) {
        throw PreconditionError("solve_neumann requires a symmetric singular Neumann system");
    }
    const SparseMatrix& a = system.matrix;
    const Eigen::Index n = a.rows();
    if (a.cols() != n || system.rhs.size() != n
        || static_cast<std::size_t>(n) != mesh.num_nodes()) {
        throw PreconditionError("Neumann system size does not match the mesh");
    }

    Eigen::VectorXd b = system.rhs;
    project_mean(b);
    const double bnorm = b.norm();

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    SolveStats local;
    SolveStats& st = stats ? *stats : local;
    st = SolveStats{};
    if (bnorm == 0.0) {
        return x;
    }

    const Eigen::VectorXd inv_diag = a.diagonal().cwiseInverse();
    const int cap = static_cast<int>(10 * n);

    Eigen::VectorXd r = b;
    Eigen::VectorXd z = inv_diag.cwiseProduct(r);
    project_mean(z);
    Eigen::VectorXd p = z;
    Eigen::VectorXd ap(n);
    double rz = r.dot(z);
    double rel = 1.0;

    int it = 0;
    while (it < cap) {
        ap.noalias() = a * p;
        const double pap = p.dot(ap);
        if (!(pap > 0.0)) {
            break;
        }
        const double alpha = rz / pap;
        x += alpha * p;
        r -= alpha * ap;
        project_mean(r);
        ++it;
        rel = r.norm() / bnorm;
        st.residual_history.push_back(rel);

        if (rel <= kSolverTolerance) {
            // The recurrence drifts from the true residual; confirm and
            // restart from the true residual if needed.
            r = b - a * x;
            project_mean(r);
            rel = r.norm() / bnorm;
            if (rel <= kSolverTolerance) {
                break;
            }
            z = inv_diag.cwiseProduct(r);
            project_mean(z);
            p = z;
            rz = r.dot(z);
            continue;
        }

        z = inv_diag.cwiseProduct(r);
        project_mean(z);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }

    st.iterations = it;
    st.relative_residual = neumann_relative_residual(system, x);
    if (!(st.relative_residual <= kSolverTolerance)) {
        auto history = st.residual_history;
        history.push_back(st.relative_residual);
        throw SolverError("Neumann CG stopped at relative residual "
                              + std::to_string(st.relative_residual) + " after "
                              + std::to_string(it) + " iterations",
                          std::move(history));
    }

    const Eigen::VectorXd m = lumped_mass(mesh);
    x.array() -= m.dot(x) / m.sum();
    return x;
}

ScalarField solve_neumann(const SparseSystem& system, const MeshPtr& mesh, SolveStats* stats)
{
    return ScalarField(mesh, solve_neumann(system, *mesh, stats));
}

Eigen::VectorXd solve_dirichlet(const SparseSystem& system, SolveStats* stats)
{
    if (system.kind != SystemKind::NonsymmetricDirichlet) {
        throw PreconditionError("solve_dirichlet requires a Dirichlet system");
    }
    const Eigen::SparseMatrix<double> a = system.matrix;
    if (a.rows() != a.cols() || a.rows() != system.rhs.size()) {
        throw PreconditionError("Dirichlet system has inconsistent dimensions");
    }

    SolveStats local;
    SolveStats& st = stats ? *stats : local;
    st = SolveStats{};

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) {
        throw SolverError("sparse LU factorization failed: " + lu.lastErrorMessage(), {});
    }
    Eigen::VectorXd x = lu.solve(system.rhs);
    for (int node : system.dirichlet_nodes) {
        x[node] = system.rhs[node];
    }
    st.residual_history.push_back(relative_residual(system.matrix, x, system.rhs));

    if (st.residual_history.back() > kSolverTolerance) {
        const Eigen::VectorXd r = system.rhs - system.matrix * x;
        x += lu.solve(r);
        for (int node : system.dirichlet_nodes) {
            x[node] = system.rhs[node];
        }
        st.residual_history.push_back(relative_residual(system.matrix, x, system.rhs));
    }
    st.iterations = static_cast<int>(st.residual_history.size());
    st.relative_residual = st.residual_history.back();
    if (!x.allFinite() || !(st.relative_residual <= kSolverTolerance)) {
        throw SolverError("Dirichlet solve stopped at relative residual "
                              + std::to_string(st.relative_residual),
                          st.residual_history);
    }
    return x;
}

// ---------------------------------------------------------------- norms

double l2_inner(const ScalarField& a, const ScalarField& b)
{
    require_same_mesh(a.mesh(), b.mesh());
    const Mesh& mesh = a.mesh();
    double sum = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto& t = mesh.element(e);
        double diag = 0.0;
        double sa = 0.0;
        double sb = 0.0;
        for (int k = 0; k < 3; ++k) {
            diag += a[t[k]] * b[t[k]];
            sa += a[t[k]];
            sb += b[t[k]];
        }
        sum += mesh.area(e) / 12.0 * (diag + sa * sb);
    }
    return sum;
}

double l2_norm(const ScalarField& f) { return std::sqrt(std::max(0.0, l2_inner(f, f))); }

double l2_norm(const VectorField& f)
{
    const Mesh& mesh = f.mesh();
    double sum = 0.0;
    for (std::size_t e = 0; e < f.size(); ++e) {
        sum += mesh.area(e) * f[e].squaredNorm();
    }
    return std::sqrt(sum);
}

double integral(const ScalarField& f)
{
    const Mesh& mesh = f.mesh();
    double sum = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        sum += mesh.area(e) * f.element_mean(e);
    }
    return sum;
}

double max_gradient_norm(const ScalarField& f)
{
    double m = 0.0;
    for (std::size_t e = 0; e < f.mesh().num_elements(); ++e) {
        m = std::max(m, f.element_gradient(e).norm());
    }
    return m;
}

double w1inf_norm(const ScalarField& f)
{
    return f.values().cwiseAbs().maxCoeff() + max_gradient_norm(f);
}

ScalarField restrict_to(const ScalarField& fine, const MeshPtr& coarse)
{
    const Mesh& fm = fine.mesh();
    if (!(fm.bounds() == coarse->bounds()) || coarse->nx() == 0
        || fm.nx() % coarse->nx() != 0 || fm.ny() % coarse->ny() != 0
        || fm.nx() / coarse->nx() != fm.ny() / coarse->ny()) {
        throw PreconditionError("restrict_to: meshes are not nested by an integer factor");
    }
    const int r = fm.nx() / coarse->nx();
    ScalarField out(coarse);
    for (int j = 0; j <= coarse->ny(); ++j) {
        for (int i = 0; i <= coarse->nx(); ++i) {
            out[static_cast<std::size_t>(coarse->node_index(i, j))]
                = fine[static_cast<std::size_t>(fm.node_index(r * i, r * j))];
        }
    }
    return out;
}

} // namespace matmi
