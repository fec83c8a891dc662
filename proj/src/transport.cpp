#include "matmi/transport.hpp"

#include <cmath>

#include "matmi/error.hpp"

namespace matmi {

double stabilization_tau(double diameter, const Vec2& w)
{
    return diameter / (2.0 * w.norm() + kStabilizationEpsilon);
}

Vec2 stabilization_tau_gradient(double diameter, const Vec2& w)
{
    const double speed = w.norm();
    if (speed == 0.0) {
        return Vec2::Zero();
    }
    const double denom = 2.0 * speed + kStabilizationEpsilon;
    return (-2.0 * diameter / (denom * denom * speed)) * w;
}

AdvectionOperator::AdvectionOperator(MeshPtr mesh, VectorField velocity)
    : mesh_(std::move(mesh)), velocity_(std::move(velocity))
{
    require_same_mesh(*mesh_, velocity_.mesh());
    const Mesh& m = *mesh_;

    std::vector<Eigen::Triplet<double>> d_trip;
    std::vector<Eigen::Triplet<double>> m_trip;
    d_trip.reserve(9 * m.num_elements());
    m_trip.reserve(9 * m.num_elements());
    tau_.resize(m.num_elements());

    for (std::size_t e = 0; e < m.num_elements(); ++e) {
        const auto& t = m.element(e);
        const auto& g = m.gradients(e);
        const Vec2& w = velocity_[e];
        const double area = m.area(e);
        const double tau = stabilization_tau(m.diameter(e), w);
        tau_[e] = tau;

        double wg[3];
        for (int a = 0; a < 3; ++a) {
            wg[a] = w.dot(g[a]);
        }
        for (int a = 0; a < 3; ++a) {
            // a: test index, b: trial index
            const double supg_mass = tau * area / 3.0 * wg[a];
            for (int b = 0; b < 3; ++b) {
                const double mass = area / 12.0 * (a == b ? 2.0 : 1.0);
                const double mt = mass + supg_mass;
                const double adv = area / 3.0 * wg[b] + tau * area * wg[a] * wg[b];
                d_trip.emplace_back(t[a], t[b], adv + mt);
                m_trip.emplace_back(t[a], t[b], mt);
            }
        }
    }

    const auto n = static_cast<Eigen::Index>(m.num_nodes());
    matrix_.resize(n, n);
    matrix_.setFromTriplets(d_trip.begin(), d_trip.end());
    matrix_.makeCompressed();
    test_mass_.resize(n, n);
    test_mass_.setFromTriplets(m_trip.begin(), m_trip.end());
    test_mass_.makeCompressed();
}

AdvectionOperator assemble_advection(const MeshPtr& mesh, const VectorField& w)
{
    return AdvectionOperator(mesh, w);
}

ScalarField solve_test_mass(const AdvectionOperator& op, const Eigen::VectorXd& load,
                            SolveStats* stats)
{
    SparseSystem sys;
    sys.matrix = op.test_mass();
    sys.rhs = load;
    sys.kind = SystemKind::NonsymmetricDirichlet;
    return ScalarField(op.mesh_ptr(), solve_dirichlet(sys, stats));
}

ScalarField apply_projected(const AdvectionOperator& op, const ScalarField& sigma)
{
    require_same_mesh(op.mesh(), sigma.mesh());
    return solve_test_mass(op, op.matrix() * sigma.values());
}

SparseSystem transport_system(const AdvectionOperator& op, const ScalarField& g,
                              const ScalarField& boundary_value)
{
    const Mesh& m = op.mesh();
    require_same_mesh(m, g.mesh());
    require_same_mesh(m, boundary_value.mesh());

    SparseSystem sys;
    sys.kind = SystemKind::NonsymmetricDirichlet;
    sys.dirichlet_nodes = m.boundary_nodes();
    sys.rhs = op.test_mass() * g.values();

    const SparseMatrix& d = op.matrix();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(d.nonZeros()));
    for (Eigen::Index row = 0; row < d.rows(); ++row) {
        if (m.is_boundary(static_cast<std::size_t>(row))) {
            trip.emplace_back(row, row, 1.0);
            sys.rhs[row] = boundary_value[static_cast<std::size_t>(row)];
            continue;
        }
        for (SparseMatrix::InnerIterator it(d, row); it; ++it) {
            trip.emplace_back(row, it.col(), it.value());
        }
    }
    sys.matrix.resize(d.rows(), d.cols());
    sys.matrix.setFromTriplets(trip.begin(), trip.end());
    sys.matrix.makeCompressed();
    return sys;
}

ScalarField transport_solve(const AdvectionOperator& op, const ScalarField& g,
                            const ScalarField& boundary_value, SolveStats* stats)
{
    const SparseSystem sys = transport_system(op, g, boundary_value);
    return ScalarField(op.mesh_ptr(), solve_dirichlet(sys, stats));
}

} // namespace matmi
