#include "matmi/frechet.hpp"

#include <cmath>

#include "matmi/error.hpp"
#include "matmi/forward.hpp"
#include "matmi/transport.hpp"

namespace matmi {

DerivativeResult frechet_derivative(const ScalarField& sigma, const ScalarField& h)
{
    const MeshPtr& mesh_ptr = sigma.mesh_ptr();
    const Mesh& mesh = *mesh_ptr;
    require_same_mesh(mesh, h.mesh());

    const ElectricField ef = compute_field(sigma);
    const AdvectionOperator op = assemble_advection(mesh_ptr, cross_b0(ef.field));
    const ScalarField g = apply_projected(op, sigma);

    // phi_h from the linearized field equation
    VectorField load(mesh_ptr);
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        load[e] = h.element_mean(e) * ef.field[e];
    }
    SparseSystem sys;
    sys.kind = SystemKind::SymmetricSingularNeumann;
    sys.matrix = assemble_weighted_stiffness(mesh, sigma);
    sys.rhs = assemble_weak_divergence_rhs(mesh, load);
    ScalarField phi = solve_neumann(sys, mesh_ptr);

    Eigen::VectorXd rhs = op.matrix() * h.values();
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto& t = mesh.element(e);
        const auto& grad = mesh.gradients(e);
        const double area = mesh.area(e);
        const Vec2& w = op.velocity()[e];
        const Vec2 dw = cross_b0(phi.element_gradient(e));
        const Vec2 grad_sigma = sigma.element_gradient(e);
        const double tau = op.tau()[e];
        const double dtau = stabilization_tau_gradient(mesh.diameter(e), w).dot(dw);

        const double advected = dw.dot(grad_sigma);
        // integral over e of the strong residual w.grad(sigma) + sigma - g
        const double residual
            = area
              * (w.dot(grad_sigma)
                 + ((sigma[t[0]] - g[t[0]]) + (sigma[t[1]] - g[t[1]]) + (sigma[t[2]] - g[t[2]]))
                       / 3.0);
        for (int a = 0; a < 3; ++a) {
            const double wg = w.dot(grad[a]);
            const double dwg = dw.dot(grad[a]);
            rhs[t[a]] += advected * (area / 3.0 + tau * area * wg)
                         + residual * (dtau * wg + tau * dwg);
        }
    }

    return {std::move(phi), solve_test_mass(op, rhs)};
}

std::vector<double> fd_validate(const ScalarField& sigma, const ScalarField& h,
                                std::span<const double> t_values)
{
    for (double t : t_values) {
        require_positive(sigma + t * h);
    }
    const ScalarField base = forward_map(sigma);
    const ScalarField derivative = frechet_derivative(sigma, h).value;

    std::vector<double> remainders;
    remainders.reserve(t_values.size());
    for (double t : t_values) {
        ScalarField r = forward_map(sigma + t * h);
        r -= base;
        r -= t * derivative;
        remainders.push_back(l2_norm(r));
    }
    return remainders;
}

double derivative_bound(const ScalarField& sigma, const ScalarField& h)
{
    const double omega = sigma.mesh().bounds().area();
    const double ratio = sigma.max() / sigma.min();
    return (std::sqrt(omega) + field_bound(sigma) * (ratio + 1.0)) * w1inf_norm(h);
}

} // namespace matmi
