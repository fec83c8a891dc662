#include "matmi/forward.hpp"

#include <algorithm>
#include <cmath>

#include "matmi/error.hpp"

namespace matmi {

VectorField gauge_field(const MeshPtr& mesh, const Vec2& shift)
{
    const Vec2 c = mesh->bounds().center();
    VectorField e(mesh);
    for (std::size_t k = 0; k < e.size(); ++k) {
        const Vec2 p = mesh->centroid(k) - c;
        e[k] = 0.5 * Vec2(-p.y(), p.x()) + shift;
    }
    return e;
}

ElectricField compute_field(const ScalarField& sigma, const FieldOptions& options)
{
    const MeshPtr& mesh = sigma.mesh_ptr();
    require_positive(sigma);

    const VectorField gauge = gauge_field(mesh, options.gauge_shift);
    VectorField weighted(mesh);
    for (std::size_t e = 0; e < weighted.size(); ++e) {
        weighted[e] = sigma.element_mean(e) * gauge[e];
    }

    SparseSystem sys;
    sys.kind = SystemKind::SymmetricSingularNeumann;
    sys.matrix = assemble_weighted_stiffness(*mesh, sigma);
    sys.rhs = assemble_weak_divergence_rhs(*mesh, weighted);

    ElectricField out;
    out.potential = solve_neumann(sys, mesh, &out.stats);
    out.field = VectorField(mesh);
    for (std::size_t e = 0; e < out.field.size(); ++e) {
        out.field[e] = gauge[e] + out.potential.element_gradient(e);
    }
    return out;
}

ScalarField forward_map(const ScalarField& sigma)
{
    const ElectricField ef = compute_field(sigma);
    const AdvectionOperator op = assemble_advection(sigma.mesh_ptr(), cross_b0(ef.field));
    return apply_projected(op, sigma);
}

ForwardResult simulate_forward(const ScalarField& sigma, const FieldOptions& options)
{
    ElectricField ef = compute_field(sigma, options);
    const AdvectionOperator op = assemble_advection(sigma.mesh_ptr(), cross_b0(ef.field));

    ForwardResult r;
    r.data = apply_projected(op, sigma);
    r.field_norm = l2_norm(ef.field);
    r.divergence_identity_error = divergence_identity_error(ef.field);
    r.weak_divergence_residual = weak_divergence_residual(sigma, ef.field);
    r.potential = std::move(ef.potential);
    r.field = std::move(ef.field);
    return r;
}

ScalarField projected_divergence(const VectorField& v)
{
    const Mesh& mesh = v.mesh();
    const Bounds& bb = mesh.bounds();
    Eigen::VectorXd div = assemble_weak_divergence_rhs(mesh, v);

    auto on_side = [&](const Vec2& p, const Vec2& q) {
        return (p.x() == bb.x_min && q.x() == bb.x_min) || (p.x() == bb.x_max && q.x() == bb.x_max)
               || (p.y() == bb.y_min && q.y() == bb.y_min)
               || (p.y() == bb.y_max && q.y() == bb.y_max);
    };

    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
        const auto& t = mesh.element(e);
        for (int k = 0; k < 3; ++k) {
            const int i = t[k];
            const int j = t[(k + 1) % 3];
            const Vec2& p = mesh.node(static_cast<std::size_t>(i));
            const Vec2& q = mesh.node(static_cast<std::size_t>(j));
            if (!on_side(p, q)) {
                continue;
            }
            // counterclockwise element: outward normal is the edge rotated clockwise
            const Vec2 edge = q - p;
            const Vec2 normal_scaled(edge.y(), -edge.x());  // |normal| = edge length
            const double half_flux = 0.5 * v[e].dot(normal_scaled);
            div[i] += half_flux;
            div[j] += half_flux;
        }
    }
    div.array() /= lumped_mass(mesh).array();
    return ScalarField(v.mesh_ptr(), std::move(div));
}

double divergence_identity_error(const VectorField& e)
{
    ScalarField p = projected_divergence(cross_b0(e));
    p.values().array() -= 1.0;
    const Eigen::VectorXd m = lumped_mass(e.mesh());
    return std::sqrt(m.dot(p.values().cwiseAbs2()));
}

double weak_divergence_residual(const ScalarField& sigma, const VectorField& e)
{
    const Mesh& mesh = sigma.mesh();
    require_same_mesh(mesh, e.mesh());
    Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
    Eigen::VectorXd scale = r;
    for (std::size_t k = 0; k < mesh.num_elements(); ++k) {
        const auto& t = mesh.element(k);
        const auto& g = mesh.gradients(k);
        const Vec2 flux = sigma.element_mean(k) * e[k];
        for (int a = 0; a < 3; ++a) {
            const double c = mesh.area(k) * flux.dot(g[a]);
            r[t[a]] += c;
            scale[t[a]] += std::abs(c);
        }
    }
    const double s = scale.maxCoeff();
    return s > 0.0 ? r.cwiseAbs().maxCoeff() / s : 0.0;
}

double field_bound(const ScalarField& sigma)
{
    const Bounds& b = sigma.mesh().bounds();
    const double lambda = sigma.min();
    const double big_lambda = sigma.max();
    const double gauge_inf
        = std::sqrt(b.area() * (b.width() * b.width() + b.height() * b.height()) / 12.0);
    return 0.5 * (big_lambda / lambda + 1.0) * gauge_inf;
}

double forward_bound(const ScalarField& sigma)
{
    const double omega = sigma.mesh().bounds().area();
    return (std::sqrt(omega) + field_bound(sigma)) * w1inf_norm(sigma);
}

} // namespace matmi
