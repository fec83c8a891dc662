#pragma once

#include "matmi/fem.hpp"
#include "matmi/transport.hpp"

namespace matmi {

struct FieldOptions {
    /// Constant added to the centered gauge field, i.e. a change of gauge by
    /// grad of an affine function. E is invariant under it; u is not.
    Vec2 gauge_shift = Vec2::Zero();
};

/// Centered gauge field 1/2 (-(y - yc), x - xc) + shift evaluated at the
/// element centroids; its curl is the out-of-plane unit vector.
VectorField gauge_field(const MeshPtr& mesh, const Vec2& shift = Vec2::Zero());

struct ElectricField {
    ScalarField potential;  ///< zero-mean u with E = E~ + grad u
    VectorField field;      ///< E_sigma
    SolveStats stats;
};

/// Solves div(sigma grad u) = -div(sigma E~) with the natural no-flux
/// condition and returns E = E~ + grad u.
ElectricField compute_field(const ScalarField& sigma, const FieldOptions& options = {});

/// F(sigma) = M~(w)^{-1} D(w) sigma with w = E_sigma x B0, the discrete form
/// of div(sigma E_sigma x B0) = sigma + grad(sigma).(E_sigma x B0).
ScalarField forward_map(const ScalarField& sigma);

struct ForwardResult {
    ScalarField potential;
    VectorField field;
    ScalarField data;
    double field_norm = 0.0;
    double divergence_identity_error = 0.0;
    double weak_divergence_residual = 0.0;
};

ForwardResult simulate_forward(const ScalarField& sigma, const FieldOptions& options = {});

/// Lumped L2 projection of the weak divergence of an elementwise-constant
/// field, boundary flux included.
ScalarField projected_divergence(const VectorField& v);

/// || P div(E x B0) - 1 ||_{L2}
double divergence_identity_error(const VectorField& e);

/// max_i |int sigma E . grad phi_i| relative to max_i sum_e |e| |sigma_e E_e . grad phi_i|.
double weak_divergence_residual(const ScalarField& sigma, const VectorField& e);

/// C1 = 1/2 (Lambda/lambda + 1) inf_{a,b} ||(-y + a, x + b)||_{L2}, with
/// lambda, Lambda the min and max nodal conductivity.
double field_bound(const ScalarField& sigma);

/// (|Omega|^{1/2} + C1) ||sigma||_{W^{1,inf}}
double forward_bound(const ScalarField& sigma);

} // namespace matmi
