#pragma once

#include <array>
#include <span>
#include <vector>

#include "matmi/fem.hpp"

namespace matmi {

struct DerivativeResult {
    ScalarField potential;  ///< phi_h: div(sigma grad phi_h) = -div(h E_sigma), zero mean
    ScalarField value;      ///< DF_sigma(h)
};

/// Derivative of forward_map at sigma in direction h. The assembled form is
/// h + grad(sigma).(grad(phi_h) x B0) + grad(h).(E_sigma x B0) tested with the
/// same streamline test functions as forward_map, plus the variation of those
/// test functions with the velocity. It is the exact derivative of the
/// discrete map.
DerivativeResult frechet_derivative(const ScalarField& sigma, const ScalarField& h);

inline constexpr std::array<double, 3> kDefaultStepLadder{1e-2, 5e-3, 2.5e-3};

/// r(t) = ||F(sigma + t h) - F(sigma) - t DF_sigma(h)||_{L2} for each t.
/// Throws InadmissibleConductivityError if sigma + t h is not positive.
std::vector<double> fd_validate(const ScalarField& sigma, const ScalarField& h,
                                std::span<const double> t_values = kDefaultStepLadder);

/// (|Omega|^{1/2} + C1 (Lambda/lambda + 1)) ||h||_{W^{1,inf}}
double derivative_bound(const ScalarField& sigma, const ScalarField& h);

} // namespace matmi
