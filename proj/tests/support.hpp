#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>

#include "matmi/fem.hpp"
#include "matmi/phantoms.hpp"

namespace matmi::fixtures {

inline MeshPtr unit_mesh(int n) { return std::make_shared<const Mesh>(n, n); }

inline ScalarField interpolate(const MeshPtr& mesh, const std::function<double(double, double)>& f)
{
    ScalarField out(mesh);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = f(mesh->node(i).x(), mesh->node(i).y());
    }
    return out;
}

/// Collar-supported perturbation: a random bump phantom minus its background.
inline ScalarField collar_supported(const MeshPtr& mesh, std::uint64_t seed, int count = 3,
                                    double amplitude = 0.06)
{
    PhantomSpec spec;
    spec.bumps = random_bumps(seed, count, amplitude);
    return make_phantom(spec, mesh) - ScalarField(mesh, spec.background);
}

inline ScalarField random_bump_sigma(const MeshPtr& mesh, std::uint64_t seed, int count = 3,
                                     double amplitude = 0.06)
{
    PhantomSpec spec;
    spec.bumps = random_bumps(seed, count, amplitude);
    return make_phantom(spec, mesh);
}

inline ScalarField random_nodal(const MeshPtr& mesh, std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(lo, hi);
    ScalarField out(mesh);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = u(rng);
    }
    return out;
}

} // namespace matmi::fixtures
