#include "matmi/phantoms.hpp"

#include <cmath>
#include <random>
#include <string>

#include "matmi/error.hpp"

namespace matmi {

double smoothstep(double t)
{
    if (t <= 0.0) {
        return 0.0;
    }
    if (t >= 1.0) {
        return 1.0;
    }
    return t * t * (3.0 - 2.0 * t);
}

double collar_taper(double distance, double collar_width)
{
    return smoothstep(distance / collar_width - 1.0);
}

void validate(const PhantomSpec& spec)
{
    if (!(spec.background > 0.0) || !std::isfinite(spec.background)) {
        throw PreconditionError("phantom background must be positive");
    }
    if (!(spec.collar_width > 0.0) || !std::isfinite(spec.collar_width)) {
        throw PreconditionError("phantom collar width must be positive");
    }
    for (std::size_t k = 0; k < spec.bumps.size(); ++k) {
        const Bump& b = spec.bumps[k];
        if (!(b.amplitude > -spec.background) || !std::isfinite(b.amplitude)) {
            throw PreconditionError("bump " + std::to_string(k)
                                    + ": amplitude must exceed -background");
        }
        if (!(b.width > 0.0) || !std::isfinite(b.width) || !b.center.allFinite()) {
            throw PreconditionError("bump " + std::to_string(k)
                                    + ": width must be positive and centre finite");
        }
    }
}

ScalarField make_phantom(const PhantomSpec& spec, const MeshPtr& mesh)
{
    validate(spec);
    ScalarField sigma(mesh, spec.background);
    for (std::size_t i = 0; i < mesh->num_nodes(); ++i) {
        const double taper = collar_taper(mesh->boundary_distance(i), spec.collar_width);
        if (taper == 0.0) {
            continue;
        }
        const Vec2& x = mesh->node(i);
        double sum = 0.0;
        for (const Bump& b : spec.bumps) {
            const double r2 = (x - b.center).squaredNorm();
            sum += b.amplitude * std::exp(-r2 / (2.0 * b.width * b.width));
        }
        sigma[i] = spec.background + taper * sum;
    }
    require_positive(sigma, kAdmissibilityFloor);
    return sigma;
}

PhantomSpec single_bump_phantom()
{
    PhantomSpec spec;
    spec.bumps = {Bump{Vec2(0.5, 0.5), 0.1, 0.15}};
    return spec;
}

PhantomSpec three_bump_phantom()
{
    PhantomSpec spec;
    spec.bumps = {
        Bump{Vec2(0.35, 0.40), 0.15, 0.07},
        Bump{Vec2(0.65, 0.40), 0.15, 0.07},
        Bump{Vec2(0.50, 0.62), -0.10, 0.06},
    };
    return spec;
}

std::vector<Bump> random_bumps(std::uint64_t seed, int count, double max_amplitude,
                               double min_width, double max_width)
{
    std::mt19937_64 gen(seed);
    // 53-bit uniform in [0, 1), identical on every standard library
    auto uniform = [&gen](double lo, double hi) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    };
    std::vector<Bump> bumps;
    bumps.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int k = 0; k < count; ++k) {
        Bump b;
        b.center = Vec2(uniform(0.35, 0.65), uniform(0.35, 0.65));
        b.amplitude = uniform(-max_amplitude, max_amplitude);
        b.width = uniform(min_width, max_width);
        bumps.push_back(b);
    }
    return bumps;
}

} // namespace matmi
