#pragma once

#include <cstdint>
#include <vector>

#include "matmi/fem.hpp"

namespace matmi {

/// Conductivities below this value are treated as inadmissible.
inline constexpr double kAdmissibilityFloor = 1e-3;

struct Bump {
    Vec2 center = Vec2(0.5, 0.5);
    double amplitude = 0.0;
    double width = 0.1;  ///< Gaussian standard deviation

    bool operator==(const Bump&) const = default;
};

struct PhantomSpec {
    double background = 0.2;
    std::vector<Bump> bumps;
    double collar_width = 0.15;  ///< r0

    bool operator==(const PhantomSpec&) const = default;
};

/// C1 cubic smoothstep clamped to [0, 1].
double smoothstep(double t);

/// Multiplier applied to the bumps at distance d from the boundary: zero on
/// the collar d <= r0, smoothstep ramp on [r0, 2 r0], one beyond.
double collar_taper(double distance, double collar_width);

/// background + taper(d) * sum_k a_k exp(-|x - c_k|^2 / (2 w_k^2)) at every node.
/// Nodes within the collar carry the background value bit-exactly. Throws
/// PreconditionError for an invalid PhantomSpec and InadmissibleConductivityError if
/// the field dips below kAdmissibilityFloor.
ScalarField make_phantom(const PhantomSpec& spec, const MeshPtr& mesh);

void validate(const PhantomSpec& spec);

/// Single centred bump, the smooth reference case.
PhantomSpec single_bump_phantom();
/// Three narrower, asymmetric bumps with steeper gradients.
PhantomSpec three_bump_phantom();

/// Deterministic random bumps with centres in the collar-free interior.
/// Amplitudes are drawn from [-max_amplitude, max_amplitude] and widths from
/// [min_width, max_width].
std::vector<Bump> random_bumps(std::uint64_t seed, int count, double max_amplitude,
                               double min_width = 0.05, double max_width = 0.12);

} // namespace matmi
