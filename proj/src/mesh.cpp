#include "matmi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "matmi/error.hpp"

namespace matmi {

P1Geometry p1_basis_data(std::span<const Vec2> nodes, std::span<const Triangle> elements)
{
    P1Geometry geo;
    geo.gradients.resize(elements.size());
    geo.areas.resize(elements.size());

    for (std::size_t e = 0; e < elements.size(); ++e) {
        const auto& t = elements[e];
        const Vec2& p1 = nodes[static_cast<std::size_t>(t[0])];
        const Vec2& p2 = nodes[static_cast<std::size_t>(t[1])];
        const Vec2& p3 = nodes[static_cast<std::size_t>(t[2])];

        const double det = (p2.x() - p1.x()) * (p3.y() - p1.y())
                           - (p3.x() - p1.x()) * (p2.y() - p1.y());
        if (!(det > 0.0)) {
            throw DegenerateElementError(e, 0.5 * det);
        }
        geo.areas[e] = 0.5 * det;
        // grad phi_k = rot90(opposite edge) / det
        geo.gradients[e][0] = Vec2(p2.y() - p3.y(), p3.x() - p2.x()) / det;
        geo.gradients[e][1] = Vec2(p3.y() - p1.y(), p1.x() - p3.x()) / det;
        geo.gradients[e][2] = Vec2(p1.y() - p2.y(), p2.x() - p1.x()) / det;
    }
    return geo;
}

Mesh::Mesh(int nx, int ny, Bounds bounds) : nx_(nx), ny_(ny), bounds_(bounds)
{
    if (nx < 1 || ny < 1) {
        throw PreconditionError("mesh subdivisions must be positive (got nx=" + std::to_string(nx)
                                + ", ny=" + std::to_string(ny) + ")");
    }
    if (!(bounds.x_min < bounds.x_max) || !(bounds.y_min < bounds.y_max)
        || !std::isfinite(bounds.area())) {
        throw PreconditionError("degenerate domain bounds");
    }

    const double dx = bounds.width() / nx;
    const double dy = bounds.height() / ny;

    nodes_.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    on_boundary_.reserve(nodes_.capacity());
    for (int j = 0; j <= ny; ++j) {
        // Pin the last row/column to the exact bound so boundary tests are exact.
        const double y = (j == ny) ? bounds.y_max : bounds.y_min + j * dy;
        for (int i = 0; i <= nx; ++i) {
            const double x = (i == nx) ? bounds.x_max : bounds.x_min + i * dx;
            nodes_.emplace_back(x, y);
            const bool edge = (i == 0 || i == nx || j == 0 || j == ny);
            on_boundary_.push_back(edge ? 1 : 0);
            if (edge) {
                boundary_nodes_.push_back(static_cast<int>(nodes_.size() - 1));
            }
        }
    }

    elements_.reserve(static_cast<std::size_t>(2 * nx * ny));
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int a = node_index(i, j);
            const int b = node_index(i + 1, j);
            const int c = node_index(i + 1, j + 1);
            const int d = node_index(i, j + 1);
            elements_.push_back({a, b, c});
            elements_.push_back({a, c, d});
        }
    }

    geometry_ = p1_basis_data(nodes_, elements_);

    diameters_.resize(elements_.size());
    for (std::size_t e = 0; e < elements_.size(); ++e) {
        const auto& t = elements_[e];
        double longest = 0.0;
        for (int k = 0; k < 3; ++k) {
            const Vec2 d = node(static_cast<std::size_t>(t[(k + 1) % 3]))
                           - node(static_cast<std::size_t>(t[k]));
            longest = std::max(longest, d.norm());
        }
        diameters_[e] = longest;
    }
}

Vec2 Mesh::centroid(std::size_t e) const
{
    const auto& t = elements_[e];
    return (nodes_[static_cast<std::size_t>(t[0])] + nodes_[static_cast<std::size_t>(t[1])]
            + nodes_[static_cast<std::size_t>(t[2])])
           / 3.0;
}

double Mesh::mesh_size() const noexcept
{
    return std::max(bounds_.width() / nx_, bounds_.height() / ny_);
}

double Mesh::boundary_distance(std::size_t i) const
{
    const Vec2& p = nodes_[i];
    return std::min({p.x() - bounds_.x_min, bounds_.x_max - p.x(), p.y() - bounds_.y_min,
                     bounds_.y_max - p.y()});
}

} // namespace matmi
