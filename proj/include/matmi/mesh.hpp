#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace matmi {

using Vec2 = Eigen::Vector2d;
using Triangle = std::array<int, 3>;

struct Bounds {
    double x_min = 0.0;
    double x_max = 1.0;
    double y_min = 0.0;
    double y_max = 1.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }
    Vec2 center() const { return {0.5 * (x_min + x_max), 0.5 * (y_min + y_max)}; }

    bool operator==(const Bounds&) const = default;
};

/// Constant gradients of the three P1 basis functions and the area of each
/// element.
struct P1Geometry {
    std::vector<std::array<Vec2, 3>> gradients;
    std::vector<double> areas;
};

/// Computes P1 geometry for arbitrary counterclockwise triangles. Throws
/// DegenerateElementError on a non-positive signed area.
P1Geometry p1_basis_data(std::span<const Vec2> nodes, std::span<const Triangle> elements);

/// Uniform triangulation of a rectangle. Each of the nx*ny cells is split
/// along its lower-left to upper-right diagonal; nodes are numbered
/// row-major, node(i, j) = j*(nx+1) + i. Immutable after construction.
class Mesh {
public:
    Mesh(int nx, int ny, Bounds bounds = {});

    int nx() const noexcept { return nx_; }
    int ny() const noexcept { return ny_; }
    const Bounds& bounds() const noexcept { return bounds_; }

    std::size_t num_nodes() const noexcept { return nodes_.size(); }
    std::size_t num_elements() const noexcept { return elements_.size(); }

    int node_index(int i, int j) const noexcept { return j * (nx_ + 1) + i; }

    const Vec2& node(std::size_t i) const { return nodes_[i]; }
    const std::vector<Vec2>& nodes() const noexcept { return nodes_; }
    const Triangle& element(std::size_t e) const { return elements_[e]; }
    const std::vector<Triangle>& elements() const noexcept { return elements_; }

    bool is_boundary(std::size_t i) const { return on_boundary_[i] != 0; }
    const std::vector<int>& boundary_nodes() const noexcept { return boundary_nodes_; }

    double area(std::size_t e) const { return geometry_.areas[e]; }
    const std::array<Vec2, 3>& gradients(std::size_t e) const { return geometry_.gradients[e]; }
    const P1Geometry& geometry() const noexcept { return geometry_; }

    Vec2 centroid(std::size_t e) const;
    /// Longest edge of element e.
    double diameter(std::size_t e) const { return diameters_[e]; }
    /// Largest cell side, max(dx, dy).
    double mesh_size() const noexcept;
    /// Distance from node i to the rectangle boundary.
    double boundary_distance(std::size_t i) const;

private:
    int nx_;
    int ny_;
    Bounds bounds_;
    std::vector<Vec2> nodes_;
    std::vector<Triangle> elements_;
    std::vector<char> on_boundary_;
    std::vector<int> boundary_nodes_;
    std::vector<double> diameters_;
    P1Geometry geometry_;
};

} // namespace matmi
