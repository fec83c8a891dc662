#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "matmi/error.hpp"
#include "matmi/mesh.hpp"

using namespace matmi;

namespace {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

} // namespace

TEST(Mesh, CountsOnSmallGrid)
{
    const Mesh m(2, 2);
    EXPECT_EQ(m.num_nodes(), 9u);
    EXPECT_EQ(m.num_elements(), 8u);
}

TEST(Mesh, CountsAndSizeAt64)
{
    const Mesh m(64, 64);
    EXPECT_EQ(m.num_nodes(), 4225u);
    EXPECT_EQ(m.num_elements(), 8192u);
    EXPECT_DOUBLE_EQ(m.mesh_size(), 1.0 / 64.0);
}

TEST(Mesh, SingleCellAreaIsExactlyOne)
{
    const Mesh m(1, 1);
    double total = 0.0;
    for (std::size_t e = 0; e < m.num_elements(); ++e) total += m.area(e);
    EXPECT_EQ(total, 1.0);
}

TEST(Mesh, CongruentElementsOnTwoByTwo)
{
    const Mesh m(2, 2);
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
        EXPECT_NEAR(m.area(e), 0.125, 1e-15);
    }
}

TEST(Mesh, AreasSumToDomainAreaOnGeneralRectangle)
{
    const Mesh m(7, 5, Bounds{-1.0, 2.5, 0.25, 1.75});
    double total = 0.0;
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
        EXPECT_GT(m.area(e), 0.0);
        total += m.area(e);
    }
    EXPECT_NEAR(total, 3.5 * 1.5, 1e-13);
}

TEST(Mesh, ElementsAreCounterclockwiseWithMatchingArea)
{
    const Mesh m(5, 3, Bounds{0.0, 2.0, 0.0, 1.0});
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
        const Triangle& t = m.element(e);
        const double a = signed_area(m.node(t[0]), m.node(t[1]), m.node(t[2]));
        EXPECT_GT(a, 0.0);
        EXPECT_NEAR(a, m.area(e), 1e-15);
    }
}

TEST(Mesh, RowMajorNumberingAndSharedDiagonal)
{
    const Mesh m(3, 2);
    EXPECT_EQ(m.node_index(2, 1), 1 * 4 + 2);
    EXPECT_DOUBLE_EQ(m.node(m.node_index(2, 1)).x(), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(m.node(m.node_index(2, 1)).y(), 0.5);
    // Every cell is cut from its lower-left to its upper-right corner.
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 3; ++i) {
            const int ll = m.node_index(i, j);
            const int ur = m.node_index(i + 1, j + 1);
            int sharing = 0;
            for (const Triangle& t : m.elements()) {
                const bool has_ll = std::find(t.begin(), t.end(), ll) != t.end();
                const bool has_ur = std::find(t.begin(), t.end(), ur) != t.end();
                sharing += has_ll && has_ur;
            }
            EXPECT_EQ(sharing, 2);
        }
    }
}

TEST(Mesh, BoundaryNodesLieOnTheRectangle)
{
    const Bounds b{0.1, 0.7, -0.3, 0.9};
    const Mesh m(9, 6, b);
    EXPECT_EQ(m.boundary_nodes().size(), static_cast<std::size_t>(2 * (9 + 6)));
    for (int i : m.boundary_nodes()) {
        const Vec2& p = m.node(static_cast<std::size_t>(i));
        const double d = std::min({std::abs(p.x() - b.x_min), std::abs(p.x() - b.x_max),
                                   std::abs(p.y() - b.y_min), std::abs(p.y() - b.y_max)});
        EXPECT_LE(d, 1e-14);
        EXPECT_TRUE(m.is_boundary(static_cast<std::size_t>(i)));
    }
    for (std::size_t i = 0; i < m.num_nodes(); ++i) {
        if (!m.is_boundary(i)) {
            EXPECT_GT(m.boundary_distance(i), 0.0);
        }
    }
}

TEST(Mesh, ConformingEdges)
{
    const int n = 6;
    const Mesh m(n, n);
    std::map<std::pair<int, int>, int> edges;
    for (const Triangle& t : m.elements()) {
        for (int k = 0; k < 3; ++k) {
            const int a = t[k];
            const int b = t[(k + 1) % 3];
            ++edges[{std::min(a, b), std::max(a, b)}];
        }
    }
    int boundary_edges = 0;
    auto on_same_side = [&](int a, int b) {
        const Vec2& p = m.node(static_cast<std::size_t>(a));
        const Vec2& q = m.node(static_cast<std::size_t>(b));
        return (p.x() == 0.0 && q.x() == 0.0) || (p.x() == 1.0 && q.x() == 1.0)
            || (p.y() == 0.0 && q.y() == 0.0) || (p.y() == 1.0 && q.y() == 1.0);
    };
    for (const auto& [e, count] : edges) {
        if (on_same_side(e.first, e.second)) {
            EXPECT_EQ(count, 1);
            ++boundary_edges;
        } else {
            EXPECT_EQ(count, 2);
        }
    }
    EXPECT_EQ(boundary_edges, 4 * n);
}

TEST(Mesh, RefinementNesting)
{
    const Bounds b{0.0, 1.5, -0.5, 0.5};
    for (int n : {1, 3, 8}) {
        const Mesh coarse(n, n, b);
        const Mesh fine(2 * n, 2 * n, b);
        for (int j = 0; j <= n; ++j) {
            for (int i = 0; i <= n; ++i) {
                const Vec2& pc = coarse.node(coarse.node_index(i, j));
                const Vec2& pf = fine.node(fine.node_index(2 * i, 2 * j));
                EXPECT_NEAR(pc.x(), pf.x(), 1e-14);
                EXPECT_NEAR(pc.y(), pf.y(), 1e-14);
            }
        }
    }
}

TEST(Mesh, AffineInterpolantIsExactAtCentroids)
{
    const Mesh m(11, 7, Bounds{-2.0, 3.0, 1.0, 4.0});
    auto f = [](const Vec2& p) { return 0.7 - 1.3 * p.x() + 2.9 * p.y(); };
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
        const Triangle& t = m.element(e);
        double mean = 0.0;
        for (int k : t) mean += f(m.node(static_cast<std::size_t>(k))) / 3.0;
        const double exact = f(m.centroid(e));
        EXPECT_LE(std::abs(mean - exact), 1e-13 * std::max(1.0, std::abs(exact)));
    }
}

TEST(P1Basis, GradientsSumToZero)
{
    const Mesh m(9, 4, Bounds{0.0, 3.0, 0.0, 1.0});
    for (std::size_t e = 0; e < m.num_elements(); ++e) {
        const auto& g = m.gradients(e);
        EXPECT_LE((g[0] + g[1] + g[2]).norm(), 1e-14 * g[0].norm());
    }
}

TEST(P1Basis, UnitRightTriangle)
{
    const std::vector<Vec2> nodes = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
    const std::vector<Triangle> tris = {{0, 1, 2}};
    const P1Geometry g = p1_basis_data(nodes, tris);
    EXPECT_DOUBLE_EQ(g.areas[0], 0.5);
    EXPECT_DOUBLE_EQ(g.gradients[0][0].x(), -1.0);
    EXPECT_DOUBLE_EQ(g.gradients[0][0].y(), -1.0);
    EXPECT_DOUBLE_EQ(g.gradients[0][1].x(), 1.0);
    EXPECT_DOUBLE_EQ(g.gradients[0][1].y(), 0.0);
    EXPECT_DOUBLE_EQ(g.gradients[0][2].x(), 0.0);
    EXPECT_DOUBLE_EQ(g.gradients[0][2].y(), 1.0);
}

TEST(P1Basis, GradientsDualToEdges)
{
    // grad(phi_i) . (x_j - x_k) = delta_ij - delta_ik on any triangle.
    const std::vector<Vec2> nodes = {Vec2(0.3, -0.2), Vec2(1.7, 0.4), Vec2(0.1, 2.2)};
    const std::vector<Triangle> tris = {{0, 1, 2}};
    const P1Geometry g = p1_basis_data(nodes, tris);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double value = g.gradients[0][static_cast<std::size_t>(i)].dot(nodes[static_cast<std::size_t>(j)] - nodes[0]);
            const double expected = (i == j ? 1.0 : 0.0) - (i == 0 ? 1.0 : 0.0);
            EXPECT_NEAR(value, expected, 1e-14);
        }
    }
}

TEST(P1Basis, DegenerateElementReportsIndex)
{
    const std::vector<Vec2> nodes = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(2, 0)};
    const std::vector<Triangle> tris = {{0, 1, 2}, {0, 1, 3}};
    try {
        p1_basis_data(nodes, tris);
        FAIL() << "expected DegenerateElementError";
    } catch (const DegenerateElementError& e) {
        EXPECT_EQ(e.element(), 1u);
        EXPECT_EQ(e.signed_area(), 0.0);
    }
}

TEST(P1Basis, ClockwiseElementRejected)
{
    const std::vector<Vec2> nodes = {Vec2(0, 0), Vec2(0, 1), Vec2(1, 0)};
    const std::vector<Triangle> tris = {{0, 1, 2}};
    EXPECT_THROW(p1_basis_data(nodes, tris), DegenerateElementError);
}

TEST(Mesh, RejectsBadInput)
{
    EXPECT_THROW(Mesh(0, 3), PreconditionError);
    EXPECT_THROW(Mesh(3, -1), PreconditionError);
    EXPECT_THROW(Mesh(2, 2, Bounds{1.0, 1.0, 0.0, 1.0}), PreconditionError);
    EXPECT_THROW(Mesh(2, 2, Bounds{0.0, 1.0, 2.0, 1.0}), PreconditionError);
}
