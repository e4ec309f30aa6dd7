#include <gtest/gtest.h>

#include <cmath>

#include "gfdg/mesh.hpp"

using namespace gfdg;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST(Mesh, Periodic2DCounts)
{
    const Mesh m = build_mesh_2d(-2 * kPi, 2 * kPi, 8, -2 * kPi, 2 * kPi, 8,
                                 BcKind::periodic);
    EXPECT_EQ(m.cell_count(), 64);
    EXPECT_EQ(m.face_count(), 128);
    int wrap = 0;
    for (const auto& f : m.faces) {
        EXPECT_NE(f.kind, FaceKind::boundary);
        EXPECT_GE(f.left, 0);
        EXPECT_GE(f.right, 0);
        EXPECT_NE(f.left, f.right);
        if (f.kind == FaceKind::periodic_wrap) ++wrap;
    }
    EXPECT_EQ(wrap, 16);
}

TEST(Mesh, Natural1DCounts)
{
    const Mesh m = build_mesh_1d(0.0, 1.0, 2, BcKind::natural);
    EXPECT_EQ(m.cell_count(), 2);
    int interior = 0, boundary = 0;
    for (const auto& f : m.faces) {
        if (f.kind == FaceKind::interior) ++interior;
        if (f.kind == FaceKind::boundary) {
            ++boundary;
            EXPECT_TRUE((f.left >= 0) != (f.right >= 0));
        }
    }
    EXPECT_EQ(interior, 1);
    EXPECT_EQ(boundary, 2);
}

TEST(Mesh, PatternSimulationMeshSpacing)
{
    const Mesh m = build_mesh_2d(0.0, 100.0, 128, 0.0, 100.0, 128, BcKind::periodic);
    EXPECT_EQ(m.cell_count(), 16384);
    EXPECT_DOUBLE_EQ(m.spacing[0], 0.78125);
    EXPECT_DOUBLE_EQ(m.spacing[1], 0.78125);
}

TEST(Mesh, RejectsBadInput)
{
    EXPECT_THROW(build_mesh_1d(0.0, 1.0, 0, BcKind::periodic), std::invalid_argument);
    EXPECT_THROW(build_mesh_1d(0.0, 1.0, 1, BcKind::periodic), std::invalid_argument);
    EXPECT_THROW(build_mesh_1d(0.0, 1.0, -3, BcKind::periodic), std::invalid_argument);
    EXPECT_THROW(build_mesh_1d(1.0, 1.0, 4, BcKind::periodic), std::invalid_argument);
    EXPECT_THROW(build_mesh_1d(2.0, 1.0, 4, BcKind::periodic), std::invalid_argument);
}

TEST(Mesh, FacesOfInteriorAndCornerCells)
{
    const Mesh p = build_mesh_2d(0.0, 1.0, 4, 0.0, 1.0, 4, BcKind::periodic);
    EXPECT_EQ(p.faces_of(p.cell_index(1, 1)).size(), 4u);

    const Mesh m1 = build_mesh_1d(0.0, 1.0, 4, BcKind::periodic);
    const auto cf0 = m1.faces_of(0);
    ASSERT_EQ(cf0.size(), 2u);
    int wrap = 0;
    for (const auto& cf : cf0)
        if (m1.faces[cf.face].kind == FaceKind::periodic_wrap) ++wrap;
    EXPECT_EQ(wrap, 1);

    const Mesh n = build_mesh_2d(0.0, 1.0, 4, 0.0, 1.0, 4, BcKind::natural);
    int nb = 0, ni = 0;
    for (const auto& cf : n.faces_of(n.cell_index(0, 0))) {
        if (n.faces[cf.face].kind == FaceKind::boundary) ++nb;
        else ++ni;
    }
    EXPECT_EQ(nb, 2);
    EXPECT_EQ(ni, 2);

    EXPECT_THROW(n.faces_of(-1), std::out_of_range);
    EXPECT_THROW(n.faces_of(16), std::out_of_range);
}

// Sum over faces of adjacent-cell counts = 2*(interior+wrap) + boundary.
TEST(Mesh, FaceAdjacencyBalance)
{
    for (BcKind bc : {BcKind::periodic, BcKind::natural}) {
        const Mesh m = build_mesh_2d(0.0, 3.0, 5, -1.0, 2.0, 3, bc);
        int adjacent = 0, twosided = 0, onesided = 0;
        for (const auto& f : m.faces) {
            adjacent += (f.left >= 0) + (f.right >= 0);
            if (f.kind == FaceKind::boundary) ++onesided;
            else ++twosided;
        }
        EXPECT_EQ(adjacent, 2 * twosided + onesided);
        int from_cells = 0;
        for (int c = 0; c < m.cell_count(); ++c)
            from_cells += static_cast<int>(m.faces_of(c).size());
        EXPECT_EQ(from_cells, adjacent);
    }
}

TEST(Mesh, PeriodicTraversalWrapsAround)
{
    const Mesh m = build_mesh_2d(0.0, 1.0, 5, 0.0, 1.0, 4, BcKind::periodic);
    int c = m.cell_index(4, 2);
    c = m.neighbor(c, 0, +1);
    EXPECT_EQ(c, m.cell_index(0, 2));
    EXPECT_EQ(m.neighbor(m.cell_index(0, 2), 0, -1), m.cell_index(4, 2));

    const Mesh n = build_mesh_2d(0.0, 1.0, 5, 0.0, 1.0, 4, BcKind::natural);
    EXPECT_EQ(n.neighbor(n.cell_index(4, 2), 0, +1), -1);
}

TEST(Mesh, UniformSpacing)
{
    const Mesh m = build_mesh_2d(-2 * kPi, 2 * kPi, 8, 0.0, 1.0, 4, BcKind::periodic);
    EXPECT_NEAR(m.spacing[0], 4 * kPi / 8, 1e-15);
    EXPECT_NEAR(m.spacing[1], 0.25, 1e-15);
    EXPECT_NEAR(m.cell_lo(m.cell_index(3, 2), 0), -2 * kPi + 3 * m.spacing[0], 1e-13);
    EXPECT_NEAR(m.domain_measure(), 4 * kPi, 1e-12);
}
