/// @file mesh.hpp
/// Structured 1D/2D rectangular meshes with face enumeration and
/// periodic identification.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfdg {

enum class BcKind { periodic, natural };

enum class FaceKind { interior, periodic_wrap, boundary };

/// A mesh face, oriented along its normal axis. The normal points in the
/// positive axis direction, from `left` (K1) to `right` (K2). Boundary
/// faces have exactly one adjacent cell; the other slot is -1.
struct Face {
    int axis = 0;
    int left = -1;
    int right = -1;
    FaceKind kind = FaceKind::interior;
};

/// A face as seen from one cell.
struct CellFace {
    int face = -1;
    /// True when the face normal (+axis) points out of the cell,
    /// i.e. the cell is the K1 side.
    bool normal_points_out = false;
};

struct AxisInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Uniform axis-aligned rectangular mesh. Cells are indexed ix + nx*iy.
/// Immutable after construction; safe to share across threads.
class Mesh {
public:
    int dim = 2;
    BcKind bc = BcKind::periodic;
    std::array<AxisInterval, 2> bounds{};   // bounds[1] unused in 1D
    std::array<int, 2> counts{1, 1};        // counts[1] == 1 in 1D
    std::array<double, 2> spacing{1.0, 1.0};
    std::vector<Face> faces;

    int cell_count() const { return counts[0] * counts[1]; }
    int face_count() const { return static_cast<int>(faces.size()); }

    int cell_index(int ix, int iy = 0) const { return ix + counts[0] * iy; }
    int cell_ix(int c) const { return c % counts[0]; }
    int cell_iy(int c) const { return c / counts[0]; }

    double cell_lo(int c, int axis) const
    {
        const int i = (axis == 0) ? cell_ix(c) : cell_iy(c);
        return bounds[axis].lo + i * spacing[axis];
    }
    double cell_hi(int c, int axis) const { return cell_lo(c, axis) + spacing[axis]; }
    double cell_center(int c, int axis) const
    {
        return cell_lo(c, axis) + 0.5 * spacing[axis];
    }

    /// Cell diameter (max over cells is the mesh size h).
    double cell_diameter() const
    {
        if (dim == 1) return spacing[0];
        return std::sqrt(spacing[0] * spacing[0] + spacing[1] * spacing[1]);
    }
    double mesh_size() const { return cell_diameter(); }

    double cell_measure() const
    {
        return (dim == 1) ? spacing[0] : spacing[0] * spacing[1];
    }
    double domain_measure() const { return cell_measure() * cell_count(); }

    const std::vector<CellFace>& faces_of(int cell) const
    {
        if (cell < 0 || cell >= cell_count())
            throw std::out_of_range("Mesh::faces_of: cell index " + std::to_string(cell) +
                                    " out of range [0," + std::to_string(cell_count()) + ")");
        return cell_faces_[cell];
    }

    /// Neighbor of `cell` across its face in direction +-axis, honoring
    /// periodic wrap; -1 when the face is an open boundary.
    int neighbor(int cell, int axis, int step) const
    {
        int i = (axis == 0) ? cell_ix(cell) : cell_iy(cell);
        const int n = counts[axis];
        i += step;
        if (i < 0 || i >= n) {
            if (bc != BcKind::periodic) return -1;
            i = (i + n) % n;
        }
        return (axis == 0) ? cell_index(i, cell_iy(cell)) : cell_index(cell_ix(cell), i);
    }

    friend Mesh build_mesh(const std::vector<AxisInterval>& bounds,
                           const std::vector<int>& counts, BcKind bc);

private:
    std::vector<std::vector<CellFace>> cell_faces_;
};

/// Build a uniform rectangular mesh. `bounds.size()` fixes the dimension
/// (1 or 2). Requires at least two cells per axis and nonempty intervals.
inline Mesh build_mesh(const std::vector<AxisInterval>& bounds,
                       const std::vector<int>& counts, BcKind bc)
{
    if (bounds.empty() || bounds.size() > 2)
        throw std::invalid_argument("build_mesh: dimension must be 1 or 2");
    if (counts.size() != bounds.size())
        throw std::invalid_argument("build_mesh: counts/bounds size mismatch");

    Mesh mesh;
    mesh.dim = static_cast<int>(bounds.size());
    mesh.bc = bc;
    for (int d = 0; d < mesh.dim; ++d) {
        if (counts[d] < 2)
            throw std::invalid_argument("build_mesh: need at least 2 cells per axis, got " +
                                        std::to_string(counts[d]) + " on axis " + std::to_string(d));
        if (!(bounds[d].hi > bounds[d].lo))
            throw std::invalid_argument("build_mesh: degenerate interval on axis " +
                                        std::to_string(d));
        mesh.bounds[d] = bounds[d];
        mesh.counts[d] = counts[d];
        mesh.spacing[d] = (bounds[d].hi - bounds[d].lo) / counts[d];
    }
    if (mesh.dim == 1) {
        mesh.counts[1] = 1;
        mesh.bounds[1] = {0.0, 1.0};
        mesh.spacing[1] = 1.0;
    }

    const int nx = mesh.counts[0];
    const int ny = mesh.counts[1];
    mesh.cell_faces_.resize(mesh.cell_count());

    auto push_face = [&mesh](int axis, int left, int right, FaceKind kind) {
        const int id = static_cast<int>(mesh.faces.size());
        mesh.faces.push_back(Face{axis, left, right, kind});
        if (left >= 0) mesh.cell_faces_[left].push_back(CellFace{id, true});
        if (right >= 0) mesh.cell_faces_[right].push_back(CellFace{id, false});
    };

    // Faces normal to x: one strip per row of cells.
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 1; ix < nx; ++ix)
            push_face(0, mesh.cell_index(ix - 1, iy), mesh.cell_index(ix, iy),
                      FaceKind::interior);
        if (bc == BcKind::periodic) {
            push_face(0, mesh.cell_index(nx - 1, iy), mesh.cell_index(0, iy),
                      FaceKind::periodic_wrap);
        } else {
            push_face(0, -1, mesh.cell_index(0, iy), FaceKind::boundary);
            push_face(0, mesh.cell_index(nx - 1, iy), -1, FaceKind::boundary);
        }
    }
    if (mesh.dim == 2) {
        for (int ix = 0; ix < nx; ++ix) {
            for (int iy = 1; iy < ny; ++iy)
                push_face(1, mesh.cell_index(ix, iy - 1), mesh.cell_index(ix, iy),
                          FaceKind::interior);
            if (bc == BcKind::periodic) {
                push_face(1, mesh.cell_index(ix, ny - 1), mesh.cell_index(ix, 0),
                          FaceKind::periodic_wrap);
            } else {
                push_face(1, -1, mesh.cell_index(ix, 0), FaceKind::boundary);
                push_face(1, mesh.cell_index(ix, ny - 1), -1, FaceKind::boundary);
            }
        }
    }
    return mesh;
}

inline Mesh build_mesh_1d(double lo, double hi, int n, BcKind bc)
{
    return build_mesh({AxisInterval{lo, hi}}, {n}, bc);
}

inline Mesh build_mesh_2d(double xlo, double xhi, int nx, double ylo, double yhi, int ny,
                          BcKind bc)
{
    return build_mesh({AxisInterval{xlo, xhi}, AxisInterval{ylo, yhi}}, {nx, ny}, bc);
}

} // namespace gfdg
