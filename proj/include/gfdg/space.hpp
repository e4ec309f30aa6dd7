/// @file space.hpp
/// Modal DG space: L2-orthonormal tensor Legendre basis with precomputed
/// volume/face/corner evaluation tables shared by all cells of a uniform mesh.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <memory>

#include "gfdg/legendre.hpp"
#include "gfdg/mesh.hpp"

namespace gfdg {

/// Basis + quadrature bundle for one (mesh, degree) pair.
///
/// The basis on each cell is the tensor product of 1D Legendre polynomials
/// scaled by sqrt((2n+1)/h) so that the cell mass matrix is the identity.
/// Since the mesh is uniform all cells share the same reference tables,
/// including the physical 1/sqrt(h) normalization and quadrature weights.
///
/// 1D meshes are handled as a degenerate tensor axis with one quadrature
/// node, unit weight, and constant basis factor, so all table code below is
/// dimension-agnostic.
class DGSpace {
public:
    DGSpace(std::shared_ptr<const Mesh> mesh, int degree, int points_per_axis = -1)
        : mesh_(std::move(mesh)), degree_(degree)
    {
        if (!mesh_) throw std::invalid_argument("DGSpace: null mesh");
        if (degree_ < 0) throw std::invalid_argument("DGSpace: negative degree");
        m_ = (points_per_axis > 0) ? points_per_axis : degree_ + 2;
        if (m_ < degree_ + 1)
            throw std::invalid_argument("DGSpace: need at least degree+1 quadrature points");
        rule_ = gauss_legendre(m_);
        build_tables();
    }

    const Mesh& mesh() const { return *mesh_; }
    std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
    int degree() const { return degree_; }
    int points_per_axis() const { return m_; }
    const QuadRule1D& rule() const { return rule_; }

    int dofs_per_cell() const { return ndof_; }
    int quads_per_cell() const { return nq_; }
    int quads_per_face() const { return nq_face_; }
    int corners_per_cell() const { return ncorner_; }
    int total_dofs() const { return ndof_ * mesh_->cell_count(); }
    int total_quads() const { return nq_ * mesh_->cell_count(); }

    // Reference tables: identical on every cell, physical normalization
    // already applied.
    const Eigen::MatrixXd& vol_phi() const { return vol_phi_; }
    const Eigen::MatrixXd& vol_dphi(int axis) const { return vol_dphi_[axis]; }
    const Eigen::VectorXd& vol_weights() const { return vol_w_; }
    /// Trace of each basis function on the cell edge `side` (0=low, 1=high)
    /// of the axis-`axis` face, at the face quadrature nodes.
    const Eigen::MatrixXd& face_phi(int axis, int side) const { return face_phi_[axis][side]; }
    /// Normal (+axis) derivative trace on the same edge.
    const Eigen::MatrixXd& face_dphi(int axis, int side) const { return face_dphi_[axis][side]; }
    const Eigen::VectorXd& face_weights(int axis) const { return face_w_[axis]; }
    const Eigen::MatrixXd& corner_phi() const { return corner_phi_; }

    /// Physical coordinates of volume quadrature node q of a cell.
    std::array<double, 2> quad_point(int cell, int q) const
    {
        const int qx = q % m_;
        const int qy = q / m_;
        std::array<double, 2> p{0.0, 0.0};
        p[0] = mesh_->cell_center(cell, 0) + 0.5 * mesh_->spacing[0] * rule_.nodes[qx];
        if (mesh_->dim == 2)
            p[1] = mesh_->cell_center(cell, 1) + 0.5 * mesh_->spacing[1] * rule_.nodes[qy];
        return p;
    }

    /// Physical coordinates of corner c (bit 0: x side, bit 1: y side).
    std::array<double, 2> corner_point(int cell, int c) const
    {
        std::array<double, 2> p{0.0, 0.0};
        p[0] = (c & 1) ? mesh_->cell_hi(cell, 0) : mesh_->cell_lo(cell, 0);
        if (mesh_->dim == 2)
            p[1] = (c & 2) ? mesh_->cell_hi(cell, 1) : mesh_->cell_lo(cell, 1);
        return p;
    }

    /// Physical coordinates of face quadrature node q on a face.
    std::array<double, 2> face_point(const Face& f, int q) const
    {
        const int anchor = (f.left >= 0) ? f.left : f.right;
        std::array<double, 2> p{0.0, 0.0};
        // Normal coordinate: high edge of the left cell, or low edge of the
        // right cell for low-side boundary faces. Periodic wrap faces report
        // the left cell's high edge.
        p[f.axis] = (f.left >= 0) ? mesh_->cell_hi(f.left, f.axis)
                                  : mesh_->cell_lo(f.right, f.axis);
        if (mesh_->dim == 2) {
            const int t = 1 - f.axis;
            p[t] = mesh_->cell_center(anchor, t) + 0.5 * mesh_->spacing[t] * rule_.nodes[q];
        }
        return p;
    }

private:
    void build_tables()
    {
        const int dim = mesh_->dim;
        const int kp1 = degree_ + 1;
        ndof_ = (dim == 2) ? kp1 * kp1 : kp1;
        nq_ = (dim == 2) ? m_ * m_ : m_;
        nq_face_ = (dim == 2) ? m_ : 1;
        ncorner_ = (dim == 2) ? 4 : 2;

        // Per-axis 1D pieces. Axis 1 in 1D degenerates to a single constant
        // mode at one node with unit weight.
        struct Axis1D {
            Eigen::MatrixXd phi, dphi;   // nodes x modes
            Eigen::VectorXd w;           // physical weights
            Eigen::MatrixXd edge_phi;    // 2 x modes (low, high)
            Eigen::MatrixXd edge_dphi;
        };
        std::array<Axis1D, 2> ax;
        for (int d = 0; d < 2; ++d) {
            const bool active = (d < dim);
            const int nm = active ? m_ : 1;
            const int nk = active ? kp1 : 1;
            const double h = active ? mesh_->spacing[d] : 1.0;
            ax[d].phi.resize(nm, nk);
            ax[d].dphi.resize(nm, nk);
            ax[d].w.resize(nm);
            ax[d].edge_phi.resize(2, nk);
            ax[d].edge_dphi.resize(2, nk);
            for (int q = 0; q < nm; ++q) {
                const double xi = active ? rule_.nodes[q] : 0.0;
                ax[d].w[q] = active ? 0.5 * h * rule_.weights[q] : 1.0;
                for (int n = 0; n < nk; ++n) {
                    const double scale = std::sqrt((2.0 * n + 1.0) / h);
                    double v, dv;
                    legendre_eval(n, xi, v, dv);
                    ax[d].phi(q, n) = scale * v;
                    ax[d].dphi(q, n) = scale * dv * 2.0 / h;
                }
            }
            for (int side = 0; side < 2; ++side) {
                const double xi = (side == 0) ? -1.0 : 1.0;
                for (int n = 0; n < nk; ++n) {
                    const double scale = std::sqrt((2.0 * n + 1.0) / h);
                    double v, dv;
                    legendre_eval(n, xi, v, dv);
                    ax[d].edge_phi(side, n) = scale * v;
                    ax[d].edge_dphi(side, n) = scale * dv * 2.0 / h;
                }
            }
        }

        const int kx = kp1;
        auto dof_x = [kx](int a) { return a % kx; };
        auto dof_y = [kx](int a) { return a / kx; };

        vol_phi_.resize(nq_, ndof_);
        vol_dphi_[0].resize(nq_, ndof_);
        vol_dphi_[1].resize(nq_, ndof_);
        vol_w_.resize(nq_);
        for (int q = 0; q < nq_; ++q) {
            const int qx = q % m_;
            const int qy = q / m_;
            vol_w_[q] = ax[0].w[qx] * ax[1].w[(dim == 2) ? qy : 0];
            for (int a = 0; a < ndof_; ++a) {
                const int ix = dof_x(a);
                const int iy = dof_y(a);
                const double px = ax[0].phi(qx, ix);
                const double py = ax[1].phi((dim == 2) ? qy : 0, iy);
                vol_phi_(q, a) = px * py;
                vol_dphi_[0](q, a) = ax[0].dphi(qx, ix) * py;
                vol_dphi_[1](q, a) = (dim == 2) ? px * ax[1].dphi(qy, iy) : 0.0;
            }
        }

        for (int axis = 0; axis < dim; ++axis) {
            const int t = 1 - axis;
            face_w_[axis].resize(nq_face_);
            for (int q = 0; q < nq_face_; ++q)
                face_w_[axis][q] = (dim == 2) ? ax[t].w[q] : 1.0;
            for (int side = 0; side < 2; ++side) {
                face_phi_[axis][side].resize(nq_face_, ndof_);
                face_dphi_[axis][side].resize(nq_face_, ndof_);
                for (int q = 0; q < nq_face_; ++q) {
                    for (int a = 0; a < ndof_; ++a) {
                        const int in = (axis == 0) ? dof_x(a) : dof_y(a);
                        const int it = (axis == 0) ? dof_y(a) : dof_x(a);
                        const double tangent =
                            (dim == 2) ? ax[t].phi(q, it) : 1.0;
                        face_phi_[axis][side](q, a) = ax[axis].edge_phi(side, in) * tangent;
                        face_dphi_[axis][side](q, a) = ax[axis].edge_dphi(side, in) * tangent;
                    }
                }
            }
        }

        corner_phi_.resize(ncorner_, ndof_);
        for (int c = 0; c < ncorner_; ++c) {
            const int sx = c & 1;
            const int sy = (c >> 1) & 1;
            for (int a = 0; a < ndof_; ++a) {
                const double px = ax[0].edge_phi(sx, dof_x(a));
                const double py = (dim == 2) ? ax[1].edge_phi(sy, dof_y(a)) : 1.0;
                corner_phi_(c, a) = px * py;
            }
        }
    }

    std::shared_ptr<const Mesh> mesh_;
    int degree_ = 1;
    int m_ = 3;
    QuadRule1D rule_;
    int ndof_ = 0, nq_ = 0, nq_face_ = 0, ncorner_ = 0;
    Eigen::MatrixXd vol_phi_;
    std::array<Eigen::MatrixXd, 2> vol_dphi_;
    Eigen::VectorXd vol_w_;
    Eigen::MatrixXd face_phi_[2][2];
    Eigen::MatrixXd face_dphi_[2][2];
    std::array<Eigen::VectorXd, 2> face_w_;
    Eigen::MatrixXd corner_phi_;
};

inline std::shared_ptr<const DGSpace> make_space(const Mesh& mesh, int degree,
                                                 int points_per_axis = -1)
{
    auto m = std::make_shared<Mesh>(mesh);
    return std::make_shared<const DGSpace>(m, degree, points_per_axis);
}

} // namespace gfdg
