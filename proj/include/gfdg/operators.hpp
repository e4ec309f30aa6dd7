/// @file operators.hpp
/// Assembly of the symmetric bilinear form
///   G(w,v) = sum_K int_K (grad w . grad v - a w v)
///          + sum_{interior faces} int_e ({dn w}[v] + [w]{dn v})
/// and the induced operator L_h with (L_h v, phi) = G(v, phi).
///
/// Periodic wrap faces are enumerated once and carry full weight, which is
/// algebraically identical to the half-weighted double-counted boundary sum.
/// For natural boundary conditions the boundary face terms are dropped.
#pragma once

#include <Eigen/Sparse>
#include <ostream>
#include <vector>

#include "gfdg/field.hpp"

namespace gfdg {

using SparseMat = Eigen::SparseMatrix<double>;

/// Sparse operator for G over the modal basis. Because the basis is
/// orthonormal (mass = identity), the matrix of G is also the matrix of the
/// operator L_h. The matrix is symmetric and couples only face-neighboring
/// cells.
class GOperator {
public:
    GOperator() = default;

    GOperator(SpacePtr space, double a_param)
        : space_(std::move(space)), a_(a_param)
    {
        assemble();
    }

    const DGSpace& space() const { return *space_; }
    SpacePtr space_ptr() const { return space_; }
    double a_param() const { return a_; }
    const SparseMat& matrix() const { return mat_; }
    int dimension() const { return static_cast<int>(mat_.rows()); }
    int block_size() const { return space_->dofs_per_cell(); }

    /// The square G^2, used by the condensed stage systems. Built lazily and
    /// cached (pattern: two rings of cell neighbors).
    const SparseMat& squared() const
    {
        if (squared_.nonZeros() == 0 && mat_.nonZeros() > 0) {
            squared_ = (mat_ * mat_).pruned();
            squared_.makeCompressed();
        }
        return squared_;
    }

    /// Bilinear form value G(w, v) for DG fields.
    double operator()(const DGField& w, const DGField& v) const
    {
        return v.coeff().dot(mat_ * w.coeff());
    }

    /// L_h v: the unique w in V_h with (w, phi) = G(v, phi) for all phi.
    DGField apply_Lh(const DGField& v) const
    {
        return DGField(space_, mat_ * v.coeff());
    }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const { return mat_ * x; }

    /// Coordinate-format (row col value) text dump for debugging.
    void dump_coordinate(std::ostream& os) const
    {
        os.precision(17);
        for (int k = 0; k < mat_.outerSize(); ++k)
            for (SparseMat::InnerIterator it(mat_, k); it; ++it)
                os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }

    /// Reference blocks of the uniform-mesh assembly: the per-cell volume
    /// block and the four face blocks per axis (test side, trial side with
    /// 0 = K1/left, 1 = K2/right). Used by the circulant fast path.
    const Eigen::MatrixXd& cell_block() const { return vol_block_; }
    const Eigen::MatrixXd& face_block(int axis, int test_side, int trial_side) const
    {
        return face_block_[axis][test_side][trial_side];
    }

private:
    void assemble()
    {
        const DGSpace& sp = *space_;
        const Mesh& mesh = sp.mesh();
        const int nd = sp.dofs_per_cell();
        const int nc = mesh.cell_count();

        // Reference volume block: int_K (grad phi_b . grad phi_a - a phi_b phi_a),
        // identical on every cell of the uniform mesh.
        vol_block_ = Eigen::MatrixXd::Zero(nd, nd);
        const Eigen::VectorXd& w = sp.vol_weights();
        for (int d = 0; d < mesh.dim; ++d)
            vol_block_ += sp.vol_dphi(d).transpose() * w.asDiagonal() * sp.vol_dphi(d);
        vol_block_ -= a_ * (sp.vol_phi().transpose() * w.asDiagonal() * sp.vol_phi());
        const Eigen::MatrixXd& vol = vol_block_;

        // Reference face blocks per axis. For trial phi_b on side cb and test
        // phi_a on side ca of the face (0 = K1/left, 1 = K2/right):
        //   int_e ( {dn phi_b}[phi_a] + [phi_b]{dn phi_a} )
        // with jump sign -1 on the K1 side and +1 on the K2 side, and the
        // average contributing a factor 1/2 from each side.
        auto& fb = face_block_;
        for (int axis = 0; axis < mesh.dim; ++axis) {
            const Eigen::VectorXd& fw = sp.face_weights(axis);
            for (int ca = 0; ca < 2; ++ca) {
                for (int cb = 0; cb < 2; ++cb) {
                    // K1 traces live on its high edge, K2 traces on its low edge.
                    const int edge_a = (ca == 0) ? 1 : 0;
                    const int edge_b = (cb == 0) ? 1 : 0;
                    const double sa = (ca == 0) ? -1.0 : 1.0;
                    const double sb = (cb == 0) ? -1.0 : 1.0;
                    const Eigen::MatrixXd& phi_a = sp.face_phi(axis, edge_a);
                    const Eigen::MatrixXd& phi_b = sp.face_phi(axis, edge_b);
                    const Eigen::MatrixXd& dphi_a = sp.face_dphi(axis, edge_a);
                    const Eigen::MatrixXd& dphi_b = sp.face_dphi(axis, edge_b);
                    fb[axis][ca][cb] =
                        0.5 * sa * (phi_a.transpose() * fw.asDiagonal() * dphi_b) +
                        0.5 * sb * (dphi_a.transpose() * fw.asDiagonal() * phi_b);
                }
            }
        }

        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<std::size_t>(nc) * nd * nd * (1 + 4 * mesh.dim));
        auto add_block = [&](int ca, int cb, const Eigen::MatrixXd& B) {
            for (int a = 0; a < nd; ++a)
                for (int b = 0; b < nd; ++b)
                    if (B(a, b) != 0.0)
                        trip.emplace_back(ca * nd + a, cb * nd + b, B(a, b));
        };

        for (int c = 0; c < nc; ++c) add_block(c, c, vol);
        for (const Face& f : mesh.faces) {
            if (f.kind == FaceKind::boundary) continue;  // theta = 0
            add_block(f.left, f.left, fb[f.axis][0][0]);
            add_block(f.left, f.right, fb[f.axis][0][1]);
            add_block(f.right, f.left, fb[f.axis][1][0]);
            add_block(f.right, f.right, fb[f.axis][1][1]);
        }

        mat_.resize(nc * nd, nc * nd);
        mat_.setFromTriplets(trip.begin(), trip.end());
        mat_.makeCompressed();
    }

    SpacePtr space_;
    double a_ = 1.0;
    SparseMat mat_;
    mutable SparseMat squared_;
    Eigen::MatrixXd vol_block_;
    std::array<std::array<std::array<Eigen::MatrixXd, 2>, 2>, 2> face_block_;
};

/// Max-norm symmetry defect ||G - G^T||_max (the form is symmetric, so this
/// should be at roundoff).
inline double symmetry_defect(const GOperator& G)
{
    SparseMat d = SparseMat(G.matrix().transpose()) - G.matrix();
    double m = 0.0;
    for (int k = 0; k < d.outerSize(); ++k)
        for (SparseMat::InnerIterator it(d, k); it; ++it)
            m = std::max(m, std::abs(it.value()));
    return m;
}

} // namespace gfdg
