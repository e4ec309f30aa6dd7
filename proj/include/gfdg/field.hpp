/// @file field.hpp
/// DG fields (modal coefficients) and quadrature-node fields, with
/// projection, evaluation, face traces and norms.
#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <random>

#include "gfdg/space.hpp"

namespace gfdg {

using SpacePtr = std::shared_ptr<const DGSpace>;
using ScalarFn = std::function<double(double, double)>;

class QuadField;

/// Piecewise polynomial in V_h, stored as per-cell modal coefficients with
/// respect to the orthonormal basis (cell-major layout).
class DGField {
public:
    DGField() = default;
    explicit DGField(SpacePtr space)
        : space_(std::move(space)), coeff_(Eigen::VectorXd::Zero(space_->total_dofs()))
    {
    }
    DGField(SpacePtr space, Eigen::VectorXd coeff)
        : space_(std::move(space)), coeff_(std::move(coeff))
    {
        if (coeff_.size() != space_->total_dofs())
            throw std::invalid_argument("DGField: coefficient size mismatch");
    }

    const DGSpace& space() const { return *space_; }
    SpacePtr space_ptr() const { return space_; }
    Eigen::VectorXd& coeff() { return coeff_; }
    const Eigen::VectorXd& coeff() const { return coeff_; }
    bool empty() const { return !space_; }

    /// View of the coefficients as a (dofs_per_cell x ncells) matrix.
    Eigen::Map<const Eigen::MatrixXd> as_matrix() const
    {
        return {coeff_.data(), space_->dofs_per_cell(), space_->mesh().cell_count()};
    }
    Eigen::Map<Eigen::MatrixXd> as_matrix()
    {
        return {coeff_.data(), space_->dofs_per_cell(), space_->mesh().cell_count()};
    }

    /// L2 norm; equals the coefficient norm by Parseval.
    double l2_norm() const { return coeff_.norm(); }

    DGField& operator+=(const DGField& o) { coeff_ += o.coeff_; return *this; }
    DGField& operator-=(const DGField& o) { coeff_ -= o.coeff_; return *this; }
    DGField& operator*=(double s) { coeff_ *= s; return *this; }
    friend DGField operator+(DGField a, const DGField& b) { a += b; return a; }
    friend DGField operator-(DGField a, const DGField& b) { a -= b; return a; }
    friend DGField operator*(double s, DGField a) { a *= s; return a; }

private:
    SpacePtr space_;
    Eigen::VectorXd coeff_;
};

/// Pointwise values at all volume quadrature nodes (cell-major). This is
/// where non-polynomial quantities such as the auxiliary EQ variable live.
class QuadField {
public:
    QuadField() = default;
    explicit QuadField(SpacePtr space)
        : space_(std::move(space)), values_(Eigen::VectorXd::Zero(space_->total_quads()))
    {
    }
    QuadField(SpacePtr space, Eigen::VectorXd values)
        : space_(std::move(space)), values_(std::move(values))
    {
        if (values_.size() != space_->total_quads())
            throw std::invalid_argument("QuadField: value count mismatch");
    }

    const DGSpace& space() const { return *space_; }
    SpacePtr space_ptr() const { return space_; }
    Eigen::VectorXd& values() { return values_; }
    const Eigen::VectorXd& values() const { return values_; }
    bool empty() const { return !space_; }

    Eigen::Map<const Eigen::MatrixXd> as_matrix() const
    {
        return {values_.data(), space_->quads_per_cell(), space_->mesh().cell_count()};
    }
    Eigen::Map<Eigen::MatrixXd> as_matrix()
    {
        return {values_.data(), space_->quads_per_cell(), space_->mesh().cell_count()};
    }

    /// Quadrature L2 norm: sqrt(sum_q w_q f(x_q)^2).
    double l2_norm() const
    {
        const auto F = as_matrix();
        const Eigen::VectorXd& w = space_->vol_weights();
        double s = 0.0;
        for (int c = 0; c < F.cols(); ++c)
            s += (w.array() * F.col(c).array().square()).sum();
        return std::sqrt(s);
    }

    double max_abs() const { return values_.cwiseAbs().maxCoeff(); }

    QuadField& operator+=(const QuadField& o) { values_ += o.values_; return *this; }
    QuadField& operator*=(double s) { values_ *= s; return *this; }

private:
    SpacePtr space_;
    Eigen::VectorXd values_;
};

/// Evaluate a callable at every volume quadrature node.
inline QuadField sample_at_quad(const SpacePtr& space, const ScalarFn& f)
{
    QuadField out(space);
    auto F = out.as_matrix();
    const int nq = space->quads_per_cell();
    for (int c = 0; c < space->mesh().cell_count(); ++c)
        for (int q = 0; q < nq; ++q) {
            const auto p = space->quad_point(c, q);
            F(q, c) = f(p[0], p[1]);
        }
    return out;
}

/// Evaluate a DG field at all volume quadrature nodes (exact).
inline QuadField eval_at_quad(const DGField& u)
{
    QuadField out(u.space_ptr());
    out.as_matrix().noalias() = u.space().vol_phi() * u.as_matrix();
    return out;
}

/// Piecewise L2 projection of quadrature-node data into V_h. With the
/// orthonormal basis the coefficients are exactly the load vector
/// (f, phi_a) evaluated by quadrature.
inline DGField project(const QuadField& f)
{
    const DGSpace& sp = f.space();
    DGField out(f.space_ptr());
    const Eigen::MatrixXd weighted =
        sp.vol_phi().transpose() * sp.vol_weights().asDiagonal();
    out.as_matrix().noalias() = weighted * f.as_matrix();
    return out;
}

inline DGField project(const SpacePtr& space, const ScalarFn& f)
{
    return project(sample_at_quad(space, f));
}

/// Load vector (f, phi) for all test functions; identical to the projection
/// coefficients because the basis is orthonormal.
inline Eigen::VectorXd load_vector(const QuadField& f) { return project(f).coeff(); }

/// Traces of a DG field and of its normal derivative on one face, at the
/// face quadrature nodes. Orientation follows the face normal (K1 -> K2):
/// jump = trace from K2 minus trace from K1, average = arithmetic mean.
/// On boundary faces the single-sided trace is returned with zero jump.
struct FaceTrace {
    Eigen::VectorXd avg, jump;        // of u
    Eigen::VectorXd avg_dn, jump_dn;  // of the normal derivative
};

inline FaceTrace trace_avg_jump(const DGField& u, const Face& f)
{
    const DGSpace& sp = u.space();
    const int nd = sp.dofs_per_cell();
    const auto C = u.as_matrix();
    FaceTrace tr;
    const bool has_left = f.left >= 0;
    const bool has_right = f.right >= 0;
    Eigen::VectorXd ul, ur, dl, dr;
    if (has_left) {
        ul = sp.face_phi(f.axis, 1) * C.col(f.left);
        dl = sp.face_dphi(f.axis, 1) * C.col(f.left);
    }
    if (has_right) {
        ur = sp.face_phi(f.axis, 0) * C.col(f.right);
        dr = sp.face_dphi(f.axis, 0) * C.col(f.right);
    }
    if (has_left && has_right) {
        tr.avg = 0.5 * (ul + ur);
        tr.jump = ur - ul;
        tr.avg_dn = 0.5 * (dl + dr);
        tr.jump_dn = dr - dl;
    } else {
        tr.avg = has_left ? ul : ur;
        tr.avg_dn = has_left ? dl : dr;
        tr.jump = Eigen::VectorXd::Zero(tr.avg.size());
        tr.jump_dn = Eigen::VectorXd::Zero(tr.avg.size());
    }
    return tr;
}

inline double l2_norm(const DGField& u) { return u.l2_norm(); }

/// L-infinity norm approximated by sampling quadrature nodes and cell
/// corners.
inline double linf_norm(const DGField& u)
{
    const DGSpace& sp = u.space();
    const auto C = u.as_matrix();
    double m = (sp.vol_phi() * C).cwiseAbs().maxCoeff();
    m = std::max(m, (sp.corner_phi() * C).cwiseAbs().maxCoeff());
    return m;
}

/// Quadrature L2 norm of (u_h - f).
inline double error_l2(const DGField& u, const ScalarFn& exact)
{
    const DGSpace& sp = u.space();
    QuadField diff = eval_at_quad(u);
    auto F = diff.as_matrix();
    for (int c = 0; c < F.cols(); ++c)
        for (int q = 0; q < F.rows(); ++q) {
            const auto p = sp.quad_point(c, q);
            F(q, c) -= exact(p[0], p[1]);
        }
    return diff.l2_norm();
}

/// Max of |u_h - f| over quadrature nodes and cell corners.
inline double error_linf(const DGField& u, const ScalarFn& exact)
{
    const DGSpace& sp = u.space();
    const auto C = u.as_matrix();
    const Eigen::MatrixXd Fq = sp.vol_phi() * C;
    const Eigen::MatrixXd Fc = sp.corner_phi() * C;
    double m = 0.0;
    for (int c = 0; c < C.cols(); ++c) {
        for (int q = 0; q < Fq.rows(); ++q) {
            const auto p = sp.quad_point(c, q);
            m = std::max(m, std::abs(Fq(q, c) - exact(p[0], p[1])));
        }
        for (int k = 0; k < Fc.rows(); ++k) {
            const auto p = sp.corner_point(c, k);
            m = std::max(m, std::abs(Fc(k, c) - exact(p[0], p[1])));
        }
    }
    return m;
}

/// Random piecewise-constant initial data: each cell mean is an independent
/// uniform sample in [-amplitude, amplitude]; higher modes are zero.
inline DGField random_cell_means(const SpacePtr& space, std::uint64_t seed,
                                 double amplitude)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-amplitude, amplitude);
    DGField u(space);
    auto C = u.as_matrix();
    // Coefficient of the constant mode phi_0 = 1/sqrt(|K|), so the cell-mean
    // value equals coeff / sqrt(|K|).
    const double scale = std::sqrt(space->mesh().cell_measure());
    for (int c = 0; c < C.cols(); ++c)
        C(0, c) = scale * dist(gen);
    return u;
}

} // namespace gfdg
