/// @file spectral_base.hpp
/// Exact inverse of the H-free stage base matrix
///   K0 = I_s (x) I + tau * (A (x) G^2)
/// on periodic uniform meshes, where G is block-circulant: a 2D DFT over
/// cell indices block-diagonalizes G into Hermitian dof x dof symbols
///   Ghat(theta) = C_00 + sum_d (C_{+d} e^{+i theta_d} + C_{-d} e^{-i theta_d}),
/// so K0 decouples into one (s*dof) x (s*dof) dense complex inverse per
/// frequency. Used as the prediction solver and as the frozen preconditioner
/// of the correction solves; the true residual of the assembled system is
/// still enforced by the caller.
#pragma once

#include <fftw3.h>

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "gfdg/operators.hpp"
#include "gfdg/tableau.hpp"

namespace gfdg {

class SpectralBase {
public:
    static bool supports(const Mesh& mesh) { return mesh.bc == BcKind::periodic; }

    SpectralBase(const GOperator& G, const ButcherTableau& tab, double tau)
        : space_(G.space_ptr()), stages_(tab.stages())
    {
        const Mesh& mesh = space_->mesh();
        if (!supports(mesh))
            throw std::invalid_argument("SpectralBase: periodic mesh required");
        nd_ = space_->dofs_per_cell();
        nx_ = mesh.counts[0];
        ny_ = mesh.counts[1];
        ncells_ = nx_ * ny_;

        build_symbols(G, tab, tau);

        buf_ = fftw_alloc_complex(ncells_);
        // Row-major (ny, nx) matches the cell index ix + nx*iy.
        plan_fwd_ = fftw_plan_dft_2d(ny_, nx_, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        plan_bwd_ = fftw_plan_dft_2d(ny_, nx_, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~SpectralBase()
    {
        fftw_destroy_plan(plan_fwd_);
        fftw_destroy_plan(plan_bwd_);
        fftw_free(buf_);
    }

    SpectralBase(const SpectralBase&) = delete;
    SpectralBase& operator=(const SpectralBase&) = delete;

    /// x = K0^{-1} r for stacked stage blocks r_1..r_s.
    std::vector<Eigen::VectorXd> solve(const std::vector<Eigen::VectorXd>& r) const
    {
        const int s = stages_;
        const int m = s * nd_;
        // hat(f, :) holds the transformed coefficient (i, a) at frequency f.
        Eigen::MatrixXcd hat(ncells_, m);
        for (int i = 0; i < s; ++i)
            for (int a = 0; a < nd_; ++a) {
                for (int c = 0; c < ncells_; ++c) {
                    buf_[c][0] = r[i][a + nd_ * c];
                    buf_[c][1] = 0.0;
                }
                fftw_execute(plan_fwd_);
                for (int c = 0; c < ncells_; ++c)
                    hat(c, i * nd_ + a) = std::complex<double>(buf_[c][0], buf_[c][1]);
            }

        for (int c = 0; c < ncells_; ++c)
            hat.row(c) = (inv_symbol_[c] * hat.row(c).transpose()).transpose();

        std::vector<Eigen::VectorXd> x(s, Eigen::VectorXd(nd_ * ncells_));
        const double scale = 1.0 / ncells_;
        for (int i = 0; i < s; ++i)
            for (int a = 0; a < nd_; ++a) {
                for (int c = 0; c < ncells_; ++c) {
                    const std::complex<double> v = hat(c, i * nd_ + a);
                    buf_[c][0] = v.real();
                    buf_[c][1] = v.imag();
                }
                fftw_execute(plan_bwd_);
                for (int c = 0; c < ncells_; ++c)
                    x[i][a + nd_ * c] = buf_[c][0] * scale;
            }
        return x;
    }

private:
    void build_symbols(const GOperator& G, const ButcherTableau& tab, double tau)
    {
        const Mesh& mesh = space_->mesh();
        const int dim = mesh.dim;
        const int s = stages_;
        const double two_pi = 6.28318530717958647692;

        // Cell-offset stencil blocks of G. On the face between cell c and
        // its +d neighbor, c is the K1 side (test side 0) and the neighbor
        // the K2 side; both faces adjacent to c along axis d also add to the
        // diagonal block.
        Eigen::MatrixXd C0 = G.cell_block();
        std::array<Eigen::MatrixXd, 2> Cplus, Cminus;
        for (int d = 0; d < dim; ++d) {
            C0 += G.face_block(d, 0, 0) + G.face_block(d, 1, 1);
            Cplus[d] = G.face_block(d, 0, 1);
            Cminus[d] = G.face_block(d, 1, 0);
        }

        inv_symbol_.resize(ncells_);
        Eigen::MatrixXcd Ghat(nd_, nd_), K(s * nd_, s * nd_);
        for (int jy = 0; jy < ny_; ++jy) {
            for (int jx = 0; jx < nx_; ++jx) {
                Ghat = C0.cast<std::complex<double>>();
                const double tx = two_pi * jx / nx_;
                Ghat += std::polar(1.0, tx) * Cplus[0] + std::polar(1.0, -tx) * Cminus[0];
                if (dim == 2) {
                    const double ty = two_pi * jy / ny_;
                    Ghat += std::polar(1.0, ty) * Cplus[1] +
                            std::polar(1.0, -ty) * Cminus[1];
                }
                const Eigen::MatrixXcd G2 = Ghat * Ghat;
                K.setIdentity();
                for (int i = 0; i < s; ++i)
                    for (int j = 0; j < s; ++j) {
                        const double a = tab.A(i, j);
                        if (a != 0.0)
                            K.block(i * nd_, j * nd_, nd_, nd_) += (tau * a) * G2;
                    }
                inv_symbol_[jx + nx_ * jy] = K.inverse();
            }
        }
    }

    SpacePtr space_;
    int stages_;
    int nd_ = 0, nx_ = 0, ny_ = 0, ncells_ = 0;
    std::vector<Eigen::MatrixXcd> inv_symbol_;
    fftw_complex* buf_ = nullptr;
    fftw_plan plan_fwd_{};
    fftw_plan plan_bwd_{};
};

} // namespace gfdg
