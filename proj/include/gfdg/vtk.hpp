/// @file vtk.hpp
/// Field snapshots: VTK legacy rectilinear-grid ASCII and a bit-exact CSV
/// grid alternative. The DG field is sampled on a uniform plot grid with a
/// configurable number of cell-interior samples per cell and axis.
#pragma once

#include <fstream>
#include <iomanip>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfdg/field.hpp"

namespace gfdg {

struct PlotGrid {
    std::vector<double> x, y;            // sample coordinates per axis
    std::vector<double> values;          // row-major: ix + nx*iy
};

/// Sample u at `samples` equispaced interior points per cell per axis
/// (offsets (j+1/2)/samples, avoiding the discontinuous cell interfaces).
inline PlotGrid sample_plot_grid(const DGField& u, int samples = 4)
{
    if (samples < 1) throw std::invalid_argument("sample_plot_grid: samples >= 1");
    const DGSpace& sp = u.space();
    const Mesh& mesh = sp.mesh();
    const int dim = mesh.dim;
    const int k = sp.degree();

    PlotGrid grid;
    for (int d = 0; d < 2; ++d) {
        auto& axis = (d == 0) ? grid.x : grid.y;
        if (d >= dim) {
            axis = {0.0};
            continue;
        }
        for (int c = 0; c < mesh.counts[d]; ++c)
            for (int j = 0; j < samples; ++j)
                axis.push_back(mesh.bounds[d].lo +
                               (c + (j + 0.5) / samples) * mesh.spacing[d]);
    }

    // 1D basis values at the sample offsets, per axis.
    const int kp1 = k + 1;
    auto basis_1d = [&](int d) {
        Eigen::MatrixXd B(samples, kp1);
        const double h = mesh.spacing[d];
        for (int j = 0; j < samples; ++j) {
            const double xi = 2.0 * ((j + 0.5) / samples) - 1.0;
            for (int n = 0; n < kp1; ++n) {
                double v, dv;
                legendre_eval(n, xi, v, dv);
                B(j, n) = std::sqrt((2.0 * n + 1.0) / h) * v;
            }
        }
        return B;
    };
    const Eigen::MatrixXd Bx = basis_1d(0);
    const Eigen::MatrixXd By = (dim == 2) ? basis_1d(1) : Eigen::MatrixXd::Ones(1, 1);

    const int nx = static_cast<int>(grid.x.size());
    const int ny = static_cast<int>(grid.y.size());
    grid.values.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    const auto C = u.as_matrix();
    for (int cell = 0; cell < mesh.cell_count(); ++cell) {
        const int cx = mesh.cell_ix(cell);
        const int cy = mesh.cell_iy(cell);
        for (int jy = 0; jy < By.rows(); ++jy)
            for (int jx = 0; jx < samples; ++jx) {
                double v = 0.0;
                for (int a = 0; a < sp.dofs_per_cell(); ++a) {
                    const int ax = a % kp1;
                    const int ay = a / kp1;
                    v += C(a, cell) * Bx(jx, ax) * By(jy, ay);
                }
                const int gx = cx * samples + jx;
                const int gy = (dim == 2) ? cy * static_cast<int>(By.rows()) + jy : 0;
                grid.values[gx + static_cast<std::size_t>(nx) * gy] = v;
            }
    }
    return grid;
}

/// VTK legacy ASCII rectilinear grid with one point-data scalar field.
inline void write_vtk_rectilinear(const std::string& path, const PlotGrid& grid,
                                  const std::string& field_name = "u")
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_vtk_rectilinear: cannot open " + path);
    const int nx = static_cast<int>(grid.x.size());
    const int ny = static_cast<int>(grid.y.size());
    os << "# vtk DataFile Version 2.0\n";
    os << field_name << " snapshot\n";
    os << "ASCII\n";
    os << "DATASET RECTILINEAR_GRID\n";
    os << "DIMENSIONS " << nx << ' ' << ny << " 1\n";
    os << std::setprecision(12);
    os << "X_COORDINATES " << nx << " double\n";
    for (int i = 0; i < nx; ++i) os << grid.x[i] << (i + 1 < nx ? ' ' : '\n');
    os << "Y_COORDINATES " << ny << " double\n";
    for (int i = 0; i < ny; ++i) os << grid.y[i] << (i + 1 < ny ? ' ' : '\n');
    os << "Z_COORDINATES 1 double\n0\n";
    os << "POINT_DATA " << static_cast<std::size_t>(nx) * ny << '\n';
    os << "SCALARS " << field_name << " double 1\n";
    os << "LOOKUP_TABLE default\n";
    for (double v : grid.values) os << v << '\n';
}

/// CSV alternative (x,y,value rows; 17 significant digits, bit-exact).
inline void write_csv_grid(const std::string& path, const PlotGrid& grid)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv_grid: cannot open " + path);
    os << "x,y,u\n";
    os << std::setprecision(17);
    const int nx = static_cast<int>(grid.x.size());
    const int ny = static_cast<int>(grid.y.size());
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            os << grid.x[ix] << ',' << grid.y[iy] << ','
               << grid.values[ix + static_cast<std::size_t>(nx) * iy] << '\n';
}

} // namespace gfdg
