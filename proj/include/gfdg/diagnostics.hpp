/// @file diagnostics.hpp
/// Discrete energy records, error norms and experimental orders of
/// convergence.
#pragma once

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gfdg/field.hpp"

namespace gfdg {

/// E = 1/2 ||q_h||^2 + ||U_h||^2 together with the C0-shifted value that
/// tracks the original free energy.
struct EnergyRecord {
    int step = 0;
    double time = 0.0;
    double energy = 0.0;
    double energy_shifted = 0.0;
    double dissipation = 0.0;         // E^{n-1} - E^n (0 at the initial record)
    double dissipation_bound = 0.0;   // tau sum_i b_i ||xi_i||^2
    int pc_iterations = 0;
};

inline double discrete_energy(const DGField& q_h, const DGField& U_h)
{
    if (q_h.space_ptr() != U_h.space_ptr())
        throw std::invalid_argument("discrete_energy: fields on different spaces");
    return 0.5 * q_h.coeff().squaredNorm() + U_h.coeff().squaredNorm();
}

inline void write_energy_csv_header(std::ostream& os)
{
    os << "n,t,E,E_shifted,dissipation,bound,pc_iters\n";
}

inline void write_energy_csv_row(std::ostream& os, const EnergyRecord& r)
{
    os << r.step << ',' << std::setprecision(17) << r.time << ',' << r.energy << ','
       << r.energy_shifted << ',' << r.dissipation << ',' << r.dissipation_bound << ','
       << r.pc_iterations << '\n';
}

/// One resolution level of a convergence study.
struct EocRow {
    double resolution = 0.0;   // N (cells per axis) or tau
    double err_l2 = 0.0;
    double err_linf = 0.0;
    std::optional<double> order_l2;
    std::optional<double> order_linf;
};

struct EocTable {
    std::string resolution_label;   // "N" or "tau"
    std::vector<EocRow> rows;
};

/// Orders from successive halving: order = log2(e_coarse / e_fine). Rows are
/// expected coarse to fine with factor-2 refinement. Zero errors leave the
/// order blank.
inline EocTable eoc(const std::string& label, const std::vector<double>& resolutions,
                    const std::vector<double>& err_l2, const std::vector<double>& err_linf)
{
    if (resolutions.size() != err_l2.size() || err_l2.size() != err_linf.size())
        throw std::invalid_argument("eoc: mismatched column lengths");
    if (resolutions.size() < 1) throw std::invalid_argument("eoc: empty study");
    EocTable tab;
    tab.resolution_label = label;
    for (std::size_t i = 0; i < resolutions.size(); ++i) {
        EocRow row;
        row.resolution = resolutions[i];
        row.err_l2 = err_l2[i];
        row.err_linf = err_linf[i];
        if (i > 0) {
            if (err_l2[i - 1] > 0.0 && err_l2[i] > 0.0)
                row.order_l2 = std::log2(err_l2[i - 1] / err_l2[i]);
            if (err_linf[i - 1] > 0.0 && err_linf[i] > 0.0)
                row.order_linf = std::log2(err_linf[i - 1] / err_linf[i]);
        }
        tab.rows.push_back(row);
    }
    return tab;
}

inline void print_eoc_table(const EocTable& tab, std::ostream& os)
{
    os << std::setw(12) << tab.resolution_label << std::setw(14) << "L2 error"
       << std::setw(8) << "order" << std::setw(14) << "Linf error" << std::setw(8)
       << "order" << '\n';
    for (const auto& r : tab.rows) {
        os << std::setw(12) << std::setprecision(6) << r.resolution;
        os << std::setw(14) << std::scientific << std::setprecision(5) << r.err_l2;
        if (r.order_l2)
            os << std::setw(8) << std::fixed << std::setprecision(2) << *r.order_l2;
        else
            os << std::setw(8) << "";
        os << std::setw(14) << std::scientific << std::setprecision(5) << r.err_linf;
        if (r.order_linf)
            os << std::setw(8) << std::fixed << std::setprecision(2) << *r.order_linf;
        else
            os << std::setw(8) << "";
        os << '\n';
        os.unsetf(std::ios_base::floatfield);
    }
}

} // namespace gfdg
