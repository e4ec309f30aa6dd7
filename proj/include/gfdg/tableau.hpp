/// @file tableau.hpp
/// Butcher tableaux and the algebraic-stability certificate
/// (b_i >= 0 and M_ij = b_i a_ij + b_j a_ji - b_i b_j positive semi-definite).
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace gfdg {

struct ButcherTableau {
    std::string name;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;

    int stages() const { return static_cast<int>(b.size()); }

    bool lower_triangular(double tol = 0.0) const
    {
        for (int i = 0; i < stages(); ++i)
            for (int j = i + 1; j < stages(); ++j)
                if (std::abs(A(i, j)) > tol) return false;
        return true;
    }

    /// Row-sum and weight-sum consistency: c_i = sum_j a_ij, sum_i b_i = 1.
    double consistency_defect() const
    {
        double d = std::abs(b.sum() - 1.0);
        for (int i = 0; i < stages(); ++i)
            d = std::max(d, std::abs(A.row(i).sum() - c[i]));
        return d;
    }
};

/// The symmetric stability matrix M_ij = b_i a_ij + b_j a_ji - b_i b_j.
inline Eigen::MatrixXd stability_matrix(const ButcherTableau& t)
{
    const int s = t.stages();
    Eigen::MatrixXd M(s, s);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            M(i, j) = t.b[i] * t.A(i, j) + t.b[j] * t.A(j, i) - t.b[i] * t.b[j];
    return M;
}

struct StabilityVerdict {
    bool stable = false;
    std::string reason;                 // empty when stable
    Eigen::VectorXd eigenvalues;        // of M, ascending
};

/// Certify algebraic stability: all b_i >= 0 (to 1e-14) and M PSD
/// (eigenvalues >= -1e-12, absorbing roundoff in the exactly-zero cases).
inline StabilityVerdict certify_algebraically_stable(const ButcherTableau& t)
{
    StabilityVerdict v;
    const Eigen::MatrixXd M = stability_matrix(t);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
    v.eigenvalues = es.eigenvalues();
    for (int i = 0; i < t.stages(); ++i) {
        if (t.b[i] < -1e-14) {
            v.reason = "negative weight b_" + std::to_string(i + 1) + " = " +
                       std::to_string(t.b[i]);
            return v;
        }
    }
    if (v.eigenvalues.minCoeff() < -1e-12) {
        v.reason = "stability matrix not positive semi-definite (min eigenvalue " +
                   std::to_string(v.eigenvalues.minCoeff()) + ")";
        return v;
    }
    v.stable = true;
    return v;
}

/// Built-in implicit RK tableaux. Names:
///   qz2              Qin-Zhang two-stage DIRK, order 2
///   crouzeix3        Crouzeix two-stage DIRK, order 3
///   gl4              two-stage Gauss-Legendre, order 4
///   backward-euler   one stage, order 1
///   implicit-midpoint one stage, order 2
inline ButcherTableau builtin_tableau(const std::string& name)
{
    const double r3 = std::sqrt(3.0);
    ButcherTableau t;
    t.name = name;
    if (name == "qz2") {
        t.A = Eigen::MatrixXd{{0.25, 0.0}, {0.5, 0.25}};
        t.b = Eigen::VectorXd{{0.5, 0.5}};
        t.c = Eigen::VectorXd{{0.25, 0.75}};
    } else if (name == "crouzeix3") {
        const double g = 0.5 + r3 / 6.0;
        t.A = Eigen::MatrixXd{{g, 0.0}, {-r3 / 3.0, g}};
        t.b = Eigen::VectorXd{{0.5, 0.5}};
        t.c = Eigen::VectorXd{{g, 0.5 - r3 / 6.0}};
    } else if (name == "gl4") {
        t.A = Eigen::MatrixXd{{0.25, 0.25 - r3 / 6.0}, {0.25 + r3 / 6.0, 0.25}};
        t.b = Eigen::VectorXd{{0.5, 0.5}};
        t.c = Eigen::VectorXd{{0.5 - r3 / 6.0, 0.5 + r3 / 6.0}};
    } else if (name == "backward-euler") {
        t.A = Eigen::MatrixXd{{1.0}};
        t.b = Eigen::VectorXd{{1.0}};
        t.c = Eigen::VectorXd{{1.0}};
    } else if (name == "implicit-midpoint") {
        t.A = Eigen::MatrixXd{{0.5}};
        t.b = Eigen::VectorXd{{1.0}};
        t.c = Eigen::VectorXd{{0.5}};
    } else {
        throw std::invalid_argument("builtin_tableau: unknown tableau '" + name + "'");
    }
    return t;
}

/// Parse a tableau from coefficient text of the form
///   stages 2
///   A 0.25 0
///   A 0.5 0.25
///   b 0.5 0.5
///   c 0.25 0.75
/// (one A line per stage row; blank lines and # comments allowed). Errors
/// carry the offending line number.
inline ButcherTableau parse_tableau_text(std::istream& is)
{
    ButcherTableau t;
    t.name = "custom";
    int s = 0, a_rows = 0, lineno = 0;
    bool have_b = false, have_c = false;
    std::string line;
    auto fail = [&](const std::string& msg) {
        throw std::invalid_argument("tableau line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "stages") {
            if (!(ls >> s) || s < 1) fail("invalid stage count");
            t.A = Eigen::MatrixXd::Zero(s, s);
            t.b = Eigen::VectorXd::Zero(s);
            t.c = Eigen::VectorXd::Zero(s);
        } else if (tag == "A" || tag == "b" || tag == "c") {
            if (s == 0) fail("'stages' must come first");
            Eigen::VectorXd row(s);
            for (int j = 0; j < s; ++j)
                if (!(ls >> row[j])) fail("expected " + std::to_string(s) + " numbers");
            double extra;
            if (ls >> extra) fail("too many numbers");
            if (tag == "A") {
                if (a_rows >= s) fail("too many A rows");
                t.A.row(a_rows++) = row;
            } else if (tag == "b") {
                t.b = row;
                have_b = true;
            } else {
                t.c = row;
                have_c = true;
            }
        } else {
            fail("unknown tag '" + tag + "'");
        }
    }
    ++lineno;
    if (s == 0) fail("missing 'stages' line");
    if (a_rows != s) fail("expected " + std::to_string(s) + " A rows, got " +
                          std::to_string(a_rows));
    if (!have_b || !have_c) fail("missing b or c line");
    return t;
}

/// Print in the standard Butcher-array layout (c | A over b^T).
inline void print_butcher_array(const ButcherTableau& t, std::ostream& os)
{
    os.precision(15);
    for (int i = 0; i < t.stages(); ++i) {
        os << t.c[i] << " |";
        for (int j = 0; j < t.stages(); ++j) os << ' ' << t.A(i, j);
        os << '\n';
    }
    os << "----\n  |";
    for (int i = 0; i < t.stages(); ++i) os << ' ' << t.b[i];
    os << '\n';
}

} // namespace gfdg
