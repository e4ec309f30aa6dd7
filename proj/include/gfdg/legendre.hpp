/// @file legendre.hpp
/// Legendre polynomials and Gauss-Legendre quadrature on [-1,1].
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gfdg {

/// Value and first derivative of the (unnormalized) Legendre polynomial P_n.
/// Uses the three-term recurrence for values and
/// P'_{n+1} = P'_{n-1} + (2n+1) P_n for derivatives, which stays finite
/// at the endpoints (needed for face traces).
inline void legendre_eval(int n, double x, double& value, double& deriv)
{
    double p0 = 1.0, d0 = 0.0;         // P_0, P_0'
    if (n == 0) { value = p0; deriv = d0; return; }
    double p1 = x, d1 = 1.0;           // P_1, P_1'
    for (int j = 1; j < n; ++j) {
        const double p2 = ((2 * j + 1) * x * p1 - j * p0) / (j + 1);
        const double d2 = d0 + (2 * j + 1) * p1;
        p0 = p1; d0 = d1;
        p1 = p2; d1 = d2;
    }
    value = p1;
    deriv = d1;
}

inline double legendre_value(int n, double x)
{
    double v, d;
    legendre_eval(n, x, v, d);
    return v;
}

/// One-dimensional quadrature rule on the reference interval [-1,1].
struct QuadRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
};

/// m-point Gauss-Legendre rule, exact for polynomials of degree <= 2m-1.
/// Nodes are the roots of P_m, found by Newton iteration from the
/// Chebyshev-like initial guess.
inline QuadRule1D gauss_legendre(int m)
{
    if (m < 1)
        throw std::invalid_argument("gauss_legendre: need at least one point");
    QuadRule1D rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double v = 0.0, d = 1.0;
        for (int it = 0; it < 100; ++it) {
            legendre_eval(m, x, v, d);
            const double dx = v / d;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre_eval(m, x, v, d);
        // Symmetrize: nodes come out ordered descending; store ascending.
        rule.nodes[m - 1 - i] = x;
        rule.weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * d * d);
    }
    // Enforce exact symmetry of the rule to cut roundoff in the tables.
    for (int i = 0; i < m / 2; ++i) {
        const int j = m - 1 - i;
        const double a = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        rule.nodes[i] = -a;
        rule.nodes[j] = a;
        const double w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.weights[i] = rule.weights[j] = w;
    }
    if (m % 2 == 1) rule.nodes[m / 2] = 0.0;
    return rule;
}

} // namespace gfdg
