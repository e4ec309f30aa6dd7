/// @file potential.hpp
/// Nonlinear potential Phi, the energy-quadratization kernel
/// H(w) = Phi'(w)/sqrt(Phi(w)+C0), the Swift-Hohenberg instantiation, and
/// manufactured time-dependent sources with known exact solutions.
#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "gfdg/field.hpp"

namespace gfdg {

/// A potential bounded from below, with stabilization constant C0 chosen so
/// that Phi(w) + C0 > 0 for every w the solver evaluates.
struct Potential {
    std::string name;
    std::function<double(double)> phi;
    std::function<double(double)> dphi;
    double C0 = 1e3;
    double a = 1.0;    // physical parameter of the operator L = -(Laplace + a)
    double epsilon = 0.0, g = 0.0;   // Swift-Hohenberg parameters, if any

    /// EQ kernel H(w) = Phi'(w)/sqrt(Phi(w)+C0). Throws when the radicand is
    /// not positive (C0 too small for the visited state).
    double H(double w) const
    {
        const double rad = phi(w) + C0;
        if (!(rad > 0.0))
            throw std::runtime_error("Potential '" + name + "': Phi(w)+C0 = " +
                                     std::to_string(rad) + " <= 0 at w = " +
                                     std::to_string(w) + " (C0 = " + std::to_string(C0) +
                                     ")");
        return dphi(w) / std::sqrt(rad);
    }

    double sqrt_shifted(double w) const
    {
        const double rad = phi(w) + C0;
        if (!(rad > 0.0))
            throw std::runtime_error("Potential '" + name + "': Phi(w)+C0 = " +
                                     std::to_string(rad) + " <= 0 at w = " +
                                     std::to_string(w) + " (C0 = " + std::to_string(C0) +
                                     ")");
        return std::sqrt(rad);
    }
};

/// Swift-Hohenberg potential Phi(u) = -(eps/2)u^2 - (g/3)u^3 + u^4/4 with
/// a = 1. C0 defaults to 1e3; it must exceed -min Phi.
inline Potential swift_hohenberg(double epsilon, double g, double C0 = 1e3)
{
    Potential p;
    p.name = "swift-hohenberg";
    p.epsilon = epsilon;
    p.g = g;
    p.C0 = C0;
    p.a = 1.0;
    p.phi = [epsilon, g](double u) {
        return -0.5 * epsilon * u * u - (g / 3.0) * u * u * u + 0.25 * u * u * u * u;
    };
    p.dphi = [epsilon, g](double u) { return -epsilon * u - g * u * u + u * u * u; };
    return p;
}

/// Zero potential with Phi = 0 (so H = 0); useful for linear test problems.
inline Potential zero_potential(double C0 = 1.0, double a = 1.0)
{
    Potential p;
    p.name = "zero";
    p.C0 = C0;
    p.a = a;
    p.phi = [](double) { return 0.0; };
    p.dphi = [](double) { return 0.0; };
    return p;
}

struct ShMinima {
    double u_minus = 0.0;
    double u_plus = 0.0;
    /// Magnitude of the potential lower bound: min Phi = -b.
    double b = 0.0;
};

/// Stationary points u± = (g ± sqrt(g^2+4 eps))/2 of the Swift-Hohenberg
/// double well and the bound b = -min{Phi(u±)}.
inline ShMinima sh_minima(double epsilon, double g)
{
    if (!(epsilon > 0.0) || g < 0.0)
        throw std::invalid_argument("sh_minima: requires epsilon > 0 and g >= 0");
    const double root = std::sqrt(g * g + 4.0 * epsilon);
    ShMinima m;
    m.u_plus = 0.5 * (g + root);
    m.u_minus = 0.5 * (g - root);
    const Potential p = swift_hohenberg(epsilon, g, 0.0);
    m.b = -std::min(p.phi(m.u_plus), p.phi(m.u_minus));
    return m;
}

/// A manufactured problem: exact solution u(x,y,t) = decay(t) * shape(x,y)
/// together with the source f = -eps*v - g*v^2 + v^3 (v = exact) that makes
/// u solve the Swift-Hohenberg equation with parameters (eps, g).
struct ManufacturedSolution {
    std::string name;
    double wavenumber = 0.5;   // mode sin(w x) sin(w y)
    double decay_rate = 0.25;  // u = exp(-decay_rate * t) * shape

    double exact(double x, double y, double t) const
    {
        return std::exp(-decay_rate * t) * std::sin(wavenumber * x) *
               std::sin(wavenumber * y);
    }

    ScalarFn exact_at(double t) const
    {
        return [*this, t](double x, double y) { return exact(x, y, t); };
    }

    /// Source value f(x,y,t) for Swift-Hohenberg parameters (eps, g).
    double source(double epsilon, double g, double x, double y, double t) const
    {
        const double v = exact(x, y, t);
        return -epsilon * v - g * v * v + v * v * v;
    }
};

/// Named manufactured solutions:
///   sine-half     u = e^{-t/4}     sin(x/2) sin(y/2)   (period 4*pi)
///   sine-quarter  u = e^{-49t/64}  sin(x/4) sin(y/4)   (period 8*pi)
/// Both satisfy u_t = -Lap^2 u - 2 Lap u + (eps-1) u + g u^2 - u^3 + f with
/// the source above.
inline ManufacturedSolution manufactured_solution(const std::string& name)
{
    if (name == "sine-half") return {name, 0.5, 0.25};
    if (name == "sine-quarter") return {name, 0.25, 49.0 / 64.0};
    throw std::invalid_argument("manufactured_solution: unknown name '" + name + "'");
}

/// Time-dependent source field callable as f(x, y, t).
using SourceFn = std::function<double(double, double, double)>;

inline SourceFn manufactured_source(double epsilon, double g, const std::string& name)
{
    const ManufacturedSolution ms = manufactured_solution(name);
    return [ms, epsilon, g](double x, double y, double t) {
        return ms.source(epsilon, g, x, y, t);
    };
}

/// Pointwise application of the EQ kernel to quadrature-node data.
inline QuadField apply_H(const Potential& pot, const QuadField& w)
{
    QuadField out(w.space_ptr());
    for (Eigen::Index i = 0; i < w.values().size(); ++i)
        out.values()[i] = pot.H(w.values()[i]);
    return out;
}

/// Pointwise sqrt(Phi(w)+C0), the auxiliary-variable initialization.
inline QuadField apply_sqrt_shifted(const Potential& pot, const QuadField& w)
{
    QuadField out(w.space_ptr());
    for (Eigen::Index i = 0; i < w.values().size(); ++i)
        out.values()[i] = pot.sqrt_shifted(w.values()[i]);
    return out;
}

} // namespace gfdg
