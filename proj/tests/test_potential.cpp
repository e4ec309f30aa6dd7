#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gfdg/potential.hpp"

using namespace gfdg;

TEST(SwiftHohenberg, KernelVanishesAtCriticalPoints)
{
    const Potential p = swift_hohenberg(0.025, 0.0);
    EXPECT_EQ(p.H(0.0), 0.0);  // Phi'(0) = 0, Phi(0) = 0

    for (double g : {0.0, 0.5, 1.0}) {
        const Potential pg = swift_hohenberg(0.1, g);
        const ShMinima m = sh_minima(0.1, g);
        EXPECT_NEAR(pg.H(m.u_plus), 0.0, 1e-12);
        EXPECT_NEAR(pg.H(m.u_minus), 0.0, 1e-12);
    }
}

TEST(SwiftHohenberg, KernelDirectArithmetic)
{
    const Potential p = swift_hohenberg(0.025, 0.0, 1000.0);
    // Phi'(1) = -0.025 + 1 = 0.975, Phi(1) = -0.0125 + 0.25 = 0.2375.
    EXPECT_NEAR(p.dphi(1.0), 0.975, 1e-15);
    EXPECT_NEAR(p.phi(1.0), 0.2375, 1e-15);
    EXPECT_NEAR(p.H(1.0), 0.975 / std::sqrt(1000.2375), 1e-15);
}

TEST(SwiftHohenberg, KernelRejectsNonpositiveRadicand)
{
    const Potential p = swift_hohenberg(0.025, 0.0, 0.0);
    // Phi(u_+) < 0 and C0 = 0, so the radicand is negative there.
    const ShMinima m = sh_minima(0.025, 0.0);
    EXPECT_THROW(p.H(m.u_plus), std::runtime_error);
}

TEST(ShMinima, SymmetricWell)
{
    const ShMinima m = sh_minima(0.025, 0.0);
    EXPECT_NEAR(m.u_plus, std::sqrt(0.025), 1e-14);
    EXPECT_NEAR(m.u_minus, -std::sqrt(0.025), 1e-14);
    // For g = 0 the bound collapses to eps^2/4.
    EXPECT_NEAR(m.b, 1.5625e-4, 1e-18);
}

TEST(ShMinima, AsymmetricWellAgainstRootFinding)
{
    const ShMinima m = sh_minima(0.1, 1.0);
    EXPECT_NEAR(m.u_plus, 1.091608, 1e-6);
    EXPECT_NEAR(m.u_minus, -0.091608, 1e-6);
    // Oracle: the returned points are roots of Phi' (bisection-free check).
    const Potential p = swift_hohenberg(0.1, 1.0);
    EXPECT_NEAR(p.dphi(m.u_plus), 0.0, 1e-12);
    EXPECT_NEAR(p.dphi(m.u_minus), 0.0, 1e-12);
    // And they are the local minima: Phi'' > 0 there.
    auto ddphi = [](double eps, double g, double u) { return -eps - 2 * g * u + 3 * u * u; };
    EXPECT_GT(ddphi(0.1, 1.0, m.u_plus), 0.0);
    EXPECT_GT(ddphi(0.1, 1.0, m.u_minus), 0.0);
}

TEST(ShMinima, ClosedFormBoundMatchesDirectEvaluation)
{
    // min Phi(u_pm) = -(1/12) (g v (g^2+4 eps) + eps (g^2+3 eps)) minimized
    // over v = u_pm; cross-check the direct Phi evaluation used by sh_minima.
    for (double eps : {0.025, 0.1, 0.3}) {
        for (double g : {0.0, 0.5, 1.0}) {
            const ShMinima m = sh_minima(eps, g);
            auto closed = [&](double v) {
                return -(g * v * (g * g + 4 * eps) + eps * (g * g + 3 * eps)) / 12.0;
            };
            const double expected = -std::min(closed(m.u_plus), closed(m.u_minus));
            EXPECT_NEAR(m.b, expected, 1e-14) << "eps=" << eps << " g=" << g;
        }
    }
}

TEST(ShMinima, DefaultStabilizationAdmissibleForExperiments)
{
    // All shipped experiment parameter sets have b < 1, so C0 = 1e3 works.
    for (auto [eps, g] : {std::pair{0.025, 0.0}, {0.3, 0.0}, {0.1, 1.0}}) {
        EXPECT_LT(sh_minima(eps, g).b, 1.0);
    }
}

TEST(Kernel, IdentityHTimesSqrtEqualsDphi)
{
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    const Potential p = swift_hohenberg(0.1, 1.0, 1000.0);
    for (int i = 0; i < 200; ++i) {
        const double w = dist(gen);
        EXPECT_NEAR(p.H(w) * std::sqrt(p.phi(w) + p.C0), p.dphi(w),
                    1e-12 * std::max(1.0, std::abs(p.dphi(w))));
    }
}

// d/dw [2 sqrt(Phi(w)+C0)] = H(w): the identity behind the pointwise update
// of the auxiliary variable. Checked against centered differences.
TEST(Kernel, DerivativeOfTwiceSqrtShifted)
{
    const Potential p = swift_hohenberg(0.025, 0.5, 1000.0);
    const double dw = 1e-6;
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
        const double w = dist(gen);
        const double fd =
            (2 * p.sqrt_shifted(w + dw) - 2 * p.sqrt_shifted(w - dw)) / (2 * dw);
        EXPECT_NEAR(fd, p.H(w), 1e-6 * std::max(1.0, std::abs(p.H(w))));
    }
}

TEST(Manufactured, PlugInValues)
{
    const double kPi = 3.14159265358979323846;
    const ManufacturedSolution ms = manufactured_solution("sine-half");
    // At t=0, x=y=pi: v = sin(pi/2)^2 = 1, so f = -eps - g + 1.
    const double eps = 0.025;
    EXPECT_NEAR(ms.source(eps, 0.0, kPi, kPi, 0.0), 1.0 - eps, 1e-14);
    // f = 0 where v = 0.
    EXPECT_NEAR(ms.source(0.3, 1.0, 0.0, 0.7, 2.0), 0.0, 1e-14);
    EXPECT_THROW(manufactured_solution("sine-eighth"), std::invalid_argument);
}

// Symbolic residual oracle: with u = e^{-t/4} sin(x/2) sin(y/2) all
// derivatives are hand-derived here independently of the library:
//   u_t = -u/4,  Lap u = -u/2,  Lap^2 u = u/4.
// The equation u_t = -Lap^2 u - 2 Lap u + (eps-1) u + g u^2 - u^3 + f must
// hold pointwise.
TEST(Manufactured, SourceConsistentWithExactSolution)
{
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> X(-6.0, 6.0);
    std::uniform_real_distribution<double> T(0.0, 2.0);
    const double eps = 0.025, g = 0.75;
    const ManufacturedSolution ms = manufactured_solution("sine-half");
    for (int i = 0; i < 100; ++i) {
        const double x = X(gen), y = X(gen), t = T(gen);
        const double u = std::exp(-t / 4) * std::sin(x / 2) * std::sin(y / 2);
        const double ut = -0.25 * u;
        const double lap = -0.5 * u;
        const double bilap = 0.25 * u;
        const double f = ms.source(eps, g, x, y, t);
        const double residual =
            ut - (-bilap - 2 * lap + (eps - 1) * u + g * u * u - u * u * u + f);
        EXPECT_NEAR(residual, 0.0, 1e-10);
    }
}

// Same oracle for the slower mode: u = e^{-49t/64} sin(x/4) sin(y/4),
// u_t = -(49/64) u, Lap u = -u/8, Lap^2 u = u/64.
TEST(Manufactured, SecondModeSourceConsistent)
{
    std::mt19937_64 gen(29);
    std::uniform_real_distribution<double> X(-12.0, 12.0);
    std::uniform_real_distribution<double> T(0.0, 2.0);
    const double eps = 0.025, g = 0.0;
    const ManufacturedSolution ms = manufactured_solution("sine-quarter");
    for (int i = 0; i < 100; ++i) {
        const double x = X(gen), y = X(gen), t = T(gen);
        const double u = std::exp(-49 * t / 64) * std::sin(x / 4) * std::sin(y / 4);
        const double ut = -(49.0 / 64.0) * u;
        const double lap = -u / 8;
        const double bilap = u / 64;
        const double f = ms.source(eps, g, x, y, t);
        const double residual =
            ut - (-bilap - 2 * lap + (eps - 1) * u + g * u * u - u * u * u + f);
        EXPECT_NEAR(residual, 0.0, 1e-10);
    }
}
