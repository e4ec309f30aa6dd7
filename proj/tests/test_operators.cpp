#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gfdg/operators.hpp"

using namespace gfdg;

namespace {
const double kPi = 3.14159265358979323846;

SpacePtr periodic_square(int n, int k)
{
    return make_space(build_mesh_2d(-2 * kPi, 2 * kPi, n, -2 * kPi, 2 * kPi, n,
                                    BcKind::periodic),
                      k);
}
} // namespace

TEST(GForm, ConstantsSeeOnlyTheMassTerm)
{
    auto sp = periodic_square(4, 2);
    const GOperator G(sp, 1.0);
    const DGField one = project(sp, [](double, double) { return 1.0; });
    // G(1,1) = -a |Omega| = -16 pi^2.
    EXPECT_NEAR(G(one, one), -16 * kPi * kPi, 1e-9);
}

TEST(GForm, SymmetricForAllDegreesAndBcs)
{
    for (BcKind bc : {BcKind::periodic, BcKind::natural}) {
        for (int k = 0; k <= 3; ++k) {
            auto sp = make_space(build_mesh_2d(0.0, 2.0, 3, 0.0, 1.0, 4, bc), k);
            const GOperator G(sp, 0.7);
            EXPECT_LE(symmetry_defect(G), 1e-12) << "k=" << k;
        }
        // 1D as well.
        auto sp1 = make_space(build_mesh_1d(0.0, 1.0, 6, bc), 2);
        EXPECT_LE(symmetry_defect(GOperator(sp1, 1.3)), 1e-12);
    }
}

TEST(GForm, JumpFreeInputsReduceToVolumeIntegral)
{
    // For fields continuous across faces (here: piecewise constants), the
    // face terms vanish and G(u,v) = -a (u,v).
    auto sp = make_space(build_mesh_2d(0.0, 1.0, 3, 0.0, 1.0, 3, BcKind::periodic), 2);
    const double a = 2.5;
    const GOperator G(sp, a);
    const DGField u = project(sp, [](double, double) { return 1.7; });
    const DGField v = project(sp, [](double, double) { return -0.4; });
    EXPECT_NEAR(G(u, v), -a * u.coeff().dot(v.coeff()), 1e-10);
}

// Continuous eigenmode oracle: L = -(Lap + a) has eigenvalue -1/2 on
// sin(x/2)sin(y/2) when a = 1, so the Rayleigh quotient of G converges to
// -1/2 and L_h u approaches -u/2.
TEST(GForm, RayleighQuotientConvergesToEigenvalue)
{
    auto f = [](double x, double y) { return std::sin(x / 2) * std::sin(y / 2); };
    std::vector<double> defect;
    for (int n : {8, 16, 32}) {
        auto sp = periodic_square(n, 1);
        const GOperator G(sp, 1.0);
        const DGField u = project(sp, f);
        const double rq = G(u, u) / u.coeff().squaredNorm();
        defect.push_back(std::abs(rq + 0.5));
    }
    EXPECT_LT(defect[2], defect[1]);
    EXPECT_LT(defect[1], defect[0]);
    EXPECT_LT(defect[2], 0.01);
}

TEST(Lh, ConstantsAndLinearity)
{
    auto sp = periodic_square(4, 2);
    const GOperator G(sp, 1.0);
    const DGField one = project(sp, [](double, double) { return 1.0; });
    const DGField L1 = G.apply_Lh(one);
    // L_h 1 = -a * 1 = -1.
    EXPECT_LT((L1.coeff() + one.coeff()).cwiseAbs().maxCoeff(), 1e-11);

    const DGField u = project(sp, [](double x, double y) { return std::sin(x / 2) * y; });
    const DGField v = project(sp, [](double x, double y) { return std::cos(y / 2) + x; });
    const double al = 1.3, be = -0.7;
    DGField lin = G.apply_Lh(al * u + be * v);
    DGField sum = al * G.apply_Lh(u) + be * G.apply_Lh(v);
    EXPECT_LT((lin.coeff() - sum.coeff()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Lh, EigenmodeResidualDecays)
{
    auto f = [](double x, double y) { return std::sin(x / 2) * std::sin(y / 2); };
    std::vector<double> res;
    for (int n : {8, 16, 32}) {
        auto sp = periodic_square(n, 1);
        const GOperator G(sp, 1.0);
        const DGField u = project(sp, f);
        DGField r = G.apply_Lh(u) + 0.5 * u;
        res.push_back(r.l2_norm() / u.l2_norm());
    }
    EXPECT_LT(res[1], res[0]);
    EXPECT_LT(res[2], res[1]);
}

TEST(GOperator, CoordinateDumpRoundTrips)
{
    auto sp = make_space(build_mesh_1d(0.0, 1.0, 3, BcKind::periodic), 1);
    const GOperator G(sp, 1.0);
    std::ostringstream os;
    G.dump_coordinate(os);
    std::istringstream is(os.str());
    int r, c;
    double v;
    double sum = 0.0;
    int count = 0;
    while (is >> r >> c >> v) {
        EXPECT_NEAR(v, G.matrix().coeff(r, c), 1e-15);
        sum += v;
        ++count;
    }
    EXPECT_EQ(count, G.matrix().nonZeros());
    (void)sum;
}
