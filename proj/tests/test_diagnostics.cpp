#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gfdg/diagnostics.hpp"

using namespace gfdg;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST(Energy, ZeroFieldsGiveZero)
{
    auto sp = make_space(build_mesh_2d(0.0, 1.0, 4, 0.0, 1.0, 4, BcKind::periodic), 1);
    EXPECT_EQ(discrete_energy(DGField(sp), DGField(sp)), 0.0);
}

// For u = 0: q = L_h 0 = 0 and U = sqrt(C0), so E = C0 |Omega| and the
// shifted energy vanishes.
TEST(Energy, FlatStateEnergyIsStabilizationTimesVolume)
{
    auto sp = make_space(build_mesh_2d(-2 * kPi, 2 * kPi, 8, -2 * kPi, 2 * kPi, 8,
                                       BcKind::periodic),
                         2);
    const double C0 = 1000.0;
    const DGField q(sp);   // zero
    const DGField U_h = project(sp, [&](double, double) { return std::sqrt(C0); });
    const double measure = sp->mesh().domain_measure();
    EXPECT_NEAR(discrete_energy(q, U_h), C0 * measure, 1e-9 * C0 * measure);
}

TEST(Energy, RejectsMismatchedSpaces)
{
    auto a = make_space(build_mesh_1d(0.0, 1.0, 4, BcKind::periodic), 1);
    auto b = make_space(build_mesh_1d(0.0, 1.0, 4, BcKind::periodic), 1);
    EXPECT_THROW(discrete_energy(DGField(a), DGField(b)), std::invalid_argument);
}

TEST(Eoc, HalvedErrorsGiveOrderTwo)
{
    const double e = 3.7e-3;
    const EocTable t = eoc("N", {8, 16}, {4 * e, e}, {4 * e, e});
    ASSERT_TRUE(t.rows[1].order_l2.has_value());
    EXPECT_NEAR(*t.rows[1].order_l2, 2.0, 1e-12);
    EXPECT_FALSE(t.rows[0].order_l2.has_value());
}

// Reference error pairs with known two-decimal orders.
TEST(Eoc, ReferenceErrorPairs)
{
    const EocTable a = eoc("N", {16, 32}, {9.73764e-02, 2.39651e-02}, {1.0, 1.0});
    EXPECT_NEAR(std::round(*a.rows[1].order_l2 * 100) / 100, 2.02, 1e-9);
    const EocTable b = eoc("tau", {0.25, 0.125}, {2.10020e-03, 1.38306e-04}, {1.0, 1.0});
    EXPECT_NEAR(std::round(*b.rows[1].order_l2 * 100) / 100, 3.92, 1e-9);
}

TEST(Eoc, InvariantUnderUniformScaling)
{
    const std::vector<double> errs{1.0e-1, 2.7e-2, 6.4e-3};
    std::vector<double> scaled;
    for (double e : errs) scaled.push_back(17.3 * e);
    const EocTable a = eoc("N", {8, 16, 32}, errs, errs);
    const EocTable b = eoc("N", {8, 16, 32}, scaled, scaled);
    for (int i = 1; i < 3; ++i)
        EXPECT_NEAR(*a.rows[i].order_l2, *b.rows[i].order_l2, 1e-13);
}

TEST(Eoc, ZeroErrorLeavesOrderBlank)
{
    const EocTable t = eoc("N", {8, 16}, {1e-3, 0.0}, {0.0, 1e-4});
    EXPECT_FALSE(t.rows[1].order_l2.has_value());
    EXPECT_FALSE(t.rows[1].order_linf.has_value());
}

TEST(Eoc, RejectsBadInput)
{
    EXPECT_THROW(eoc("N", {8, 16}, {1e-3}, {1e-3, 1e-4}), std::invalid_argument);
}

TEST(EnergyCsv, SchemaAndRoundTrip)
{
    std::ostringstream os;
    write_energy_csv_header(os);
    EnergyRecord r;
    r.step = 3;
    r.time = 0.3;
    r.energy = 1.5e7;
    r.energy_shifted = -12.25;
    r.dissipation = 0.5;
    r.dissipation_bound = 0.25;
    r.pc_iterations = 2;
    write_energy_csv_row(os, r);
    std::istringstream is(os.str());
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    EXPECT_EQ(header, "n,t,E,E_shifted,dissipation,bound,pc_iters");
    EXPECT_EQ(row.substr(0, 2), "3,");
    EXPECT_NE(row.find("-12.25"), std::string::npos);
}

TEST(Eoc, PrintsBlankOrderForFirstRow)
{
    std::ostringstream os;
    print_eoc_table(eoc("N", {8, 16}, {1e-1, 2.5e-2}, {1e-2, 2.5e-3}), os);
    EXPECT_NE(os.str().find("2.00"), std::string::npos);
    EXPECT_NE(os.str().find("L2 error"), std::string::npos);
}
