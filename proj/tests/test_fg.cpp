#include "pwamb/constructions.hpp"
#include "pwamb/error.hpp"
#include "pwamb/fg_solver.hpp"
#include "support/fixtures.hpp"

#include <gtest/gtest.h>

using namespace pwamb;
using namespace pwamb::testing;

TEST(FgExpand, FlatBaseHasZeroCoefficients) {
    MetricTensor flat = MetricTensor::from_components(base3(), {Expr(1), Expr(), Expr(), Expr(), Expr(1), Expr(),
                                                                Expr(), Expr(), Expr(1)});
    ExpansionResult r = fg_expand(flat, 3);
    ASSERT_EQ(r.phi.size(), 3u);
    for (const TensorField& f : r.phi) EXPECT_TRUE(f.is_zero());
    for (const TensorField& f : r.residuals) EXPECT_TRUE(f.is_zero());
}

TEST(FgExpand, E1TerminatesAfterFirstStep) {
    MetricTensor g0 = patterson_walker(e1_connection());
    ExpansionResult r = fg_expand(g0, 3);
    ASSERT_EQ(r.phi.size(), 3u);
    EXPECT_EQ(r.phi[0](0, 0), parse_expr("2*x1", base2()));
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            if (i + j > 0) EXPECT_TRUE(r.phi[0](i, j).is_zero());
    EXPECT_TRUE(r.phi[1].is_zero());
    EXPECT_TRUE(r.phi[2].is_zero());
    ASSERT_TRUE(r.obstruction.has_value());
    EXPECT_TRUE(r.obstruction->is_zero());
    EXPECT_EQ(assemble_ansatz(g0, r.phi, 3), ambient_pw(e1_connection()));
}

// Oracle: (1 + lambda rho)^2 = 1 + 2 lambda rho + lambda^2 rho^2 with lambda = 1/2.
TEST(FgExpand, SphereMatchesBinomialExpansion) {
    MetricTensor g0 = stereographic_sphere();
    ExpansionResult r = fg_expand(g0, 2);
    ASSERT_EQ(r.phi.size(), 2u);
    EXPECT_EQ(r.phi[0], g0.tensor() * Expr(1));
    EXPECT_EQ(r.phi[1], g0.tensor() * Expr(Rational(1, 4)));
    // m = 2: the trace-free part of phi^(1) and the trace of phi^(2) are not
    // fixed by the x-block equations.
    ASSERT_EQ(r.free_flags.size(), 2u);
    EXPECT_EQ(r.free_flags[0].order, 1u);
    EXPECT_EQ(r.free_flags[0].resolution, "trace_free_gauge");
    EXPECT_EQ(r.free_flags[1].order, 2u);
    EXPECT_NE(r.free_flags[1].resolution.find("rho_rho_equation"), std::string::npos);
}

TEST(FgExpand, AnsatzIsHomogeneous) {
    MetricTensor g0 = stereographic_sphere();
    ExpansionResult r = fg_expand(g0, 2);
    MetricTensor a = assemble_ansatz(g0, r.phi, 2);
    TensorField euler = TensorField::vector_field(a.chart(), {a.chart().coord(0), Expr(), Expr(), Expr()});
    EXPECT_EQ(lie_derivative(euler, a.tensor()), a.tensor() * Expr(2));
    EXPECT_EQ(a, einstein_ambient(g0, Rational(1, 2)));
}

TEST(Obstruction, VanishesForPwAndFlat) {
    EXPECT_TRUE(obstruction_residual(patterson_walker(e1_connection())).is_zero());
    EXPECT_TRUE(obstruction_residual(patterson_walker(flat_connection(base2()))).is_zero());
    MetricTensor odd = MetricTensor::from_components(base3(), {Expr(1), Expr(), Expr(), Expr(), Expr(1), Expr(),
                                                               Expr(), Expr(), Expr(1)});
    EXPECT_THROW(obstruction_residual(odd), ValidationError);
}

TEST(Obstruction, GenericFourMetricIsObstructed) {
    Chart c("M4", {"a", "b", "c", "d"});
    std::vector<Expr> g(16);
    g[0] = parse_expr("1 + b^2", c);
    g[5] = Expr(1);
    g[10] = Expr(1);
    g[15] = Expr(1);
    g[2] = g[8] = parse_expr("a", c);
    TensorField o = obstruction_residual(MetricTensor::from_components(c, g));
    EXPECT_FALSE(o.is_zero());
}

TEST(RicciReport, WitnessForPw) {
    RicciReport r = ricci_flat_report(patterson_walker(e1_connection()));
    EXPECT_FALSE(r.flat);
    bool witnessed = false;
    for (const auto& e : r.entries)
        if (!e.value.is_zero()) witnessed = witnessed || e.witness.has_value();
    EXPECT_TRUE(witnessed);
    EXPECT_TRUE(ricci_flat_report(ambient_pw(e1_connection())).flat);
    EXPECT_TRUE(ricci_flat_report(cone_pw(e1_connection())).flat);
}
