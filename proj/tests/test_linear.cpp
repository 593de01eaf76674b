#include "pwamb/chart.hpp"
#include "pwamb/error.hpp"
#include "pwamb/linalg.hpp"
#include "pwamb/linear_solve.hpp"

#include <gtest/gtest.h>

using namespace pwamb;

namespace {
const Chart& xy() {
    static const Chart c("xy", {"x", "y"});
    return c;
}
Expr P(const std::string& s) { return parse_expr(s, xy()); }
} // namespace

TEST(SolveLinear, UniqueSolutionWithExprCoefficients) {
    SymbolId a = symbols::unknown("la"), b = symbols::unknown("lb");
    Expr A = Expr::symbol(a), B = Expr::symbol(b);
    // x*a + b = y, a - y*b = 1
    auto sol = solve_linear({P("x") * A + B - P("y"), A - P("y") * B - Expr(1)}, {a, b});
    ASSERT_TRUE(sol.consistent());
    EXPECT_TRUE(sol.free.empty());
    Expr va = sol.values.at(a), vb = sol.values.at(b);
    EXPECT_TRUE((P("x") * va + vb - P("y")).is_zero());
    EXPECT_TRUE((va - P("y") * vb - Expr(1)).is_zero());
}

TEST(SolveLinear, FreeUnknownsAndGeneralSolution) {
    SymbolId a = symbols::unknown("fa"), b = symbols::unknown("fb");
    auto sol = solve_linear({Expr::symbol(a) + P("x") * Expr::symbol(b) - Expr(3)}, {a, b});
    ASSERT_TRUE(sol.consistent());
    ASSERT_EQ(sol.free.size(), 1u);
    Expr ga = sol.general.at(a), gb = sol.general.at(b);
    EXPECT_TRUE((ga + P("x") * gb - Expr(3)).is_zero());
}

TEST(SolveLinear, InconsistentSystemReportsResidual) {
    SymbolId a = symbols::unknown("ia");
    auto sol = solve_linear({Expr::symbol(a) - Expr(1), Expr::symbol(a) - P("x")}, {a});
    EXPECT_FALSE(sol.consistent());
}

TEST(SolveLinear, RejectsNonlinear) {
    SymbolId a = symbols::unknown("na");
    EXPECT_THROW(solve_linear({Expr::symbol(a) * Expr::symbol(a) - Expr(1)}, {a}), MathError);
    EXPECT_THROW(solve_linear({Expr(1) / Expr::symbol(a) - Expr(1)}, {a}), MathError);
}

TEST(Linalg, InverseAndDeterminant) {
    ExprMatrix m(3);
    m(0, 0) = P("x");
    m(0, 1) = P("1");
    m(1, 0) = P("1");
    m(1, 2) = P("y");
    m(2, 1) = P("y");
    m(2, 2) = P("x*y");
    Expr det = determinant(m);
    EXPECT_EQ(det, P("-x*y^2 - x*y"));
    auto inv = invert(m);
    ASSERT_TRUE(inv.has_value());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            Expr s;
            for (std::size_t k = 0; k < 3; ++k) s += m(i, k) * (*inv)(k, j);
            EXPECT_EQ(s, Expr(i == j ? 1 : 0));
        }
    ExprMatrix sing(2);
    sing(0, 0) = P("x");
    sing(0, 1) = P("y");
    sing(1, 0) = P("x^2");
    sing(1, 1) = P("x*y");
    EXPECT_FALSE(invert(sing).has_value());
    EXPECT_TRUE(determinant(sing).is_zero());
}

TEST(Linalg, Signature) {
    // Off-diagonal hyperbolic block plus a negative entry: (2, 2, 0) overall.
    RationalMatrix m{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
    Signature s = signature(m);
    EXPECT_EQ(s.positive, 2u);
    EXPECT_EQ(s.negative, 2u);
    RationalMatrix d{{1, 2}, {2, 4}};
    s = signature(d);
    EXPECT_EQ(s.positive, 1u);
    EXPECT_EQ(s.zero, 1u);
    RationalMatrix e{{-1, 0, 0}, {0, 3, 1}, {0, 1, 0}};
    s = signature(e);
    EXPECT_EQ(s.positive, 1u);
    EXPECT_EQ(s.negative, 2u);
    EXPECT_EQ(rank(d), 1u);
}
