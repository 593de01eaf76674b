#include "pwamb/linalg.hpp"

#include "pwamb/error.hpp"

#include <utility>

namespace pwamb {
namespace {

std::size_t cost(const Expr& e) {
    if (e.is_constant()) return 0;
    return 1 + e.num().size() + 2 * e.den().size();
}

// Gauss-Jordan on [m | rhs]; returns the determinant, and leaves the inverse
// in rhs when it is nonsingular.
Expr eliminate(ExprMatrix m, ExprMatrix* rhs) {
    const std::size_t n = m.n;
    Expr det(1);
    std::vector<bool> done(n, false);
    std::vector<std::size_t> pivot_of_col(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::optional<std::size_t> best;
        for (std::size_t r = 0; r < n; ++r) {
            if (done[r] || m(r, col).is_zero()) continue;
            if (!best || cost(m(r, col)) < cost(m(*best, col))) best = r;
        }
        if (!best) return Expr();
        const std::size_t p = *best;
        done[p] = true;
        pivot_of_col[col] = p;
        Expr pivot = m(p, col);
        det *= pivot;
        Expr inv = pivot.inverse();
        for (std::size_t c = 0; c < n; ++c) {
            if (!m(p, c).is_zero()) m(p, c) *= inv;
            if (rhs && !(*rhs)(p, c).is_zero()) (*rhs)(p, c) *= inv;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == p || m(r, col).is_zero()) continue;
            Expr f = m(r, col);
            for (std::size_t c = 0; c < n; ++c) {
                if (!m(p, c).is_zero()) m(r, c) -= f * m(p, c);
                if (rhs && !(*rhs)(p, c).is_zero()) (*rhs)(r, c) -= f * (*rhs)(p, c);
            }
        }
    }
    // Row p holds the pivot of column col; the permutation sign fixes det.
    std::vector<std::size_t> perm = pivot_of_col;
    int sign = 1;
    for (std::size_t i = 0; i < n; ++i) {
        while (perm[i] != i) {
            std::swap(perm[i], perm[perm[i]]);
            sign = -sign;
        }
    }
    if (rhs) {
        ExprMatrix sorted(n);
        for (std::size_t col = 0; col < n; ++col)
            for (std::size_t c = 0; c < n; ++c) sorted(col, c) = (*rhs)(pivot_of_col[col], c);
        *rhs = std::move(sorted);
    }
    return sign > 0 ? det : -det;
}

} // namespace

std::optional<ExprMatrix> invert(const ExprMatrix& m) {
    ExprMatrix rhs(m.n);
    for (std::size_t i = 0; i < m.n; ++i) rhs(i, i) = Expr(1);
    Expr det = eliminate(m, &rhs);
    if (det.is_zero()) return std::nullopt;
    return rhs;
}

Expr determinant(const ExprMatrix& m) { return eliminate(m, nullptr); }

std::size_t rank(RationalMatrix m) {
    std::size_t r = 0;
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c] == 0) continue;
            Rational f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

Signature signature(RationalMatrix m) {
    Signature s;
    std::size_t n = m.size();
    std::vector<bool> active(n, true);
    for (std::size_t step = 0; step < n; ++step) {
        // Find a nonzero diagonal pivot; otherwise create one by congruence
        // with e_i + e_j, which puts 2 m_ij on the diagonal.
        std::optional<std::size_t> p;
        for (std::size_t i = 0; i < n; ++i)
            if (active[i] && m[i][i] != 0) {
                p = i;
                break;
            }
        if (!p) {
            for (std::size_t i = 0; i < n && !p; ++i)
                for (std::size_t j = 0; j < n && !p; ++j)
                    if (active[i] && active[j] && i != j && m[i][j] != 0) {
                        for (std::size_t k = 0; k < n; ++k) m[i][k] += m[j][k];
                        for (std::size_t k = 0; k < n; ++k) m[k][i] += m[k][j];
                        p = i;
                    }
        }
        if (!p) break;
        const std::size_t i = *p;
        active[i] = false;
        const Rational d = m[i][i];
        (d > 0 ? s.positive : s.negative)++;
        // Schur complement on the remaining block.
        const std::vector<Rational> row = m[i];
        for (std::size_t r = 0; r < n; ++r) {
            if (!active[r] || row[r] == 0) continue;
            Rational f = row[r] / d;
            for (std::size_t c = 0; c < n; ++c)
                if (active[c]) m[r][c] -= f * row[c];
        }
        for (std::size_t r = 0; r < n; ++r) m[i][r] = m[r][i] = 0;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (active[i]) s.zero++;
    return s;
}

} // namespace pwamb
