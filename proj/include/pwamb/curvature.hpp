#pragma once

// Curvature formulas written once over any commutative "differential ring"
// S: exact Expr components, or truncated power series in one coordinate for
// the ambient expansion. S must provide +, -, *, is_zero(), a zero default
// value, and scale(S, Rational). Derivatives come in through a callable
// deriv(const S&, std::size_t coordinate_index) -> S.
//
// Index conventions: metric g[a*n+b]; Christoffels gamma[(a*n+c)*n+b] for
// Gamma_a^c_b, meaning nabla_{d_a} d_b = Gamma_a^c_b d_c.

#include "pwamb/poly.hpp"

#include <functional>
#include <vector>

namespace pwamb::curvature {

template <class S, class Deriv>
std::vector<S> levi_civita_symbols(const std::vector<S>& g, const std::vector<S>& ginv, std::size_t n,
                                   Deriv&& deriv) {
    // dg[(k*n+a)*n+b] = d_k g_ab
    std::vector<S> dg(n * n * n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                const S& gab = g[a * n + b];
                if (gab.is_zero()) continue;
                S d = deriv(gab, k);
                dg[(k * n + a) * n + b] = d;
                dg[(k * n + b) * n + a] = d;
            }
    // First kind: Gamma_{d,ab} = 1/2 (d_a g_db + d_b g_da - d_d g_ab)
    std::vector<S> first(n * n * n);
    const Rational half(1, 2);
    for (std::size_t d = 0; d < n; ++d)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a; b < n; ++b) {
                S v = dg[(a * n + d) * n + b] + dg[(b * n + d) * n + a] - dg[(d * n + a) * n + b];
                if (v.is_zero()) continue;
                v = scale(v, half);
                first[(d * n + a) * n + b] = v;
                first[(d * n + b) * n + a] = v;
            }
    std::vector<S> gamma(n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                S sum{};
                for (std::size_t d = 0; d < n; ++d) {
                    const S& inv = ginv[c * n + d];
                    const S& f = first[(d * n + a) * n + b];
                    if (inv.is_zero() || f.is_zero()) continue;
                    sum = sum + inv * f;
                }
                gamma[(a * n + c) * n + b] = sum;
                gamma[(b * n + c) * n + a] = sum;
            }
    return gamma;
}

// Ric_ab = d_c Gamma_a^c_b - d_a Gamma_c^c_b + Gamma_c^c_d Gamma_a^d_b
//          - Gamma_a^c_d Gamma_c^d_b,
// i.e. Ric(X, Y) = trace(Z -> R(Z, X) Y). Only components accepted by
// `wanted(a, b)` are computed; the rest are left zero.
template <class S, class Deriv>
std::vector<S> ricci_components(const std::vector<S>& gamma, std::size_t n, Deriv&& deriv,
                                const std::function<bool(std::size_t, std::size_t)>& wanted) {
    auto G = [&](std::size_t a, std::size_t c, std::size_t b) -> const S& { return gamma[(a * n + c) * n + b]; };
    std::vector<S> trace(n);
    for (std::size_t d = 0; d < n; ++d)
        for (std::size_t c = 0; c < n; ++c)
            if (!G(c, c, d).is_zero()) trace[d] = trace[d] + G(c, c, d);

    std::vector<S> ric(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (!wanted(a, b)) continue;
            S r{};
            for (std::size_t c = 0; c < n; ++c)
                if (!G(a, c, b).is_zero()) r = r + deriv(G(a, c, b), c);
            if (!trace[b].is_zero()) r = r - deriv(trace[b], a);
            for (std::size_t d = 0; d < n; ++d)
                if (!trace[d].is_zero() && !G(a, d, b).is_zero()) r = r + trace[d] * G(a, d, b);
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    if (G(a, c, d).is_zero() || G(c, d, b).is_zero()) continue;
                    r = r - G(a, c, d) * G(c, d, b);
                }
            ric[a * n + b] = r;
        }
    return ric;
}

// R^a_{bcd} with R(d_c, d_d) d_b = R^a_{bcd} d_a, stored at ((a*n+b)*n+c)*n+d.
template <class S, class Deriv>
std::vector<S> riemann_components(const std::vector<S>& gamma, std::size_t n, Deriv&& deriv) {
    auto G = [&](std::size_t a, std::size_t c, std::size_t b) -> const S& { return gamma[(a * n + c) * n + b]; };
    std::vector<S> dgamma(n * n * n * n); // d_k Gamma[a][c][b] at ((k*n+a)*n+c)*n+b
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n * n * n; ++i)
            if (!gamma[i].is_zero()) dgamma[k * n * n * n + i] = deriv(gamma[i], k);
    auto dG = [&](std::size_t k, std::size_t a, std::size_t c, std::size_t b) -> const S& {
        return dgamma[((k * n + a) * n + c) * n + b];
    };
    std::vector<S> out(n * n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    S r = dG(c, d, a, b) - dG(d, c, a, b);
                    for (std::size_t e = 0; e < n; ++e) {
                        if (!G(c, a, e).is_zero() && !G(d, e, b).is_zero()) r = r + G(c, a, e) * G(d, e, b);
                        if (!G(d, a, e).is_zero() && !G(c, e, b).is_zero()) r = r - G(d, a, e) * G(c, e, b);
                    }
                    out[((a * n + b) * n + c) * n + d] = r;
                }
    return out;
}

} // namespace pwamb::curvature
