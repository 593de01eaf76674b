// Acceptance run: one PASS/FAIL line per criterion. Exact symbolic checks
// decide each verdict; finite-difference spot checks at 1e-9 relative
// tolerance run alongside as a redundant, independent route.

#include "pwamb/cli.hpp"
#include "pwamb/constructions.hpp"
#include "pwamb/error.hpp"
#include "pwamb/fg_solver.hpp"
#include "pwamb/qcurv.hpp"
#include "pwamb/sampling.hpp"
#include "support/fixtures.hpp"
#include "support/random_expr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace pwamb;
using pwamb::testing::random_poly;

namespace {

// ---------------------------------------------------------------------------
// Bookkeeping

class Tally {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        ++failures_;
        if (first_failure_.empty()) first_failure_ = what;
    }
    bool pass() const { return failures_ == 0; }
    std::size_t checks() const { return checks_; }
    std::size_t failures() const { return failures_; }
    const std::string& first_failure() const { return first_failure_; }
    std::ostringstream notes;

private:
    std::size_t checks_ = 0, failures_ = 0;
    std::string first_failure_;
};

struct Case {
    std::string name;
    AffineConnection d;
};

struct Corpus {
    std::vector<Case> n2, n3;
    std::vector<const Case*> all() const {
        std::vector<const Case*> out;
        for (const Case& c : n2) out.push_back(&c);
        for (const Case& c : n3) out.push_back(&c);
        return out;
    }
};

Corpus build_corpus() {
    Corpus c;
    c.n2.push_back({"flat-n2", testing::flat_connection(testing::base2())});
    c.n2.push_back({"E1", testing::e1_connection()});
    for (const auto& s : cli::generate_corpus(20, 2, 2, 2024)) c.n2.push_back({s.name, cli::to_connection(s)});
    c.n3.push_back({"flat-n3", testing::flat_connection(testing::base3())});
    for (const auto& s : cli::generate_corpus(5, 3, 1, 2024)) c.n3.push_back({s.name, cli::to_connection(s)});
    for (const Case* k : c.all()) k->d.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Exact-rational finite differences. Every quantity is evaluated exactly at
// rational points, so central differences carry truncation error only.

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;
using GammaFn = std::function<Vec(const Vec&)>; // flat [(a*n+c)*n+b]

const Rational kOuter(1, 100000000);
const Rational kInner(1, mpz_class("100000000000000000000"));

Point at(const Chart& c, const Vec& q) {
    Point p;
    for (std::size_t i = 0; i < c.dim(); ++i) p[c.id(i)] = q[i];
    return p;
}

Vec sample(PointSampler& rng, const Chart& c) {
    Point p = rng.point(c);
    Vec q(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) q[i] = p.at(c.id(i));
    return q;
}

Vec shifted(Vec q, std::size_t k, const Rational& h) {
    q[k] += h;
    return q;
}

Mat invert(Mat m) {
    const std::size_t n = m.size();
    Mat inv(n, Vec(n));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) throw MathError("singular", "numeric metric is singular at the sample point");
        std::swap(m[piv], m[col]);
        std::swap(inv[piv], inv[col]);
        const Rational s = m[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] /= s;
            inv[col][j] /= s;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col] == 0) continue;
            const Rational f = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

Mat metric_at(const MetricTensor& g, const Vec& q) {
    const std::size_t n = g.dim();
    Point p = at(g.chart(), q);
    Mat m(n, Vec(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) m[a][b] = m[b][a] = g(a, b).is_zero() ? Rational(0) : g(a, b).evaluate(p);
    return m;
}

GammaFn connection_gamma(const AffineConnection& d) {
    return [&d](const Vec& q) {
        Point p = at(d.chart(), q);
        Vec out(d.christoffel().size());
        for (std::size_t i = 0; i < out.size(); ++i)
            if (!d.christoffel()[i].is_zero()) out[i] = d.christoffel()[i].evaluate(p);
        return out;
    };
}

// Levi-Civita symbols from metric values alone.
GammaFn metric_gamma(const MetricTensor& g, const Rational& h) {
    return [&g, h](const Vec& q) {
        const std::size_t n = g.dim();
        Mat gi = invert(metric_at(g, q));
        std::vector<Mat> dg(n);
        for (std::size_t k = 0; k < n; ++k) {
            Mat plus = metric_at(g, shifted(q, k, h)), minus = metric_at(g, shifted(q, k, -h));
            dg[k] = Mat(n, Vec(n));
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) dg[k][a][b] = (plus[a][b] - minus[a][b]) / (2 * h);
        }
        Vec out(n * n * n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t b = 0; b < n; ++b) {
                    Rational s;
                    for (std::size_t e = 0; e < n; ++e)
                        if (gi[c][e] != 0) s += gi[c][e] * (dg[a][e][b] + dg[b][e][a] - dg[e][a][b]);
                    out[(a * n + c) * n + b] = s / 2;
                }
        return out;
    };
}

// A sum remembering its largest term, for relative tolerances.
struct Acc {
    Rational value;
    double scale = 0;
    void add(const Rational& r) {
        value += r;
        scale = std::max(scale, std::abs(r.get_d()));
    }
    bool near_zero() const { return std::abs(value.get_d()) <= 1e-9 * std::max(1.0, scale); }
};

bool near(const Rational& a, const Rational& b) {
    const double x = a.get_d(), y = b.get_d();
    return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
}

// Ric_ab = d_c G_a^c_b - d_a G_c^c_b + G_c^c_d G_a^d_b - G_a^c_d G_c^d_b
std::vector<Acc> numeric_ricci(const GammaFn& gamma, std::size_t n, const Vec& q) {
    Vec g0 = gamma(q);
    std::vector<Vec> dg(n);
    for (std::size_t k = 0; k < n; ++k) {
        Vec plus = gamma(shifted(q, k, kOuter)), minus = gamma(shifted(q, k, -kOuter));
        dg[k].resize(g0.size());
        for (std::size_t i = 0; i < g0.size(); ++i) dg[k][i] = (plus[i] - minus[i]) / (2 * kOuter);
    }
    auto G = [&](std::size_t a, std::size_t c, std::size_t b) -> const Rational& { return g0[(a * n + c) * n + b]; };
    std::vector<Acc> ric(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            Acc& r = ric[a * n + b];
            for (std::size_t c = 0; c < n; ++c) {
                r.add(dg[c][(a * n + c) * n + b]);
                r.add(-dg[a][(c * n + c) * n + b]);
                for (std::size_t d = 0; d < n; ++d) {
                    r.add(G(c, c, d) * G(a, d, b));
                    r.add(-G(a, c, d) * G(c, d, b));
                }
            }
        }
    return ric;
}

bool numeric_ricci_flat(const MetricTensor& g, const Vec& q) {
    auto ric = numeric_ricci(metric_gamma(g, kInner), g.dim(), q);
    return std::all_of(ric.begin(), ric.end(), [](const Acc& a) { return a.near_zero(); });
}

struct Jet {
    Vec grad;
    Mat hess;
};

Jet polynomial_jet(const Expr& f, const Chart& c, const Vec& q) {
    const std::size_t n = c.dim();
    auto F = [&](const Vec& x) { return f.evaluate(at(c, x)); };
    const Rational& h = kOuter;
    Jet j{Vec(n), Mat(n, Vec(n))};
    for (std::size_t i = 0; i < n; ++i) {
        j.grad[i] = (F(shifted(q, i, h)) - F(shifted(q, i, -h))) / (2 * h);
        for (std::size_t k = 0; k < n; ++k) {
            Vec pp = shifted(shifted(q, i, h), k, h), pm = shifted(shifted(q, i, h), k, -h);
            Vec mp = shifted(shifted(q, i, -h), k, h), mm = shifted(shifted(q, i, -h), k, -h);
            j.hess[i][k] = (F(pp) - F(pm) - F(mp) + F(mm)) / (4 * h * h);
        }
    }
    return j;
}

// g^ij (d_i d_j f - G_i^k_j d_k f)
Acc numeric_laplacian(const Mat& ginv, const Vec& gamma, const Jet& f) {
    const std::size_t n = ginv.size();
    Acc out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (ginv[i][j] == 0) continue;
            out.add(ginv[i][j] * f.hess[i][j]);
            for (std::size_t k = 0; k < n; ++k)
                if (f.grad[k] != 0) out.add(-ginv[i][j] * gamma[(i * n + k) * n + j] * f.grad[k]);
        }
    return out;
}

// (L_X g)_ij - c g_ij from values of X and g near q.
bool numeric_lie(const TensorField& x, const MetricTensor& g, const Rational& c, const Vec& q) {
    const std::size_t n = g.dim();
    const Chart& ch = g.chart();
    auto X = [&](const Vec& y) {
        Point p = at(ch, y);
        Vec v(n);
        for (std::size_t k = 0; k < n; ++k) v[k] = x(k).is_zero() ? Rational(0) : x(k).evaluate(p);
        return v;
    };
    Mat g0 = metric_at(g, q);
    Vec x0 = X(q);
    std::vector<Mat> dg(n);
    std::vector<Vec> dx(n);
    for (std::size_t k = 0; k < n; ++k) {
        Mat gp = metric_at(g, shifted(q, k, kOuter)), gm = metric_at(g, shifted(q, k, -kOuter));
        Vec xp = X(shifted(q, k, kOuter)), xm = X(shifted(q, k, -kOuter));
        dg[k] = Mat(n, Vec(n));
        dx[k] = Vec(n);
        for (std::size_t a = 0; a < n; ++a) {
            dx[k][a] = (xp[a] - xm[a]) / (2 * kOuter);
            for (std::size_t b = 0; b < n; ++b) dg[k][a][b] = (gp[a][b] - gm[a][b]) / (2 * kOuter);
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Acc r;
            r.add(-c * g0[i][j]);
            for (std::size_t k = 0; k < n; ++k) {
                r.add(x0[k] * dg[k][i][j]);
                r.add(g0[k][j] * dx[i][k]);
                r.add(g0[i][k] * dx[j][k]);
            }
            if (!r.near_zero()) return false;
        }
    return true;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : ", ") + e;
    return s;
}

// ---------------------------------------------------------------------------
// Criteria

void ricci_flat_ambient(const Corpus& corpus, Tally& t) {
    PointSampler rng(101);
    std::size_t numeric = 0;
    for (const Case* c : corpus.all()) {
        MetricTensor g = ambient_pw(c->d);
        t.expect(ricci(g).is_zero(), c->name + ": Ric(ambient) != 0");
        t.expect(numeric_ricci_flat(g, sample(rng, g.chart())), c->name + ": numeric Ric(ambient) != 0");
        ++numeric;
    }
    // Negative control: the numeric route must see curvature where it exists.
    MetricTensor pw = patterson_walker(testing::e1_connection());
    t.expect(!numeric_ricci_flat(pw, sample(rng, pw.chart())), "numeric check blind to Ric(PW(E1)) != 0");
    t.notes << corpus.n2.size() << " connections with n=2, " << corpus.n3.size() << " with n=3; " << numeric
            << " numeric spot checks";
}

void expansion_terminates(const Corpus& corpus, Tally& t) {
    PointSampler rng(102);
    for (const Case* c : corpus.all()) {
        const std::size_t n = c->d.dim();
        MetricTensor g0 = patterson_walker(c->d);
        ExpansionResult r = fg_expand(g0, n + 1);
        t.expect(!r.obstructed && r.phi.size() == n + 1, c->name + ": expansion stopped early");
        if (r.phi.empty()) continue;
        // Oracle: 2/(n-1) Ric(D) on the dx-dx block, zero elsewhere.
        TensorField base_ric = ricci(c->d);
        Rational two_over(2, static_cast<long>(n - 1));
        two_over.canonicalize();
        const Expr factor(two_over);
        const TensorField& phi1 = r.phi[0];
        for (std::size_t i = 0; i < 2 * n; ++i)
            for (std::size_t j = 0; j < 2 * n; ++j) {
                Expr want = (i < n && j < n) ? factor * base_ric(i, j) : Expr();
                t.expect(phi1(i, j) == want, c->name + ": phi1 mismatch at " + phi1.chart().coord_name(i) + "," +
                                                 phi1.chart().coord_name(j));
            }
        for (std::size_t k = 1; k < r.phi.size(); ++k)
            t.expect(r.phi[k].is_zero(), c->name + ": phi" + std::to_string(k + 1) + " != 0");
        // Numeric: phi1 against finite-difference Ric(D).
        Vec q = sample(rng, g0.chart());
        Vec base(q.begin(), q.begin() + static_cast<long>(n));
        auto ric = numeric_ricci(connection_gamma(c->d), n, base);
        Point p = at(g0.chart(), q);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                t.expect(near(phi1(i, j).evaluate(p), two_over * ric[i * n + j].value),
                         c->name + ": numeric phi1 mismatch");
    }
    t.notes << "phi1 = 2/(n-1) Ric(D) and phi2..phi(n+1) = 0 for " << corpus.all().size() << " connections";
}

void obstruction_vanishes(const Corpus& corpus, Tally& t) {
    for (const Case& c : corpus.n2)
        t.expect(obstruction_residual(patterson_walker(c.d)).is_zero(), c.name + ": obstruction != 0");
    Chart m4("M4", {"a", "b", "c", "d"});
    std::vector<Expr> g(16);
    g[0] = parse_expr("1 + b^2", m4);
    g[5] = g[10] = g[15] = Expr(1);
    g[2] = g[8] = parse_expr("a", m4);
    TensorField o = obstruction_residual(MetricTensor::from_components(m4, g));
    bool witnessed = false;
    for (std::size_t f = 0; f < o.components().size() && !witnessed; ++f) {
        if (o(f).is_zero()) continue;
        if (auto p = find_nonzero_point(o(f), m4)) {
            witnessed = true;
            std::vector<std::string> coords;
            for (const auto& [k, v] : describe_point(*p)) coords.push_back(k + "=" + v);
            auto idx = o.unflat(f);
            t.notes << "generic metric obstructed at component " << m4.coord_name(idx[0]) << ","
                    << m4.coord_name(idx[1]) << ", witness {" << join(coords) << "}";
        }
    }
    t.expect(witnessed, "generic 4-metric: no nonzero obstruction witness");
    t.notes << "; " << corpus.n2.size() << " PW metrics unobstructed";
}

void cone_equals_ambient(const Corpus& corpus, Tally& t) {
    PointSampler rng(104);
    for (const Case* c : corpus.all()) {
        MetricTensor cone = cone_pw(c->d), amb = ambient_pw(c->d);
        t.expect(normalize_to_fg(cone) == amb, c->name + ": normalize_to_fg(cone) != ambient");
        // Numeric pullback along x0 = t, x^A = x^A, y_A = t^2 p_A, y0 = t rho.
        const std::size_t n = c->d.dim(), m = amb.dim();
        auto phi = [n](const Vec& q) {
            Vec y = q;
            for (std::size_t a = 0; a < n; ++a) y[1 + n + a] = q[0] * q[0] * q[1 + n + a];
            y[2 * n + 1] = q[0] * q[2 * n + 1];
            return y;
        };
        Vec q = sample(rng, amb.chart());
        Mat gc = metric_at(cone, phi(q)), ga = metric_at(amb, q);
        Mat jac(m, Vec(m));
        for (std::size_t k = 0; k < m; ++k) {
            Vec yp = phi(shifted(q, k, kOuter)), ym = phi(shifted(q, k, -kOuter));
            for (std::size_t a = 0; a < m; ++a) jac[a][k] = (yp[a] - ym[a]) / (2 * kOuter);
        }
        bool ok = true;
        for (std::size_t i = 0; i < m && ok; ++i)
            for (std::size_t j = 0; j < m && ok; ++j) {
                Acc r;
                r.add(-ga[i][j]);
                for (std::size_t a = 0; a < m; ++a)
                    for (std::size_t b = 0; b < m; ++b)
                        if (gc[a][b] != 0) r.add(jac[a][i] * gc[a][b] * jac[b][j]);
                ok = r.near_zero();
            }
        t.expect(ok, c->name + ": numeric pullback mismatch");
    }
    t.notes << corpus.all().size() << " connections, exact and numeric pullback";
}

void thomas_diagram(const Corpus& corpus, Tally& t) {
    PointSampler rng(105);
    for (const Case* c : corpus.all()) {
        AffineConnection th = thomas_cone(c->d);
        MetricTensor formula = cone_pw_formula(c->d);
        MetricTensor via = patterson_walker(th, "y").permuted_to(formula.chart());
        t.expect(via == formula, c->name + ": PW(thomas) != cone metric");
        t.expect(cone_pw(c->d) == formula, c->name + ": cone_pw disagrees");
        t.expect(ricci(th).is_zero(), c->name + ": Ric(thomas) != 0");
        auto ric = numeric_ricci(connection_gamma(th), th.dim(), sample(rng, th.chart()));
        t.expect(std::all_of(ric.begin(), ric.end(), [](const Acc& a) { return a.near_zero(); }),
                 c->name + ": numeric Ric(thomas) != 0");
    }
    t.notes << corpus.all().size() << " connections";
}

void q_curvature_vanishes(const Corpus& corpus, Tally& t) {
    PointSampler rng(106);
    std::size_t horizontal = 0;
    for (const Case* c : corpus.all()) {
        MetricTensor g = ambient_pw(c->d);
        QReport q = q_curvature(g);
        t.expect(!q.powers.empty() && q.powers.front().is_zero(), c->name + ": Delta ln t != 0");
        t.expect(q.vanishes && q.q.is_zero(), c->name + ": Q != 0");

        const Chart& ch = g.chart();
        Vec pt = sample(rng, ch);
        Mat ginv = invert(metric_at(g, pt));
        Vec gamma = metric_gamma(g, kInner)(pt);
        Jet logt{Vec(ch.dim()), Mat(ch.dim(), Vec(ch.dim()))};
        logt.grad[0] = 1 / pt[0];
        logt.hess[0][0] = -1 / (pt[0] * pt[0]);
        t.expect(numeric_laplacian(ginv, gamma, logt).near_zero(), c->name + ": numeric Delta ln t != 0");

        std::vector<std::string> names{"t"};
        for (std::size_t a = 0; a < c->d.dim(); ++a) names.push_back(c->d.chart().coord_name(a));
        Chart hz("horizontal", names, {"t"});
        for (int i = 0; i < 10; ++i) {
            Expr f = random_poly(rng, hz, 2);
            t.expect(horizontal_annihilation_check(g, f), c->name + ": Delta f != 0 for f = " + f.str());
            t.expect(numeric_laplacian(ginv, gamma, polynomial_jet(f, ch, pt)).near_zero(),
                     c->name + ": numeric Delta f != 0 for f = " + f.str());
            ++horizontal;
        }
    }
    t.notes << corpus.all().size() << " ambients, " << horizontal << " horizontal polynomials";
}

void einstein_cross_check(Tally& t) {
    PointSampler rng(107);
    Chart plane("R2", {"x", "y"});
    MetricTensor flat = MetricTensor::from_components(plane, {Expr(1), Expr(), Expr(), Expr(1)});
    MetricTensor flat_amb = einstein_ambient(flat, Rational(0));
    t.expect(ricci(flat_amb).is_zero(), "flat Einstein ambient not Ricci-flat");
    t.expect(numeric_ricci_flat(flat_amb, sample(rng, flat_amb.chart())), "numeric flat ambient");
    ExpansionResult fr = fg_expand(flat, 2);
    t.expect(fr.phi.size() == 2 && fr.phi[0].is_zero() && fr.phi[1].is_zero(), "flat expansion not zero");

    // (1 + lambda rho)^2 = 1 + 2 lambda rho + lambda^2 rho^2
    auto binomial = [&](const MetricTensor& g, const Rational& lambda, std::size_t order, const std::string& label) {
        MetricTensor amb = einstein_ambient(g, lambda);
        t.expect(ricci(amb).is_zero(), label + " Einstein ambient not Ricci-flat");
        t.expect(numeric_ricci_flat(amb, sample(rng, amb.chart())), label + " numeric Einstein ambient");
        ExpansionResult r = fg_expand(g, order);
        t.expect(r.phi.size() == order && !r.obstructed, label + " expansion stopped early");
        if (r.phi.size() != order) return;
        t.expect(r.phi[0] == g.tensor() * Expr(2 * lambda), label + " phi1 != 2 lambda g");
        t.expect(r.phi[1] == g.tensor() * Expr(lambda * lambda), label + " phi2 != lambda^2 g");
        for (std::size_t k = 2; k < order; ++k) t.expect(r.phi[k].is_zero(), label + " higher coefficient != 0");
    };
    MetricTensor sphere = testing::stereographic_sphere(); // Ric = g, m = 2
    binomial(sphere, Rational(1, 2), 2, "sphere");

    Chart s2s2("S2xS2", {"x", "y", "u", "v"});
    Expr f = parse_expr("4/(1 + x^2 + y^2)^2", s2s2), h = parse_expr("4/(1 + u^2 + v^2)^2", s2s2);
    std::vector<Expr> prod(16);
    prod[0] = prod[5] = f;
    prod[10] = prod[15] = h;
    binomial(MetricTensor::from_components(s2s2, prod), Rational(1, 6), 3, "S2xS2");
    t.notes << "flat (lambda=0), round S2 (lambda=1/2, K=2), S2xS2 (lambda=1/6, K=3)";
}

void homogeneity_structure(const Corpus& corpus, Tally& t) {
    PointSampler rng(108);
    for (const Case* c : corpus.all()) {
        MetricTensor g = ambient_pw(c->d);
        CanonicalFields f = canonical_fields(c->d);
        const TensorField twice = g.tensor() * Expr(2);
        t.expect(lie_derivative(f.euler, g.tensor()) == twice, c->name + ": L_euler g != 2g");
        t.expect(lie_derivative(f.k, g.tensor()) == twice, c->name + ": L_k g != 2g");
        t.expect(lie_derivative(f.killing, g.tensor()).is_zero(), c->name + ": L_killing g != 0");
        t.expect(f.euler == f.killing + f.k, c->name + ": euler != killing + k");
        DistributionReport r = check_parallel_distribution(g, fiber_frame(c->d.chart()));
        t.expect(r.passed(), c->name + ": fiber distribution not parallel and isotropic");
        Vec q = sample(rng, g.chart());
        t.expect(numeric_lie(f.euler, g, 2, q) && numeric_lie(f.k, g, 2, q) && numeric_lie(f.killing, g, 0, q),
                 c->name + ": numeric Lie derivative mismatch");
    }
    t.notes << corpus.all().size() << " connections";
}

void isotropy_chain(const Corpus& corpus, Tally& t) {
    PointSampler rng(109);
    std::optional<Expr> constant;
    std::size_t proportional = 0;
    for (const Case* c : corpus.all()) {
        const std::size_t n = c->d.dim();
        MetricTensor g = patterson_walker(c->d);
        TensorField ric = ricci(g);
        t.expect(check_isotropic(g, ric).isotropic, c->name + ": Ric(PW) not isotropic");
        t.expect(check_isotropic(g, covariant_derivative(g.levi_civita(), ric)).isotropic,
                 c->name + ": nabla Ric(PW) not isotropic");
        TensorField base = ricci(c->d);
        for (std::size_t i = 0; i < 2 * n; ++i)
            for (std::size_t j = 0; j < 2 * n; ++j)
                if (i >= n || j >= n) t.expect(ric(i, j).is_zero(), c->name + ": Ric(PW) leaves the dx-dx block");
        std::optional<Expr> ratio;
        for (std::size_t i = 0; i < n && !ratio; ++i)
            for (std::size_t j = 0; j < n && !ratio; ++j)
                if (!base(i, j).is_zero()) ratio = ric(i, j) / base(i, j);
        if (!ratio) {
            t.expect(ric.is_zero(), c->name + ": Ric(D) = 0 but Ric(PW) != 0");
            continue;
        }
        t.expect(ratio->is_constant(), c->name + ": Ric(PW)/Ric(D) is not constant");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                t.expect(ric(i, j) == *ratio * base(i, j), c->name + ": Ric(PW) not proportional to Ric(D)");
        if (!constant) constant = *ratio;
        t.expect(*ratio == *constant, c->name + ": constant " + ratio->str() + " differs");
        ++proportional;
        // Numeric: PW Ricci from metric values against c * Ric(D).
        Vec q = sample(rng, g.chart());
        auto num = numeric_ricci(metric_gamma(g, kInner), 2 * n, q);
        auto num_base = numeric_ricci(connection_gamma(c->d), n, Vec(q.begin(), q.begin() + static_cast<long>(n)));
        const Rational k = *ratio->constant_value();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                t.expect(near(num[i * 2 * n + j].value, k * num_base[i * n + j].value),
                         c->name + ": numeric Ric(PW) mismatch");
    }
    t.expect(constant.has_value(), "no connection with nonzero Ricci tensor");
    t.notes << "Ric(PW) = " << (constant ? constant->str() : "?") << " * pi^* Ric(D) consistently across "
            << proportional << " non-Ricci-flat connections";
}

void engine_properties(const Corpus& corpus, Tally& t) {
    PointSampler rng(110);
    Chart c("fuzz", {"x", "y", "z"});
    const SymbolId x = c.id(0), y = c.id(1);
    const Rational h(1, 1000000000);
    std::size_t evaluated = 0;
    const int cases = 1000;
    for (int i = 0; i < cases; ++i) {
        Expr a = testing::random_rational(rng, c, 2), b = testing::random_rational(rng, c, 2),
             d = testing::random_rational(rng, c, 2);
        const std::string tag = "fuzz case " + std::to_string(i);
        t.expect((a + b) + d == a + (b + d) && a + b == b + a, tag + ": addition");
        t.expect((a * b) * d == a * (b * d) && a * b == b * a, tag + ": multiplication");
        t.expect(a * (b + d) == a * b + a * d, tag + ": distributivity");
        t.expect((a - a).is_zero() && (a + Expr()) == a && a * Expr(1) == a, tag + ": identities");
        if (!a.is_zero()) t.expect(a * a.inverse() == Expr(1) && (a / a) == Expr(1), tag + ": inverse");
        t.expect((a * b).derivative(x) == a.derivative(x) * b + a * b.derivative(x), tag + ": Leibniz");
        t.expect(a.derivative(x).derivative(y) == a.derivative(y).derivative(x), tag + ": mixed partials");
        t.expect(parse_expr(a.str(), c) == a, tag + ": print round trip");
        Point p = rng.point(c);
        try {
            const Rational va = a.evaluate(p), vb = b.evaluate(p);
            t.expect((a * b).evaluate(p) == va * vb && (a + b).evaluate(p) == va + vb, tag + ": evaluation");
            Point pp = p, pm = p;
            pp[x] += h;
            pm[x] -= h;
            const Rational quotient = (a.evaluate(pp) - a.evaluate(pm)) / (2 * h);
            t.expect(near(quotient, a.derivative(x).evaluate(p)), tag + ": difference quotient");
            ++evaluated;
        } catch (const MathError&) {
            // pole at the sample point
        }
    }

    // First and second Bianchi identities on corpus curvatures.
    std::size_t bianchi = 0;
    for (const Case* k : corpus.all()) {
        const std::size_t n = k->d.dim();
        TensorField r = riemann(k->d);
        TensorField ric = ricci(k->d);
        TensorField nr = n == 2 ? covariant_derivative(k->d, r) : TensorField();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
                Expr contraction;
                for (std::size_t cc = 0; cc < n; ++cc) contraction += r.at({cc, b, cc, a});
                t.expect(contraction == ric(a, b), k->name + ": Ric is not the contraction of Riemann");
                for (std::size_t cc = 0; cc < n; ++cc)
                    for (std::size_t e = 0; e < n; ++e) {
                        t.expect((r.at({a, b, cc, e}) + r.at({a, cc, e, b}) + r.at({a, e, b, cc})).is_zero(),
                                 k->name + ": first Bianchi");
                        if (n != 2) continue;
                        for (std::size_t f = 0; f < n; ++f)
                            t.expect((nr.at({f, a, b, cc, e}) + nr.at({cc, a, b, e, f}) + nr.at({e, a, b, f, cc}))
                                         .is_zero(),
                                     k->name + ": second Bianchi");
                    }
            }
        ++bianchi;
    }

    // Pullback composition on random polynomial maps.
    Chart st("st", {"s", "w"}), uv("uv", {"u", "v"}), xy("xy", {"x", "y"});
    const int maps = 20;
    for (int i = 0; i < maps; ++i) {
        CoordinateMap inner{st, uv, {random_poly(rng, st, 2), random_poly(rng, st, 2)}};
        CoordinateMap outer{uv, xy, {random_poly(rng, uv, 2), random_poly(rng, uv, 2)}};
        std::vector<Expr> comps(4);
        for (Expr& e : comps) e = random_poly(rng, xy, 1);
        TensorField w(xy, {Slot::Lower, Slot::Lower}, comps);
        t.expect(pullback(compose(outer, inner), w) == pullback(inner, pullback(outer, w)),
                 "pullback composition, map " + std::to_string(i));
    }
    t.notes << cases << " fuzz cases (" << evaluated << " evaluated), Bianchi on " << bianchi
            << " corpus curvatures, " << maps << " composed pullbacks";
}

} // namespace

int main() {
    auto start = std::chrono::steady_clock::now();
    Corpus corpus = build_corpus();
    struct Criterion {
        int number;
        std::string title;
        std::function<void(Tally&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "ambient metric is Ricci-flat", [&](Tally& t) { ricci_flat_ambient(corpus, t); }},
        {2, "expansion terminates after the first step", [&](Tally& t) { expansion_terminates(corpus, t); }},
        {3, "obstruction vanishes for PW metrics", [&](Tally& t) { obstruction_vanishes(corpus, t); }},
        {4, "normalized cone metric equals ambient metric", [&](Tally& t) { cone_equals_ambient(corpus, t); }},
        {5, "PW of the Thomas cone is the cone metric", [&](Tally& t) { thomas_diagram(corpus, t); }},
        {6, "Q-curvature vanishes", [&](Tally& t) { q_curvature_vanishes(corpus, t); }},
        {7, "Einstein ambient cross-check", [&](Tally& t) { einstein_cross_check(t); }},
        {8, "homogeneity, Killing field, parallel distribution", [&](Tally& t) { homogeneity_structure(corpus, t); }},
        {9, "isotropy chain for Ric(PW)", [&](Tally& t) { isotropy_chain(corpus, t); }},
        {10, "engine property suites", [&](Tally& t) { engine_properties(corpus, t); }},
    };
    std::size_t failed = 0;
    for (const Criterion& c : criteria) {
        Tally t;
        auto t0 = std::chrono::steady_clock::now();
        try {
            c.run(t);
        } catch (const std::exception& e) {
            t.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line << (t.pass() ? "PASS" : "FAIL") << "  criterion " << c.number << ": " << c.title << " ("
             << t.checks() << " checks, " << std::fixed;
        line.precision(1);
        line << secs << "s)";
        if (!t.notes.str().empty()) line << " - " << t.notes.str();
        if (!t.pass()) line << " - " << t.failures() << " failed, first: " << t.first_failure();
        std::cout << line.str() << std::endl;
        if (!t.pass()) ++failed;
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed in " << std::fixed
              << std::setprecision(1) << total << "s" << std::endl;
    return failed == 0 ? 0 : 1;
}
