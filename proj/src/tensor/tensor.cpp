#include "pwamb/tensor.hpp"

#include "pwamb/curvature.hpp"
#include "pwamb/error.hpp"

#include <algorithm>

namespace pwamb {

namespace {

std::size_t ipow(std::size_t base, std::size_t e) {
    std::size_t r = 1;
    while (e-- > 0) r *= base;
    return r;
}

} // namespace

TensorField::TensorField(Chart chart, std::vector<Slot> slots)
    : chart_(std::move(chart)), slots_(std::move(slots)) {
    components_.resize(ipow(chart_.dim(), slots_.size()));
}

TensorField::TensorField(Chart chart, std::vector<Slot> slots, std::vector<Expr> components,
                         std::vector<SymmetricPair> symmetries)
    : chart_(std::move(chart)), slots_(std::move(slots)), components_(std::move(components)),
      symmetries_(std::move(symmetries)) {
    if (components_.size() != ipow(chart_.dim(), slots_.size()))
        throw ValidationError("bad_shape", "component count does not match dim^rank");
    for (auto [a, b] : symmetries_) {
        if (a >= rank() || b >= rank() || a == b || slots_[a] != slots_[b])
            throw ValidationError("bad_symmetry", "invalid symmetric slot pair");
        for (std::size_t f = 0; f < components_.size(); ++f) {
            Index idx = unflat(f);
            if (idx[a] >= idx[b]) continue;
            std::swap(idx[a], idx[b]);
            if (components_[f] != components_[flat(idx)])
                throw ValidationError("asymmetric_tensor", "declared symmetry does not hold");
        }
    }
}

TensorField TensorField::generate(Chart chart, std::vector<Slot> slots,
                                  const std::function<Expr(const Index&)>& fn,
                                  std::vector<SymmetricPair> symmetries) {
    TensorField t(std::move(chart), std::move(slots));
    for (std::size_t f = 0; f < t.components_.size(); ++f) t.components_[f] = fn(t.unflat(f));
    return TensorField(t.chart_, t.slots_, std::move(t.components_), std::move(symmetries));
}

TensorField TensorField::vector_field(Chart chart, std::vector<Expr> components) {
    return TensorField(std::move(chart), {Slot::Upper}, std::move(components));
}

TensorField TensorField::covector(Chart chart, std::vector<Expr> components) {
    return TensorField(std::move(chart), {Slot::Lower}, std::move(components));
}

std::size_t TensorField::flat(std::span<const std::size_t> index) const {
    std::size_t f = 0;
    for (std::size_t i : index) f = f * dim() + i;
    return f;
}

TensorField::Index TensorField::unflat(std::size_t f) const {
    Index idx(rank());
    for (std::size_t s = rank(); s-- > 0;) {
        idx[s] = f % dim();
        f /= dim();
    }
    return idx;
}

bool TensorField::is_zero() const {
    return std::all_of(components_.begin(), components_.end(), [](const Expr& e) { return e.is_zero(); });
}

bool TensorField::same_shape(const TensorField& o) const { return chart_ == o.chart_ && slots_ == o.slots_; }

bool TensorField::operator==(const TensorField& o) const {
    return same_shape(o) && components_ == o.components_;
}

TensorField TensorField::operator+(const TensorField& o) const {
    if (!same_shape(o)) throw ValidationError("chart_mismatch", "tensor shapes differ");
    std::vector<Expr> c(components_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = components_[i] + o.components_[i];
    return TensorField(chart_, slots_, std::move(c), symmetries_ == o.symmetries_ ? symmetries_ : std::vector<SymmetricPair>{});
}

TensorField TensorField::operator-(const TensorField& o) const {
    if (!same_shape(o)) throw ValidationError("chart_mismatch", "tensor shapes differ");
    std::vector<Expr> c(components_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = components_[i] - o.components_[i];
    return TensorField(chart_, slots_, std::move(c), symmetries_ == o.symmetries_ ? symmetries_ : std::vector<SymmetricPair>{});
}

TensorField TensorField::operator*(const Expr& s) const {
    return map([&s](const Expr& e) { return e * s; });
}

TensorField TensorField::map(const std::function<Expr(const Expr&)>& fn) const {
    std::vector<Expr> c(components_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = fn(components_[i]);
    return TensorField(chart_, slots_, std::move(c), symmetries_);
}

TensorField TensorField::permuted_to(const Chart& target) const {
    if (!chart_.same_coordinates(target))
        throw ValidationError("chart_mismatch", "charts '" + chart_.name() + "' and '" + target.name() +
                                                    "' have different coordinates");
    std::vector<std::size_t> perm(dim());
    for (std::size_t i = 0; i < dim(); ++i) perm[i] = *chart_.index_of(target.id(i));
    TensorField out(target, slots_);
    for (std::size_t f = 0; f < out.components_.size(); ++f) {
        Index idx = out.unflat(f);
        for (std::size_t& i : idx) i = perm[i];
        out.components_[f] = components_[flat(idx)];
    }
    return TensorField(target, slots_, std::move(out.components_), symmetries_);
}

std::vector<TensorField::Index> TensorField::nonzero_indices() const {
    std::vector<Index> out;
    for (std::size_t f = 0; f < components_.size(); ++f)
        if (!components_[f].is_zero()) out.push_back(unflat(f));
    return out;
}

// ---------------------------------------------------------------------------

struct MetricTensor::Cache {
    std::once_flag inverse_once;
    std::once_flag connection_once;
    TensorField inverse;
    AffineConnection connection;
};

MetricTensor::MetricTensor(TensorField g) : g_(std::move(g)), cache_(std::make_shared<Cache>()) {
    if (g_.slots() != std::vector<Slot>{Slot::Lower, Slot::Lower})
        throw ValidationError("bad_metric", "a metric must be a (0,2) tensor");
    for (std::size_t i = 0; i < dim(); ++i)
        for (std::size_t j = i + 1; j < dim(); ++j)
            if (g_(i, j) != g_(j, i)) throw ValidationError("asymmetric_metric", "metric is not symmetric");
    if (g_.symmetries().empty())
        g_ = TensorField(g_.chart(), g_.slots(), g_.components(), {{0, 1}});
}

MetricTensor MetricTensor::from_components(Chart chart, std::vector<Expr> components) {
    return MetricTensor(TensorField(std::move(chart), {Slot::Lower, Slot::Lower}, std::move(components)));
}

ExprMatrix MetricTensor::matrix() const {
    ExprMatrix m(dim());
    m.entries = g_.components();
    return m;
}

Expr MetricTensor::determinant() const { return pwamb::determinant(matrix()); }

const TensorField& MetricTensor::inverse() const {
    std::call_once(cache_->inverse_once, [this] {
        auto inv = invert(matrix());
        if (!inv) throw ValidationError("degenerate_metric", "metric determinant is identically zero");
        cache_->inverse = TensorField(chart(), {Slot::Upper, Slot::Upper}, std::move(inv->entries), {{0, 1}});
    });
    return cache_->inverse;
}

const AffineConnection& MetricTensor::levi_civita() const {
    std::call_once(cache_->connection_once, [this] { cache_->connection = pwamb::levi_civita(*this); });
    return cache_->connection;
}

// ---------------------------------------------------------------------------

AffineConnection::AffineConnection(Chart chart, std::vector<Expr> christoffel, Expr volume_density,
                                   Rational volume_exponent)
    : chart_(std::move(chart)), gamma_(std::move(christoffel)), volume_density_(std::move(volume_density)),
      volume_exponent_(std::move(volume_exponent)) {
    if (gamma_.size() != ipow(chart_.dim(), 3))
        throw ValidationError("bad_shape", "Christoffel array must have dim^3 entries");
    if (volume_density_.is_zero()) throw ValidationError("volume", "volume density must be nonzero");
}

std::optional<std::string> AffineConnection::torsion_violation() const {
    const std::size_t n = dim();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if ((*this)(a, c, b) != (*this)(b, c, a))
                    return "Gamma_" + std::to_string(a + 1) + "^" + std::to_string(c + 1) + "_" +
                           std::to_string(b + 1) + " != Gamma_" + std::to_string(b + 1) + "^" +
                           std::to_string(c + 1) + "_" + std::to_string(a + 1);
    return std::nullopt;
}

std::optional<std::string> AffineConnection::volume_violation() const {
    const std::size_t n = dim();
    for (std::size_t a = 0; a < n; ++a) {
        Expr trace;
        for (std::size_t b = 0; b < n; ++b) trace += (*this)(a, b, b);
        Expr expected = volume_density_.derivative(chart_.id(a)) / volume_density_ * Expr(volume_exponent_);
        if (trace != expected)
            return "Gamma_" + std::to_string(a + 1) + "^B_B = " + trace.str() + " but d ln(volume) = " +
                   expected.str();
    }
    return std::nullopt;
}

void AffineConnection::validate() const {
    if (auto t = torsion_violation()) throw ValidationError("torsion", "connection has torsion: " + *t);
    if (auto v = volume_violation())
        throw ValidationError("volume", "connection does not preserve the volume form: " + *v);
}

// ---------------------------------------------------------------------------

CoordinateMap compose(const CoordinateMap& outer, const CoordinateMap& inner) {
    if (!(inner.target == outer.source))
        throw ValidationError("chart_mismatch", "composition charts do not match");
    std::map<SymbolId, Expr> rep;
    for (std::size_t i = 0; i < inner.target.dim(); ++i) rep[inner.target.id(i)] = inner.components[i];
    CoordinateMap out{inner.source, outer.target, {}};
    for (const Expr& e : outer.components) out.components.push_back(e.substitute(rep));
    return out;
}

namespace {

auto coordinate_deriv(const Chart& chart) {
    return [&chart](const Expr& e, std::size_t k) { return e.derivative(chart.id(k)); };
}

} // namespace

AffineConnection levi_civita(const MetricTensor& g) {
    const TensorField& inv = g.inverse();
    auto gamma = curvature::levi_civita_symbols<Expr>(g.tensor().components(), inv.components(), g.dim(),
                                                      coordinate_deriv(g.chart()));
    return AffineConnection(g.chart(), std::move(gamma), g.determinant(), Rational(1, 2));
}

TensorField riemann(const AffineConnection& conn) {
    auto r = curvature::riemann_components<Expr>(conn.christoffel(), conn.dim(), coordinate_deriv(conn.chart()));
    return TensorField(conn.chart(), {Slot::Upper, Slot::Lower, Slot::Lower, Slot::Lower}, std::move(r));
}

TensorField ricci(const AffineConnection& conn) {
    const std::size_t n = conn.dim();
    auto r = curvature::ricci_components<Expr>(conn.christoffel(), n, coordinate_deriv(conn.chart()),
                                               [](std::size_t, std::size_t) { return true; });
    bool symmetric = true;
    for (std::size_t a = 0; a < n && symmetric; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (r[a * n + b] != r[b * n + a]) {
                symmetric = false;
                break;
            }
    if (!symmetric) {
        if (!conn.torsion_violation() && !conn.volume_violation())
            throw MathError("internal", "Ricci tensor of a torsion-free volume-preserving connection is not symmetric");
        return TensorField(conn.chart(), {Slot::Lower, Slot::Lower}, std::move(r));
    }
    return TensorField(conn.chart(), {Slot::Lower, Slot::Lower}, std::move(r), {{0, 1}});
}

TensorField lie_derivative(const TensorField& x, const TensorField& t) {
    if (x.slots() != std::vector<Slot>{Slot::Upper})
        throw ValidationError("bad_vector_field", "Lie derivative needs a vector field");
    if (x.chart() != t.chart()) throw ValidationError("chart_mismatch", "vector field and tensor charts differ");
    const Chart& chart = t.chart();
    const std::size_t n = chart.dim();
    // dx[c*n+k] = d_k X^c
    std::vector<Expr> dx(n * n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t k = 0; k < n; ++k)
            if (!x(c).is_zero()) dx[c * n + k] = x(c).derivative(chart.id(k));

    std::vector<Expr> out(t.components().size());
    for (std::size_t f = 0; f < out.size(); ++f) {
        TensorField::Index idx = t.unflat(f);
        Expr v;
        if (!t(f).is_zero())
            for (std::size_t c = 0; c < n; ++c)
                if (!x(c).is_zero()) v += x(c) * t(f).derivative(chart.id(c));
        for (std::size_t s = 0; s < t.rank(); ++s) {
            const std::size_t orig = idx[s];
            for (std::size_t c = 0; c < n; ++c) {
                idx[s] = c;
                const Expr& tc = t.at(idx);
                if (tc.is_zero()) continue;
                if (t.slots()[s] == Slot::Lower) {
                    if (!dx[c * n + orig].is_zero()) v += tc * dx[c * n + orig];
                } else {
                    if (!dx[orig * n + c].is_zero()) v -= tc * dx[orig * n + c];
                }
            }
            idx[s] = orig;
        }
        out[f] = v;
    }
    return TensorField(chart, t.slots(), std::move(out));
}

Expr laplacian(const MetricTensor& g, const Expr& f) {
    const Chart& chart = g.chart();
    const std::size_t n = g.dim();
    const TensorField& inv = g.inverse();
    const AffineConnection& conn = g.levi_civita();
    std::vector<Expr> df(n);
    for (std::size_t c = 0; c < n; ++c) df[c] = f.derivative(chart.id(c));
    Expr sum;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (inv(a, b).is_zero()) continue;
            Expr hess = df[b].is_zero() ? Expr() : df[b].derivative(chart.id(a));
            for (std::size_t c = 0; c < n; ++c)
                if (!df[c].is_zero() && !conn(a, c, b).is_zero()) hess -= conn(a, c, b) * df[c];
            if (!hess.is_zero()) sum += inv(a, b) * hess;
        }
    return sum;
}

TensorField pullback(const CoordinateMap& phi, const TensorField& covariant) {
    for (Slot s : covariant.slots())
        if (s != Slot::Lower) throw ValidationError("bad_tensor", "pullback needs a covariant tensor");
    if (phi.components.size() != phi.target.dim())
        throw ValidationError("bad_map", "coordinate map needs one expression per target coordinate");
    const TensorField t = covariant.permuted_to(phi.target);
    const std::size_t m = phi.source.dim(), n = phi.target.dim(), r = t.rank();

    std::map<SymbolId, Expr> rep;
    for (std::size_t i = 0; i < n; ++i) rep[phi.target.id(i)] = phi.components[i];
    std::vector<Expr> jac(n * m); // jac[c*m+a] = d_a phi^c
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t a = 0; a < m; ++a) jac[c * m + a] = phi.components[c].derivative(phi.source.id(a));
    std::vector<Expr> pulled(t.components().size());
    for (std::size_t f = 0; f < pulled.size(); ++f)
        if (!t(f).is_zero()) pulled[f] = t(f).substitute(rep);

    // Transform one slot at a time: shape goes from n^r to m^r.
    std::vector<Expr> cur = std::move(pulled);
    std::vector<std::size_t> dims(r, n);
    for (std::size_t s = 0; s < r; ++s) {
        std::vector<std::size_t> next_dims = dims;
        next_dims[s] = m;
        std::size_t total = 1;
        for (std::size_t d : next_dims) total *= d;
        std::vector<Expr> next(total);
        for (std::size_t f = 0; f < total; ++f) {
            std::vector<std::size_t> idx(r);
            std::size_t rem = f;
            for (std::size_t k = r; k-- > 0;) {
                idx[k] = rem % next_dims[k];
                rem /= next_dims[k];
            }
            const std::size_t a = idx[s];
            Expr v;
            for (std::size_t c = 0; c < n; ++c) {
                idx[s] = c;
                std::size_t g = 0;
                for (std::size_t k = 0; k < r; ++k) g = g * dims[k] + idx[k];
                if (cur[g].is_zero() || jac[c * m + a].is_zero()) continue;
                v += cur[g] * jac[c * m + a];
            }
            next[f] = v;
        }
        cur = std::move(next);
        dims = next_dims;
    }
    return TensorField(phi.source, t.slots(), std::move(cur));
}

MetricTensor pullback_metric(const CoordinateMap& phi, const MetricTensor& g) {
    return MetricTensor(pullback(phi, g.tensor()));
}

TensorField covariant_derivative(const AffineConnection& conn, const TensorField& t) {
    if (conn.chart() != t.chart()) throw ValidationError("chart_mismatch", "connection and tensor charts differ");
    const Chart& chart = t.chart();
    const std::size_t n = chart.dim();
    std::vector<Slot> slots{Slot::Lower};
    slots.insert(slots.end(), t.slots().begin(), t.slots().end());
    TensorField out(chart, slots);
    std::vector<Expr> comps(out.components().size());
    for (std::size_t f = 0; f < comps.size(); ++f) {
        TensorField::Index full = out.unflat(f);
        const std::size_t c = full[0];
        TensorField::Index idx(full.begin() + 1, full.end());
        Expr v = t.at(idx).is_zero() ? Expr() : t.at(idx).derivative(chart.id(c));
        for (std::size_t s = 0; s < t.rank(); ++s) {
            const std::size_t orig = idx[s];
            for (std::size_t d = 0; d < n; ++d) {
                idx[s] = d;
                const Expr& td = t.at(idx);
                if (td.is_zero()) continue;
                if (t.slots()[s] == Slot::Upper) {
                    if (!conn(c, orig, d).is_zero()) v += conn(c, orig, d) * td;
                } else {
                    if (!conn(c, d, orig).is_zero()) v -= conn(c, d, orig) * td;
                }
            }
            idx[s] = orig;
        }
        comps[f] = v;
    }
    return TensorField(chart, std::move(slots), std::move(comps));
}

} // namespace pwamb
