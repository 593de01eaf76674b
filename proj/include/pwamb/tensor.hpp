#pragma once

#include "pwamb/chart.hpp"
#include "pwamb/expr.hpp"
#include "pwamb/linalg.hpp"

#include <functional>
#include <initializer_list>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace pwamb {

enum class Slot { Lower, Upper };

// Dense component array over a chart. Slot order is recorded, components are
// stored row-major with the first slot most significant.
class TensorField {
public:
    using Index = std::vector<std::size_t>;
    using SymmetricPair = std::pair<std::size_t, std::size_t>;

    TensorField() = default;
    // Zero tensor.
    TensorField(Chart chart, std::vector<Slot> slots);
    // Declared symmetric slot pairs are checked component-wise.
    TensorField(Chart chart, std::vector<Slot> slots, std::vector<Expr> components,
                std::vector<SymmetricPair> symmetries = {});

    static TensorField generate(Chart chart, std::vector<Slot> slots,
                                const std::function<Expr(const Index&)>& fn,
                                std::vector<SymmetricPair> symmetries = {});
    static TensorField vector_field(Chart chart, std::vector<Expr> components);
    static TensorField covector(Chart chart, std::vector<Expr> components);

    const Chart& chart() const { return chart_; }
    std::size_t dim() const { return chart_.dim(); }
    std::size_t rank() const { return slots_.size(); }
    const std::vector<Slot>& slots() const { return slots_; }
    const std::vector<SymmetricPair>& symmetries() const { return symmetries_; }
    const std::vector<Expr>& components() const { return components_; }

    std::size_t flat(std::span<const std::size_t> index) const;
    Index unflat(std::size_t flat) const;
    const Expr& at(std::span<const std::size_t> index) const { return components_[flat(index)]; }
    const Expr& at(std::initializer_list<std::size_t> index) const {
        return at(std::span<const std::size_t>(index.begin(), index.size()));
    }
    const Expr& operator()(std::size_t i) const { return components_[i]; }
    const Expr& operator()(std::size_t i, std::size_t j) const { return components_[i * dim() + j]; }
    const Expr& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return components_[(i * dim() + j) * dim() + k];
    }

    bool is_zero() const;
    bool same_shape(const TensorField& o) const;
    bool operator==(const TensorField& o) const;
    bool operator!=(const TensorField& o) const { return !(*this == o); }

    TensorField operator+(const TensorField& o) const;
    TensorField operator-(const TensorField& o) const;
    TensorField operator*(const Expr& s) const;
    TensorField map(const std::function<Expr(const Expr&)>& fn) const;

    // Same tensor expressed on a chart with the same coordinates in another order.
    TensorField permuted_to(const Chart& target) const;
    // Indices of components that are not the zero expression.
    std::vector<Index> nonzero_indices() const;

private:
    Chart chart_;
    std::vector<Slot> slots_;
    std::vector<Expr> components_;
    std::vector<SymmetricPair> symmetries_;
};

class AffineConnection;

// Symmetric nondegenerate (0,2) tensor with a lazily computed exact inverse
// and Levi-Civita connection.
class MetricTensor {
public:
    MetricTensor() = default;
    explicit MetricTensor(TensorField g);
    static MetricTensor from_components(Chart chart, std::vector<Expr> components);

    const TensorField& tensor() const { return g_; }
    const Chart& chart() const { return g_.chart(); }
    std::size_t dim() const { return g_.dim(); }
    const Expr& operator()(std::size_t i, std::size_t j) const { return g_(i, j); }

    ExprMatrix matrix() const;
    Expr determinant() const;
    // Throws ValidationError("degenerate_metric") when singular.
    const TensorField& inverse() const;
    const AffineConnection& levi_civita() const;

    bool operator==(const MetricTensor& o) const { return g_ == o.g_; }
    bool operator!=(const MetricTensor& o) const { return !(g_ == o.g_); }

    MetricTensor permuted_to(const Chart& target) const { return MetricTensor(g_.permuted_to(target)); }

private:
    struct Cache;
    TensorField g_;
    std::shared_ptr<Cache> cache_;
};

// Christoffel symbols Gamma_A^C_B (first lower index = differentiating
// direction): nabla_{d_A} d_B = Gamma_A^C_B d_C. The preserved volume is
// density^exponent * dx^1 ^ ... ^ dx^n; the default is the coordinate volume.
class AffineConnection {
public:
    AffineConnection() = default;
    AffineConnection(Chart chart, std::vector<Expr> christoffel, Expr volume_density = Expr(1),
                     Rational volume_exponent = 1);

    const Chart& chart() const { return chart_; }
    std::size_t dim() const { return chart_.dim(); }
    const Expr& operator()(std::size_t a, std::size_t c, std::size_t b) const {
        return gamma_[(a * dim() + c) * dim() + b];
    }
    const std::vector<Expr>& christoffel() const { return gamma_; }
    const Expr& volume_density() const { return volume_density_; }
    const Rational& volume_exponent() const { return volume_exponent_; }

    // Empty when torsion-free; otherwise a description of the first violation.
    std::optional<std::string> torsion_violation() const;
    // Empty when Gamma_A^B_B = d_A ln(volume) for every A.
    std::optional<std::string> volume_violation() const;
    // Throws ValidationError with code "torsion" or "volume".
    void validate() const;

    bool operator==(const AffineConnection& o) const {
        return chart_ == o.chart_ && gamma_ == o.gamma_;
    }

private:
    Chart chart_;
    std::vector<Expr> gamma_;
    Expr volume_density_{1};
    Rational volume_exponent_{1};
};

// A coordinate map given by one expression per target coordinate over the
// source chart.
struct CoordinateMap {
    Chart source;
    Chart target;
    std::vector<Expr> components;
};

CoordinateMap compose(const CoordinateMap& outer, const CoordinateMap& inner);

AffineConnection levi_civita(const MetricTensor& g);
TensorField riemann(const AffineConnection& conn);
TensorField ricci(const AffineConnection& conn);
inline TensorField ricci(const MetricTensor& g) { return ricci(g.levi_civita()); }
TensorField lie_derivative(const TensorField& x, const TensorField& t);
Expr laplacian(const MetricTensor& g, const Expr& f);
MetricTensor pullback_metric(const CoordinateMap& phi, const MetricTensor& g);
TensorField pullback(const CoordinateMap& phi, const TensorField& covariant);
TensorField covariant_derivative(const AffineConnection& conn, const TensorField& t);

struct IsotropyReport {
    bool isotropic = true;
    // One entry per failing full contraction: the slot pairing and its value.
    std::vector<std::pair<std::string, Expr>> failures;
};
IsotropyReport check_isotropic(const MetricTensor& g, const TensorField& t);

struct DistributionReport {
    bool isotropic = true;
    bool parallel = true;
    std::vector<std::string> failures;
    bool passed() const { return isotropic && parallel; }
};
// Throws ValidationError("dependent_frame") when the frame is linearly
// dependent at a random rational test point.
DistributionReport check_parallel_distribution(const MetricTensor& g, const std::vector<TensorField>& frame);

} // namespace pwamb
