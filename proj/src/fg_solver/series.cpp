#include "pwamb/series.hpp"

#include "pwamb/error.hpp"

#include <algorithm>

namespace pwamb {

RhoSeries::RhoSeries(std::vector<Expr> coefficients, int valid) : coeffs_(std::move(coefficients)), valid_(valid) {
    if (valid_ < 0) throw MathError("series_truncated", "series has no known coefficients");
    normalize();
}

void RhoSeries::normalize() {
    if (!is_exact() && coeffs_.size() > static_cast<std::size_t>(valid_)) coeffs_.resize(valid_);
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

int RhoSeries::order() const {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero()) return static_cast<int>(i);
    return valid_;
}

Expr RhoSeries::coefficient(int k) const {
    if (k >= valid_)
        throw MathError("series_truncated",
                        "coefficient " + std::to_string(k) + " requested, series known below " + std::to_string(valid_));
    return static_cast<std::size_t>(k) < coeffs_.size() ? coeffs_[k] : Expr();
}

RhoSeries RhoSeries::truncated(int valid) const {
    RhoSeries s = *this;
    s.valid_ = std::min(valid_, valid);
    s.normalize();
    return s;
}

RhoSeries RhoSeries::map(const std::function<Expr(const Expr&)>& fn) const {
    RhoSeries s = *this;
    for (Expr& c : s.coeffs_) c = fn(c);
    s.normalize();
    return s;
}

RhoSeries RhoSeries::derivative_rho() const {
    if (is_zero()) return {};
    std::vector<Expr> c;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) c.push_back(coeffs_[i] * Expr(static_cast<long>(i)));
    return RhoSeries(std::move(c), is_exact() ? kExact : valid_ - 1);
}

RhoSeries operator+(const RhoSeries& a, const RhoSeries& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const int valid = std::min(a.valid_, b.valid_);
    std::vector<Expr> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < a.coeffs_.size()) c[i] += a.coeffs_[i];
        if (i < b.coeffs_.size()) c[i] += b.coeffs_[i];
    }
    return RhoSeries(std::move(c), valid);
}

RhoSeries RhoSeries::operator-() const {
    RhoSeries s = *this;
    for (Expr& c : s.coeffs_) c = -c;
    return s;
}

RhoSeries operator-(const RhoSeries& a, const RhoSeries& b) { return a + (-b); }

RhoSeries operator*(const RhoSeries& a, const RhoSeries& b) {
    if (a.is_zero() || b.is_zero()) return {};
    int valid = std::min(a.valid_ + b.order(), b.valid_ + a.order());
    // Never claim more than the better-known factor; keeps degrees bounded.
    if (!a.is_exact() || !b.is_exact()) {
        int cap = 0;
        if (!a.is_exact()) cap = std::max(cap, a.valid_);
        if (!b.is_exact()) cap = std::max(cap, b.valid_);
        valid = std::min(valid, cap);
    } else {
        valid = RhoSeries::kExact;
    }
    std::size_t len = a.coeffs_.size() + b.coeffs_.size() - 1;
    if (valid < RhoSeries::kExact) len = std::min(len, static_cast<std::size_t>(valid));
    std::vector<Expr> c(len);
    for (std::size_t i = 0; i < a.coeffs_.size() && i < len; ++i) {
        if (a.coeffs_[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.coeffs_.size() && i + j < len; ++j)
            if (!b.coeffs_[j].is_zero()) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return RhoSeries(std::move(c), valid);
}

RhoSeries scale(const RhoSeries& s, const Rational& c) {
    return s.map([&c](const Expr& e) { return e * Expr(c); });
}

} // namespace pwamb
