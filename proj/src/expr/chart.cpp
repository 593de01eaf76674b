#include "pwamb/chart.hpp"

#include "pwamb/error.hpp"

#include <algorithm>
#include <cctype>

namespace pwamb {
namespace {

bool valid_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

} // namespace

Chart::Chart(std::string name, std::vector<std::string> coords, std::vector<std::string> positive)
    : name_(std::move(name)), coords_(std::move(coords)) {
    for (const std::string& c : coords_) {
        if (!valid_identifier(c) || c == "ln")
            throw ValidationError("bad_chart", "invalid coordinate name '" + c + "'");
        SymbolId id = symbols::coordinate(c);
        if (std::find(ids_.begin(), ids_.end(), id) != ids_.end())
            throw ValidationError("bad_chart", "duplicate coordinate '" + c + "'");
        ids_.push_back(id);
    }
    for (const std::string& p : positive) {
        if (std::find(coords_.begin(), coords_.end(), p) == coords_.end())
            throw ValidationError("bad_chart", "positive coordinate '" + p + "' is not in the chart");
        positive_.insert(symbols::coordinate(p));
    }
}

Expr Chart::coord(std::string_view name) const { return Expr::symbol(ids_.at(require_index(name))); }

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < coords_.size(); ++i)
        if (coords_[i] == name) return i;
    return std::nullopt;
}

std::optional<std::size_t> Chart::index_of(SymbolId id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (ids_[i] == id) return i;
    return std::nullopt;
}

std::size_t Chart::require_index(std::string_view name) const {
    auto i = index_of(name);
    if (!i)
        throw ValidationError("unknown_coordinate",
                              "unknown coordinate '" + std::string(name) + "' in chart '" + name_ + "'");
    return *i;
}

bool Chart::is_positive(std::string_view name) const {
    auto i = index_of(name);
    return i && positive_.count(ids_[*i]) > 0;
}

std::vector<std::string> Chart::positive_names() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (positive_.count(ids_[i])) out.push_back(coords_[i]);
    return out;
}

bool Chart::operator==(const Chart& o) const { return ids_ == o.ids_ && positive_ == o.positive_; }

bool Chart::same_coordinates(const Chart& o) const {
    if (ids_.size() != o.ids_.size()) return false;
    return std::all_of(ids_.begin(), ids_.end(), [&](SymbolId id) { return o.index_of(id).has_value(); });
}

Expr differentiate(const Expr& e, std::string_view coord, const Chart& chart) {
    return e.derivative(chart.id(chart.require_index(coord)));
}

Rational evaluate(const Expr& e, const std::map<std::string, Rational>& point, const Chart& chart) {
    std::map<SymbolId, Rational> p;
    for (const auto& [name, value] : point) {
        SymbolId id = chart.id(chart.require_index(name));
        if (chart.is_positive(id) && value <= 0)
            throw ValidationError("bad_point", "coordinate '" + name + "' is declared positive");
        p[id] = value;
    }
    return e.evaluate(p);
}

} // namespace pwamb
