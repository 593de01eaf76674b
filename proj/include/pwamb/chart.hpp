#pragma once

#include "pwamb/expr.hpp"
#include "pwamb/symbol.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pwamb {

// An ordered coordinate patch. Coordinates with the same name in different
// charts are the same symbol, which is what lets base coordinates x^A be
// shared between N, T*N, the cone and the ambient space.
class Chart {
public:
    Chart() = default;
    Chart(std::string name, std::vector<std::string> coords,
          std::vector<std::string> positive = {});

    const std::string& name() const { return name_; }
    std::size_t dim() const { return coords_.size(); }
    const std::vector<std::string>& coords() const { return coords_; }
    const std::vector<SymbolId>& ids() const { return ids_; }
    SymbolId id(std::size_t i) const { return ids_.at(i); }
    const std::string& coord_name(std::size_t i) const { return coords_.at(i); }
    Expr coord(std::size_t i) const { return Expr::symbol(ids_.at(i)); }
    Expr coord(std::string_view name) const;

    std::optional<std::size_t> index_of(std::string_view name) const;
    std::optional<std::size_t> index_of(SymbolId id) const;
    std::size_t require_index(std::string_view name) const;

    bool is_positive(SymbolId id) const { return positive_.count(id) > 0; }
    bool is_positive(std::string_view name) const;
    std::vector<std::string> positive_names() const;

    // Same coordinate names in the same order with the same positivity.
    bool operator==(const Chart& o) const;
    bool operator!=(const Chart& o) const { return !(*this == o); }
    // Same coordinate set, any order.
    bool same_coordinates(const Chart& o) const;

private:
    std::string name_;
    std::vector<std::string> coords_;
    std::vector<SymbolId> ids_;
    std::set<SymbolId> positive_;
};

// Parses the expression grammar: rational literals, chart coordinates,
// + - * / ^integer, ln(coordinate), parentheses.
Expr parse_expr(std::string_view text, const Chart& chart);

// Partial derivative with respect to a named chart coordinate.
Expr differentiate(const Expr& e, std::string_view coord, const Chart& chart);

// Exact evaluation at a point given by coordinate names.
Rational evaluate(const Expr& e, const std::map<std::string, Rational>& point, const Chart& chart);

Rational parse_rational(std::string_view text);

} // namespace pwamb
