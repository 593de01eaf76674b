#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pwamb {

using SymbolId = std::uint32_t;

enum class SymbolKind {
    Coordinate, // chart coordinate
    Unknown,    // solver unknown; a separate namespace from coordinates
    Log,        // ln(c) for a single coordinate c
};

struct SymbolInfo {
    std::string name;
    SymbolKind kind;
    // Log: the coordinate inside the logarithm.
    // Unknown derivative: the unknown being differentiated.
    SymbolId argument = 0;
    // Unknown derivative: coordinate of the last differentiation.
    SymbolId direction = 0;
    // Unknowns only: number of coordinate derivatives applied (0 for a plain unknown).
    int derivative_order = 0;
};

// Process-wide interning of symbol names. Ids are stable for the lifetime of
// the process; lookups and insertions are thread-safe.
namespace symbols {

SymbolId coordinate(std::string_view name);
SymbolId unknown(std::string_view name);
SymbolId log_of(SymbolId coordinate);
// Symbol standing for d(u)/d(coord) when unknowns are treated as functions.
SymbolId unknown_derivative(SymbolId u, SymbolId coordinate);
// A new unknown whose name is `prefix` followed by a process-unique suffix.
SymbolId fresh_unknown(std::string_view prefix);

const SymbolInfo& info(SymbolId id);

inline const std::string& name(SymbolId id) { return info(id).name; }
inline SymbolKind kind(SymbolId id) { return info(id).kind; }
inline bool is_coordinate(SymbolId id) { return kind(id) == SymbolKind::Coordinate; }
inline bool is_unknown(SymbolId id) { return kind(id) == SymbolKind::Unknown; }
inline bool is_log(SymbolId id) { return kind(id) == SymbolKind::Log; }

} // namespace symbols

} // namespace pwamb
