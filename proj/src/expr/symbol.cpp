#include "pwamb/symbol.hpp"

#include "pwamb/error.hpp"

#include <array>
#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

namespace pwamb::symbols {
namespace {

// Entries live in fixed-size chunks that are never moved, so readers need no
// lock: an id is only handed out after its entry is fully written.
constexpr std::size_t kChunkBits = 10;
constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
constexpr std::size_t kMaxChunks = 4096;

using Chunk = std::array<SymbolInfo, kChunkSize>;

struct Table {
    std::mutex write_mutex;
    std::array<std::atomic<Chunk*>, kMaxChunks> chunks{};
    std::atomic<std::size_t> size{0};
    std::map<std::tuple<SymbolKind, std::string>, SymbolId> index;
    std::uint64_t fresh_counter = 0;

    ~Table() {
        for (auto& c : chunks) delete c.load();
    }
};

Table& table() {
    static Table t;
    return t;
}

SymbolId intern(SymbolInfo info) {
    Table& t = table();
    std::lock_guard lock(t.write_mutex);
    auto key = std::make_tuple(info.kind, info.name);
    if (auto it = t.index.find(key); it != t.index.end()) return it->second;
    const std::size_t id = t.size.load(std::memory_order_relaxed);
    const std::size_t chunk = id >> kChunkBits;
    if (chunk >= kMaxChunks) throw Error("symbol_table_full", "too many symbols");
    Chunk* c = t.chunks[chunk].load(std::memory_order_relaxed);
    if (c == nullptr) {
        c = new Chunk();
        t.chunks[chunk].store(c, std::memory_order_release);
    }
    (*c)[id & (kChunkSize - 1)] = std::move(info);
    t.size.store(id + 1, std::memory_order_release);
    t.index.emplace(std::move(key), static_cast<SymbolId>(id));
    return static_cast<SymbolId>(id);
}

} // namespace

SymbolId coordinate(std::string_view name) {
    if (name.empty()) throw ValidationError("bad_symbol", "empty coordinate name");
    return intern({std::string(name), SymbolKind::Coordinate});
}

SymbolId unknown(std::string_view name) {
    if (name.empty()) throw ValidationError("bad_symbol", "empty unknown name");
    return intern({std::string(name), SymbolKind::Unknown});
}

SymbolId log_of(SymbolId coord) {
    if (!is_coordinate(coord))
        throw MathError("bad_log", "ln() argument must be a coordinate");
    SymbolInfo s{"ln(" + name(coord) + ")", SymbolKind::Log};
    s.argument = coord;
    return intern(std::move(s));
}

SymbolId unknown_derivative(SymbolId u, SymbolId coord) {
    const SymbolInfo& base = info(u);
    if (base.kind != SymbolKind::Unknown)
        throw MathError("bad_symbol", "unknown_derivative of a non-unknown symbol");
    SymbolInfo s{base.name + "_d" + name(coord), SymbolKind::Unknown};
    s.argument = u;
    s.direction = coord;
    s.derivative_order = base.derivative_order + 1;
    return intern(std::move(s));
}

SymbolId fresh_unknown(std::string_view prefix) {
    std::uint64_t n;
    {
        std::lock_guard lock(table().write_mutex);
        n = ++table().fresh_counter;
    }
    return unknown(std::string(prefix) + "#" + std::to_string(n));
}

const SymbolInfo& info(SymbolId id) {
    Table& t = table();
    if (id >= t.size.load(std::memory_order_acquire))
        throw Error("bad_symbol", "symbol id out of range");
    Chunk* c = t.chunks[id >> kChunkBits].load(std::memory_order_acquire);
    return (*c)[id & (kChunkSize - 1)];
}

} // namespace pwamb::symbols
