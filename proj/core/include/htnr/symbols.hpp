#pragma once

#include <compare>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace htnr {

// Interned name. Equality is pointer equality; ordering compares the
// spelled-out names so that canonical sorts are stable across runs and
// independent of interning order.
class Symbol {
public:
    Symbol() : str_(nullptr) {}

    const std::string& str() const { return *str_; }
    bool valid() const { return str_ != nullptr; }

    friend bool operator==(Symbol a, Symbol b) { return a.str_ == b.str_; }
    friend bool operator!=(Symbol a, Symbol b) { return a.str_ != b.str_; }
    friend std::strong_ordering operator<=>(Symbol a, Symbol b) {
        if (a.str_ == b.str_) return std::strong_ordering::equal;
        return *a.str_ <=> *b.str_;
    }

    // Identity hash; stable within a run, never used for canonical output.
    size_t id_hash() const { return std::hash<const void*>{}(str_); }

private:
    friend class SymbolTable;
    explicit Symbol(const std::string* s) : str_(s) {}
    const std::string* str_;
};

// Append-only intern pool. A Domain owns one table; everything parsed or
// derived from that domain shares it. Thread-safe so concurrent searches
// may intern (rarely needed) without coordination.
class SymbolTable {
public:
    SymbolTable() = default;
    SymbolTable(const SymbolTable&) = delete;
    SymbolTable& operator=(const SymbolTable&) = delete;

    Symbol intern(std::string_view name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = index_.find(name);
        if (it != index_.end()) return Symbol(it->second);
        const std::string& stored = pool_.emplace_back(name);
        index_.emplace(stored, &stored);
        return Symbol(&stored);
    }

    size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return pool_.size();
    }

private:
    mutable std::mutex mu_;
    std::deque<std::string> pool_;  // stable addresses
    std::unordered_map<std::string_view, const std::string*> index_;
};

using SymbolTablePtr = std::shared_ptr<SymbolTable>;

}  // namespace htnr

template <>
struct std::hash<htnr::Symbol> {
    size_t operator()(htnr::Symbol s) const { return s.id_hash(); }
};
