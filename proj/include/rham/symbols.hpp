#pragma once

#include "rham/rational.hpp"

#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace rham {

using SymId = int;

// Dynamical variables; everything else is a parameter.
inline constexpr SymId kSymX = 0;
inline constexpr SymId kSymY = 1;
inline constexpr SymId kSymZ = 2;

/// Interned symbol names. The id doubles as the precedence used by the
/// monomial order: x > y > z > parameters (alphabetically). Symbols interned
/// at runtime rank after all built-ins, in interning order.
class SymbolTable {
  public:
    static SymbolTable& instance() {
        static SymbolTable t;
        return t;
    }

    SymId intern(const std::string& name) {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = index_.find(name);
        if (it != index_.end()) return it->second;
        SymId id = static_cast<SymId>(names_.size());
        names_.push_back(name);
        index_.emplace(name, id);
        return id;
    }

    const std::string& name(SymId id) const {
        std::lock_guard<std::mutex> lock(mu_);
        return names_.at(static_cast<size_t>(id));
    }

    bool known(const std::string& name) const {
        std::lock_guard<std::mutex> lock(mu_);
        return index_.count(name) > 0;
    }

    size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return names_.size();
    }

  private:
    SymbolTable() {
        // x, y, z first; parameters in alphabetical order. "s" stands for
        // sqrt(1 - D^2); polynomial arithmetic rewrites s^2 -> 1 - D^2.
        for (const char* n : {"x", "y", "z", "C", "D", "Ix", "Iy", "Iz", "L", "R", "V",
                              "a", "b", "d", "g", "k1", "k2", "k3", "lam", "q", "s"}) {
            SymId id = static_cast<SymId>(names_.size());
            names_.push_back(n);
            index_.emplace(n, id);
        }
    }

    mutable std::mutex mu_;
    std::vector<std::string> names_;
    std::unordered_map<std::string, SymId> index_;
};

inline SymId sym(const std::string& name) { return SymbolTable::instance().intern(name); }

inline std::string sym_name(SymId id) { return SymbolTable::instance().name(id); }

inline bool is_var(SymId id) { return id >= kSymX && id <= kSymZ; }

inline SymId delta_sym() { return sym("D"); }

/// Adjoined radical s = sqrt(1 - D^2).
inline SymId radical_sym() { return sym("s"); }

}  // namespace rham
