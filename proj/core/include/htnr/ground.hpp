#pragma once

#include <map>
#include <set>
#include <vector>

#include "htnr/model.hpp"

namespace htnr {

// Per-problem grounding support: the constant pool, delete-relaxed reachable
// facts and operator instances, and feasible-constant sets per action
// argument slot. Slot sets prune method-local variable enumeration; they
// over-approximate real executability, so pruning never loses a solution
// whose canonical linearization is executable.
class GroundContext {
public:
    static GroundContext build(const Domain& dom, const Instance& inst);

    const std::vector<Symbol>& pool() const { return pool_; }
    const std::vector<GroundOperator>& reachable_ops() const { return ops_; }
    bool fact_reachable(const Atom& a) const { return facts_.count(a) > 0; }

    // Feasible constants for one argument slot of a primitive or compound
    // action; falls back to the full pool for unknown slots.
    const std::vector<Symbol>& slot(Symbol action, size_t pos) const;

    // Candidate constants for a method-local variable: the intersection of
    // the slot sets over all its occurrences in the method's subtasks.
    std::vector<Symbol> candidates(const Method& m, Symbol var) const;

private:
    std::vector<Symbol> pool_;
    std::set<Atom> facts_;
    std::vector<GroundOperator> ops_;
    std::map<std::pair<Symbol, size_t>, std::vector<Symbol>> slots_;
};

// All ground instances of a schema whose positive preconditions are
// delete-relaxed reachable, in canonical (argument-lexicographic) order.
std::vector<GroundOperator> enumerate_ground_operators(const Domain& dom,
                                                       const std::vector<Symbol>& pool,
                                                       const std::set<Atom>& facts,
                                                       const OperatorSchema& schema);

}  // namespace htnr
