#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "htnr/model.hpp"

namespace htnr {

using NodeId = int;

struct MethodApp {
    Symbol method_id;
    Binding binding;  // full binding for the method's variables when known

    friend bool operator==(const MethodApp&, const MethodApp&) = default;
};

struct DTNode {
    Atom action;
    std::vector<NodeId> children;       // ordered; aligned with the method's task list
    std::optional<MethodApp> method;    // present iff the node was decomposed

    friend bool operator==(const DTNode&, const DTNode&) = default;
};

// (T, E, ≺, α, β). Nodes are stored dense; the id of a node is its index and
// ids follow depth-first discovery order for trees built by the planners.
struct DecompositionTree {
    NodeId root = 0;
    std::vector<DTNode> nodes;
    std::set<std::pair<NodeId, NodeId>> constraints;

    size_t size() const { return nodes.size(); }
    bool is_inner(NodeId n) const { return nodes[n].method.has_value(); }

    std::vector<NodeId> inner_nodes() const;
    // Nodes without children (zero-subtask method applications included).
    std::vector<NodeId> leaf_nodes() const;
    // Depth-first discovery order of all nodes following children lists.
    std::vector<NodeId> discovery_order() const;
    NodeId parent_of(NodeId n) const;  // -1 for the root

    friend bool operator==(const DecompositionTree&, const DecompositionTree&) = default;
};

// Transitive closure of the ordering constraints plus the method-internal
// order over children (derived through the decomposing methods).
class OrderRelation {
public:
    OrderRelation(size_t n);
    void add(NodeId a, NodeId b) { direct_.insert({a, b}); }
    void close();  // compute reachability

    bool before(NodeId a, NodeId b) const { return reach_[a][static_cast<size_t>(b)]; }
    bool acyclic() const { return acyclic_; }
    size_t size() const { return reach_.size(); }

private:
    std::set<std::pair<NodeId, NodeId>> direct_;
    std::vector<std::vector<bool>> reach_;
    bool acyclic_ = true;
};

// Builds ≪ for a tree; `methods` must contain every method named by β.
OrderRelation ll_order(const DecompositionTree& dt, const Domain& methods);

// Resolves a ground action atom against the domain's operator schemas.
std::optional<GroundOperator> resolve_ground_operator(const Domain& dom, const Atom& action);

struct LeafStep {
    NodeId node;
    GroundOperator op;
};

struct LeafPlan {
    std::vector<LeafStep> steps;

    std::vector<GroundOperator> ops() const;
    std::vector<Atom> actions() const;
};

// Canonical linearization: topological order of the ground primitive leaves
// under ≪, ties broken by ascending depth-first discovery index. Returns
// nullopt when ≪ is cyclic (CycleDetected).
std::optional<LeafPlan> linearize(const DecompositionTree& dt, const Domain& dom);

// A single Def.-1 check failure.
struct Violation {
    std::string condition;  // "structure", "root", "cond1".."cond5", "executability"
    NodeId node = -1;
    std::string detail;
};

struct Verdict {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
    std::string str() const;
};

struct ValidateOptions {
    // TIHTN-side validation checks conditions 1-5 and the root but not the
    // executability of the leaf plan.
    bool require_executable = true;
};

Verdict validate_dt(const DecompositionTree& dt, const Domain& dom, const Instance& inst,
                    const ValidateOptions& opts = {});

}  // namespace htnr
