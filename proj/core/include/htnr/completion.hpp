#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "htnr/dtree.hpp"
#include "htnr/model.hpp"
#include "htnr/tihtn.hpp"

namespace htnr {

// The tree's ≪ relation extended with the execution order of σ. Ids 0..n-1
// are the tree's nodes; inserted tasks get ids n.. in σ-position order.
class ExtendedOrder {
public:
    // Throws std::logic_error when the union is cyclic (cannot happen for
    // results that satisfy the TIHTN invariants).
    static ExtendedOrder build(const TIHTNResult& result, const Domain& dom);

    size_t tree_size() const { return tree_size_; }
    size_t inserted_count() const { return inserted_.size(); }
    const std::vector<int>& inserted_ids() const { return inserted_; }

    bool before(int a, int b) const { return rel_.before(a, b); }

    // σ position of a task id (leaf node or inserted id), or -1.
    int sigma_position(int id) const;

    // Window bounds over σ positions for an inner node: the position of the
    // last predecessor and the first successor among σ's primitive tasks
    // (-1 and sigma_length() when absent).
    int window_lo(NodeId t) const;
    int window_hi(NodeId t) const;
    int sigma_length() const { return static_cast<int>(sigma_tasks_.size()); }

private:
    size_t tree_size_ = 0;
    std::vector<int> inserted_;     // ext ids of inserted tasks
    std::vector<int> sigma_tasks_;  // per σ position: ext id
    OrderRelation rel_{0};
};

ExtendedOrder extend_order(const TIHTNResult& result, const Domain& dom);

// ρ: inserted ext id → inner node of the tree.
struct CompletionProfile {
    std::map<int, NodeId> assignment;

    bool empty() const { return assignment.empty(); }
};

// Inserted-task candidate set Δ_t: the unlabeled inserted tasks whose σ
// position falls strictly inside the node's window.
std::vector<int> candidate_set(const ExtendedOrder& ext, NodeId t,
                               const std::set<int>& unlabeled);

// Def.-2 condition for a single assignment, checked under the extended
// order: no primitive task of σ contradicts the placement.
bool profile_assignment_valid(const ExtendedOrder& ext, int inserted, NodeId node);

struct ProfileResult {
    CompletionProfile profile;
    int64_t operations = 0;  // inner-loop steps, for complexity instrumentation
};

// Preferred completion profile: scan strata from highest refinement priority
// to lowest and, within a stratum, inner nodes in descending id order;
// assign every candidate still unlabeled. Leftovers (there are none once the
// root's stratum has been scanned) fall back to the root.
ProfileResult complete_profile(const TIHTNResult& result, const ExtendedOrder& ext,
                               const Prioritization& prio, const Domain& dom);

// Ordering-constraint closure: children inherit their parent's constraints,
// iterated to fixpoint.
std::set<std::pair<int, int>> closure(const std::vector<int>& nodes,
                                      const std::map<int, std::vector<int>>& children,
                                      std::set<std::pair<int, int>> constraints);

// Lifts a ground action into a method's variable space through the node's
// binding. Constants bound by several variables prefer a head parameter
// (leftmost), then the variable occurring at the lowest-indexed subtask
// position; unbound constants stay.
Atom lift_constants(const Atom& ground_action, const Method& origin, const Binding& binding);

// One refined method m_ρ^t for an inner node with assigned inserted tasks.
RefinedMethod refine_method(const TIHTNResult& result, const ExtendedOrder& ext,
                            const CompletionProfile& rho, NodeId t, const Domain& dom,
                            Symbol refined_id);

// The completed decomposition tree T_ρ plus the refined method set M_ρ
// (merged when structurally equivalent) and the β rewrites applied.
struct Completion {
    DecompositionTree tree;
    std::vector<RefinedMethod> refined;
    std::map<NodeId, Symbol> rewritten;     // affected node → refined method id
    std::map<int, NodeId> inserted_nodes;   // inserted ext id → new tree node
};

Completion complete_dt(const TIHTNResult& result, const ExtendedOrder& ext,
                       const CompletionProfile& rho, const Domain& dom);

}  // namespace htnr
