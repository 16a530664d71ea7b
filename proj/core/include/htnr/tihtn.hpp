#pragma once

#include <optional>
#include <span>
#include <vector>

#include "htnr/dtree.hpp"
#include "htnr/ground.hpp"
#include "htnr/htn_planner.hpp"
#include "htnr/model.hpp"

namespace htnr {

struct TIHTNConfig {
    PlanConfig search;
    int max_insertions = 6;
    int max_trees = 512;  // decomposition trees examined per problem
};

struct SigmaStep {
    GroundOperator op;
    std::optional<NodeId> origin;  // decomposed leaf node, or nullopt when inserted

    bool inserted() const { return !origin.has_value(); }
};

// An executable plan σ whose subsequence of decomposed steps equals the
// canonical linearization of `tree`; the tree satisfies Def.-1 conditions
// but its own leaf plan need not be executable.
struct TIHTNResult {
    std::vector<SigmaStep> sigma;
    DecompositionTree tree;
    std::vector<size_t> inserted_positions;  // ascending

    std::vector<GroundOperator> sigma_ops() const;
};

enum class TIHTNStatus { Solved, NoPlan, ResourceLimit };

struct TIHTNOutcome {
    TIHTNStatus status = TIHTNStatus::NoPlan;
    std::optional<TIHTNResult> result;
    SearchStats stats;
};

// Ground operators worth inserting for a skeleton: the closure of "adds an
// atom some later-needed positive precondition consumes, or deletes an atom
// a negative precondition forbids", over delete-relaxed reachable instances.
std::vector<GroundOperator> relevant_insertions(const GroundContext& ctx,
                                                const LeafPlan& skeleton);

// Executable supersequence of the skeleton with at most k insertions,
// explored breadth-first by insertion count, then by skeleton position
// (deepest first), so insertions land as late as possible. Returns the full
// step sequence or nullopt.
std::optional<std::vector<SigmaStep>> insertion_search(const State& s0, const LeafPlan& skeleton,
                                                       int k,
                                                       std::span<const GroundOperator> candidates,
                                                       int64_t* nodes = nullptr);

// Outer loop: enumerate acyclic decomposition trees (executability waived)
// and find the tree/insertion pair with the fewest inserted operators;
// ties go to the earliest tree in canonical enumeration order.
TIHTNOutcome plan_tihtn(const Domain& dom, const Instance& inst, const TIHTNConfig& cfg = {});

}  // namespace htnr
