#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>

#include "htnr/dtree.hpp"
#include "htnr/ground.hpp"
#include "htnr/model.hpp"

namespace htnr {

struct PlanConfig {
    int64_t max_nodes = 1'000'000;            // method applications
    std::chrono::milliseconds budget{30'000}; // wall clock per search
    int max_depth = 64;
};

enum class SearchStatus { Solved, Unsolvable, ResourceLimit };

struct SearchStats {
    int64_t expansions = 0;      // method applications tried
    int64_t trees_completed = 0; // fully primitive trees reached
};

struct HtnPlanResult {
    SearchStatus status = SearchStatus::Unsolvable;
    std::optional<DecompositionTree> tree;
    SearchStats stats;
};

// Depth-first decomposition search. Methods and bindings are tried in
// canonical order; a ground compound action never repeats on a root-to-node
// path, so every produced tree is acyclic. The first completed tree whose
// canonical linearization is executable in the initial state is returned.
HtnPlanResult plan_htn(const Domain& dom, const Instance& inst, const PlanConfig& cfg = {});

// Enumerates completed acyclic decomposition trees without the executability
// requirement, in the same canonical order, until the callback returns false
// or limits are hit. Used by the task-insertion planner.
SearchStatus enumerate_trees(const Domain& dom, const Instance& inst, const PlanConfig& cfg,
                             const GroundContext& ctx,
                             const std::function<bool(const DecompositionTree&)>& emit,
                             SearchStats* stats = nullptr);

}  // namespace htnr
