#include "htnr/tihtn.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace htnr {

std::vector<GroundOperator> TIHTNResult::sigma_ops() const {
    std::vector<GroundOperator> out;
    out.reserve(sigma.size());
    for (const auto& s : sigma) out.push_back(s.op);
    return out;
}

std::vector<GroundOperator> relevant_insertions(const GroundContext& ctx,
                                                const LeafPlan& skeleton) {
    std::set<Atom> needed_pos, needed_neg;
    for (const auto& step : skeleton.steps)
        for (const Literal& l : step.op.pre)
            (l.positive ? needed_pos : needed_neg).insert(l.atom);

    const auto& all = ctx.reachable_ops();
    std::vector<bool> in(all.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < all.size(); ++i) {
            if (in[i]) continue;
            const GroundOperator& g = all[i];
            bool useful = false;
            for (const Atom& a : g.add)
                if (needed_pos.count(a)) useful = true;
            for (const Atom& a : g.del)
                if (needed_neg.count(a)) useful = true;
            if (!useful) continue;
            in[i] = true;
            changed = true;
            for (const Literal& l : g.pre) (l.positive ? needed_pos : needed_neg).insert(l.atom);
        }
    }
    std::vector<GroundOperator> out;
    for (size_t i = 0; i < all.size(); ++i)
        if (in[i]) out.push_back(all[i]);
    return out;
}

namespace {

struct SearchNode {
    size_t pos;
    State state;
    int used;
    int parent;     // index into arena, -1 for the start node
    int via_cand;   // candidate index of the inserted op, -1 for an advance
};

}  // namespace

std::optional<std::vector<SigmaStep>> insertion_search(const State& s0, const LeafPlan& skeleton,
                                                       int k,
                                                       std::span<const GroundOperator> candidates,
                                                       int64_t* nodes) {
    const size_t n = skeleton.steps.size();

    std::vector<SearchNode> arena;
    // (used asc, pos desc, seq asc) — minimal insertions first, and within a
    // layer the deepest position, so insertions happen as late as possible.
    using Key = std::tuple<int, int, int>;
    std::priority_queue<Key, std::vector<Key>, std::greater<Key>> queue;
    std::map<std::pair<size_t, State>, int> best;

    auto push = [&](SearchNode node) {
        auto key = std::make_pair(node.pos, node.state);
        auto it = best.find(key);
        if (it != best.end() && it->second <= node.used) return;
        best[key] = node.used;
        arena.push_back(std::move(node));
        const SearchNode& stored = arena.back();
        queue.emplace(stored.used, -static_cast<int>(stored.pos),
                      static_cast<int>(arena.size() - 1));
    };

    push(SearchNode{0, s0, 0, -1, -1});

    while (!queue.empty()) {
        auto [used, negpos, idx] = queue.top();
        queue.pop();
        SearchNode cur = arena[idx];
        if (nodes) ++*nodes;
        // Stale entry (a cheaper visit was recorded later).
        auto it = best.find({cur.pos, cur.state});
        if (it != best.end() && it->second < cur.used) continue;

        if (cur.pos == n) {
            // Reconstruct the step sequence.
            std::vector<SigmaStep> rev;
            int at = idx;
            while (at >= 0) {
                const SearchNode& node = arena[at];
                if (node.parent >= 0) {
                    const SearchNode& par = arena[node.parent];
                    if (node.via_cand >= 0) {
                        rev.push_back(SigmaStep{candidates[node.via_cand], std::nullopt});
                    } else {
                        const LeafStep& step = skeleton.steps[par.pos];
                        rev.push_back(SigmaStep{step.op, step.node});
                    }
                }
                at = node.parent;
            }
            std::reverse(rev.begin(), rev.end());
            return rev;
        }

        // Advance along the skeleton when possible (no insertion cost).
        if (auto next = apply(cur.state, skeleton.steps[cur.pos].op))
            push(SearchNode{cur.pos + 1, std::move(*next), cur.used, idx, -1});

        if (cur.used < k) {
            for (size_t c = 0; c < candidates.size(); ++c) {
                if (auto next = apply(cur.state, candidates[c]))
                    push(SearchNode{cur.pos, std::move(*next), cur.used + 1, idx,
                                    static_cast<int>(c)});
            }
        }
    }
    return std::nullopt;
}

TIHTNOutcome plan_tihtn(const Domain& dom, const Instance& inst, const TIHTNConfig& cfg) {
    TIHTNOutcome out;
    GroundContext ctx = GroundContext::build(dom, inst);

    // Phase 1: enumerate candidate trees (Def.-1 valid, executability waived).
    std::vector<DecompositionTree> trees;
    auto emit = [&](const DecompositionTree& dt) {
        trees.push_back(dt);
        return trees.size() < static_cast<size_t>(cfg.max_trees);
    };
    SearchStatus enum_status = enumerate_trees(dom, inst, cfg.search, ctx, emit, &out.stats);

    if (trees.empty()) {
        out.status =
            enum_status == SearchStatus::ResourceLimit ? TIHTNStatus::ResourceLimit
                                                       : TIHTNStatus::NoPlan;
        return out;
    }

    // Phase 2: minimal insertion count across trees; ties to the earliest
    // tree. Skeletons repeat across trees, so searches are shared.
    struct SkeletonEval {
        std::optional<std::vector<SigmaStep>> sigma;
        int insertions = -1;
    };
    std::map<std::vector<Atom>, SkeletonEval> cache;

    int best_tree = -1;
    SkeletonEval* best_eval = nullptr;
    std::vector<LeafPlan> skeletons(trees.size());
    for (size_t i = 0; i < trees.size(); ++i) {
        auto plan = linearize(trees[i], dom);
        if (!plan) continue;  // cannot happen for trees the search produces
        skeletons[i] = std::move(*plan);
        auto key = skeletons[i].actions();
        auto [it, fresh] = cache.try_emplace(std::move(key));
        if (fresh) {
            auto candidates = relevant_insertions(ctx, skeletons[i]);
            auto sigma = insertion_search(inst.init, skeletons[i], cfg.max_insertions, candidates,
                                          &out.stats.expansions);
            if (sigma) {
                int used = 0;
                for (const auto& s : *sigma)
                    if (s.inserted()) ++used;
                it->second.insertions = used;
                it->second.sigma = std::move(sigma);
            }
        }
        if (it->second.sigma &&
            (best_tree < 0 || it->second.insertions < best_eval->insertions)) {
            best_tree = static_cast<int>(i);
            best_eval = &it->second;
            if (best_eval->insertions == 0) break;
        }
    }

    if (best_tree < 0) {
        out.status = enum_status == SearchStatus::ResourceLimit ? TIHTNStatus::ResourceLimit
                                                                : TIHTNStatus::NoPlan;
        return out;
    }

    TIHTNResult result;
    result.tree = trees[best_tree];
    // The cached σ was built against an identical skeleton (same action
    // sequence); re-anchor origins to this tree's leaf ids.
    const LeafPlan& skel = skeletons[best_tree];
    size_t next_leaf = 0;
    for (const SigmaStep& s : best_eval->sigma.value()) {
        if (s.inserted()) {
            result.inserted_positions.push_back(result.sigma.size());
            result.sigma.push_back(s);
        } else {
            result.sigma.push_back(SigmaStep{s.op, skel.steps[next_leaf].node});
            ++next_leaf;
        }
    }
    out.result = std::move(result);
    out.status = TIHTNStatus::Solved;
    return out;
}

}  // namespace htnr
