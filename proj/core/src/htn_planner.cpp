#include "htnr/htn_planner.hpp"

#include <algorithm>

namespace htnr {

namespace {

struct Budget {
    std::chrono::steady_clock::time_point deadline;
    int64_t max_nodes;
    SearchStats* stats;
    bool tripped = false;

    bool spend() {
        ++stats->expansions;
        if (stats->expansions > max_nodes ||
            (stats->expansions % 256 == 0 && std::chrono::steady_clock::now() > deadline)) {
            tripped = true;
        }
        return !tripped;
    }
};

class Search {
public:
    Search(const Domain& dom, const GroundContext& ctx, const Instance& inst,
           const PlanConfig& cfg, Budget& budget,
           const std::function<bool(const DecompositionTree&)>& emit)
        : dom_(dom), ctx_(ctx), inst_(inst), cfg_(cfg), budget_(budget), emit_(emit) {}

    // Returns false when enumeration should stop (emit refused or budget).
    bool run() {
        DecompositionTree dt;
        dt.nodes.push_back(DTNode{inst_.top, {}, std::nullopt});
        dt.root = 0;
        return expand(dt, {0}, {0});
    }

private:
    // depth[i] tracks the depth of node i; open holds unexpanded compounds.
    bool expand(DecompositionTree dt, std::vector<NodeId> open, std::vector<int> depth) {
        if (open.empty()) {
            ++budget_.stats->trees_completed;
            return emit_(dt);
        }
        NodeId n = open.front();
        open.erase(open.begin());

        const Atom& action = dt.nodes[n].action;
        for (const Method& m : dom_.methods) {
            if (m.head.pred != action.pred) continue;
            Binding head_bind;
            if (!match(m.head, action, head_bind)) continue;

            std::vector<Symbol> locals;
            for (Symbol v : collect_vars(m))
                if (!head_bind.count(v)) locals.push_back(v);
            std::sort(locals.begin(), locals.end());

            std::vector<std::vector<Symbol>> cands;
            bool dead = false;
            for (Symbol v : locals) {
                cands.push_back(ctx_.candidates(m, v));
                if (cands.back().empty()) dead = true;
            }
            if (dead) continue;

            std::vector<size_t> idx(locals.size(), 0);
            while (true) {
                Binding bind = head_bind;
                for (size_t i = 0; i < locals.size(); ++i)
                    bind[locals[i]] = Term::constant(cands[i][idx[i]]);
                if (!budget_.spend()) return false;
                if (!apply_method(dt, open, depth, n, m, bind)) return false;

                size_t i = 0;
                for (; i < idx.size(); ++i) {
                    if (++idx[i] < cands[i].size()) break;
                    idx[i] = 0;
                }
                if (i == idx.size()) break;  // odometer wrapped; empty-locals case included
            }
        }
        return true;
    }

    bool apply_method(const DecompositionTree& base, const std::vector<NodeId>& open,
                      const std::vector<int>& depth, NodeId n, const Method& m,
                      const Binding& bind) {
        if (depth[n] + 1 > cfg_.max_depth) return true;

        // Ancestor ground compound actions along the path to n, inclusive.
        std::set<Atom> path;
        {
            NodeId cur = n;
            while (cur >= 0) {
                if (dom_.is_compound(base.nodes[cur].action.pred)) path.insert(base.nodes[cur].action);
                cur = parent_[cur];
            }
        }

        DecompositionTree dt = base;
        std::vector<NodeId> next_open = open;
        std::vector<int> next_depth = depth;

        std::vector<TaskId> tasks = m.net.tasks;
        std::sort(tasks.begin(), tasks.end());
        std::vector<NodeId> children;
        for (TaskId t : tasks) {
            Atom a = substitute(m.net.actions.at(t), bind);
            if (dom_.is_compound(a.pred) && path.count(a)) return true;  // cyclic decomposition
            NodeId c = static_cast<NodeId>(dt.nodes.size());
            dt.nodes.push_back(DTNode{std::move(a), {}, std::nullopt});
            next_depth.push_back(depth[n] + 1);
            parent_.resize(dt.nodes.size(), -1);
            parent_[c] = n;
            children.push_back(c);
        }
        dt.nodes[n].children = children;
        dt.nodes[n].method = MethodApp{m.id, bind};

        // Method-internal order between the new siblings.
        std::map<TaskId, NodeId> by_task;
        for (size_t i = 0; i < tasks.size(); ++i) by_task[tasks[i]] = children[i];
        for (const auto& [a, b] : m.net.order) dt.constraints.insert({by_task[a], by_task[b]});

        // Constraint propagation (Def.-1 conditions 3 and 4).
        std::vector<std::pair<NodeId, NodeId>> with_n;
        for (const auto& c : dt.constraints)
            if (c.first == n || c.second == n) with_n.push_back(c);
        for (const auto& [a, b] : with_n) {
            for (NodeId c : children) {
                if (a == n) dt.constraints.insert({c, b});
                if (b == n) dt.constraints.insert({a, c});
            }
        }

        for (NodeId c : children)
            if (dom_.is_compound(dt.nodes[c].action.pred)) next_open.push_back(c);
        std::sort(next_open.begin(), next_open.end());

        return expand(std::move(dt), std::move(next_open), std::move(next_depth));
    }

    const Domain& dom_;
    const GroundContext& ctx_;
    const Instance& inst_;
    const PlanConfig& cfg_;
    Budget& budget_;
    const std::function<bool(const DecompositionTree&)>& emit_;
    std::vector<NodeId> parent_{-1};
};

}  // namespace

SearchStatus enumerate_trees(const Domain& dom, const Instance& inst, const PlanConfig& cfg,
                             const GroundContext& ctx,
                             const std::function<bool(const DecompositionTree&)>& emit,
                             SearchStats* stats) {
    SearchStats local;
    SearchStats* st = stats ? stats : &local;
    Budget budget{std::chrono::steady_clock::now() + cfg.budget, cfg.max_nodes, st};
    bool stopped_by_emit = false;
    auto wrapped = [&](const DecompositionTree& dt) {
        if (!emit(dt)) {
            stopped_by_emit = true;
            return false;
        }
        return true;
    };
    Search search(dom, ctx, inst, cfg, budget, wrapped);
    search.run();
    if (budget.tripped) return SearchStatus::ResourceLimit;
    if (stopped_by_emit) return SearchStatus::Solved;
    return SearchStatus::Unsolvable;
}

HtnPlanResult plan_htn(const Domain& dom, const Instance& inst, const PlanConfig& cfg) {
    GroundContext ctx = GroundContext::build(dom, inst);
    HtnPlanResult result;
    auto emit = [&](const DecompositionTree& dt) {
        auto plan = linearize(dt, dom);
        if (!plan) return true;  // keep searching
        if (!executable(inst.init, plan->ops())) return true;
        result.tree = dt;
        return false;
    };
    SearchStatus st = enumerate_trees(dom, inst, cfg, ctx, emit, &result.stats);
    result.status = result.tree ? SearchStatus::Solved : st;
    return result;
}

}  // namespace htnr
