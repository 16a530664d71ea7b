#include "htnr/dtree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace htnr {

std::vector<NodeId> DecompositionTree::inner_nodes() const {
    std::vector<NodeId> out;
    for (NodeId n = 0; n < static_cast<NodeId>(nodes.size()); ++n)
        if (nodes[n].method) out.push_back(n);
    return out;
}

std::vector<NodeId> DecompositionTree::leaf_nodes() const {
    std::vector<NodeId> out;
    for (NodeId n = 0; n < static_cast<NodeId>(nodes.size()); ++n)
        if (nodes[n].children.empty()) out.push_back(n);
    return out;
}

std::vector<NodeId> DecompositionTree::discovery_order() const {
    std::vector<NodeId> order;
    order.reserve(nodes.size());
    std::function<void(NodeId)> walk = [&](NodeId n) {
        order.push_back(n);
        for (NodeId c : nodes[n].children) walk(c);
    };
    walk(root);
    return order;
}

NodeId DecompositionTree::parent_of(NodeId n) const {
    for (NodeId p = 0; p < static_cast<NodeId>(nodes.size()); ++p)
        for (NodeId c : nodes[p].children)
            if (c == n) return p;
    return -1;
}

OrderRelation::OrderRelation(size_t n) : reach_(n, std::vector<bool>(n, false)) {}

void OrderRelation::close() {
    const size_t n = reach_.size();
    for (const auto& [a, b] : direct_)
        if (a >= 0 && b >= 0 && static_cast<size_t>(a) < n && static_cast<size_t>(b) < n)
            reach_[a][static_cast<size_t>(b)] = true;
    // Floyd-Warshall over booleans; trees stay small.
    for (size_t k = 0; k < n; ++k)
        for (size_t i = 0; i < n; ++i) {
            if (!reach_[i][k]) continue;
            for (size_t j = 0; j < n; ++j)
                if (reach_[k][j]) reach_[i][j] = true;
        }
    acyclic_ = true;
    for (size_t i = 0; i < n; ++i)
        if (reach_[i][i]) acyclic_ = false;
}

namespace {

// Bijection from child nodes to method tasks with one consistent
// substitution, or nullopt. Children lists built by the planners align
// positionally with the method's sorted task ids, so try that first.
std::optional<std::map<NodeId, TaskId>> child_task_map(const DecompositionTree& dt, NodeId n,
                                                       const Method& m) {
    const auto& children = dt.nodes[n].children;
    std::vector<TaskId> tasks = m.net.tasks;
    std::sort(tasks.begin(), tasks.end());
    if (children.size() != tasks.size()) return std::nullopt;

    auto try_positional = [&]() -> std::optional<std::map<NodeId, TaskId>> {
        Binding theta;
        std::map<NodeId, TaskId> map;
        for (size_t i = 0; i < children.size(); ++i) {
            if (!match(m.net.actions.at(tasks[i]), dt.nodes[children[i]].action, theta))
                return std::nullopt;
            map[children[i]] = tasks[i];
        }
        return map;
    };
    if (auto m1 = try_positional()) return m1;

    // General search for third-party trees.
    std::map<NodeId, TaskId> map;
    std::set<TaskId> used;
    Binding theta;
    std::function<bool(size_t)> rec = [&](size_t i) -> bool {
        if (i == children.size()) return true;
        for (TaskId t : tasks) {
            if (used.count(t)) continue;
            Binding saved = theta;
            if (match(m.net.actions.at(t), dt.nodes[children[i]].action, theta)) {
                map[children[i]] = t;
                used.insert(t);
                if (rec(i + 1)) return true;
                used.erase(t);
                map.erase(children[i]);
            }
            theta = std::move(saved);
        }
        return false;
    };
    if (rec(0)) return map;
    return std::nullopt;
}

}  // namespace

OrderRelation ll_order(const DecompositionTree& dt, const Domain& methods) {
    OrderRelation rel(dt.size());
    for (const auto& [a, b] : dt.constraints) rel.add(a, b);
    for (NodeId n : dt.inner_nodes()) {
        const Method* m = methods.find_method(dt.nodes[n].method->method_id);
        if (!m) continue;
        auto map = child_task_map(dt, n, *m);
        if (!map) continue;
        std::map<TaskId, NodeId> inv;
        for (const auto& [node, task] : *map) inv[task] = node;
        for (const auto& [a, b] : m->net.order) {
            auto ia = inv.find(a);
            auto ib = inv.find(b);
            if (ia != inv.end() && ib != inv.end()) rel.add(ia->second, ib->second);
        }
    }
    rel.close();
    return rel;
}

std::optional<GroundOperator> resolve_ground_operator(const Domain& dom, const Atom& action) {
    const OperatorSchema* schema = dom.find_operator(action.pred);
    if (!schema || !action.ground()) return std::nullopt;
    Binding b;
    if (!match(schema->head, action, b)) return std::nullopt;
    return instantiate(*schema, b);
}

std::vector<GroundOperator> LeafPlan::ops() const {
    std::vector<GroundOperator> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.op);
    return out;
}

std::vector<Atom> LeafPlan::actions() const {
    std::vector<Atom> out;
    out.reserve(steps.size());
    for (const auto& s : steps) out.push_back(s.op.head);
    return out;
}

std::optional<LeafPlan> linearize(const DecompositionTree& dt, const Domain& dom) {
    OrderRelation rel = ll_order(dt, dom);
    if (!rel.acyclic()) return std::nullopt;

    std::vector<NodeId> discovery = dt.discovery_order();
    std::vector<int> discovery_index(dt.size(), 0);
    for (size_t i = 0; i < discovery.size(); ++i) discovery_index[discovery[i]] = static_cast<int>(i);

    // Plan leaves: ground primitive leaves only.
    std::vector<NodeId> leaves;
    for (NodeId n : dt.leaf_nodes())
        if (!dt.nodes[n].method && dt.nodes[n].action.ground() &&
            dom.is_operator(dt.nodes[n].action.pred))
            leaves.push_back(n);

    std::sort(leaves.begin(), leaves.end(),
              [&](NodeId a, NodeId b) { return discovery_index[a] < discovery_index[b]; });

    LeafPlan plan;
    std::vector<bool> emitted(dt.size(), false);
    for (size_t step = 0; step < leaves.size(); ++step) {
        NodeId pick = -1;
        for (NodeId cand : leaves) {
            if (emitted[cand]) continue;
            bool ready = true;
            for (NodeId other : leaves) {
                if (other == cand || emitted[other]) continue;
                if (rel.before(other, cand)) {
                    ready = false;
                    break;
                }
            }
            if (ready) {
                pick = cand;  // leaves scanned in discovery order: first ready wins
                break;
            }
        }
        if (pick < 0) return std::nullopt;
        emitted[pick] = true;
        auto op = resolve_ground_operator(dom, dt.nodes[pick].action);
        if (!op) return std::nullopt;
        plan.steps.push_back(LeafStep{pick, std::move(*op)});
    }
    return plan;
}

std::string Verdict::str() const {
    if (violations.empty()) return "valid";
    std::ostringstream os;
    for (const auto& v : violations) {
        os << v.condition;
        if (v.node >= 0) os << " @node " << v.node;
        if (!v.detail.empty()) os << ": " << v.detail;
        os << '\n';
    }
    return os.str();
}

Verdict validate_dt(const DecompositionTree& dt, const Domain& dom, const Instance& inst,
                    const ValidateOptions& opts) {
    Verdict verdict;
    auto fail = [&](std::string cond, NodeId node, std::string detail) {
        verdict.violations.push_back(Violation{std::move(cond), node, std::move(detail)});
    };

    if (dt.nodes.empty()) {
        fail("structure", -1, "empty tree");
        return verdict;
    }

    // Tree shape: single root, every non-root node has exactly one parent.
    {
        std::vector<int> parents(dt.size(), 0);
        for (NodeId n = 0; n < static_cast<NodeId>(dt.size()); ++n)
            for (NodeId c : dt.nodes[n].children) {
                if (c < 0 || c >= static_cast<NodeId>(dt.size())) {
                    fail("structure", n, "child id out of range");
                    return verdict;
                }
                ++parents[c];
            }
        for (NodeId n = 0; n < static_cast<NodeId>(dt.size()); ++n) {
            if (n == dt.root && parents[n] != 0) fail("structure", n, "root has a parent");
            if (n != dt.root && parents[n] != 1)
                fail("structure", n, "expected exactly one parent");
        }
        if (dt.discovery_order().size() != dt.size())
            fail("structure", -1, "nodes unreachable from the root");
        if (!verdict.valid()) return verdict;
    }

    // Root must be the instance's initial task.
    if (dt.nodes[dt.root].action != inst.top)
        fail("root", dt.root, "root action is not the initial task");

    // Undecomposed compound leaves are not allowed in a solution tree.
    for (NodeId n = 0; n < static_cast<NodeId>(dt.size()); ++n) {
        const DTNode& node = dt.nodes[n];
        if (!node.method && dom.is_compound(node.action.pred))
            fail("structure", n, "compound task left undecomposed");
        if (node.method && !node.children.empty() &&
            !dom.is_compound(node.action.pred))
            fail("structure", n, "primitive task was decomposed");
    }

    for (NodeId n : dt.inner_nodes()) {
        const DTNode& node = dt.nodes[n];
        const Method* m = dom.find_method(node.method->method_id);
        if (!m) {
            fail("cond1", n, "unknown method " + node.method->method_id.str());
            continue;
        }
        // Condition 1: the node's action instantiates the method head.
        if (!node.method->binding.empty()) {
            if (substitute(m->head, node.method->binding) != node.action)
                fail("cond1", n, "action does not match the bound method head");
        } else if (!is_grounding_of(node.action, m->head)) {
            fail("cond1", n, "action is not a grounding of the method head");
        }

        // Condition 2: the children network is a grounding of the subtask net.
        TaskNetwork child_net;
        for (size_t i = 0; i < node.children.size(); ++i) {
            NodeId c = node.children[i];
            TaskId tid = static_cast<TaskId>(i + 1);
            child_net.tasks.push_back(tid);
            child_net.actions[tid] = dt.nodes[c].action;
        }
        for (size_t i = 0; i < node.children.size(); ++i)
            for (size_t j = 0; j < node.children.size(); ++j)
                if (i != j && dt.constraints.count({node.children[i], node.children[j]}))
                    child_net.order.insert(
                        {static_cast<TaskId>(i + 1), static_cast<TaskId>(j + 1)});
        if (!is_grounding(child_net, m->net))
            fail("cond2", n, "children are not a grounding of the method network");

        // Conditions 3 and 4: constraints on the node propagate to children.
        for (const auto& [a, b] : dt.constraints) {
            if (a == n) {
                for (NodeId st : node.children)
                    if (!dt.constraints.count({st, b}))
                        fail("cond3", n, "missing propagated constraint to child");
            }
            if (b == n) {
                for (NodeId st : node.children)
                    if (!dt.constraints.count({a, st}))
                        fail("cond4", n, "missing propagated constraint to child");
            }
        }
    }

    // Condition 5: ≪ acyclic.
    OrderRelation rel = ll_order(dt, dom);
    if (!rel.acyclic()) fail("cond5", -1, "≪ contains a cycle");

    if (opts.require_executable && verdict.valid()) {
        auto plan = linearize(dt, dom);
        if (!plan) {
            fail("executability", -1, "no linearization");
        } else {
            auto ops = plan->ops();
            auto exec = executable(inst.init, ops);
            if (!exec)
                fail("executability", plan->steps[exec.fail_index].node,
                     "step " + std::to_string(exec.fail_index) + " (" +
                         ops[exec.fail_index].head.str() + ") not applicable");
        }
    }
    return verdict;
}

}  // namespace htnr
