#include "htnr/ground.hpp"

#include <algorithm>
#include <functional>

namespace htnr {

namespace {

// Odometer over bindings for the schema's parameters; calls fn for each
// instance whose positive preconditions all lie in `facts`.
void for_each_applicable(const OperatorSchema& schema, const std::vector<Symbol>& pool,
                         const std::set<Atom>& facts,
                         const std::function<void(const Binding&)>& fn) {
    std::vector<Symbol> params;
    for (const Term& t : schema.head.args) params.push_back(t.name);
    Binding b;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (i == params.size()) {
            for (const Literal& l : schema.pre)
                if (l.positive && !facts.count(substitute(l.atom, b))) return;
            fn(b);
            return;
        }
        if (b.count(params[i])) {  // repeated parameter already bound
            rec(i + 1);
            return;
        }
        for (Symbol c : pool) {
            b[params[i]] = Term::constant(c);
            rec(i + 1);
        }
        b.erase(params[i]);
    };
    rec(0);
}

}  // namespace

std::vector<GroundOperator> enumerate_ground_operators(const Domain& dom,
                                                       const std::vector<Symbol>& pool,
                                                       const std::set<Atom>& facts,
                                                       const OperatorSchema& schema) {
    (void)dom;
    std::vector<GroundOperator> out;
    for_each_applicable(schema, pool, facts,
                        [&](const Binding& b) { out.push_back(instantiate(schema, b)); });
    return out;
}

GroundContext GroundContext::build(const Domain& dom, const Instance& inst) {
    GroundContext ctx;
    ctx.pool_ = collect_constants(dom, inst);
    for (const Atom& a : inst.init.atoms()) ctx.facts_.insert(a);

    // Delete-relaxed fixpoint; negative preconditions are treated as
    // satisfiable.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const OperatorSchema& schema : dom.operators) {
            for_each_applicable(schema, ctx.pool_, ctx.facts_, [&](const Binding& b) {
                for (const Atom& a : schema.add)
                    if (ctx.facts_.insert(substitute(a, b)).second) changed = true;
            });
        }
    }
    for (const OperatorSchema& schema : dom.operators) {
        auto ops = enumerate_ground_operators(dom, ctx.pool_, ctx.facts_, schema);
        ctx.ops_.insert(ctx.ops_.end(), ops.begin(), ops.end());
    }
    std::sort(ctx.ops_.begin(), ctx.ops_.end(),
              [](const GroundOperator& a, const GroundOperator& b) { return a.head < b.head; });

    // Primitive slots from the reachable instances.
    std::map<std::pair<Symbol, size_t>, std::set<Symbol>> prim;
    for (const GroundOperator& g : ctx.ops_)
        for (size_t i = 0; i < g.head.args.size(); ++i)
            prim[{g.head.pred, i}].insert(g.head.args[i].name);

    // Compound slots: decreasing fixpoint from the full pool. A constant is
    // feasible at (c, i) if some method of c admits it at every occurrence of
    // the i-th head parameter in the method's subtasks.
    std::set<Symbol> full(ctx.pool_.begin(), ctx.pool_.end());
    std::map<std::pair<Symbol, size_t>, std::set<Symbol>> comp;
    for (const CompoundDecl& c : dom.compounds)
        for (size_t i = 0; i < c.params.size(); ++i) comp[{c.name, i}] = full;

    auto slot_set = [&](Symbol action, size_t pos) -> const std::set<Symbol>* {
        if (auto it = comp.find({action, pos}); it != comp.end()) return &it->second;
        if (auto it = prim.find({action, pos}); it != prim.end()) return &it->second;
        if (dom.is_operator(action)) {
            static const std::set<Symbol> empty;
            return &empty;  // no reachable instance fills this slot
        }
        return &full;
    };

    changed = true;
    while (changed) {
        changed = false;
        for (const CompoundDecl& c : dom.compounds) {
            for (size_t i = 0; i < c.params.size(); ++i) {
                std::set<Symbol> allowed;
                bool any_method = false;
                for (const Method& m : dom.methods) {
                    if (m.head.pred != c.name) continue;
                    any_method = true;
                    // The i-th argument of this method's head names the
                    // variable standing for the parameter.
                    if (i >= m.head.args.size() || !m.head.args[i].is_var) {
                        allowed = full;
                        break;
                    }
                    Symbol v = m.head.args[i].name;
                    std::set<Symbol> per_method = full;
                    for (TaskId t : m.net.tasks) {
                        const Atom& a = m.net.actions.at(t);
                        for (size_t j = 0; j < a.args.size(); ++j) {
                            if (!a.args[j].is_var || a.args[j].name != v) continue;
                            const std::set<Symbol>* s = slot_set(a.pred, j);
                            std::set<Symbol> inter;
                            std::set_intersection(per_method.begin(), per_method.end(),
                                                  s->begin(), s->end(),
                                                  std::inserter(inter, inter.begin()));
                            per_method = std::move(inter);
                        }
                    }
                    allowed.insert(per_method.begin(), per_method.end());
                }
                if (!any_method) allowed = full;
                auto& cur = comp[{c.name, i}];
                if (allowed.size() < cur.size()) {
                    cur = std::move(allowed);
                    changed = true;
                }
            }
        }
    }

    for (const auto& [key, s] : prim) ctx.slots_[key] = {s.begin(), s.end()};
    for (const auto& [key, s] : comp) ctx.slots_[key] = {s.begin(), s.end()};
    return ctx;
}

const std::vector<Symbol>& GroundContext::slot(Symbol action, size_t pos) const {
    auto it = slots_.find({action, pos});
    if (it != slots_.end()) return it->second;
    return pool_;
}

std::vector<Symbol> GroundContext::candidates(const Method& m, Symbol var) const {
    std::vector<Symbol> cur = pool_;
    bool seen = false;
    for (TaskId t : m.net.tasks) {
        const Atom& a = m.net.actions.at(t);
        for (size_t j = 0; j < a.args.size(); ++j) {
            if (!a.args[j].is_var || a.args[j].name != var) continue;
            seen = true;
            const std::vector<Symbol>& s = slot(a.pred, j);
            std::vector<Symbol> inter;
            std::set_intersection(cur.begin(), cur.end(), s.begin(), s.end(),
                                  std::back_inserter(inter));
            cur = std::move(inter);
        }
    }
    if (!seen) return pool_;
    return cur;
}

}  // namespace htnr
