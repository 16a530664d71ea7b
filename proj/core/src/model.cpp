#include "htnr/model.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace htnr {

std::string Atom::str() const {
    std::ostringstream os;
    os << pred.str() << '(';
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) os << ',';
        os << args[i].name.str();
    }
    os << ')';
    return os.str();
}

// ---------------------------------------------------------------------------
// State

State State::of(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    State s;
    s.atoms_ = std::move(atoms);
    return s;
}

bool State::contains(const Atom& a) const {
    return std::binary_search(atoms_.begin(), atoms_.end(), a);
}

bool State::satisfies(std::span<const Literal> lits) const {
    for (const Literal& l : lits)
        if (contains(l.atom) != l.positive) return false;
    return true;
}

size_t State::hash() const {
    size_t h = 1469598103934665603ull;
    for (const Atom& a : atoms_) {
        h = (h ^ a.pred.id_hash()) * 1099511628211ull;
        for (const Term& t : a.args) h = (h ^ t.name.id_hash()) * 1099511628211ull;
    }
    return h;
}

// ---------------------------------------------------------------------------
// TaskNetwork

bool TaskNetwork::order_acyclic() const {
    // Kahn over the order pairs restricted to declared tasks.
    std::map<TaskId, int> indeg;
    std::map<TaskId, std::vector<TaskId>> out;
    for (TaskId t : tasks) indeg[t] = 0;
    for (const auto& [a, b] : order) {
        out[a].push_back(b);
        ++indeg[b];
    }
    std::vector<TaskId> ready;
    for (auto& [t, d] : indeg)
        if (d == 0) ready.push_back(t);
    size_t seen = 0;
    while (!ready.empty()) {
        TaskId t = ready.back();
        ready.pop_back();
        ++seen;
        for (TaskId s : out[t])
            if (--indeg[s] == 0) ready.push_back(s);
    }
    return seen == indeg.size();
}

void TaskNetwork::validate() const {
    for (TaskId t : tasks)
        if (!actions.count(t)) throw std::invalid_argument("task without action label");
    for (const auto& [a, b] : order) {
        if (a == b) throw std::invalid_argument("reflexive ordering constraint");
        if (!actions.count(a) || !actions.count(b))
            throw std::invalid_argument("ordering constraint over unknown task");
    }
    if (!order_acyclic()) throw std::invalid_argument("cyclic ordering constraints");
}

// ---------------------------------------------------------------------------
// Domain

bool Domain::is_operator(Symbol s) const { return find_operator(s) != nullptr; }
bool Domain::is_compound(Symbol s) const { return find_compound(s) != nullptr; }

const OperatorSchema* Domain::find_operator(Symbol s) const {
    for (const auto& o : operators)
        if (o.head.pred == s) return &o;
    return nullptr;
}

const CompoundDecl* Domain::find_compound(Symbol s) const {
    for (const auto& c : compounds)
        if (c.name == s) return &c;
    return nullptr;
}

const Method* Domain::find_method(Symbol id) const {
    for (const auto& m : methods)
        if (m.id == id) return &m;
    return nullptr;
}

bool Domain::same_content(const Domain& other) const {
    auto decl_eq = [](const auto& a, const auto& b) {
        return a.name == b.name && a.params == b.params;
    };
    if (name != other.name) return false;
    if (predicates.size() != other.predicates.size()) return false;
    for (size_t i = 0; i < predicates.size(); ++i)
        if (!decl_eq(predicates[i], other.predicates[i])) return false;
    if (compounds.size() != other.compounds.size()) return false;
    for (size_t i = 0; i < compounds.size(); ++i)
        if (!decl_eq(compounds[i], other.compounds[i])) return false;
    auto op_eq = [](const OperatorSchema& a, const OperatorSchema& b) {
        return a.head == b.head && a.pre == b.pre && a.add == b.add && a.del == b.del;
    };
    if (operators.size() != other.operators.size()) return false;
    for (size_t i = 0; i < operators.size(); ++i)
        if (!op_eq(operators[i], other.operators[i])) return false;
    return methods == other.methods && constants == other.constants;
}

Domain Domain::plus(const std::vector<Method>& extra) const {
    Domain d = *this;
    d.methods.insert(d.methods.end(), extra.begin(), extra.end());
    return d;
}

// ---------------------------------------------------------------------------
// Prioritization

int Prioritization::stratum_of(Symbol method_id) const {
    for (size_t j = 0; j < strata.size(); ++j)
        for (Symbol s : strata[j])
            if (s == method_id) return static_cast<int>(j);
    return -1;
}

// ---------------------------------------------------------------------------
// Substitution

Term substitute(const Term& t, const Binding& b) {
    if (!t.is_var) return t;
    auto it = b.find(t.name);
    return it == b.end() ? t : it->second;
}

Atom substitute(const Atom& a, const Binding& b) {
    Atom out{a.pred, {}};
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) out.args.push_back(substitute(t, b));
    return out;
}

Literal substitute(const Literal& l, const Binding& b) {
    return Literal{substitute(l.atom, b), l.positive};
}

TaskNetwork substitute(const TaskNetwork& net, const Binding& b) {
    TaskNetwork out = net;
    for (auto& [t, a] : out.actions) a = substitute(a, b);
    return out;
}

Method substitute(const Method& m, const Binding& b) {
    return Method{m.id, substitute(m.head, b), substitute(m.net, b)};
}

GroundOperator instantiate(const OperatorSchema& op, const Binding& b) {
    GroundOperator g;
    g.head = substitute(op.head, b);
    g.pre.reserve(op.pre.size());
    for (const Literal& l : op.pre) g.pre.push_back(substitute(l, b));
    g.add.reserve(op.add.size());
    for (const Atom& a : op.add) g.add.push_back(substitute(a, b));
    g.del.reserve(op.del.size());
    for (const Atom& a : op.del) g.del.push_back(substitute(a, b));
    return g;
}

bool match(const Atom& schema, const Atom& ground, Binding& into) {
    if (schema.pred != ground.pred || schema.args.size() != ground.args.size()) return false;
    for (size_t i = 0; i < schema.args.size(); ++i) {
        const Term& s = schema.args[i];
        const Term& g = ground.args[i];
        if (!s.is_var) {
            if (s != g) return false;
            continue;
        }
        auto [it, inserted] = into.emplace(s.name, g);
        if (!inserted && it->second != g) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// State transition

bool applicable(const State& s, const GroundOperator& o) { return s.satisfies(o.pre); }

std::optional<State> apply(const State& s, const GroundOperator& o) {
    if (!applicable(s, o)) return std::nullopt;
    std::vector<Atom> dels(o.del.begin(), o.del.end());
    std::sort(dels.begin(), dels.end());
    std::vector<Atom> next;
    next.reserve(s.atoms().size() + o.add.size());
    for (const Atom& a : s.atoms())
        if (!std::binary_search(dels.begin(), dels.end(), a)) next.push_back(a);
    for (const Atom& a : o.add) next.push_back(a);
    return State::of(std::move(next));
}

ExecutionResult executable(const State& s0, std::span<const GroundOperator> plan) {
    State cur = s0;
    for (size_t i = 0; i < plan.size(); ++i) {
        auto next = apply(cur, plan[i]);
        if (!next) return ExecutionResult{false, std::move(cur), i};
        cur = std::move(*next);
    }
    return ExecutionResult{true, std::move(cur), plan.size()};
}

// ---------------------------------------------------------------------------
// Grounding relations

bool is_grounding_of(const Atom& ground_atom, const Atom& schema) {
    Binding b;
    return match(schema, ground_atom, b);
}

namespace {

// Backtracking bijection search with one shared substitution.
bool grounding_search(const TaskNetwork& tn, const TaskNetwork& templ,
                      std::vector<TaskId>& tn_tasks, size_t next,
                      std::map<TaskId, TaskId>& f, std::set<TaskId>& used, Binding& theta) {
    if (next == tn_tasks.size()) {
        for (const auto& [a, b] : tn.order) {
            if (!templ.order.count({f.at(a), f.at(b)})) return false;
        }
        return true;
    }
    TaskId t = tn_tasks[next];
    const Atom& ta = tn.actions.at(t);
    for (TaskId u : templ.tasks) {
        if (used.count(u)) continue;
        Binding saved = theta;
        if (match(templ.actions.at(u), ta, theta)) {
            f[t] = u;
            used.insert(u);
            if (grounding_search(tn, templ, tn_tasks, next + 1, f, used, theta)) return true;
            used.erase(u);
            f.erase(t);
        }
        theta = std::move(saved);
    }
    return false;
}

}  // namespace

bool is_grounding(const TaskNetwork& tn, const TaskNetwork& templ) {
    if (tn.tasks.size() != templ.tasks.size()) return false;
    std::vector<TaskId> tn_tasks = tn.tasks;
    std::map<TaskId, TaskId> f;
    std::set<TaskId> used;
    Binding theta;
    return grounding_search(tn, templ, tn_tasks, 0, f, used, theta);
}

// ---------------------------------------------------------------------------
// Canonical forms

std::vector<Symbol> collect_vars(const Atom& a) {
    std::vector<Symbol> out;
    for (const Term& t : a.args)
        if (t.is_var && std::find(out.begin(), out.end(), t.name) == out.end())
            out.push_back(t.name);
    return out;
}

std::vector<Symbol> collect_vars(const Method& m) {
    std::vector<Symbol> out = collect_vars(m.head);
    auto add_from = [&out](const Atom& a) {
        for (const Term& t : a.args)
            if (t.is_var && std::find(out.begin(), out.end(), t.name) == out.end())
                out.push_back(t.name);
    };
    for (TaskId t : m.net.tasks) add_from(m.net.actions.at(t));
    return out;
}

Method canonical_method(const Method& m, SymbolTable& symbols) {
    Method out = m;
    // Tasks renumbered 1..n in existing id order; ids are already canonical
    // for parsed methods but refined methods may interleave.
    std::vector<TaskId> sorted = m.net.tasks;
    std::sort(sorted.begin(), sorted.end());
    std::map<TaskId, TaskId> remap;
    for (size_t i = 0; i < sorted.size(); ++i) remap[sorted[i]] = static_cast<TaskId>(i + 1);
    TaskNetwork net;
    for (TaskId t : sorted) {
        net.tasks.push_back(remap[t]);
        net.actions[remap[t]] = m.net.actions.at(t);
    }
    for (const auto& [a, b] : m.net.order) net.order.insert({remap[a], remap[b]});
    out.net = std::move(net);

    Binding rename;
    int counter = 0;
    for (Symbol v : collect_vars(out)) {
        ++counter;
        rename[v] = Term::var(symbols.intern("?v" + std::to_string(counter)));
    }
    return substitute(out, rename);
}

bool methods_equivalent(const Method& a, const Method& b, SymbolTable& symbols) {
    Method ca = canonical_method(a, symbols);
    Method cb = canonical_method(b, symbols);
    return ca.head == cb.head && ca.net == cb.net;
}

Method strip_inserted(const RefinedMethod& rm) {
    Method out;
    out.id = rm.origin;
    out.head = rm.method.head;
    std::set<TaskId> drop(rm.inserted.begin(), rm.inserted.end());
    for (TaskId t : rm.method.net.tasks) {
        if (drop.count(t)) continue;
        out.net.tasks.push_back(t);
        out.net.actions[t] = rm.method.net.actions.at(t);
    }
    for (const auto& [a, b] : rm.method.net.order)
        if (!drop.count(a) && !drop.count(b)) out.net.order.insert({a, b});
    return out;
}

std::vector<Method> as_methods(const std::vector<RefinedMethod>& rms) {
    std::vector<Method> out;
    out.reserve(rms.size());
    for (const auto& rm : rms) out.push_back(rm.method);
    return out;
}

std::vector<Symbol> collect_constants(const Domain& dom, const Instance& inst) {
    std::set<Symbol> seen;
    auto add_atom = [&seen](const Atom& a) {
        for (const Term& t : a.args)
            if (!t.is_var) seen.insert(t.name);
    };
    for (Symbol c : dom.constants) seen.insert(c);
    for (const auto& m : dom.methods) {
        add_atom(m.head);
        for (TaskId t : m.net.tasks) add_atom(m.net.actions.at(t));
    }
    for (const Atom& a : inst.init.atoms()) add_atom(a);
    add_atom(inst.top);
    for (const Atom& a : inst.goal) add_atom(a);
    return {seen.begin(), seen.end()};
}

}  // namespace htnr
