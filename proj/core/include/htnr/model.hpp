#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "htnr/symbols.hpp"

namespace htnr {

// ---------------------------------------------------------------------------
// Terms and atoms

struct Term {
    bool is_var = false;
    Symbol name;

    static Term var(Symbol s) { return Term{true, s}; }
    static Term constant(Symbol s) { return Term{false, s}; }

    friend bool operator==(const Term&, const Term&) = default;
    friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
        if (a.is_var != b.is_var) return a.is_var <=> b.is_var;
        return a.name <=> b.name;
    }
};

// A first-order atom. Doubles as an action name (primitive or compound):
// actions are syntactically atoms, classified by the domain's name sets.
struct Atom {
    Symbol pred;
    std::vector<Term> args;

    bool ground() const {
        for (const Term& t : args)
            if (t.is_var) return false;
        return true;
    }

    friend bool operator==(const Atom&, const Atom&) = default;
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
        if (auto c = a.pred <=> b.pred; c != 0) return c;
        return a.args <=> b.args;
    }

    std::string str() const;
};

struct Literal {
    Atom atom;
    bool positive = true;

    friend bool operator==(const Literal&, const Literal&) = default;
    friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
        if (auto c = a.atom <=> b.atom; c != 0) return c;
        return a.positive <=> b.positive;
    }
};

// ---------------------------------------------------------------------------
// States

// Immutable set of ground atoms, stored sorted and deduplicated.
class State {
public:
    State() = default;
    static State of(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool contains(const Atom& a) const;
    size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }

    // Conjunction of literals under the closed-world assumption.
    bool satisfies(std::span<const Literal> lits) const;

    friend bool operator==(const State&, const State&) = default;
    friend std::strong_ordering operator<=>(const State& a, const State& b) {
        return a.atoms_ <=> b.atoms_;
    }

    size_t hash() const;

private:
    std::vector<Atom> atoms_;
};

// ---------------------------------------------------------------------------
// Operators and actions

struct OperatorSchema {
    Atom head;  // predicate = operator name, args = parameter variables
    std::vector<Literal> pre;
    std::vector<Atom> add;
    std::vector<Atom> del;
};

// A fully instantiated operator occurrence.
struct GroundOperator {
    Atom head;
    std::vector<Literal> pre;
    std::vector<Atom> add;
    std::vector<Atom> del;

    friend bool operator==(const GroundOperator& a, const GroundOperator& b) {
        return a.head == b.head;
    }
};

struct PredicateDecl {
    Symbol name;
    std::vector<Symbol> params;
};

struct CompoundDecl {
    Symbol name;
    std::vector<Symbol> params;
};

// ---------------------------------------------------------------------------
// Task networks and methods

using TaskId = int;

// (T, ≺, α). Task ids are opaque integers scoped to the network; the parser
// assigns 1..n in order of appearance. Construction validates that the order
// relation is acyclic and alpha is total.
struct TaskNetwork {
    std::vector<TaskId> tasks;
    std::set<std::pair<TaskId, TaskId>> order;
    std::map<TaskId, Atom> actions;

    // Throws std::invalid_argument on a cyclic order or a task without an
    // action label.
    void validate() const;
    bool order_acyclic() const;

    friend bool operator==(const TaskNetwork&, const TaskNetwork&) = default;
};

struct Method {
    Symbol id;
    Atom head;
    TaskNetwork net;

    friend bool operator==(const Method&, const Method&) = default;
};

// ---------------------------------------------------------------------------
// Domains and instances

struct Domain {
    SymbolTablePtr symbols;
    Symbol name;
    std::vector<PredicateDecl> predicates;
    std::vector<OperatorSchema> operators;
    std::vector<CompoundDecl> compounds;
    std::vector<Method> methods;
    std::vector<Symbol> constants;  // optional declared constants

    bool is_operator(Symbol s) const;
    bool is_compound(Symbol s) const;
    const OperatorSchema* find_operator(Symbol s) const;
    const CompoundDecl* find_compound(Symbol s) const;
    const Method* find_method(Symbol id) const;

    // Structural equality ignoring the symbol-table pointer.
    bool same_content(const Domain& other) const;

    // Copy with extra methods appended (the original is untouched).
    Domain plus(const std::vector<Method>& extra) const;
};

struct Instance {
    State init;
    Atom top;
    std::vector<Atom> goal;  // optional goal atoms carried for evaluation
};

// A method extended with inserted subtasks, keeping provenance so the
// original structure can be recovered and audited. Inserted actions may be
// partially lifted (constants that had no corresponding variable remain).
struct RefinedMethod {
    Method method;
    Symbol origin;                 // id of the original method
    std::vector<TaskId> inserted;  // task ids within method.net that were inserted

    friend bool operator==(const RefinedMethod&, const RefinedMethod&) = default;
};

// Removes the inserted subtasks and every constraint touching them; the
// result is structurally equal to the origin method (up to its id).
Method strip_inserted(const RefinedMethod& rm);

std::vector<Method> as_methods(const std::vector<RefinedMethod>& rms);

// Ordered partition of a domain's method ids; strata[j] has lower refinement
// priority than strata[j+1].
struct Prioritization {
    std::vector<std::vector<Symbol>> strata;

    // Index (0-based) of the stratum containing a method id, or -1.
    int stratum_of(Symbol method_id) const;
    size_t size() const { return strata.size(); }
};

// ---------------------------------------------------------------------------
// Bindings and substitution

// Substitution from variable names to terms. Values may themselves be
// variables (used for canonical renaming); groundings map everything to
// constants.
using Binding = std::map<Symbol, Term>;

Term substitute(const Term& t, const Binding& b);
Atom substitute(const Atom& a, const Binding& b);
Literal substitute(const Literal& l, const Binding& b);
TaskNetwork substitute(const TaskNetwork& net, const Binding& b);
Method substitute(const Method& m, const Binding& b);
GroundOperator instantiate(const OperatorSchema& op, const Binding& b);

// Unifies a schema atom against a ground atom, extending `into`. Returns
// false on clash (different predicate, arity, or conflicting binding).
bool match(const Atom& schema, const Atom& ground, Binding& into);

// ---------------------------------------------------------------------------
// State transition

bool applicable(const State& s, const GroundOperator& o);

// gamma(s, o): (s \ del) ∪ add, or nullopt when the precondition fails.
std::optional<State> apply(const State& s, const GroundOperator& o);

struct ExecutionResult {
    bool ok = false;
    State final_state;
    size_t fail_index = 0;  // first inapplicable step when !ok

    explicit operator bool() const { return ok; }
};

ExecutionResult executable(const State& s0, std::span<const GroundOperator> plan);

// ---------------------------------------------------------------------------
// Grounding relations

// True iff `ground_atom` equals `schema` under some substitution of the
// schema's variables; when a binding is supplied it must be consistent.
bool is_grounding_of(const Atom& ground_atom, const Atom& schema);

// True iff some bijection f: tn.tasks -> templ.tasks and one substitution θ
// make α(t) = θ(α'(f(t))) for every task and map every tn order pair into a
// templ order pair.
bool is_grounding(const TaskNetwork& tn, const TaskNetwork& templ);

// ---------------------------------------------------------------------------
// Canonical forms

// Renames tasks to 1..n (by a canonical traversal of the existing structure)
// and variables to ?v1.. in order of first occurrence (head first, then
// subtasks in task order). Two methods are structurally equivalent up to
// task-id and variable renaming iff their canonical forms compare equal with
// the method id ignored.
Method canonical_method(const Method& m, SymbolTable& symbols);

bool methods_equivalent(const Method& a, const Method& b, SymbolTable& symbols);

// All variables occurring in an atom / network, in first-occurrence order.
std::vector<Symbol> collect_vars(const Atom& a);
std::vector<Symbol> collect_vars(const Method& m);

// All constants mentioned anywhere in the domain / instance.
std::vector<Symbol> collect_constants(const Domain& dom, const Instance& inst);

}  // namespace htnr
