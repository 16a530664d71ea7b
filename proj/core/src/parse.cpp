#include "htnr/parse.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace htnr {

namespace {

bool is_var_token(const std::string& tok) { return !tok.empty() && tok[0] == '?'; }

Term parse_term(const SExpr& e, SymbolTable& symbols) {
    if (!e.is_atom()) throw ParseError(ParseCode::SyntaxError, e.span, "expected a term");
    Symbol s = symbols.intern(e.token);
    return is_var_token(e.token) ? Term::var(s) : Term::constant(s);
}

Atom parse_atom(const SExpr& e, SymbolTable& symbols) {
    if (!e.is_list() || e.size() == 0 || !e.at(0).is_atom())
        throw ParseError(ParseCode::SyntaxError, e.span, "expected an atom (pred arg ...)");
    if (is_var_token(e.at(0).token))
        throw ParseError(ParseCode::SyntaxError, e.at(0).span, "predicate cannot be a variable");
    Atom a;
    a.pred = symbols.intern(e.at(0).token);
    for (size_t i = 1; i < e.size(); ++i) a.args.push_back(parse_term(e.at(i), symbols));
    return a;
}

Literal parse_literal(const SExpr& e, SymbolTable& symbols) {
    if (e.headed("not")) {
        if (e.size() != 2)
            throw ParseError(ParseCode::SyntaxError, e.span, "(not atom) takes one atom");
        return Literal{parse_atom(e.at(1), symbols), false};
    }
    return Literal{parse_atom(e, symbols), true};
}

// Declaration-level checks shared by domain entities.
class DomainChecker {
public:
    explicit DomainChecker(const Domain& dom) : dom_(dom) {}

    void check_predicate_atom(const Atom& a, const SourceSpan& span) const {
        for (const auto& p : dom_.predicates) {
            if (p.name == a.pred) {
                if (p.params.size() != a.args.size())
                    throw ParseError(ParseCode::ArityMismatch, span,
                                     a.pred.str() + " expects " + std::to_string(p.params.size()) +
                                         " arguments, got " + std::to_string(a.args.size()));
                return;
            }
        }
        throw ParseError(ParseCode::UndeclaredPredicate, span, a.pred.str());
    }

    void check_action_atom(const Atom& a, const SourceSpan& span) const {
        size_t arity = 0;
        if (const OperatorSchema* o = dom_.find_operator(a.pred)) {
            arity = o->head.args.size();
        } else if (const CompoundDecl* c = dom_.find_compound(a.pred)) {
            arity = c->params.size();
        } else {
            throw ParseError(ParseCode::UnknownSymbol, span,
                             "unknown action name " + a.pred.str());
        }
        if (arity != a.args.size())
            throw ParseError(ParseCode::ArityMismatch, span,
                             a.pred.str() + " expects " + std::to_string(arity) +
                                 " arguments, got " + std::to_string(a.args.size()));
    }

private:
    const Domain& dom_;
};

std::vector<Symbol> parse_param_list(const SExpr& head, SymbolTable& symbols) {
    std::vector<Symbol> params;
    std::set<std::string> seen;
    for (size_t i = 1; i < head.size(); ++i) {
        const SExpr& p = head.at(i);
        if (!p.is_atom() || !is_var_token(p.token))
            throw ParseError(ParseCode::SyntaxError, p.span, "parameter must be a ?variable");
        if (!seen.insert(p.token).second)
            throw ParseError(ParseCode::DuplicateName, p.span, "repeated parameter " + p.token);
        params.push_back(symbols.intern(p.token));
    }
    return params;
}

void require_vars_in_params(const std::vector<Symbol>& params, const Atom& a,
                            const SourceSpan& span, const std::string& what) {
    for (const Term& t : a.args) {
        if (!t.is_var) continue;
        if (std::find(params.begin(), params.end(), t.name) == params.end())
            throw ParseError(ParseCode::BadStructure, span,
                             "variable " + t.name.str() + " in " + what +
                                 " does not appear in the parameter list");
    }
}

// (tasks (label (action ...)) ...) with labels mapped to ids 1..n by
// appearance. (order (a b) (:ordered a b c) ...) expands the sugar.
TaskNetwork parse_task_network(const SExpr& tasks, const SExpr* order, SymbolTable& symbols,
                               const DomainChecker* checker) {
    TaskNetwork net;
    std::map<std::string, TaskId> label_to_id;
    for (size_t i = 1; i < tasks.size(); ++i) {
        const SExpr& entry = tasks.at(i);
        if (!entry.is_list() || entry.size() != 2 || !entry.at(0).is_atom())
            throw ParseError(ParseCode::SyntaxError, entry.span,
                             "task entry must be (label (action ...))");
        const std::string& label = entry.at(0).token;
        if (label_to_id.count(label))
            throw ParseError(ParseCode::DuplicateName, entry.at(0).span,
                             "repeated task label " + label);
        TaskId id = static_cast<TaskId>(label_to_id.size() + 1);
        label_to_id[label] = id;
        Atom action = parse_atom(entry.at(1), symbols);
        if (checker) checker->check_action_atom(action, entry.at(1).span);
        net.tasks.push_back(id);
        net.actions[id] = action;
    }
    if (order) {
        auto lookup = [&](const SExpr& e) -> TaskId {
            if (!e.is_atom())
                throw ParseError(ParseCode::SyntaxError, e.span, "expected a task label");
            auto it = label_to_id.find(e.token);
            if (it == label_to_id.end())
                throw ParseError(ParseCode::UnknownTask, e.span, "unknown task label " + e.token);
            return it->second;
        };
        for (size_t i = 1; i < order->size(); ++i) {
            const SExpr& pair = order->at(i);
            if (pair.headed(":ordered")) {
                for (size_t j = 1; j + 1 < pair.size(); ++j)
                    net.order.insert({lookup(pair.at(j)), lookup(pair.at(j + 1))});
                continue;
            }
            if (!pair.is_list() || pair.size() != 2)
                throw ParseError(ParseCode::SyntaxError, pair.span,
                                 "ordering constraint must be (a b)");
            net.order.insert({lookup(pair.at(0)), lookup(pair.at(1))});
        }
    }
    try {
        net.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(ParseCode::BadStructure, order ? order->span : tasks.span, e.what());
    }
    return net;
}

const SExpr* find_section(const SExpr& form, std::string_view kw) {
    for (size_t i = 1; i < form.size(); ++i)
        if (form.at(i).headed(kw)) return &form.at(i);
    return nullptr;
}

std::vector<const SExpr*> find_sections(const SExpr& form, std::string_view kw) {
    std::vector<const SExpr*> out;
    for (size_t i = 1; i < form.size(); ++i)
        if (form.at(i).headed(kw)) out.push_back(&form.at(i));
    return out;
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(ParseCode::SyntaxError, SourceSpan{path, 0, 0}, "cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Domain parse_domain(std::string_view text, const std::string& filename) {
    SExpr form = read_one_sexpr(text, filename);
    if (!form.headed("domain"))
        throw ParseError(ParseCode::SyntaxError, form.span, "expected (domain ...)");

    Domain dom;
    dom.symbols = std::make_shared<SymbolTable>();
    SymbolTable& sy = *dom.symbols;

    if (const SExpr* name = find_section(form, "name")) {
        if (name->size() != 2 || !name->at(1).is_atom())
            throw ParseError(ParseCode::SyntaxError, name->span, "expected (name symbol)");
        dom.name = sy.intern(name->at(1).token);
    }

    std::set<std::string> declared;  // one namespace for predicates/operators/compounds
    auto declare = [&declared](const std::string& n, const SourceSpan& span) {
        if (!declared.insert(n).second)
            throw ParseError(ParseCode::DuplicateName, span, n);
    };

    if (const SExpr* preds = find_section(form, "predicates")) {
        for (size_t i = 1; i < preds->size(); ++i) {
            const SExpr& p = preds->at(i);
            if (!p.is_list() || p.size() == 0 || !p.at(0).is_atom())
                throw ParseError(ParseCode::SyntaxError, p.span, "expected (pred ?arg ...)");
            declare(p.at(0).token, p.at(0).span);
            dom.predicates.push_back(
                PredicateDecl{sy.intern(p.at(0).token), parse_param_list(p, sy)});
        }
    }

    if (const SExpr* consts = find_section(form, "constants")) {
        for (size_t i = 1; i < consts->size(); ++i) {
            const SExpr& c = consts->at(i);
            if (!c.is_atom() || is_var_token(c.token))
                throw ParseError(ParseCode::SyntaxError, c.span, "expected a constant");
            dom.constants.push_back(sy.intern(c.token));
        }
    }

    for (const SExpr* op : find_sections(form, "operator")) {
        const SExpr* head = find_section(*op, "head");
        if (!head || head->size() != 2)
            throw ParseError(ParseCode::SyntaxError, op->span, "operator needs (head (name ...))");
        OperatorSchema schema;
        schema.head = parse_atom(head->at(1), sy);
        declare(schema.head.pred.str(), head->span);
        std::vector<Symbol> params;
        for (const Term& t : schema.head.args) {
            if (!t.is_var)
                throw ParseError(ParseCode::SyntaxError, head->span,
                                 "operator parameters must be variables");
            params.push_back(t.name);
        }
        if (const SExpr* pre = find_section(*op, "pre"))
            for (size_t i = 1; i < pre->size(); ++i)
                schema.pre.push_back(parse_literal(pre->at(i), sy));
        if (const SExpr* add = find_section(*op, "add"))
            for (size_t i = 1; i < add->size(); ++i)
                schema.add.push_back(parse_atom(add->at(i), sy));
        if (const SExpr* del = find_section(*op, "del"))
            for (size_t i = 1; i < del->size(); ++i)
                schema.del.push_back(parse_atom(del->at(i), sy));
        std::sort(schema.pre.begin(), schema.pre.end());
        std::sort(schema.add.begin(), schema.add.end());
        std::sort(schema.del.begin(), schema.del.end());
        for (const Atom& a : schema.add)
            if (std::binary_search(schema.del.begin(), schema.del.end(), a))
                throw ParseError(ParseCode::BadStructure, op->span,
                                 "add and del effects overlap on " + a.str());
        for (const Literal& l : schema.pre)
            require_vars_in_params(params, l.atom, op->span, "precondition");
        for (const Atom& a : schema.add) require_vars_in_params(params, a, op->span, "add effect");
        for (const Atom& a : schema.del) require_vars_in_params(params, a, op->span, "del effect");
        dom.operators.push_back(std::move(schema));
    }

    for (const SExpr* c : find_sections(form, "compound")) {
        if (c->size() != 2 || !c->at(1).is_list())
            throw ParseError(ParseCode::SyntaxError, c->span, "expected (compound (name ?p ...))");
        const SExpr& decl = c->at(1);
        if (decl.size() == 0 || !decl.at(0).is_atom())
            throw ParseError(ParseCode::SyntaxError, decl.span, "expected (name ?p ...)");
        declare(decl.at(0).token, decl.at(0).span);
        dom.compounds.push_back(
            CompoundDecl{sy.intern(decl.at(0).token), parse_param_list(decl, sy)});
    }

    // Predicates in operator bodies can now be checked.
    DomainChecker checker(dom);
    for (size_t oi = 0; oi < dom.operators.size(); ++oi) {
        const OperatorSchema& schema = dom.operators[oi];
        for (const Literal& l : schema.pre) checker.check_predicate_atom(l.atom, form.span);
        for (const Atom& a : schema.add) checker.check_predicate_atom(a, form.span);
        for (const Atom& a : schema.del) checker.check_predicate_atom(a, form.span);
    }

    std::set<std::string> method_ids;
    for (const SExpr* m : find_sections(form, "method")) {
        const SExpr* id = find_section(*m, "id");
        const SExpr* head = find_section(*m, "head");
        const SExpr* tasks = find_section(*m, "tasks");
        const SExpr* order = find_section(*m, "order");
        if (!id || id->size() != 2 || !id->at(1).is_atom())
            throw ParseError(ParseCode::SyntaxError, m->span, "method needs (id name)");
        if (!head || head->size() != 2)
            throw ParseError(ParseCode::SyntaxError, m->span, "method needs (head (action ...))");
        if (!method_ids.insert(id->at(1).token).second)
            throw ParseError(ParseCode::DuplicateName, id->span,
                             "repeated method id " + id->at(1).token);
        Method method;
        method.id = sy.intern(id->at(1).token);
        method.head = parse_atom(head->at(1), sy);
        if (!dom.is_compound(method.head.pred))
            throw ParseError(ParseCode::MethodHeadNotCompound, head->span,
                             method.head.pred.str() + " is not a declared compound action");
        checker.check_action_atom(method.head, head->span);
        if (!tasks)
            throw ParseError(ParseCode::SyntaxError, m->span, "method needs (tasks ...)");
        method.net = parse_task_network(*tasks, order, sy, &checker);
        dom.methods.push_back(std::move(method));
    }

    // Canonical in-memory form: declarations sorted by name, methods by id.
    auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
    std::sort(dom.predicates.begin(), dom.predicates.end(), by_name);
    std::sort(dom.compounds.begin(), dom.compounds.end(), by_name);
    std::sort(dom.operators.begin(), dom.operators.end(),
              [](const OperatorSchema& a, const OperatorSchema& b) {
                  return a.head.pred < b.head.pred;
              });
    std::sort(dom.methods.begin(), dom.methods.end(),
              [](const Method& a, const Method& b) { return a.id < b.id; });
    std::sort(dom.constants.begin(), dom.constants.end());
    dom.constants.erase(std::unique(dom.constants.begin(), dom.constants.end()),
                        dom.constants.end());
    return dom;
}

Instance parse_instance(std::string_view text, const Domain& dom, const std::string& filename) {
    SExpr form = read_one_sexpr(text, filename);
    if (!form.headed("instance"))
        throw ParseError(ParseCode::SyntaxError, form.span, "expected (instance ...)");
    SymbolTable& sy = *dom.symbols;
    DomainChecker checker(dom);

    Instance inst;
    std::vector<Atom> init;
    if (const SExpr* init_s = find_section(form, "init")) {
        for (size_t i = 1; i < init_s->size(); ++i) {
            Atom a = parse_atom(init_s->at(i), sy);
            if (!a.ground())
                throw ParseError(ParseCode::UngroundedInit, init_s->at(i).span, a.str());
            checker.check_predicate_atom(a, init_s->at(i).span);
            init.push_back(std::move(a));
        }
    }
    inst.init = State::of(std::move(init));

    const SExpr* top = find_section(form, "top");
    if (!top || top->size() != 2)
        throw ParseError(ParseCode::SyntaxError, form.span, "instance needs (top (action ...))");
    inst.top = parse_atom(top->at(1), sy);
    if (!dom.is_compound(inst.top.pred))
        throw ParseError(ParseCode::UnknownTask, top->span,
                         inst.top.pred.str() + " is not a declared compound action");
    checker.check_action_atom(inst.top, top->span);
    if (!inst.top.ground())
        throw ParseError(ParseCode::UngroundedInit, top->span, "initial task must be ground");

    if (const SExpr* goal = find_section(form, "goal")) {
        for (size_t i = 1; i < goal->size(); ++i) {
            Atom a = parse_atom(goal->at(i), sy);
            if (!a.ground()) throw ParseError(ParseCode::UngroundedInit, goal->at(i).span, a.str());
            checker.check_predicate_atom(a, goal->at(i).span);
            inst.goal.push_back(std::move(a));
        }
        std::sort(inst.goal.begin(), inst.goal.end());
    }
    return inst;
}

Prioritization parse_prioritization(std::string_view text, const Domain& dom,
                                    const std::string& filename) {
    SExpr form = read_one_sexpr(text, filename);
    if (!form.headed("prioritization"))
        throw ParseError(ParseCode::SyntaxError, form.span, "expected (prioritization ...)");
    SymbolTable& sy = *dom.symbols;

    Prioritization p;
    std::set<Symbol> seen;
    for (size_t i = 1; i < form.size(); ++i) {
        const SExpr& s = form.at(i);
        if (!s.headed("stratum"))
            throw ParseError(ParseCode::SyntaxError, s.span, "expected (stratum id ...)");
        std::vector<Symbol> ids;
        for (size_t j = 1; j < s.size(); ++j) {
            if (!s.at(j).is_atom())
                throw ParseError(ParseCode::SyntaxError, s.at(j).span, "expected a method id");
            Symbol id = sy.intern(s.at(j).token);
            if (!dom.find_method(id))
                throw ParseError(ParseCode::NotAPartition, s.at(j).span,
                                 "unknown method " + id.str());
            if (!seen.insert(id).second)
                throw ParseError(ParseCode::NotAPartition, s.at(j).span,
                                 "method " + id.str() + " listed twice");
            ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        p.strata.push_back(std::move(ids));
    }
    if (seen.size() != dom.methods.size()) {
        for (const Method& m : dom.methods)
            if (!seen.count(m.id))
                throw ParseError(ParseCode::NotAPartition, form.span,
                                 "method " + m.id.str() + " missing from the partition");
    }
    return p;
}

std::vector<RefinedMethod> parse_methods(std::string_view text, const Domain& dom,
                                         const std::string& filename) {
    SExpr form = read_one_sexpr(text, filename);
    if (!form.headed("methods"))
        throw ParseError(ParseCode::SyntaxError, form.span, "expected (methods ...)");
    SymbolTable& sy = *dom.symbols;
    DomainChecker checker(dom);

    std::vector<RefinedMethod> out;
    std::set<std::string> ids;
    for (const SExpr* m : find_sections(form, "method")) {
        const SExpr* id = find_section(*m, "id");
        const SExpr* head = find_section(*m, "head");
        const SExpr* tasks = find_section(*m, "tasks");
        const SExpr* order = find_section(*m, "order");
        const SExpr* prov = find_section(*m, "provenance");
        if (!id || id->size() != 2 || !head || head->size() != 2 || !tasks)
            throw ParseError(ParseCode::SyntaxError, m->span,
                             "refined method needs id, head, tasks");
        if (!ids.insert(id->at(1).token).second)
            throw ParseError(ParseCode::DuplicateName, id->span, id->at(1).token);
        RefinedMethod rm;
        rm.method.id = sy.intern(id->at(1).token);
        rm.method.head = parse_atom(head->at(1), sy);
        if (!dom.is_compound(rm.method.head.pred))
            throw ParseError(ParseCode::MethodHeadNotCompound, head->span,
                             rm.method.head.pred.str());
        rm.method.net = parse_task_network(*tasks, order, sy, &checker);
        if (!prov)
            throw ParseError(ParseCode::SyntaxError, m->span,
                             "refined method needs (provenance (origin id) (inserted ...))");
        const SExpr* origin = find_section(*prov, "origin");
        if (!origin || origin->size() != 2 || !origin->at(1).is_atom())
            throw ParseError(ParseCode::SyntaxError, prov->span, "provenance needs (origin id)");
        rm.origin = sy.intern(origin->at(1).token);
        if (!dom.find_method(rm.origin))
            throw ParseError(ParseCode::UnknownSymbol, origin->span,
                             "origin names unknown method " + rm.origin.str());
        if (const SExpr* ins = find_section(*prov, "inserted")) {
            for (size_t i = 1; i < ins->size(); ++i) {
                const SExpr& lbl = ins->at(i);
                // Task labels are t<N> in canonical output.
                if (!lbl.is_atom() || lbl.token.size() < 2 || lbl.token[0] != 't')
                    throw ParseError(ParseCode::UnknownTask, lbl.span, "expected a task label");
                TaskId tid = std::atoi(lbl.token.c_str() + 1);
                if (!rm.method.net.actions.count(tid))
                    throw ParseError(ParseCode::UnknownTask, lbl.span,
                                     "inserted task " + lbl.token + " not in the network");
                rm.inserted.push_back(tid);
            }
            std::sort(rm.inserted.begin(), rm.inserted.end());
        }
        out.push_back(std::move(rm));
    }
    std::sort(out.begin(), out.end(), [](const RefinedMethod& a, const RefinedMethod& b) {
        return a.method.id < b.method.id;
    });
    return out;
}

DecompositionTree parse_dtree(std::string_view text, const Domain& dom,
                              const std::string& filename) {
    SExpr form = read_one_sexpr(text, filename);
    if (!form.headed("dtree"))
        throw ParseError(ParseCode::SyntaxError, form.span, "expected (dtree ...)");
    SymbolTable& sy = *dom.symbols;

    auto node_sections = find_sections(form, "node");
    std::map<std::string, NodeId> label_to_id;
    for (const SExpr* n : node_sections) {
        const SExpr* id = find_section(*n, "id");
        if (!id || id->size() != 2 || !id->at(1).is_atom())
            throw ParseError(ParseCode::SyntaxError, n->span, "node needs (id label)");
        if (label_to_id.count(id->at(1).token))
            throw ParseError(ParseCode::DuplicateName, id->span, id->at(1).token);
        label_to_id[id->at(1).token] = static_cast<NodeId>(label_to_id.size());
    }
    auto lookup = [&](const SExpr& e) -> NodeId {
        auto it = label_to_id.find(e.token);
        if (it == label_to_id.end())
            throw ParseError(ParseCode::UnknownTask, e.span, "unknown node " + e.token);
        return it->second;
    };

    DecompositionTree dt;
    dt.nodes.resize(label_to_id.size());
    for (const SExpr* n : node_sections) {
        NodeId me = label_to_id.at(find_section(*n, "id")->at(1).token);
        const SExpr* action = find_section(*n, "action");
        if (!action || action->size() != 2)
            throw ParseError(ParseCode::SyntaxError, n->span, "node needs (action (...))");
        dt.nodes[me].action = parse_atom(action->at(1), sy);
        if (const SExpr* children = find_section(*n, "children"))
            for (size_t i = 1; i < children->size(); ++i)
                dt.nodes[me].children.push_back(lookup(children->at(i)));
        if (const SExpr* method = find_section(*n, "method")) {
            if (method->size() < 2 || !method->at(1).is_atom())
                throw ParseError(ParseCode::SyntaxError, method->span,
                                 "expected (method id (bind ...))");
            MethodApp app;
            app.method_id = sy.intern(method->at(1).token);
            for (size_t i = 2; i < method->size(); ++i) {
                const SExpr& bind = method->at(i);
                if (!bind.headed("bind")) continue;
                for (size_t j = 1; j < bind.size(); ++j) {
                    const SExpr& pair = bind.at(j);
                    if (!pair.is_list() || pair.size() != 2)
                        throw ParseError(ParseCode::SyntaxError, pair.span,
                                         "binding entry must be (?var value)");
                    Term var = parse_term(pair.at(0), sy);
                    Term val = parse_term(pair.at(1), sy);
                    if (!var.is_var)
                        throw ParseError(ParseCode::SyntaxError, pair.span,
                                         "binding key must be a variable");
                    app.binding[var.name] = val;
                }
            }
            dt.nodes[me].method = std::move(app);
        }
    }
    const SExpr* root = find_section(form, "root");
    if (!root || root->size() != 2 || !root->at(1).is_atom())
        throw ParseError(ParseCode::SyntaxError, form.span, "dtree needs (root label)");
    dt.root = lookup(root->at(1));
    if (const SExpr* order = find_section(form, "order")) {
        for (size_t i = 1; i < order->size(); ++i) {
            const SExpr& pair = order->at(i);
            if (!pair.is_list() || pair.size() != 2)
                throw ParseError(ParseCode::SyntaxError, pair.span, "order entry must be (a b)");
            dt.constraints.insert({lookup(pair.at(0)), lookup(pair.at(1))});
        }
    }
    return dt;
}

}  // namespace htnr
