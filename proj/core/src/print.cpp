#include "htnr/print.hpp"

#include <algorithm>
#include <sstream>

namespace htnr {

namespace {

void write_atom(std::ostream& os, const Atom& a) {
    os << '(' << a.pred.str();
    for (const Term& t : a.args) os << ' ' << t.name.str();
    os << ')';
}

void write_literal(std::ostream& os, const Literal& l) {
    if (!l.positive) {
        os << "(not ";
        write_atom(os, l.atom);
        os << ')';
        return;
    }
    write_atom(os, l.atom);
}

void write_network(std::ostream& os, const TaskNetwork& net, const std::string& indent) {
    std::vector<TaskId> tasks = net.tasks;
    std::sort(tasks.begin(), tasks.end());
    os << indent << "(tasks";
    for (TaskId t : tasks) {
        os << '\n' << indent << "  (t" << t << ' ';
        write_atom(os, net.actions.at(t));
        os << ')';
    }
    os << ')';
    if (!net.order.empty()) {
        os << '\n' << indent << "(order";
        for (const auto& [a, b] : net.order) os << " (t" << a << " t" << b << ')';
        os << ')';
    }
}

void write_method_body(std::ostream& os, const Method& m, const std::string& indent) {
    os << indent << "(id " << m.id.str() << ")\n";
    os << indent << "(head ";
    write_atom(os, m.head);
    os << ")\n";
    write_network(os, m.net, indent);
}

}  // namespace

std::string print_atom(const Atom& a) {
    std::ostringstream os;
    write_atom(os, a);
    return os.str();
}

std::string print_domain(const Domain& dom) {
    Domain d = dom;  // sort a copy; parsed domains are already canonical
    auto by_name = [](const auto& a, const auto& b) { return a.name < b.name; };
    std::sort(d.predicates.begin(), d.predicates.end(), by_name);
    std::sort(d.compounds.begin(), d.compounds.end(), by_name);
    std::sort(d.operators.begin(), d.operators.end(),
              [](const OperatorSchema& a, const OperatorSchema& b) {
                  return a.head.pred < b.head.pred;
              });
    std::sort(d.methods.begin(), d.methods.end(),
              [](const Method& a, const Method& b) { return a.id < b.id; });
    std::sort(d.constants.begin(), d.constants.end());

    std::ostringstream os;
    os << "(domain";
    if (d.name.valid()) os << "\n  (name " << d.name.str() << ')';
    if (!d.predicates.empty()) {
        os << "\n  (predicates";
        for (const auto& p : d.predicates) {
            os << "\n    (" << p.name.str();
            for (Symbol v : p.params) os << ' ' << v.str();
            os << ')';
        }
        os << ')';
    }
    if (!d.constants.empty()) {
        os << "\n  (constants";
        for (Symbol c : d.constants) os << ' ' << c.str();
        os << ')';
    }
    for (const auto& op : d.operators) {
        os << "\n  (operator";
        os << "\n    (head ";
        write_atom(os, op.head);
        os << ')';
        auto sorted_pre = op.pre;
        std::sort(sorted_pre.begin(), sorted_pre.end());
        os << "\n    (pre";
        for (const Literal& l : sorted_pre) {
            os << ' ';
            write_literal(os, l);
        }
        os << ')';
        auto adds = op.add;
        std::sort(adds.begin(), adds.end());
        os << "\n    (add";
        for (const Atom& a : adds) {
            os << ' ';
            write_atom(os, a);
        }
        os << ')';
        auto dels = op.del;
        std::sort(dels.begin(), dels.end());
        os << "\n    (del";
        for (const Atom& a : dels) {
            os << ' ';
            write_atom(os, a);
        }
        os << "))";
    }
    for (const auto& c : d.compounds) {
        os << "\n  (compound (" << c.name.str();
        for (Symbol v : c.params) os << ' ' << v.str();
        os << "))";
    }
    for (const auto& m : d.methods) {
        os << "\n  (method\n";
        write_method_body(os, m, "    ");
        os << ')';
    }
    os << ")\n";
    return os.str();
}

std::string print_instance(const Instance& inst) {
    std::ostringstream os;
    os << "(instance";
    os << "\n  (init";
    for (const Atom& a : inst.init.atoms()) {
        os << "\n    ";
        write_atom(os, a);
    }
    os << ')';
    os << "\n  (top ";
    write_atom(os, inst.top);
    os << ')';
    if (!inst.goal.empty()) {
        auto goal = inst.goal;
        std::sort(goal.begin(), goal.end());
        os << "\n  (goal";
        for (const Atom& a : goal) {
            os << ' ';
            write_atom(os, a);
        }
        os << ')';
    }
    os << ")\n";
    return os.str();
}

std::string print_prioritization(const Prioritization& p) {
    std::ostringstream os;
    os << "(prioritization";
    for (const auto& stratum : p.strata) {
        auto ids = stratum;
        std::sort(ids.begin(), ids.end());
        os << "\n  (stratum";
        for (Symbol s : ids) os << ' ' << s.str();
        os << ')';
    }
    os << ")\n";
    return os.str();
}

std::string print_methods(const std::vector<RefinedMethod>& methods) {
    auto sorted = methods;
    std::sort(sorted.begin(), sorted.end(), [](const RefinedMethod& a, const RefinedMethod& b) {
        return a.method.id < b.method.id;
    });
    std::ostringstream os;
    os << "(methods";
    for (const auto& rm : sorted) {
        os << "\n  (method\n";
        write_method_body(os, rm.method, "    ");
        os << "\n    (provenance (origin " << rm.origin.str() << ')';
        if (!rm.inserted.empty()) {
            auto ins = rm.inserted;
            std::sort(ins.begin(), ins.end());
            os << " (inserted";
            for (TaskId t : ins) os << " t" << t;
            os << ')';
        }
        os << "))";
    }
    os << ")\n";
    return os.str();
}

std::string print_dtree(const DecompositionTree& dt) {
    std::ostringstream os;
    auto label = [](NodeId n) { return "n" + std::to_string(n + 1); };
    os << "(dtree";
    os << "\n  (root " << label(dt.root) << ')';
    for (NodeId n = 0; n < static_cast<NodeId>(dt.nodes.size()); ++n) {
        const DTNode& node = dt.nodes[n];
        os << "\n  (node (id " << label(n) << ") (action ";
        write_atom(os, node.action);
        os << ')';
        if (node.method) {
            os << " (method " << node.method->method_id.str();
            if (!node.method->binding.empty()) {
                os << " (bind";
                for (const auto& [var, val] : node.method->binding)
                    os << " (" << var.str() << ' ' << val.name.str() << ')';
                os << ')';
            }
            os << ')';
        }
        if (!node.children.empty()) {
            os << " (children";
            for (NodeId c : node.children) os << ' ' << label(c);
            os << ')';
        }
        os << ')';
    }
    if (!dt.constraints.empty()) {
        os << "\n  (order";
        for (const auto& [a, b] : dt.constraints) os << " (" << label(a) << ' ' << label(b) << ')';
        os << ')';
    }
    os << ")\n";
    return os.str();
}

}  // namespace htnr
