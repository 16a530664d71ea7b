#pragma once

#include <string>
#include <vector>

#include "htnr/dtree.hpp"
#include "htnr/model.hpp"

namespace htnr {

// Canonical printers: declarations sorted, fixed indentation, deterministic
// byte-for-byte. parse(print(x)) is structurally equal to x.

std::string print_atom(const Atom& a);
std::string print_domain(const Domain& dom);
std::string print_instance(const Instance& inst);
std::string print_prioritization(const Prioritization& p);
std::string print_methods(const std::vector<RefinedMethod>& methods);
std::string print_dtree(const DecompositionTree& dt);

}  // namespace htnr
