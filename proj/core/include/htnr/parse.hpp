#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "htnr/dtree.hpp"
#include "htnr/model.hpp"
#include "htnr/sexpr.hpp"

namespace htnr {

// Parsers normalize as they build: declaration lists and effect sets are
// sorted, task ids are assigned 1..n in order of appearance, and every
// core-model invariant is checked (violations are ParseErrors with spans).

Domain parse_domain(std::string_view text, const std::string& filename = "<domain>");

Instance parse_instance(std::string_view text, const Domain& dom,
                        const std::string& filename = "<instance>");

Prioritization parse_prioritization(std::string_view text, const Domain& dom,
                                    const std::string& filename = "<prioritization>");

std::vector<RefinedMethod> parse_methods(std::string_view text, const Domain& dom,
                                         const std::string& filename = "<methods>");

// Decomposition trees reference methods by id; unknown ids are tolerated
// here and reported by validate_dt.
DecompositionTree parse_dtree(std::string_view text, const Domain& dom,
                              const std::string& filename = "<dtree>");

// File loading convenience (throws ParseError with the path on IO failure).
std::string read_file(const std::string& path);

}  // namespace htnr
