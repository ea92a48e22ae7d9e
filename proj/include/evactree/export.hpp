#pragma once

#include <string>

#include "evactree/solution.hpp"

namespace evactree {

/// One digraph per class. Shelters are double circles, stations boxes, and
/// origins whose path needs refuelling are filled green. Super-shelter arcs
/// are left out; edge labels carry the class flow.
std::string export_graph(const Solution& solution);

/// Comma-separated rows: class,arc,tail,head,flow for every tree arc.
std::string export_table(const Solution& solution);

}  // namespace evactree
