#include "evactree/export.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

namespace evactree {

std::string export_graph(const Solution& s) {
    std::ostringstream out;
    out << std::setprecision(10);
    for (std::size_t k = 0; k < s.classes.size(); ++k) {
        const SolutionClass& c = s.classes[k];
        std::set<NodeId> nodes;
        for (ArcIndex a : c.tree) {
            const SolutionArc& arc = s.arcs.at(static_cast<std::size_t>(a));
            if (!arc.uncapacitated) {
                nodes.insert(arc.tail);
                nodes.insert(arc.head);
            }
        }
        std::set<NodeId> refuel;
        for (const PathAssignment& p : s.paths) {
            if (p.vehicle_class == static_cast<int>(k) && p.refuel) {
                refuel.insert(p.origin);
            }
        }
        out << "digraph \"" << (c.name.empty() ? "class" + std::to_string(k) : c.name) << "\" {\n";
        for (NodeId n : nodes) {
            std::vector<std::string> attrs;
            if (std::find(s.shelters.begin(), s.shelters.end(), n) != s.shelters.end()) {
                attrs.push_back("shape=doublecircle");
            } else if (std::find(c.stations.begin(), c.stations.end(), n) != c.stations.end()) {
                attrs.push_back("shape=box");
            }
            if (refuel.contains(n)) {
                attrs.push_back("style=filled");
                attrs.push_back("fillcolor=green");
            }
            out << "  \"" << n << '"';
            if (!attrs.empty()) {
                out << " [";
                for (std::size_t i = 0; i < attrs.size(); ++i) {
                    out << (i ? ", " : "") << attrs[i];
                }
                out << ']';
            }
            out << ";\n";
        }
        for (ArcIndex a : c.tree) {
            const SolutionArc& arc = s.arcs.at(static_cast<std::size_t>(a));
            if (arc.uncapacitated) {
                continue;
            }
            out << "  \"" << arc.tail << "\" -> \"" << arc.head << "\" [label=\""
                << c.flow.at(static_cast<std::size_t>(a)) << "\"];\n";
        }
        out << "}\n";
    }
    return out.str();
}

std::string export_table(const Solution& s) {
    std::ostringstream out;
    out << std::setprecision(12);
    out << "class,arc,tail,head,flow\n";
    for (std::size_t k = 0; k < s.classes.size(); ++k) {
        const SolutionClass& c = s.classes[k];
        for (ArcIndex a : c.tree) {
            const SolutionArc& arc = s.arcs.at(static_cast<std::size_t>(a));
            out << (c.name.empty() ? std::to_string(k) : c.name) << ',' << a << ',' << arc.tail << ',' << arc.head
                << ',' << c.flow.at(static_cast<std::size_t>(a)) << '\n';
        }
    }
    return out.str();
}

}  // namespace evactree
