#include "evactree/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <queue>
#include <sstream>

namespace evactree {

double bpr_time(const Arc& arc, double flow) {
    if (!(flow >= 0.0)) {
        throw std::domain_error("bpr_time: negative flow");
    }
    if (arc.uncapacitated) {
        return 0.0;
    }
    if (flow == 0.0 || arc.bpr_alpha == 0.0) {
        return arc.free_flow_time;
    }
    return arc.free_flow_time * (1.0 + arc.bpr_alpha * std::pow(flow / arc.capacity, arc.bpr_beta));
}

bool operator==(const Arc& a, const Arc& b) {
    return a.tail == b.tail && a.head == b.head && a.free_flow_time == b.free_flow_time &&
           a.capacity == b.capacity && a.length == b.length && a.bpr_alpha == b.bpr_alpha &&
           a.bpr_beta == b.bpr_beta && a.uncapacitated == b.uncapacitated;
}

namespace {

void check_arc(const Arc& arc) {
    if (arc.uncapacitated) {
        if (arc.free_flow_time != 0.0) {
            throw ConfigError("uncapacitated arc with nonzero free-flow time");
        }
        return;
    }
    if (!(arc.capacity > 0.0)) {
        throw ConfigError("arc " + std::to_string(arc.tail) + "->" + std::to_string(arc.head) +
                          " has non-positive capacity");
    }
    if (!(arc.free_flow_time >= 0.0)) {
        throw ConfigError("arc " + std::to_string(arc.tail) + "->" + std::to_string(arc.head) +
                          " has negative free-flow time");
    }
    if (!(arc.bpr_beta >= 1.0)) {
        throw ConfigError("arc " + std::to_string(arc.tail) + "->" + std::to_string(arc.head) +
                          " has BPR power below 1");
    }
}

}  // namespace

Network::Network(std::vector<NodeId> nodes, std::vector<Arc> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    for (const Arc& arc : arcs_) {
        check_arc(arc);
    }
    rebuild_index();
}

void Network::rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!index_.emplace(nodes_[i], static_cast<int>(i)).second) {
            throw ConfigError("duplicate node id " + std::to_string(nodes_[i]));
        }
    }
    tails_.assign(arcs_.size(), -1);
    heads_.assign(arcs_.size(), -1);
    out_.assign(nodes_.size(), {});
    in_.assign(nodes_.size(), {});
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        auto t = index_.find(arcs_[a].tail);
        auto h = index_.find(arcs_[a].head);
        if (t == index_.end() || h == index_.end()) {
            throw ConfigError("arc " + std::to_string(arcs_[a].tail) + "->" +
                              std::to_string(arcs_[a].head) + " references an unknown node");
        }
        tails_[a] = t->second;
        heads_[a] = h->second;
        out_[static_cast<std::size_t>(t->second)].push_back(static_cast<ArcIndex>(a));
        in_[static_cast<std::size_t>(h->second)].push_back(static_cast<ArcIndex>(a));
    }

    // Pair each arc with the first unpaired opposite arc so the map stays an involution.
    reverse_.assign(arcs_.size(), -1);
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        if (reverse_[a] != -1) {
            continue;
        }
        for (ArcIndex b : out_[static_cast<std::size_t>(heads_[a])]) {
            if (static_cast<std::size_t>(b) != a && heads_[static_cast<std::size_t>(b)] == tails_[a] &&
                reverse_[static_cast<std::size_t>(b)] == -1) {
                reverse_[a] = b;
                reverse_[static_cast<std::size_t>(b)] = static_cast<ArcIndex>(a);
                break;
            }
        }
    }
}

int Network::index_of(NodeId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) {
        throw ConfigError("unknown node " + std::to_string(id));
    }
    return it->second;
}

std::vector<std::pair<ArcIndex, ArcIndex>> Network::antiparallel_pairs() const {
    std::vector<std::pair<ArcIndex, ArcIndex>> pairs;
    for (std::size_t a = 0; a < reverse_.size(); ++a) {
        if (reverse_[a] > static_cast<ArcIndex>(a)) {
            pairs.emplace_back(static_cast<ArcIndex>(a), reverse_[a]);
        }
    }
    return pairs;
}

void Network::set_shelter(NodeId id) {
    if (!has_node(id)) {
        throw ConfigError("shelter " + std::to_string(id) + " is not a network node");
    }
    if (is_dummy(id)) {
        throw ConfigError("shelter " + std::to_string(id) + " is a hop-transform dummy node");
    }
    shelter_ = id;
}

bool Network::is_real_shelter(NodeId id) const {
    return std::find(real_shelters_.begin(), real_shelters_.end(), id) != real_shelters_.end();
}

std::vector<NodeId> Network::nodes_unable_to_reach_shelter() const {
    if (!shelter_) {
        throw ConfigError("network has no shelter");
    }
    std::vector<char> reached(nodes_.size(), 0);
    std::queue<int> frontier;
    const int root = index_of(*shelter_);
    reached[static_cast<std::size_t>(root)] = 1;
    frontier.push(root);
    while (!frontier.empty()) {
        const int n = frontier.front();
        frontier.pop();
        for (ArcIndex a : in_[static_cast<std::size_t>(n)]) {
            const int t = tails_[static_cast<std::size_t>(a)];
            if (!reached[static_cast<std::size_t>(t)]) {
                reached[static_cast<std::size_t>(t)] = 1;
                frontier.push(t);
            }
        }
    }
    std::vector<NodeId> missing;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!reached[i]) {
            missing.push_back(nodes_[i]);
        }
    }
    return missing;
}

Network Network::with_scaled_capacity(double factor) const {
    if (!(factor > 0.0)) {
        throw ConfigError("capacity scale must be positive");
    }
    Network copy = *this;
    for (Arc& arc : copy.arcs_) {
        if (!arc.uncapacitated) {
            arc.capacity *= factor;
        }
    }
    return copy;
}

NodeId Network::max_node_id() const {
    return nodes_.empty() ? 0 : *std::max_element(nodes_.begin(), nodes_.end());
}

bool operator==(const Network& a, const Network& b) {
    return a.nodes_ == b.nodes_ && a.arcs_ == b.arcs_ && a.shelter_ == b.shelter_ &&
           a.real_shelters_ == b.real_shelters_ && a.dummy_nodes_ == b.dummy_nodes_;
}

// ---------------------------------------------------------------------------
// TNTP

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& token, int line, const char* field) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError(std::string("non-numeric ") + field + " field '" + token + "'", line);
    }
    return value;
}

int parse_node(const std::string& token, int line, const char* field) {
    const double value = parse_number(token, line, field);
    if (value != std::floor(value) || value < 1) {
        throw ParseError(std::string("invalid node id in ") + field + " field '" + token + "'", line);
    }
    return static_cast<int>(value);
}

}  // namespace

Network parse_tntp(std::istream& in) {
    std::map<std::string, std::string> metadata;
    std::string line;
    int line_no = 0;
    bool metadata_done = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '~') {
            continue;
        }
        if (t.front() != '<') {
            throw ParseError("expected metadata tag, found '" + t + "'", line_no);
        }
        const auto close = t.find('>');
        if (close == std::string::npos) {
            throw ParseError("malformed metadata tag '" + t + "'", line_no);
        }
        const std::string tag = t.substr(1, close - 1);
        if (tag == "END OF METADATA") {
            metadata_done = true;
            break;
        }
        metadata[tag] = trim(t.substr(close + 1));
    }
    if (!metadata_done) {
        throw ParseError("missing <END OF METADATA>", line_no);
    }

    auto header_count = [&](const char* tag) {
        auto it = metadata.find(tag);
        if (it == metadata.end()) {
            throw ParseError(std::string("missing <") + tag + "> header", line_no);
        }
        const double v = parse_number(it->second, line_no, tag);
        if (v < 0 || v != std::floor(v)) {
            throw ParseError(std::string("malformed <") + tag + "> header", line_no);
        }
        return static_cast<int>(v);
    };
    const int node_count = header_count("NUMBER OF NODES");
    const int link_count = header_count("NUMBER OF LINKS");

    std::vector<Arc> arcs;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t.front() == '~') {
            continue;
        }
        if (t.back() == ';') {
            t.pop_back();
        }
        std::istringstream fields(t);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) {
            tokens.push_back(tok);
        }
        if (tokens.size() < 7) {
            throw ParseError("link row has " + std::to_string(tokens.size()) + " fields, expected at least 7",
                             line_no);
        }
        Arc arc;
        arc.tail = parse_node(tokens[0], line_no, "init node");
        arc.head = parse_node(tokens[1], line_no, "term node");
        arc.capacity = parse_number(tokens[2], line_no, "capacity");
        arc.length = parse_number(tokens[3], line_no, "length");
        arc.free_flow_time = parse_number(tokens[4], line_no, "free flow time");
        arc.bpr_alpha = parse_number(tokens[5], line_no, "B");
        arc.bpr_beta = parse_number(tokens[6], line_no, "power");
        for (std::size_t k = 7; k < tokens.size(); ++k) {
            parse_number(tokens[k], line_no, "trailing");
        }
        if (arc.tail > node_count || arc.head > node_count) {
            throw ParseError("link " + std::to_string(arc.tail) + "->" + std::to_string(arc.head) +
                                 " references a node beyond <NUMBER OF NODES> " + std::to_string(node_count),
                             line_no);
        }
        try {
            check_arc(arc);
        } catch (const ConfigError& e) {
            throw ParseError(e.what(), line_no);
        }
        arcs.push_back(arc);
    }
    if (static_cast<int>(arcs.size()) != link_count) {
        throw ParseError("<NUMBER OF LINKS> declares " + std::to_string(link_count) + " links but " +
                             std::to_string(arcs.size()) + " rows were read",
                         line_no);
    }
    std::vector<NodeId> nodes(static_cast<std::size_t>(node_count));
    for (int i = 0; i < node_count; ++i) {
        nodes[static_cast<std::size_t>(i)] = i + 1;
    }
    return Network(std::move(nodes), std::move(arcs));
}

Network parse_tntp(const std::string& text) {
    std::istringstream in(text);
    return parse_tntp(in);
}

Network read_tntp_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open network file '" + path + "'");
    }
    return parse_tntp(in);
}

std::string write_tntp(const Network& network) {
    const NodeId max_id = network.max_node_id();
    if (static_cast<std::size_t>(max_id) != network.node_count()) {
        throw ConfigError("write_tntp requires node ids 1..N");
    }
    std::ostringstream out;
    out << std::setprecision(17);
    out << "<NUMBER OF NODES> " << network.node_count() << "\n";
    out << "<NUMBER OF LINKS> " << network.arc_count() << "\n";
    out << "<FIRST THRU NODE> 1\n";
    out << "<END OF METADATA>\n\n";
    out << "~\tinit_node\tterm_node\tcapacity\tlength\tfree_flow_time\tb\tpower\tspeed\ttoll\tlink_type\t;\n";
    for (const Arc& arc : network.arcs()) {
        if (arc.uncapacitated) {
            throw ConfigError("write_tntp cannot encode uncapacitated super-shelter arcs");
        }
        out << '\t' << arc.tail << '\t' << arc.head << '\t' << arc.capacity << '\t' << arc.length.value_or(0.0)
            << '\t' << arc.free_flow_time << '\t' << arc.bpr_alpha << '\t' << arc.bpr_beta << "\t0\t0\t1\t;\n";
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Transforms

Network add_super_shelter(const Network& network, std::span<const NodeId> shelters) {
    if (shelters.empty()) {
        throw ConfigError("shelter list is empty");
    }
    std::set<NodeId> seen;
    for (NodeId s : shelters) {
        if (!network.has_node(s)) {
            throw ConfigError("shelter " + std::to_string(s) + " is not a network node");
        }
        if (!seen.insert(s).second) {
            throw ConfigError("duplicate shelter " + std::to_string(s));
        }
    }
    if (!network.real_shelters().empty()) {
        throw ConfigError("network already has a super shelter");
    }
    std::vector<NodeId> nodes(network.nodes().begin(), network.nodes().end());
    std::vector<Arc> arcs(network.arcs().begin(), network.arcs().end());
    const NodeId root = network.max_node_id() + 1;
    nodes.push_back(root);
    for (NodeId s : shelters) {
        Arc arc;
        arc.tail = s;
        arc.head = root;
        arc.free_flow_time = 0.0;
        arc.capacity = kInfinity;
        arc.bpr_alpha = 0.0;
        arc.bpr_beta = 1.0;
        arc.uncapacitated = true;
        arcs.push_back(arc);
    }
    Network result(std::move(nodes), std::move(arcs));
    result.dummy_nodes_ = network.dummy_nodes_;
    result.real_shelters_.assign(shelters.begin(), shelters.end());
    result.shelter_ = root;
    return result;
}

Network hopify(const Network& network, double spacing) {
    if (!(spacing > 0.0)) {
        throw ConfigError("hop spacing must be positive");
    }
    if (!network.real_shelters().empty()) {
        throw ConfigError("hopify must run before the super-shelter transform");
    }
    const auto arcs_in = network.arcs();
    std::vector<int> hops(arcs_in.size());
    for (std::size_t a = 0; a < arcs_in.size(); ++a) {
        if (!arcs_in[a].length) {
            throw ConfigError("arc " + std::to_string(arcs_in[a].tail) + "->" + std::to_string(arcs_in[a].head) +
                              " has no length");
        }
        const double ratio = *arcs_in[a].length / spacing;
        // Guard exact multiples against floating-point residue.
        const double rounded = std::round(ratio);
        const double h = std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio) ? rounded : std::ceil(ratio);
        hops[a] = std::max(1, static_cast<int>(h));
    }

    std::vector<NodeId> nodes(network.nodes().begin(), network.nodes().end());
    std::set<NodeId> dummies = network.dummy_nodes();
    NodeId next_id = network.max_node_id() + 1;
    std::vector<std::vector<NodeId>> chain(arcs_in.size());

    for (std::size_t a = 0; a < arcs_in.size(); ++a) {
        if (hops[a] == 1 || !chain[a].empty()) {
            continue;
        }
        const ArcIndex rev = network.reverse_of(static_cast<ArcIndex>(a));
        for (int k = 0; k < hops[a] - 1; ++k) {
            nodes.push_back(next_id);
            dummies.insert(next_id);
            chain[a].push_back(next_id++);
        }
        if (rev >= 0 && hops[static_cast<std::size_t>(rev)] == hops[a]) {
            chain[static_cast<std::size_t>(rev)].assign(chain[a].rbegin(), chain[a].rend());
        }
    }

    std::vector<Arc> arcs;
    for (std::size_t a = 0; a < arcs_in.size(); ++a) {
        const Arc& original = arcs_in[a];
        const int h = hops[a];
        std::vector<NodeId> path;
        path.push_back(original.tail);
        path.insert(path.end(), chain[a].begin(), chain[a].end());
        path.push_back(original.head);
        for (int k = 0; k < h; ++k) {
            Arc sub = original;
            sub.tail = path[static_cast<std::size_t>(k)];
            sub.head = path[static_cast<std::size_t>(k + 1)];
            sub.free_flow_time = original.free_flow_time / h;
            sub.length = *original.length / h;
            arcs.push_back(sub);
        }
    }
    Network result(std::move(nodes), std::move(arcs));
    result.dummy_nodes_ = std::move(dummies);
    if (network.shelter()) {
        result.shelter_ = network.shelter();
    }
    return result;
}

}  // namespace evactree
