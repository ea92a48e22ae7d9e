#pragma once

#include <cstddef>
#include <istream>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace evactree {

using NodeId = int;
using ArcIndex = int;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Arc {
    NodeId tail = 0;
    NodeId head = 0;
    double free_flow_time = 0.0;  // dataset time units, treated as hours
    double capacity = 0.0;        // vehicles
    std::optional<double> length; // miles
    double bpr_alpha = 0.15;
    double bpr_beta = 4.0;
    bool uncapacitated = false;   // super-shelter arcs

    // Hop weight of the arc. Super-shelter arcs are bookkeeping and do not count.
    int hop_weight() const { return uncapacitated ? 0 : 1; }
};

/// Link travel time t0 * (1 + alpha * (flow / capacity)^beta).
/// Uncapacitated arcs always return 0.
double bpr_time(const Arc& arc, double flow);

/// Directed road network with a single evacuation root.
///
/// Nodes are addressed externally by their dataset id and internally by a
/// dense index in [0, node_count()). Arc endpoints are stored as ids; the
/// index-space adjacency is cached at construction.
class Network {
public:
    Network() = default;
    Network(std::vector<NodeId> nodes, std::vector<Arc> arcs);

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t arc_count() const { return arcs_.size(); }

    std::span<const NodeId> nodes() const { return nodes_; }
    std::span<const Arc> arcs() const { return arcs_; }
    const Arc& arc(ArcIndex a) const { return arcs_.at(static_cast<std::size_t>(a)); }

    bool has_node(NodeId id) const { return index_.contains(id); }
    int index_of(NodeId id) const;
    NodeId id_of(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }

    int tail_index(ArcIndex a) const { return tails_[static_cast<std::size_t>(a)]; }
    int head_index(ArcIndex a) const { return heads_[static_cast<std::size_t>(a)]; }
    std::span<const ArcIndex> out_arcs(int node_index) const { return out_[static_cast<std::size_t>(node_index)]; }
    std::span<const ArcIndex> in_arcs(int node_index) const { return in_[static_cast<std::size_t>(node_index)]; }

    /// Opposite-direction arc of `a`, or -1.
    ArcIndex reverse_of(ArcIndex a) const { return reverse_[static_cast<std::size_t>(a)]; }
    /// Anti-parallel pairs (a, b) with a < b.
    std::vector<std::pair<ArcIndex, ArcIndex>> antiparallel_pairs() const;

    std::optional<NodeId> shelter() const { return shelter_; }
    void set_shelter(NodeId id);

    /// Real shelters feeding a super-shelter root; empty when the root is a plain node.
    const std::vector<NodeId>& real_shelters() const { return real_shelters_; }
    bool is_real_shelter(NodeId id) const;

    const std::set<NodeId>& dummy_nodes() const { return dummy_nodes_; }
    bool is_dummy(NodeId id) const { return dummy_nodes_.contains(id); }

    /// Nodes (by id) without a directed path to the shelter. Throws if no shelter is set.
    std::vector<NodeId> nodes_unable_to_reach_shelter() const;

    /// Arcs whose capacity is multiplied by `factor` (uncapacitated arcs untouched).
    Network with_scaled_capacity(double factor) const;

    NodeId max_node_id() const;

    friend bool operator==(const Network& a, const Network& b);

private:
    friend Network add_super_shelter(const Network&, std::span<const NodeId>);
    friend Network hopify(const Network&, double);

    void rebuild_index();

    std::vector<NodeId> nodes_;
    std::vector<Arc> arcs_;
    std::optional<NodeId> shelter_;
    std::vector<NodeId> real_shelters_;
    std::set<NodeId> dummy_nodes_;

    std::unordered_map<NodeId, int> index_;
    std::vector<int> tails_, heads_;
    std::vector<std::vector<ArcIndex>> out_, in_;
    std::vector<ArcIndex> reverse_;
};

bool operator==(const Arc& a, const Arc& b);

/// Reads the TNTP metadata + link-table layout.
Network parse_tntp(std::istream& in);
Network parse_tntp(const std::string& text);
Network read_tntp_file(const std::string& path);

/// Writes a TNTP link table; parse_tntp(write_tntp(n)) reproduces n's nodes and arcs.
std::string write_tntp(const Network& network);

/// Adds a root node connected from every listed shelter by a zero-time uncapacitated arc.
/// The root becomes the network shelter. Applied for a single shelter as well.
Network add_super_shelter(const Network& network, std::span<const NodeId> shelters);

/// Replaces every arc of length L by ceil(L / spacing) unit-hop arcs through fresh
/// dummy nodes. Free-flow time is split evenly; capacity and BPR parameters are kept.
/// Anti-parallel arcs with equal hop counts share their dummy chain so the pair
/// relation survives the transform.
Network hopify(const Network& network, double spacing);

}  // namespace evactree
