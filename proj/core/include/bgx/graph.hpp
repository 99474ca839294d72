#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace bgx {

/// Role of a variable in the generative story: task label Y, nuisance S_i,
/// latent Z_i, or observed data X.
enum class NodeKind : std::uint8_t { Task = 0, Nuisance = 1, Latent = 2, Data = 3 };

/// Identity of a graph node. Nuisance/Latent indices are 1-based; Task and
/// Data carry index 0. Ordering is (kind, index), which doubles as the
/// canonical scan order Y < S1 < ... < Z1 < ... < X used everywhere.
struct NodeId {
    NodeKind kind{NodeKind::Task};
    std::uint8_t index{0};

    auto operator<=>(const NodeId&) const = default;

    static NodeId task() { return {NodeKind::Task, 0}; }
    static NodeId data() { return {NodeKind::Data, 0}; }
    static NodeId nuisance(int i) { return {NodeKind::Nuisance, static_cast<std::uint8_t>(i)}; }
    static NodeId latent(int i) { return {NodeKind::Latent, static_cast<std::uint8_t>(i)}; }
};

/// Short role code without graph context: "Y", "X", "S1", "Z2".
std::string node_code(NodeId n);

using Edge = std::pair<NodeId, NodeId>;  // parent -> child

/// A directed acyclic graph over role-tagged nodes encoding a generative
/// factorization from Y down to X.
///
/// Invariants (checked by validate()):
///  - exactly one Task and one Data node,
///  - Nuisance and Latent indices contiguous from 1,
///  - acyclic, Data has no outgoing edges,
///  - Task has no incoming edges from Data or Latent nodes.
struct BayesianGraph {
    std::string name;            // optional label, e.g. "E" or "K"
    std::vector<NodeId> nodes;   // factorization order
    std::vector<Edge> edges;     // kept sorted and unique

    bool contains(NodeId n) const;
    bool has_edge(NodeId parent, NodeId child) const;
    std::vector<NodeId> parents(NodeId n) const;
    std::vector<NodeId> children(NodeId n) const;
    std::vector<NodeId> latents() const;
    std::vector<NodeId> nuisances() const;

    /// Inserts an edge keeping the edge list sorted; duplicate inserts are no-ops.
    void add_edge(NodeId parent, NodeId child);

    bool is_acyclic() const;

    /// Throws std::invalid_argument when any structural invariant is broken.
    void validate() const;

    /// Human label in the context of this graph: single-nuisance graphs print
    /// "S" instead of "S1", single-latent graphs "Z" instead of "Z1".
    std::string label(NodeId n) const;

    /// Descendants of n (not including n), by edge reachability.
    std::vector<NodeId> descendants(NodeId n) const;
};

/// Complete DAG for the given factorization order: every earlier node is a
/// parent of every later node. Rejects orders not starting at the Task node
/// or not ending at the Data node.
BayesianGraph full_chain_graph(const std::vector<NodeId>& order);

/// One edge-subset of the full chain together with the bitmask that produced
/// it (bit k of `mask` selects edge k of the full chain's sorted edge list).
struct PrunedGraph {
    BayesianGraph graph;
    std::uint64_t mask{0};
};

/// Every subset of the full-chain edges for `order`, in increasing mask
/// order. No deduplication. `budget` caps the number of graphs returned.
std::vector<PrunedGraph> enumerate_pruned_graphs(
    const std::vector<NodeId>& order,
    std::size_t budget = std::numeric_limits<std::size_t>::max());

/// Deterministic key equal for two graphs iff they are identical up to a
/// relabeling of Latent indices. Task, Data and each Nuisance index are
/// fixed points.
std::string canonical_key(const BayesianGraph& g);

struct GraphCatalog {
    std::vector<BayesianGraph> entries;

    const BayesianGraph* find(const std::string& name) const;
    void validate() const;  // unique names + per-entry invariants
};

/// The eleven named generative models A..K. A..I live on the 4-node set
/// {Y,S,Z,X}; J and K use two latents {Y,S,Z1,Z2,X}.
GraphCatalog paper_catalog();

/// [Y, S, Z, X]
std::vector<NodeId> four_node_order();
/// [Y, S, Z1, Z2, X]
std::vector<NodeId> five_node_order();

}  // namespace bgx
