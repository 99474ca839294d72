#include "bgx/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace bgx {

std::string node_code(NodeId n) {
    switch (n.kind) {
        case NodeKind::Task: return "Y";
        case NodeKind::Data: return "X";
        case NodeKind::Nuisance: return "S" + std::to_string(int(n.index));
        case NodeKind::Latent: return "Z" + std::to_string(int(n.index));
    }
    return "?";
}

bool BayesianGraph::contains(NodeId n) const {
    return std::find(nodes.begin(), nodes.end(), n) != nodes.end();
}

bool BayesianGraph::has_edge(NodeId parent, NodeId child) const {
    return std::binary_search(edges.begin(), edges.end(), Edge{parent, child});
}

std::vector<NodeId> BayesianGraph::parents(NodeId n) const {
    std::vector<NodeId> out;
    for (const auto& [p, c] : edges)
        if (c == n) out.push_back(p);
    return out;
}

std::vector<NodeId> BayesianGraph::children(NodeId n) const {
    std::vector<NodeId> out;
    for (const auto& [p, c] : edges)
        if (p == n) out.push_back(c);
    return out;
}

std::vector<NodeId> BayesianGraph::latents() const {
    std::vector<NodeId> out;
    for (NodeId n : nodes)
        if (n.kind == NodeKind::Latent) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> BayesianGraph::nuisances() const {
    std::vector<NodeId> out;
    for (NodeId n : nodes)
        if (n.kind == NodeKind::Nuisance) out.push_back(n);
    std::sort(out.begin(), out.end());
    return out;
}

void BayesianGraph::add_edge(NodeId parent, NodeId child) {
    Edge e{parent, child};
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) edges.insert(it, e);
}

bool BayesianGraph::is_acyclic() const {
    // Kahn's algorithm over the node list.
    std::map<NodeId, int> indeg;
    for (NodeId n : nodes) indeg[n] = 0;
    for (const auto& [p, c] : edges) indeg[c]++;
    std::vector<NodeId> ready;
    for (const auto& [n, d] : indeg)
        if (d == 0) ready.push_back(n);
    std::size_t seen = 0;
    while (!ready.empty()) {
        NodeId n = ready.back();
        ready.pop_back();
        ++seen;
        for (NodeId c : children(n))
            if (--indeg[c] == 0) ready.push_back(c);
    }
    return seen == nodes.size();
}

void BayesianGraph::validate() const {
    int tasks = 0, datas = 0;
    std::set<int> s_idx, z_idx;
    for (NodeId n : nodes) {
        switch (n.kind) {
            case NodeKind::Task: ++tasks; break;
            case NodeKind::Data: ++datas; break;
            case NodeKind::Nuisance:
                if (!s_idx.insert(n.index).second)
                    throw std::invalid_argument("duplicate nuisance index");
                break;
            case NodeKind::Latent:
                if (!z_idx.insert(n.index).second)
                    throw std::invalid_argument("duplicate latent index");
                break;
        }
    }
    if (tasks != 1) throw std::invalid_argument("graph needs exactly one task node");
    if (datas != 1) throw std::invalid_argument("graph needs exactly one data node");
    auto contiguous = [](const std::set<int>& idx) {
        int want = 1;
        for (int i : idx)
            if (i != want++) return false;
        return true;
    };
    if (!contiguous(s_idx)) throw std::invalid_argument("nuisance indices must be contiguous from 1");
    if (!contiguous(z_idx)) throw std::invalid_argument("latent indices must be contiguous from 1");

    for (const auto& [p, c] : edges) {
        if (!contains(p) || !contains(c))
            throw std::invalid_argument("edge endpoint not in node set");
        if (p == c) throw std::invalid_argument("self edge");
        if (p.kind == NodeKind::Data)
            throw std::invalid_argument("data node must not have outgoing edges");
        if (c.kind == NodeKind::Task &&
            (p.kind == NodeKind::Data || p.kind == NodeKind::Latent))
            throw std::invalid_argument("task node cannot depend on data or latent nodes");
    }
    if (!std::is_sorted(edges.begin(), edges.end()))
        throw std::invalid_argument("edge list must be sorted");
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("duplicate edge");
    if (!is_acyclic()) throw std::invalid_argument("graph has a cycle");
}

std::string BayesianGraph::label(NodeId n) const {
    if (n.kind == NodeKind::Nuisance && nuisances().size() == 1) return "S";
    if (n.kind == NodeKind::Latent && latents().size() == 1) return "Z";
    return node_code(n);
}

std::vector<NodeId> BayesianGraph::descendants(NodeId n) const {
    std::set<NodeId> out;
    std::vector<NodeId> stack{n};
    while (!stack.empty()) {
        NodeId cur = stack.back();
        stack.pop_back();
        for (NodeId c : children(cur))
            if (out.insert(c).second) stack.push_back(c);
    }
    return {out.begin(), out.end()};
}

BayesianGraph full_chain_graph(const std::vector<NodeId>& order) {
    if (order.size() < 2 || order.front() != NodeId::task() || order.back() != NodeId::data())
        throw std::invalid_argument("factorization order must start at Y and end at X");
    std::set<NodeId> uniq(order.begin(), order.end());
    if (uniq.size() != order.size())
        throw std::invalid_argument("factorization order repeats a node");

    BayesianGraph g;
    g.nodes = order;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            g.add_edge(order[i], order[j]);
    g.validate();
    return g;
}

std::vector<PrunedGraph> enumerate_pruned_graphs(const std::vector<NodeId>& order,
                                                 std::size_t budget) {
    BayesianGraph full = full_chain_graph(order);
    const std::vector<Edge>& all = full.edges;
    if (all.size() > 62) throw std::invalid_argument("too many edges to enumerate");

    std::vector<PrunedGraph> out;
    const std::uint64_t total = std::uint64_t{1} << all.size();
    for (std::uint64_t mask = 0; mask < total && out.size() < budget; ++mask) {
        BayesianGraph g;
        g.nodes = full.nodes;
        for (std::size_t k = 0; k < all.size(); ++k)
            if (mask >> k & 1) g.add_edge(all[k].first, all[k].second);
        out.push_back({std::move(g), mask});
    }
    return out;
}

namespace {

std::string key_string(const BayesianGraph& g, const std::vector<int>& latent_map) {
    auto remap = [&](NodeId n) {
        if (n.kind == NodeKind::Latent) return NodeId::latent(latent_map[n.index - 1]);
        return n;
    };
    std::vector<Edge> es;
    es.reserve(g.edges.size());
    for (const auto& [p, c] : g.edges) es.emplace_back(remap(p), remap(c));
    std::sort(es.begin(), es.end());

    std::vector<NodeId> ns;
    for (NodeId n : g.nodes) ns.push_back(remap(n));
    std::sort(ns.begin(), ns.end());

    std::string s = "n:";
    for (NodeId n : ns) s += node_code(n) + ",";
    s += "|e:";
    for (const auto& [p, c] : es) s += node_code(p) + ">" + node_code(c) + ",";
    return s;
}

}  // namespace

std::string canonical_key(const BayesianGraph& g) {
    const int m = static_cast<int>(g.latents().size());
    std::vector<int> perm(m);
    std::iota(perm.begin(), perm.end(), 1);
    std::string best;
    do {
        std::string k = key_string(g, perm);
        if (best.empty() || k < best) best = std::move(k);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (best.empty()) best = key_string(g, {});
    return best;
}

const BayesianGraph* GraphCatalog::find(const std::string& name) const {
    for (const auto& g : entries)
        if (g.name == name) return &g;
    return nullptr;
}

void GraphCatalog::validate() const {
    std::set<std::string> names;
    for (const auto& g : entries) {
        if (!names.insert(g.name).second)
            throw std::invalid_argument("duplicate catalog name: " + g.name);
        g.validate();
    }
}

std::vector<NodeId> four_node_order() {
    return {NodeId::task(), NodeId::nuisance(1), NodeId::latent(1), NodeId::data()};
}

std::vector<NodeId> five_node_order() {
    return {NodeId::task(), NodeId::nuisance(1), NodeId::latent(1), NodeId::latent(2),
            NodeId::data()};
}

GraphCatalog paper_catalog() {
    const NodeId Y = NodeId::task();
    const NodeId S = NodeId::nuisance(1);
    const NodeId Z = NodeId::latent(1);
    const NodeId Z1 = NodeId::latent(1);
    const NodeId Z2 = NodeId::latent(2);
    const NodeId X = NodeId::data();

    auto make4 = [&](std::string name, std::vector<Edge> es) {
        BayesianGraph g;
        g.name = std::move(name);
        g.nodes = four_node_order();
        for (auto& [p, c] : es) g.add_edge(p, c);
        return g;
    };
    auto make5 = [&](std::string name, std::vector<Edge> es) {
        BayesianGraph g;
        g.name = std::move(name);
        g.nodes = five_node_order();
        for (auto& [p, c] : es) g.add_edge(p, c);
        return g;
    };

    GraphCatalog cat;
    cat.entries = {
        make4("A", {{Y, X}}),
        make4("B", {{Y, Z}, {Z, X}}),
        make4("C", {{Y, X}, {S, X}}),
        make4("D", {{Y, Z}, {S, Z}, {Z, X}}),
        make4("E", {{Y, Z}, {Z, X}, {S, X}}),
        make4("F", {{S, Z}, {Z, X}, {Y, X}}),
        make4("G", {{Y, Z}, {S, Z}, {Z, X}, {S, X}}),
        make4("H", {{Y, Z}, {S, Z}, {Z, X}, {Y, X}}),
        make4("I", {{Y, Z}, {S, Z}, {Z, X}, {S, X}, {Y, X}}),
        make5("J", {{S, Z1}, {Y, Z2}, {Z1, X}, {Z2, X}}),
        make5("K", {{S, Z1}, {Y, Z2}, {Z1, Z2}, {Z1, X}, {Z2, X}}),
    };
    cat.validate();
    return cat;
}

}  // namespace bgx
