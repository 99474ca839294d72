#include "bgx/bayes_ball.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace bgx {

IndependencyStatement IndependencyStatement::make(std::vector<NodeId> a, std::vector<NodeId> b,
                                                  std::vector<NodeId> c) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::sort(c.begin(), c.end());
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b), std::move(c)};
}

std::string IndependencyStatement::to_string(const BayesianGraph& g) const {
    auto side = [&](const std::vector<NodeId>& ns) {
        std::string s;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            if (i) s += ",";
            s += g.label(ns[i]);
        }
        return s;
    };
    std::string s = side(left) + " ⊥ " + side(right);
    if (!given.empty()) s += " | " + side(given);
    return s;
}

namespace {

// Visit direction for the ball: Up = arrived from a child, Down = arrived
// from a parent.
enum class Dir : std::uint8_t { Up, Down };

}  // namespace

bool is_d_separated(const BayesianGraph& g, const std::vector<NodeId>& a,
                    const std::vector<NodeId>& b, const std::vector<NodeId>& given) {
    std::set<NodeId> sa(a.begin(), a.end());
    std::set<NodeId> sb(b.begin(), b.end());
    std::set<NodeId> sc(given.begin(), given.end());
    if (sa.empty() || sb.empty()) throw std::invalid_argument("query sets must be nonempty");
    for (NodeId n : sa)
        if (sb.count(n) || sc.count(n)) throw std::invalid_argument("query sets overlap");
    for (NodeId n : sb)
        if (sc.count(n)) throw std::invalid_argument("query sets overlap");
    auto in_graph = [&](const std::set<NodeId>& s) {
        return std::all_of(s.begin(), s.end(), [&](NodeId n) { return g.contains(n); });
    };
    if (!in_graph(sa) || !in_graph(sb) || !in_graph(sc))
        throw std::invalid_argument("query node not in graph");

    // Observed nodes and their ancestors; a collider lets the ball through
    // exactly when it lies in this set.
    std::set<NodeId> anc(sc.begin(), sc.end());
    std::deque<NodeId> todo(sc.begin(), sc.end());
    while (!todo.empty()) {
        NodeId n = todo.front();
        todo.pop_front();
        for (NodeId p : g.parents(n))
            if (anc.insert(p).second) todo.push_back(p);
    }

    std::set<std::pair<NodeId, Dir>> visited;
    std::deque<std::pair<NodeId, Dir>> queue;
    for (NodeId s : sa) queue.push_back({s, Dir::Up});

    while (!queue.empty()) {
        auto [n, dir] = queue.front();
        queue.pop_front();
        if (!visited.insert({n, dir}).second) continue;
        if (sb.count(n)) return false;

        if (dir == Dir::Up) {
            if (!sc.count(n)) {
                for (NodeId p : g.parents(n)) queue.push_back({p, Dir::Up});
                for (NodeId c : g.children(n)) queue.push_back({c, Dir::Down});
            }
        } else {
            if (!sc.count(n))
                for (NodeId c : g.children(n)) queue.push_back({c, Dir::Down});
            if (anc.count(n))
                for (NodeId p : g.parents(n)) queue.push_back({p, Dir::Up});
        }
    }
    return true;
}

std::vector<IndependencyStatement> independency_list(const BayesianGraph& g) {
    const std::size_t max_cond = g.nodes.size() <= 5 ? g.nodes.size() : 3;

    std::set<IndependencyStatement> out;
    std::vector<NodeId> nodes = g.nodes;
    std::sort(nodes.begin(), nodes.end());

    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            std::vector<NodeId> rest;
            for (NodeId n : nodes)
                if (n != nodes[i] && n != nodes[j]) rest.push_back(n);
            const std::uint32_t subsets = 1u << rest.size();
            for (std::uint32_t m = 0; m < subsets; ++m) {
                std::vector<NodeId> cond;
                for (std::size_t k = 0; k < rest.size(); ++k)
                    if (m >> k & 1) cond.push_back(rest[k]);
                if (cond.size() > max_cond) continue;
                if (is_d_separated(g, {nodes[i]}, {nodes[j]}, cond))
                    out.insert(IndependencyStatement::make({nodes[i]}, {nodes[j]}, cond));
            }
        }
    }

    // Marginal Z_k ⊥ S-set statements; with a single nuisance these coincide
    // with a pairwise entry and the set dedupes them.
    std::vector<NodeId> s_all = g.nuisances();
    if (!s_all.empty()) {
        for (NodeId z : g.latents())
            if (is_d_separated(g, {z}, s_all, {}))
                out.insert(IndependencyStatement::make({z}, s_all, {}));
    }

    return {out.begin(), out.end()};
}

bool contains_statement(const std::vector<IndependencyStatement>& list, NodeId u, NodeId v,
                        std::vector<NodeId> c) {
    IndependencyStatement want = IndependencyStatement::make({u}, {v}, std::move(c));
    return std::binary_search(list.begin(), list.end(), want);
}

}  // namespace bgx
