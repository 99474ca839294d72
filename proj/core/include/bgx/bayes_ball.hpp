#pragma once

#include <string>
#include <vector>

#include "bgx/graph.hpp"

namespace bgx {

/// A conditional-independence triple (left ⊥ right | given). Node vectors are
/// kept sorted; left/right are stored in canonical order so the symmetric
/// statement has a single representation.
struct IndependencyStatement {
    std::vector<NodeId> left;
    std::vector<NodeId> right;
    std::vector<NodeId> given;

    auto operator<=>(const IndependencyStatement&) const = default;

    static IndependencyStatement make(std::vector<NodeId> a, std::vector<NodeId> b,
                                      std::vector<NodeId> c);
    std::string to_string(const BayesianGraph& g) const;
};

/// Bayes-Ball d-separation query: true iff no active path connects `a` to `b`
/// once `given` is observed. The three sets must be pairwise disjoint subsets
/// of the graph's nodes (throws std::invalid_argument otherwise).
bool is_d_separated(const BayesianGraph& g, const std::vector<NodeId>& a,
                    const std::vector<NodeId>& b, const std::vector<NodeId>& given);

/// All pairwise statements (u ⊥ v | C) that hold by d-separation, for every
/// conditioning subset C of the remaining nodes, plus the marginal
/// (Z_k ⊥ {all nuisances}) statements. Deterministically ordered.
///
/// For graphs above 5 nodes the conditioning sets are capped at size 3; the
/// exhaustive subset sweep is only needed (and only cheap) at catalog scale.
std::vector<IndependencyStatement> independency_list(const BayesianGraph& g);

/// Lookup helper over a statement list: does it contain (u ⊥ v | c)?
bool contains_statement(const std::vector<IndependencyStatement>& list, NodeId u, NodeId v,
                        std::vector<NodeId> c);

}  // namespace bgx
