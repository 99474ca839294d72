#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bgx/bayes_ball.hpp"
#include "bgx/graph.hpp"

namespace bgx {

/// Network block role a factor is realized by.
enum class BlockRole : std::uint8_t { Encoder, Classifier, NuisanceEstimator, Decoder, Adversary };

std::string role_name(BlockRole r);

/// Ordering of the posterior factorization p(y,s,z|x).
enum class InferenceStrategy : std::uint8_t { ZFirst, SFirst, YFirst };

std::string strategy_suffix(InferenceStrategy s);  // "z" / "s" / "y"

/// One conditional factor p(outputs | inputs). Encoders for the Z-first
/// strategy may produce several latents jointly (one network head); all other
/// factors have a single output.
struct Factor {
    std::vector<NodeId> outputs;
    std::vector<NodeId> inputs;  // sorted canonically
    BlockRole role{BlockRole::Encoder};
    bool stochastic{false};  // variational latent with Gaussian reparameterization

    auto operator<=>(const Factor&) const = default;

    bool produces(NodeId n) const;
    bool consumes(NodeId n) const;
};

/// A trainable candidate: generative graph, pruned inference factors (plus a
/// decoder factor when the generative X has latent parents) and the adversary
/// attachment points justified by the independency list.
struct ModelSpec {
    BayesianGraph generative;
    InferenceStrategy strategy{InferenceStrategy::ZFirst};
    std::vector<NodeId> inference_order;  // inferred nodes, in factor order
    std::vector<Factor> factors;          // inference chain then decoder
    std::vector<std::pair<NodeId, NodeId>> adversary_targets;  // (latent, nuisance)
    bool variational{false};
    std::string name;  // paper convention: model letter plus "z"/"s"/"y" suffix

    bool has_decoder() const;
    const Factor* producer(NodeId n) const;  // non-adversary factor producing n
    std::vector<Factor> adversary_factors() const;

    /// Throws std::invalid_argument when a structural invariant is broken.
    void validate() const;

    /// "p(z|x) p(s|z,x) p(y|z)" style rendering (inference factors only).
    std::string factorization_string() const;
};

/// Full-chain inference factor list for the given node set: Z-first infers
/// all latents (in index order), then nuisances, then Y; S-first swaps the
/// latent and nuisance slots; Y-first infers Y, then nuisances, then latents.
/// Every factor conditions on X and all previously inferred nodes.
std::vector<Factor> full_chain_inference(const std::vector<NodeId>& nodes,
                                         InferenceStrategy strategy);

/// Removes input v from a factor whenever (output ⊥ v | remaining inputs) is
/// in the independency list, scanning inputs in canonical node order and
/// iterating to a fixed point. Factors whose input set empties out are
/// detached priors and are dropped.
std::vector<Factor> prune_factor_graph(std::vector<Factor> factors,
                                       const std::vector<IndependencyStatement>& independencies);

/// Builds the complete ModelSpec for one generative graph and strategy:
/// pruned inference chain (with the Z-first latent head merged into a joint
/// encoder), decoder over X's generative parents when at least one of them is
/// a latent, and adversary heads for every (Z_k, S_j) made independent
/// (conditionally or marginally) by the graph.
///
/// Y-first is accepted only when every latent detaches under pruning.
ModelSpec assemble_model_spec(const BayesianGraph& generative, InferenceStrategy strategy,
                              bool variational);

/// Semi-supervision behavior class of a spec. SEnd: no non-adversary factor
/// consumes a nuisance (missing S labels only drop the supervision term).
/// SMid: some factor consumes a nuisance, so missing labels require
/// Gumbel-Softmax marginalization. SAbsent: no nuisance factor at all.
enum class SemiSupervisionClass : std::uint8_t { SEnd, SMid, SAbsent };

SemiSupervisionClass semi_supervision_class(const ModelSpec& spec);

/// Curated expansion of a catalog into base model configurations: strategies
/// whose factorizations coincide are deduplicated (B's two orders collapse,
/// C's Z-first reduces to S-first), Y-first is added where legal, and every
/// spec with an encoder appears in a non-variational and a variational
/// variant. For the paper catalog this yields exactly 37 specs.
std::vector<ModelSpec> expand_catalog(const GraphCatalog& catalog);

}  // namespace bgx
