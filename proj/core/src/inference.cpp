#include "bgx/inference.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace bgx {

std::string role_name(BlockRole r) {
    switch (r) {
        case BlockRole::Encoder: return "encoder";
        case BlockRole::Classifier: return "classifier";
        case BlockRole::NuisanceEstimator: return "nuisance";
        case BlockRole::Decoder: return "decoder";
        case BlockRole::Adversary: return "adversary";
    }
    return "?";
}

std::string strategy_suffix(InferenceStrategy s) {
    switch (s) {
        case InferenceStrategy::ZFirst: return "z";
        case InferenceStrategy::SFirst: return "s";
        case InferenceStrategy::YFirst: return "y";
    }
    return "?";
}

bool Factor::produces(NodeId n) const {
    return std::find(outputs.begin(), outputs.end(), n) != outputs.end();
}

bool Factor::consumes(NodeId n) const {
    return std::find(inputs.begin(), inputs.end(), n) != inputs.end();
}

namespace {

BlockRole role_for_output(NodeId n) {
    switch (n.kind) {
        case NodeKind::Latent: return BlockRole::Encoder;
        case NodeKind::Nuisance: return BlockRole::NuisanceEstimator;
        case NodeKind::Task: return BlockRole::Classifier;
        case NodeKind::Data: return BlockRole::Decoder;
    }
    return BlockRole::Encoder;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::string factor_to_string(const Factor& f, const BayesianGraph& g) {
    auto side = [&](const std::vector<NodeId>& ns) {
        std::string s;
        for (std::size_t i = 0; i < ns.size(); ++i) {
            if (i) s += ",";
            s += lower(g.label(ns[i]));
        }
        return s;
    };
    std::string s = "p(" + side(f.outputs);
    if (!f.inputs.empty()) s += "|" + side(f.inputs);
    return s + ")";
}

}  // namespace

std::vector<Factor> full_chain_inference(const std::vector<NodeId>& nodes,
                                         InferenceStrategy strategy) {
    bool has_task = false, has_data = false;
    std::vector<NodeId> latents, nuisances;
    for (NodeId n : nodes) {
        switch (n.kind) {
            case NodeKind::Task: has_task = true; break;
            case NodeKind::Data: has_data = true; break;
            case NodeKind::Latent: latents.push_back(n); break;
            case NodeKind::Nuisance: nuisances.push_back(n); break;
        }
    }
    if (!has_task || !has_data)
        throw std::invalid_argument("inference needs a task and a data node");
    std::sort(latents.begin(), latents.end());
    std::sort(nuisances.begin(), nuisances.end());

    std::vector<NodeId> order;
    switch (strategy) {
        case InferenceStrategy::ZFirst:
            order = latents;
            order.insert(order.end(), nuisances.begin(), nuisances.end());
            order.push_back(NodeId::task());
            break;
        case InferenceStrategy::SFirst:
            order = nuisances;
            order.insert(order.end(), latents.begin(), latents.end());
            order.push_back(NodeId::task());
            break;
        case InferenceStrategy::YFirst:
            order.push_back(NodeId::task());
            order.insert(order.end(), nuisances.begin(), nuisances.end());
            order.insert(order.end(), latents.begin(), latents.end());
            break;
    }

    std::vector<Factor> out;
    std::vector<NodeId> seen{NodeId::data()};
    for (NodeId n : order) {
        Factor f;
        f.outputs = {n};
        f.inputs = seen;
        std::sort(f.inputs.begin(), f.inputs.end());
        f.role = role_for_output(n);
        out.push_back(std::move(f));
        seen.push_back(n);
    }
    return out;
}

std::vector<Factor> prune_factor_graph(std::vector<Factor> factors,
                                       const std::vector<IndependencyStatement>& independencies) {
    for (const Factor& f : factors)
        if (f.outputs.size() != 1)
            throw std::invalid_argument("pruning expects single-output factors");

    bool changed = true;
    while (changed) {
        changed = false;
        for (Factor& f : factors) {
            // inputs are sorted, so this scans in canonical node order
            for (std::size_t i = 0; i < f.inputs.size();) {
                std::vector<NodeId> rest;
                for (std::size_t k = 0; k < f.inputs.size(); ++k)
                    if (k != i) rest.push_back(f.inputs[k]);
                if (contains_statement(independencies, f.outputs[0], f.inputs[i], rest)) {
                    f.inputs.erase(f.inputs.begin() + static_cast<std::ptrdiff_t>(i));
                    changed = true;
                } else {
                    ++i;
                }
            }
        }
    }

    std::vector<Factor> kept;
    for (Factor& f : factors)
        if (!f.inputs.empty()) kept.push_back(std::move(f));
    return kept;
}

bool ModelSpec::has_decoder() const {
    return std::any_of(factors.begin(), factors.end(),
                       [](const Factor& f) { return f.role == BlockRole::Decoder; });
}

const Factor* ModelSpec::producer(NodeId n) const {
    for (const Factor& f : factors)
        if (f.role != BlockRole::Adversary && f.produces(n)) return &f;
    return nullptr;
}

std::vector<Factor> ModelSpec::adversary_factors() const {
    std::vector<Factor> out;
    for (const auto& [z, s] : adversary_targets) {
        Factor f;
        f.outputs = {s};
        f.inputs = {z};
        f.role = BlockRole::Adversary;
        out.push_back(std::move(f));
    }
    return out;
}

void ModelSpec::validate() const {
    generative.validate();

    std::set<NodeId> available{NodeId::data()};
    std::set<NodeId> produced;
    for (const Factor& f : factors) {
        if (f.outputs.empty()) throw std::invalid_argument("factor without output");
        for (NodeId o : f.outputs) {
            if (f.consumes(o)) throw std::invalid_argument("factor output appears in inputs");
            if (!produced.insert(o).second)
                throw std::invalid_argument("node produced by two factors");
        }
        for (NodeId in : f.inputs)
            if (!available.count(in))
                throw std::invalid_argument("factor consumes a node not yet inferred");
        if (f.role != role_for_output(f.outputs[0]))
            throw std::invalid_argument("factor role inconsistent with output kind");
        for (NodeId o : f.outputs) available.insert(o);
    }

    auto ind = independency_list(generative);
    for (const auto& [z, s] : adversary_targets) {
        if (z.kind != NodeKind::Latent || s.kind != NodeKind::Nuisance)
            throw std::invalid_argument("adversary target must pair a latent with a nuisance");
        if (!produced.count(z))
            throw std::invalid_argument("adversary attached to a latent with no encoder");
        bool justified = false;
        for (const auto& st : ind) {
            if (st.left == std::vector<NodeId>{z} &&
                std::find(st.right.begin(), st.right.end(), s) != st.right.end())
                justified = true;
            if (st.right == std::vector<NodeId>{z} &&
                std::find(st.left.begin(), st.left.end(), s) != st.left.end())
                justified = true;
        }
        if (!justified)
            throw std::invalid_argument("adversary target lacks an independency statement");
    }
}

std::string ModelSpec::factorization_string() const {
    std::string s;
    for (const Factor& f : factors) {
        if (f.role == BlockRole::Decoder) continue;
        if (!s.empty()) s += " ";
        s += factor_to_string(f, generative);
    }
    return s;
}

ModelSpec assemble_model_spec(const BayesianGraph& generative, InferenceStrategy strategy,
                              bool variational) {
    generative.validate();
    auto ind = independency_list(generative);

    std::vector<Factor> chain = prune_factor_graph(
        full_chain_inference(generative.nodes, strategy), ind);

    if (strategy == InferenceStrategy::YFirst) {
        for (const Factor& f : chain)
            if (f.role == BlockRole::Encoder)
                throw std::invalid_argument(
                    "y-first inference is only defined when every latent detaches");
    }

    // Z-first infers all leading latents through one joint encoder head.
    if (strategy == InferenceStrategy::ZFirst) {
        std::size_t run = 0;
        while (run < chain.size() && chain[run].role == BlockRole::Encoder) ++run;
        if (run >= 2) {
            Factor joint;
            joint.role = BlockRole::Encoder;
            std::set<NodeId> outs, ins;
            for (std::size_t i = 0; i < run; ++i) {
                outs.insert(chain[i].outputs.begin(), chain[i].outputs.end());
                ins.insert(chain[i].inputs.begin(), chain[i].inputs.end());
            }
            for (NodeId o : outs) ins.erase(o);
            joint.outputs.assign(outs.begin(), outs.end());
            joint.inputs.assign(ins.begin(), ins.end());
            chain.erase(chain.begin(), chain.begin() + static_cast<std::ptrdiff_t>(run));
            chain.insert(chain.begin(), std::move(joint));
        }
    }

    ModelSpec spec;
    spec.generative = generative;
    spec.strategy = strategy;
    spec.variational = variational;
    spec.factors = std::move(chain);

    for (Factor& f : spec.factors) {
        if (f.role == BlockRole::Encoder) f.stochastic = variational;
        for (NodeId o : f.outputs) spec.inference_order.push_back(o);
    }

    // Decoder over X's generative parents; without a latent parent there is
    // no sample-specific content to reconstruct and the spec stays
    // reconstruction-free (models A and C).
    std::vector<NodeId> x_parents = generative.parents(NodeId::data());
    std::sort(x_parents.begin(), x_parents.end());
    bool has_latent_parent = std::any_of(x_parents.begin(), x_parents.end(), [](NodeId n) {
        return n.kind == NodeKind::Latent;
    });
    if (has_latent_parent) {
        Factor dec;
        dec.outputs = {NodeId::data()};
        dec.inputs = x_parents;
        dec.role = BlockRole::Decoder;
        spec.factors.push_back(std::move(dec));
    }

    // Adversary heads wherever the graph makes an inferred latent independent
    // of a nuisance, marginally or given some conditioning set.
    std::set<NodeId> inferred(spec.inference_order.begin(), spec.inference_order.end());
    for (NodeId z : generative.latents()) {
        if (!inferred.count(z)) continue;
        for (NodeId s : generative.nuisances()) {
            bool independent = false;
            for (const auto& st : ind) {
                bool zs = st.left == std::vector<NodeId>{z} &&
                          std::find(st.right.begin(), st.right.end(), s) != st.right.end();
                bool sz = st.right == std::vector<NodeId>{z} &&
                          std::find(st.left.begin(), st.left.end(), s) != st.left.end();
                if (zs || sz) {
                    independent = true;
                    break;
                }
            }
            if (independent) spec.adversary_targets.emplace_back(z, s);
        }
    }

    spec.name = generative.name.empty() ? std::string("g") + strategy_suffix(strategy)
                                        : generative.name + strategy_suffix(strategy);
    spec.validate();
    return spec;
}

SemiSupervisionClass semi_supervision_class(const ModelSpec& spec) {
    bool has_nuisance_factor = false;
    bool consumes_nuisance = false;
    for (const Factor& f : spec.factors) {
        if (f.role == BlockRole::NuisanceEstimator) has_nuisance_factor = true;
        for (NodeId in : f.inputs)
            if (in.kind == NodeKind::Nuisance) consumes_nuisance = true;
    }
    if (!has_nuisance_factor) return SemiSupervisionClass::SAbsent;
    return consumes_nuisance ? SemiSupervisionClass::SMid : SemiSupervisionClass::SEnd;
}

std::vector<ModelSpec> expand_catalog(const GraphCatalog& catalog) {
    catalog.validate();
    std::vector<ModelSpec> out;

    for (const BayesianGraph& g : catalog.entries) {
        std::vector<ModelSpec> distinct;
        for (InferenceStrategy st :
             {InferenceStrategy::ZFirst, InferenceStrategy::SFirst, InferenceStrategy::YFirst}) {
            ModelSpec spec;
            try {
                spec = assemble_model_spec(g, st, /*variational=*/false);
            } catch (const std::invalid_argument&) {
                continue;  // y-first with live latents
            }
            bool dup = std::any_of(distinct.begin(), distinct.end(), [&](const ModelSpec& d) {
                return d.factors == spec.factors && d.adversary_targets == spec.adversary_targets;
            });
            if (!dup) distinct.push_back(std::move(spec));
        }

        // A single surviving factorization keeps the bare model letter.
        if (distinct.size() == 1) distinct[0].name = g.name;

        for (ModelSpec& spec : distinct) {
            bool has_encoder =
                std::any_of(spec.factors.begin(), spec.factors.end(),
                            [](const Factor& f) { return f.role == BlockRole::Encoder; });
            out.push_back(spec);
            if (has_encoder) {
                ModelSpec var = assemble_model_spec(spec.generative, spec.strategy, true);
                var.name = spec.name;
                out.push_back(std::move(var));
            }
        }
    }
    return out;
}

}  // namespace bgx
