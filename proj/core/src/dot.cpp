#include "bgx/dot.hpp"

#include <sstream>

namespace bgx {

namespace {

std::string dot_id(NodeId n) { return node_code(n); }

}  // namespace

std::string to_dot(const BayesianGraph& g) {
    std::ostringstream os;
    os << "digraph \"" << (g.name.empty() ? "model" : g.name) << "\" {\n";
    os << "  rankdir=TB;\n  node [shape=circle];\n";
    for (NodeId n : g.nodes)
        os << "  " << dot_id(n) << " [label=\"" << g.label(n) << "\"];\n";
    for (const auto& [p, c] : g.edges) {
        os << "  " << dot_id(p) << " -> " << dot_id(c);
        if (c.kind == NodeKind::Data) os << " [color=blue]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string to_dot(const ModelSpec& spec) {
    std::ostringstream os;
    const BayesianGraph& g = spec.generative;
    os << "digraph \"" << spec.name << "\" {\n";
    os << "  rankdir=LR;\n";

    for (NodeId n : g.nodes)
        os << "  " << dot_id(n) << " [shape=circle label=\"" << g.label(n) << "\"];\n";

    int idx = 0;
    auto emit_factor = [&](const Factor& f, const char* extra) {
        std::string fid = "f" + std::to_string(idx++);
        os << "  " << fid << " [shape=box label=\"" << role_name(f.role) << "\"" << extra
           << "];\n";
        for (NodeId in : f.inputs)
            os << "  " << dot_id(in) << " -> " << fid << (*extra ? extra : "") << ";\n";
        for (NodeId o : f.outputs) {
            if (f.role == BlockRole::Decoder) {
                // reconstruction target gets its own node
                os << "  Xr [shape=circle label=\"X'\"];\n";
                os << "  " << fid << " -> Xr;\n";
            } else if (f.role == BlockRole::Adversary) {
                os << "  " << dot_id(o) << "a [shape=circle label=\"" << g.label(o) << "'\"];\n";
                os << "  " << fid << " -> " << dot_id(o) << "a" << extra << ";\n";
            } else {
                os << "  " << fid << " -> " << dot_id(o) << ";\n";
            }
        }
    };

    for (const Factor& f : spec.factors) emit_factor(f, "");
    for (const Factor& f : spec.adversary_factors()) emit_factor(f, " [style=dashed]");

    os << "}\n";
    return os.str();
}

}  // namespace bgx
