#pragma once

#include <string>

#include "bgx/graph.hpp"
#include "bgx/inference.hpp"

namespace bgx {

/// Graphviz rendering of a generative graph: one circle per variable, solid
/// directed edges; edges into X are drawn in the decoder color.
std::string to_dot(const BayesianGraph& g);

/// Graphviz rendering of a model spec: variables as circles, factor blocks as
/// boxes, adversary heads dashed.
std::string to_dot(const ModelSpec& spec);

}  // namespace bgx
