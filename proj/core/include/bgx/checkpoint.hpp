#pragma once

#include <string>
#include <vector>

#include "bgx/matrix.hpp"

namespace bgx {

/// One named tensor of a checkpoint file.
struct NamedTensor {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<double> data;

    bool operator==(const NamedTensor&) const = default;
};

/// JSON checkpoint of named tensors with shape headers. Values round-trip
/// bit-exactly (shortest round-trip decimal serialization).
void save_checkpoint(const std::string& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_checkpoint(const std::string& path);

NamedTensor to_named_tensor(const std::string& name, const Matrix& m);
Matrix to_matrix(const NamedTensor& t);

}  // namespace bgx
