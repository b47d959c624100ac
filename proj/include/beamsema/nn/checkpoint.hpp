// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_NN_CHECKPOINT_HPP
#define BEAMSEMA_NN_CHECKPOINT_HPP

#include <map>
#include <string>

#include "beamsema/nn/model.hpp"

namespace beamsema::nn {

// Versioned binary container: layer specs, named parameter tensors, Adam
// moments, step counter, plus a string metadata map (predictor kind,
// normalization bounds, ...). Round-trips bit-exactly.
struct Checkpoint {
    Model model;
    std::map<std::string, std::string> meta;
};

void save_checkpoint(const std::string& path, const Model& model,
                     const std::map<std::string, std::string>& meta);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace beamsema::nn

#endif
