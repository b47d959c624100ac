// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_PREDICTORS_HPP
#define BEAMSEMA_PREDICTORS_HPP

#include <string>

#include "beamsema/nn/model.hpp"

namespace beamsema {

enum class PredictorKind { bbox_mlp, mask_lenet, position_mlp, image_cnn_baseline };

std::string to_string(PredictorKind kind);
PredictorKind predictor_from_string(const std::string& name);

// Two hidden layers of 175 plus a Q-way head over the 4-dim bbox vector.
nn::Model build_bbox_mlp(int num_classes);

// LeNet-style stack over the downsampled mask: conv(6,5x5) + pool(2) +
// conv(16,5x5) + pool(2) + dense(120) + head. include_fc84 inserts the
// classic 84-unit layer between them.
nn::Model build_mask_lenet(int num_classes, int mask_width = 32, int mask_height = 32,
                           bool include_fc84 = false);

// Minimal position baseline: dense(2 -> 64) + head.
nn::Model build_position_mlp(int num_classes);

// Raw-raster baseline: three conv blocks (16/32/64 filters, 3x3, pool 2) and
// a 256-unit dense layer. The constructor enforces a parameter count of more
// than 6x the bbox MLP's.
nn::Model build_image_cnn_baseline(int num_classes, int input_width = 160, int input_height = 90);

// Sum of all trainable tensor element counts.
std::size_t param_count(const nn::Model& model);

}  // namespace beamsema

#endif
