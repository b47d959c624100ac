// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/predictors.hpp"

#include <stdexcept>

namespace beamsema {

using nn::LayerSpec;
using nn::Model;

std::string to_string(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::bbox_mlp: return "bbox_mlp";
        case PredictorKind::mask_lenet: return "mask_lenet";
        case PredictorKind::position_mlp: return "position_mlp";
        case PredictorKind::image_cnn_baseline: return "image_cnn_baseline";
    }
    throw std::invalid_argument("unknown predictor kind");
}

PredictorKind predictor_from_string(const std::string& name) {
    if (name == "bbox_mlp") return PredictorKind::bbox_mlp;
    if (name == "mask_lenet") return PredictorKind::mask_lenet;
    if (name == "position_mlp") return PredictorKind::position_mlp;
    if (name == "image_cnn_baseline") return PredictorKind::image_cnn_baseline;
    throw std::invalid_argument("unknown predictor: " + name +
                                " (expected bbox_mlp, mask_lenet, position_mlp or "
                                "image_cnn_baseline)");
}

namespace {

void require_classes(int num_classes) {
    if (num_classes < 2) throw std::invalid_argument("predictor needs at least 2 classes");
}

}  // namespace

Model build_bbox_mlp(int num_classes) {
    require_classes(num_classes);
    return Model({4}, {LayerSpec::dense(175), LayerSpec::relu(), LayerSpec::dense(175),
                       LayerSpec::relu(), LayerSpec::dense(num_classes)});
}

Model build_mask_lenet(int num_classes, int mask_width, int mask_height, bool include_fc84) {
    require_classes(num_classes);
    if (mask_width < 14 || mask_height < 14)
        throw std::invalid_argument("mask_lenet needs at least a 14x14 input");
    std::vector<LayerSpec> layers = {LayerSpec::conv2d(6, 5),  LayerSpec::relu(),
                                     LayerSpec::maxpool2d(2),  LayerSpec::conv2d(16, 5),
                                     LayerSpec::relu(),        LayerSpec::maxpool2d(2),
                                     LayerSpec::flatten(),     LayerSpec::dense(120),
                                     LayerSpec::relu()};
    if (include_fc84) {
        layers.push_back(LayerSpec::dense(84));
        layers.push_back(LayerSpec::relu());
    }
    layers.push_back(LayerSpec::dense(num_classes));
    return Model({1, static_cast<std::size_t>(mask_height), static_cast<std::size_t>(mask_width)},
                 std::move(layers));
}

Model build_position_mlp(int num_classes) {
    require_classes(num_classes);
    return Model({2}, {LayerSpec::dense(64), LayerSpec::relu(), LayerSpec::dense(num_classes)});
}

Model build_image_cnn_baseline(int num_classes, int input_width, int input_height) {
    require_classes(num_classes);
    Model model({1, static_cast<std::size_t>(input_height), static_cast<std::size_t>(input_width)},
                {LayerSpec::conv2d(16, 3), LayerSpec::relu(), LayerSpec::maxpool2d(2),
                 LayerSpec::conv2d(32, 3), LayerSpec::relu(), LayerSpec::maxpool2d(2),
                 LayerSpec::conv2d(64, 3), LayerSpec::relu(), LayerSpec::maxpool2d(2),
                 LayerSpec::flatten(), LayerSpec::dense(256), LayerSpec::relu(),
                 LayerSpec::dense(num_classes)});
    if (param_count(model) <= 6 * param_count(build_bbox_mlp(num_classes)))
        throw std::invalid_argument(
            "image_cnn_baseline: input too small to keep the 6x parameter margin over bbox_mlp");
    return model;
}

std::size_t param_count(const Model& model) { return model.param_count(); }

}  // namespace beamsema
