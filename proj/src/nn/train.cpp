// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/nn/train.hpp"

#include <stdexcept>
#include <string>

namespace beamsema::nn {

void TrainConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
    if (!(base_lr > 0.0)) throw std::invalid_argument("TrainConfig: base_lr must be > 0");
    if (!(decay_factor > 0.0 && decay_factor <= 1.0))
        throw std::invalid_argument("TrainConfig: decay_factor must lie in (0, 1]");
    if (total_epochs < 1) throw std::invalid_argument("TrainConfig: total_epochs must be >= 1");
    int prev = 0;
    for (int e : decay_epochs) {
        if (e <= prev)
            throw std::invalid_argument("TrainConfig: decay_epochs must be strictly increasing");
        if (e > total_epochs)
            throw std::invalid_argument("TrainConfig: decay epoch " + std::to_string(e) +
                                        " exceeds total_epochs");
        prev = e;
    }
}

double lr_at_epoch(const TrainConfig& cfg, int epoch) {
    cfg.validate();
    if (epoch < 0 || epoch >= cfg.total_epochs)
        throw std::invalid_argument("lr_at_epoch: epoch " + std::to_string(epoch) +
                                    " outside [0, " + std::to_string(cfg.total_epochs) + ")");
    double lr = cfg.base_lr;
    for (int d : cfg.decay_epochs)
        if (d <= epoch) lr *= cfg.decay_factor;
    return lr;
}

}  // namespace beamsema::nn
