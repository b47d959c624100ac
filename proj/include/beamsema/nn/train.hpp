// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_NN_TRAIN_HPP
#define BEAMSEMA_NN_TRAIN_HPP

#include <cstdint>
#include <vector>

namespace beamsema::nn {

// Step learning-rate schedule plus run bookkeeping.
struct TrainConfig {
    int batch_size = 128;
    double base_lr = 1e-2;
    std::vector<int> decay_epochs{15, 30};  // strictly increasing, <= total_epochs
    double decay_factor = 0.1;
    int total_epochs = 50;
    std::uint64_t seed = 0;

    void validate() const;  // throws std::invalid_argument
};

// base_lr * decay_factor^(number of decay epochs <= epoch). The decay takes
// effect at the listed epoch itself: decays {10, 20} give epoch 9 -> base,
// epoch 10 -> base*factor, epoch 20 -> base*factor^2.
double lr_at_epoch(const TrainConfig& cfg, int epoch);

}  // namespace beamsema::nn

#endif
