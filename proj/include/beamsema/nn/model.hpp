// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_NN_MODEL_HPP
#define BEAMSEMA_NN_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "beamsema/nn/tensor.hpp"
#include "beamsema/rng.hpp"

namespace beamsema::nn {

enum class LayerKind : std::int32_t { dense = 0, conv2d = 1, relu = 2, maxpool2d = 3, flatten = 4 };

// One layer of the fixed layer set. Convolutions are valid-padding with
// stride 1; pools are non-overlapping (stride == kernel).
struct LayerSpec {
    LayerKind kind = LayerKind::relu;
    int units = 0;    // dense: output size
    int filters = 0;  // conv2d: output channels
    int kernel = 0;   // conv2d / maxpool2d: square kernel size
    int stride = 1;   // maxpool2d

    static LayerSpec dense(int units) { return {LayerKind::dense, units, 0, 0, 1}; }
    static LayerSpec conv2d(int filters, int kernel) { return {LayerKind::conv2d, 0, filters, kernel, 1}; }
    static LayerSpec relu() { return {LayerKind::relu, 0, 0, 0, 1}; }
    static LayerSpec maxpool2d(int kernel) { return {LayerKind::maxpool2d, 0, 0, kernel, kernel}; }
    static LayerSpec flatten() { return {LayerKind::flatten, 0, 0, 0, 1}; }
};

// Named parameter with its Adam moment companions.
struct ParamEntry {
    std::string name;
    Tensor value;
    Tensor m;
    Tensor v;
};

struct ParamStore {
    std::vector<ParamEntry> entries;
    std::int64_t step = 0;

    std::size_t total_params() const {
        std::size_t n = 0;
        for (const auto& e : entries) n += e.value.numel();
        return n;
    }
};

// Gradients aligned index-for-index with ParamStore::entries.
using GradStore = std::vector<Tensor>;

// A feed-forward stack over the fixed layer set. Per-sample input shapes are
// {D} for vectors and {C, H, W} for images; batches prepend N. Layer shapes
// are composed and checked at construction.
class Model {
  public:
    Model() = default;
    Model(std::vector<std::size_t> input_shape, std::vector<LayerSpec> layers);

    // Uniform fan-in init (+-sqrt(1/fan_in)) for weights, zero biases.
    void init_params(Rng& rng);

    // Batch forward: input {N, ...input_shape} -> logits {N, Q}.
    Tensor forward(const Tensor& batch) const;

    // Mean softmax cross-entropy over the batch plus exact gradients for
    // every parameter. Labels must lie in [0, num_classes).
    double loss_and_grad(const Tensor& batch, const std::vector<int>& labels,
                         GradStore& grads) const;

    GradStore zero_grads() const;

    const std::vector<LayerSpec>& layers() const { return layers_; }
    const std::vector<std::size_t>& input_shape() const { return input_shape_; }
    ParamStore& params() { return params_; }
    const ParamStore& params() const { return params_; }
    std::size_t param_count() const { return params_.total_params(); }
    int num_classes() const;

  private:
    std::vector<std::size_t> input_shape_;
    std::vector<LayerSpec> layers_;
    ParamStore params_;
    // per-sample output shape of each layer, composed at construction
    std::vector<std::vector<std::size_t>> out_shapes_;
    // index into params_.entries of each layer's weight (-1 if unparameterized)
    std::vector<int> param_index_;

    Tensor forward_cached(const Tensor& batch, std::vector<Tensor>* acts) const;
};

// Row-stable softmax (max subtraction); rows sum to 1.
void softmax_rows(const Tensor& logits, Tensor& probs);

// Bias-corrected Adam update; increments the step counter.
void adam_step(ParamStore& params, const GradStore& grads, double lr, double beta1 = 0.9,
               double beta2 = 0.999, double eps = 1e-8);

}  // namespace beamsema::nn

#endif
