// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/nn/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace beamsema::nn {

namespace {

std::size_t flat_size(const std::vector<std::size_t>& s) { return Tensor::numel_of(s); }

[[noreturn]] void layer_error(std::size_t index, const std::string& what) {
    throw std::invalid_argument("layer " + std::to_string(index) + ": " + what);
}

}  // namespace

Model::Model(std::vector<std::size_t> input_shape, std::vector<LayerSpec> layers)
    : input_shape_(std::move(input_shape)), layers_(std::move(layers)) {
    if (input_shape_.empty()) throw std::invalid_argument("Model: empty input shape");
    if (layers_.empty()) throw std::invalid_argument("Model: no layers");

    std::vector<std::size_t> cur = input_shape_;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const LayerSpec& spec = layers_[i];
        param_index_.push_back(-1);
        switch (spec.kind) {
            case LayerKind::dense: {
                if (cur.size() != 1) layer_error(i, "dense expects a flat input, got " + shape_str(cur));
                if (spec.units <= 0) layer_error(i, "dense units must be positive");
                const std::size_t in = cur[0], out = static_cast<std::size_t>(spec.units);
                param_index_.back() = static_cast<int>(params_.entries.size());
                params_.entries.push_back({"layer" + std::to_string(i) + ".weight", Tensor({out, in}),
                                           Tensor({out, in}), Tensor({out, in})});
                params_.entries.push_back({"layer" + std::to_string(i) + ".bias", Tensor({out}),
                                           Tensor({out}), Tensor({out})});
                cur = {out};
                break;
            }
            case LayerKind::conv2d: {
                if (cur.size() != 3) layer_error(i, "conv2d expects {C,H,W}, got " + shape_str(cur));
                if (spec.filters <= 0 || spec.kernel <= 0) layer_error(i, "conv2d needs filters and kernel");
                const std::size_t c = cur[0], h = cur[1], w = cur[2];
                const std::size_t k = static_cast<std::size_t>(spec.kernel);
                if (h < k || w < k) layer_error(i, "conv2d kernel larger than input " + shape_str(cur));
                const std::size_t f = static_cast<std::size_t>(spec.filters);
                param_index_.back() = static_cast<int>(params_.entries.size());
                params_.entries.push_back({"layer" + std::to_string(i) + ".weight", Tensor({f, c, k, k}),
                                           Tensor({f, c, k, k}), Tensor({f, c, k, k})});
                params_.entries.push_back({"layer" + std::to_string(i) + ".bias", Tensor({f}),
                                           Tensor({f}), Tensor({f})});
                cur = {f, h - k + 1, w - k + 1};
                break;
            }
            case LayerKind::relu:
                break;
            case LayerKind::maxpool2d: {
                if (cur.size() != 3) layer_error(i, "maxpool2d expects {C,H,W}, got " + shape_str(cur));
                if (spec.kernel <= 0) layer_error(i, "maxpool2d needs a kernel");
                const std::size_t k = static_cast<std::size_t>(spec.kernel);
                if (cur[1] < k || cur[2] < k) layer_error(i, "maxpool2d kernel larger than input");
                cur = {cur[0], cur[1] / k, cur[2] / k};
                break;
            }
            case LayerKind::flatten:
                cur = {flat_size(cur)};
                break;
        }
        out_shapes_.push_back(cur);
    }
    if (cur.size() != 1)
        throw std::invalid_argument("Model: final layer must emit a flat logit vector");
}

int Model::num_classes() const {
    return static_cast<int>(out_shapes_.back()[0]);
}

void Model::init_params(Rng& rng) {
    for (std::size_t i = 0; i < params_.entries.size(); ++i) {
        ParamEntry& e = params_.entries[i];
        const bool is_bias = e.value.shape.size() == 1 && e.name.find(".bias") != std::string::npos;
        if (is_bias) {
            std::fill(e.value.data.begin(), e.value.data.end(), 0.0);
        } else {
            // fan_in = product of all dims beyond the output dim
            std::size_t fan_in = 1;
            for (std::size_t d = 1; d < e.value.shape.size(); ++d) fan_in *= e.value.shape[d];
            const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
            for (double& x : e.value.data) x = rng.uniform(-bound, bound);
        }
        std::fill(e.m.data.begin(), e.m.data.end(), 0.0);
        std::fill(e.v.data.begin(), e.v.data.end(), 0.0);
    }
    params_.step = 0;
}

GradStore Model::zero_grads() const {
    GradStore grads;
    grads.reserve(params_.entries.size());
    for (const auto& e : params_.entries) grads.emplace_back(e.value.shape);
    return grads;
}

Tensor Model::forward_cached(const Tensor& batch, std::vector<Tensor>* acts) const {
    if (batch.shape.size() != input_shape_.size() + 1)
        throw std::invalid_argument("forward: batch rank " + shape_str(batch.shape) +
                                    " does not extend input shape " + shape_str(input_shape_));
    for (std::size_t d = 0; d < input_shape_.size(); ++d)
        if (batch.shape[d + 1] != input_shape_[d])
            throw std::invalid_argument("forward: batch shape " + shape_str(batch.shape) +
                                        " does not match input shape " + shape_str(input_shape_));

    const std::size_t n = batch.shape[0];
    Tensor cur = batch;
    if (acts) acts->push_back(cur);

    for (std::size_t li = 0; li < layers_.size(); ++li) {
        const LayerSpec& spec = layers_[li];
        std::vector<std::size_t> out_shape = out_shapes_[li];
        out_shape.insert(out_shape.begin(), n);
        Tensor out(out_shape);

        switch (spec.kind) {
            case LayerKind::dense: {
                const Tensor& w = params_.entries[static_cast<std::size_t>(param_index_[li])].value;
                const Tensor& b = params_.entries[static_cast<std::size_t>(param_index_[li]) + 1].value;
                const std::size_t in = w.shape[1], units = w.shape[0];
                for (std::size_t s = 0; s < n; ++s) {
                    const double* x = cur.ptr() + s * in;
                    double* y = out.ptr() + s * units;
                    for (std::size_t o = 0; o < units; ++o) {
                        const double* wrow = w.ptr() + o * in;
                        double acc = b.data[o];
                        for (std::size_t i = 0; i < in; ++i) acc += wrow[i] * x[i];
                        y[o] = acc;
                    }
                }
                break;
            }
            case LayerKind::conv2d: {
                const Tensor& w = params_.entries[static_cast<std::size_t>(param_index_[li])].value;
                const Tensor& b = params_.entries[static_cast<std::size_t>(param_index_[li]) + 1].value;
                const std::size_t f = w.shape[0], c = w.shape[1], k = w.shape[2];
                const std::size_t ih = cur.shape[2], iw = cur.shape[3];
                const std::size_t oh = ih - k + 1, ow = iw - k + 1;
                for (std::size_t s = 0; s < n; ++s) {
                    const double* xin = cur.ptr() + s * c * ih * iw;
                    double* y = out.ptr() + s * f * oh * ow;
                    for (std::size_t fo = 0; fo < f; ++fo) {
                        const double* wf = w.ptr() + fo * c * k * k;
                        const double bias = b.data[fo];
                        for (std::size_t oy = 0; oy < oh; ++oy)
                            for (std::size_t ox = 0; ox < ow; ++ox) {
                                double acc = bias;
                                for (std::size_t ci = 0; ci < c; ++ci) {
                                    const double* xc = xin + ci * ih * iw;
                                    const double* wc = wf + ci * k * k;
                                    for (std::size_t p = 0; p < k; ++p) {
                                        const double* xrow = xc + (oy + p) * iw + ox;
                                        const double* wrow = wc + p * k;
                                        for (std::size_t q = 0; q < k; ++q) acc += wrow[q] * xrow[q];
                                    }
                                }
                                y[fo * oh * ow + oy * ow + ox] = acc;
                            }
                    }
                }
                break;
            }
            case LayerKind::relu: {
                for (std::size_t i = 0; i < cur.numel(); ++i)
                    out.data[i] = cur.data[i] > 0.0 ? cur.data[i] : 0.0;
                break;
            }
            case LayerKind::maxpool2d: {
                const std::size_t k = static_cast<std::size_t>(spec.kernel);
                const std::size_t c = cur.shape[1], ih = cur.shape[2], iw = cur.shape[3];
                const std::size_t oh = ih / k, ow = iw / k;
                for (std::size_t s = 0; s < n; ++s)
                    for (std::size_t ci = 0; ci < c; ++ci) {
                        const double* x = cur.ptr() + (s * c + ci) * ih * iw;
                        double* y = out.ptr() + (s * c + ci) * oh * ow;
                        for (std::size_t oy = 0; oy < oh; ++oy)
                            for (std::size_t ox = 0; ox < ow; ++ox) {
                                double best = x[(oy * k) * iw + ox * k];
                                for (std::size_t p = 0; p < k; ++p)
                                    for (std::size_t q = 0; q < k; ++q)
                                        best = std::max(best, x[(oy * k + p) * iw + ox * k + q]);
                                y[oy * ow + ox] = best;
                            }
                    }
                break;
            }
            case LayerKind::flatten: {
                out.data = cur.data;  // same element order
                break;
            }
        }
        cur = std::move(out);
        if (acts) acts->push_back(cur);
    }
    return cur;
}

Tensor Model::forward(const Tensor& batch) const { return forward_cached(batch, nullptr); }

void softmax_rows(const Tensor& logits, Tensor& probs) {
    probs = Tensor(logits.shape);
    const std::size_t n = logits.shape[0], q = logits.shape[1];
    for (std::size_t s = 0; s < n; ++s) {
        const double* row = logits.ptr() + s * q;
        double* p = probs.ptr() + s * q;
        double mx = row[0];
        for (std::size_t i = 1; i < q; ++i) mx = std::max(mx, row[i]);
        double sum = 0.0;
        for (std::size_t i = 0; i < q; ++i) {
            p[i] = std::exp(row[i] - mx);
            sum += p[i];
        }
        for (std::size_t i = 0; i < q; ++i) p[i] /= sum;
    }
}

double Model::loss_and_grad(const Tensor& batch, const std::vector<int>& labels,
                            GradStore& grads) const {
    const std::size_t n = batch.shape.empty() ? 0 : batch.shape[0];
    if (labels.size() != n)
        throw std::invalid_argument("loss_and_grad: got " + std::to_string(labels.size()) +
                                    " labels for a batch of " + std::to_string(n));
    const int q = num_classes();
    for (int label : labels)
        if (label < 0 || label >= q)
            throw std::invalid_argument("loss_and_grad: label " + std::to_string(label) +
                                        " outside [0, " + std::to_string(q) + ")");
    if (grads.size() != params_.entries.size()) {
        grads = zero_grads();
    } else {
        for (auto& g : grads) std::fill(g.data.begin(), g.data.end(), 0.0);
    }

    std::vector<Tensor> acts;
    acts.reserve(layers_.size() + 1);
    const Tensor logits = forward_cached(batch, &acts);

    Tensor probs;
    softmax_rows(logits, probs);

    double loss = 0.0;
    Tensor delta(logits.shape);  // dL/dlogits
    const std::size_t qs = static_cast<std::size_t>(q);
    for (std::size_t s = 0; s < n; ++s) {
        const double* p = probs.ptr() + s * qs;
        double* d = delta.ptr() + s * qs;
        const std::size_t label = static_cast<std::size_t>(labels[s]);
        loss += -std::log(std::max(p[label], 1e-300));
        for (std::size_t i = 0; i < qs; ++i) d[i] = (p[i] - (i == label ? 1.0 : 0.0)) / n;
    }
    loss /= static_cast<double>(n);

    // Backward pass; delta enters each layer as dL/d(output).
    for (std::size_t li = layers_.size(); li-- > 0;) {
        const LayerSpec& spec = layers_[li];
        const Tensor& x = acts[li];
        Tensor dx(x.shape);

        switch (spec.kind) {
            case LayerKind::dense: {
                const std::size_t pi = static_cast<std::size_t>(param_index_[li]);
                const Tensor& w = params_.entries[pi].value;
                Tensor& dw = grads[pi];
                Tensor& db = grads[pi + 1];
                const std::size_t in = w.shape[1], units = w.shape[0];
                for (std::size_t s = 0; s < n; ++s) {
                    const double* xr = x.ptr() + s * in;
                    const double* dy = delta.ptr() + s * units;
                    double* dxr = dx.ptr() + s * in;
                    for (std::size_t o = 0; o < units; ++o) {
                        const double g = dy[o];
                        if (g == 0.0) continue;
                        const double* wrow = w.ptr() + o * in;
                        double* dwrow = dw.ptr() + o * in;
                        db.data[o] += g;
                        for (std::size_t i = 0; i < in; ++i) {
                            dwrow[i] += g * xr[i];
                            dxr[i] += g * wrow[i];
                        }
                    }
                }
                break;
            }
            case LayerKind::conv2d: {
                const std::size_t pi = static_cast<std::size_t>(param_index_[li]);
                const Tensor& w = params_.entries[pi].value;
                Tensor& dw = grads[pi];
                Tensor& db = grads[pi + 1];
                const std::size_t f = w.shape[0], c = w.shape[1], k = w.shape[2];
                const std::size_t ih = x.shape[2], iw = x.shape[3];
                const std::size_t oh = ih - k + 1, ow = iw - k + 1;
                for (std::size_t s = 0; s < n; ++s) {
                    const double* xin = x.ptr() + s * c * ih * iw;
                    const double* dy = delta.ptr() + s * f * oh * ow;
                    double* dxin = dx.ptr() + s * c * ih * iw;
                    for (std::size_t fo = 0; fo < f; ++fo) {
                        const double* wf = w.ptr() + fo * c * k * k;
                        double* dwf = dw.ptr() + fo * c * k * k;
                        for (std::size_t oy = 0; oy < oh; ++oy)
                            for (std::size_t ox = 0; ox < ow; ++ox) {
                                const double g = dy[fo * oh * ow + oy * ow + ox];
                                if (g == 0.0) continue;
                                db.data[fo] += g;
                                for (std::size_t ci = 0; ci < c; ++ci) {
                                    const double* xc = xin + ci * ih * iw;
                                    double* dxc = dxin + ci * ih * iw;
                                    const double* wc = wf + ci * k * k;
                                    double* dwc = dwf + ci * k * k;
                                    for (std::size_t p = 0; p < k; ++p) {
                                        const double* xrow = xc + (oy + p) * iw + ox;
                                        double* dxrow = dxc + (oy + p) * iw + ox;
                                        const double* wrow = wc + p * k;
                                        double* dwrow = dwc + p * k;
                                        for (std::size_t qk = 0; qk < k; ++qk) {
                                            dwrow[qk] += g * xrow[qk];
                                            dxrow[qk] += g * wrow[qk];
                                        }
                                    }
                                }
                            }
                    }
                }
                break;
            }
            case LayerKind::relu: {
                for (std::size_t i = 0; i < x.numel(); ++i)
                    dx.data[i] = x.data[i] > 0.0 ? delta.data[i] : 0.0;
                break;
            }
            case LayerKind::maxpool2d: {
                const std::size_t k = static_cast<std::size_t>(spec.kernel);
                const std::size_t c = x.shape[1], ih = x.shape[2], iw = x.shape[3];
                const std::size_t oh = ih / k, ow = iw / k;
                for (std::size_t s = 0; s < n; ++s)
                    for (std::size_t ci = 0; ci < c; ++ci) {
                        const double* xc = x.ptr() + (s * c + ci) * ih * iw;
                        double* dxc = dx.ptr() + (s * c + ci) * ih * iw;
                        const double* dy = delta.ptr() + (s * c + ci) * oh * ow;
                        for (std::size_t oy = 0; oy < oh; ++oy)
                            for (std::size_t ox = 0; ox < ow; ++ox) {
                                // first maximum in scan order wins ties
                                std::size_t bi = (oy * k) * iw + ox * k;
                                double best = xc[bi];
                                for (std::size_t p = 0; p < k; ++p)
                                    for (std::size_t qk = 0; qk < k; ++qk) {
                                        const std::size_t idx = (oy * k + p) * iw + ox * k + qk;
                                        if (xc[idx] > best) {
                                            best = xc[idx];
                                            bi = idx;
                                        }
                                    }
                                dxc[bi] += dy[oy * ow + ox];
                            }
                    }
                break;
            }
            case LayerKind::flatten: {
                dx.data = delta.data;
                break;
            }
        }
        delta = std::move(dx);
    }
    return loss;
}

void adam_step(ParamStore& params, const GradStore& grads, double lr, double beta1, double beta2,
               double eps) {
    if (grads.size() != params.entries.size())
        throw std::invalid_argument("adam_step: gradient store size mismatch");
    for (std::size_t i = 0; i < grads.size(); ++i)
        if (!grads[i].same_shape(params.entries[i].value))
            throw std::invalid_argument("adam_step: shape mismatch for " + params.entries[i].name);

    params.step += 1;
    const double t = static_cast<double>(params.step);
    const double bc1 = 1.0 - std::pow(beta1, t);
    const double bc2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < grads.size(); ++i) {
        ParamEntry& e = params.entries[i];
        const double* g = grads[i].ptr();
        for (std::size_t j = 0; j < e.value.numel(); ++j) {
            e.m.data[j] = beta1 * e.m.data[j] + (1.0 - beta1) * g[j];
            e.v.data[j] = beta2 * e.v.data[j] + (1.0 - beta2) * g[j] * g[j];
            const double mhat = e.m.data[j] / bc1;
            const double vhat = e.v.data[j] / bc2;
            e.value.data[j] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

}  // namespace beamsema::nn
