// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_HARNESS_HPP
#define BEAMSEMA_HARNESS_HPP

#include <map>
#include <string>
#include <vector>

#include "beamsema/io/manifest.hpp"
#include "beamsema/nn/model.hpp"
#include "beamsema/nn/train.hpp"
#include "beamsema/predictors.hpp"
#include "beamsema/scene_sim.hpp"

namespace beamsema {

struct SplitSpec {
    double train = 0.7;
    double val = 0.2;
    double test = 0.1;
    std::uint64_t seed = 0;

    void validate() const;
};

struct SplitCounts {
    std::size_t train = 0, val = 0, test = 0;
};

// Validation and test counts round to nearest; the remainder goes to train.
// 2300 -> 1610/460/230, 854 -> 598/171/85.
SplitCounts split_counts(std::size_t n, const SplitSpec& spec);

// Uniform seeded assignment; writes the split tag into each row.
void split_dataset(std::vector<io::ManifestRow>& rows, const SplitSpec& spec);

// Percentage of rows whose label is among the k largest logits; logit ties
// rank the lower beam index first so the metric is deterministic.
double topk_accuracy(const nn::Tensor& logits, const std::vector<int>& labels, int k);

struct Metrics {
    double top1 = 0.0, top2 = 0.0, top3 = 0.0;  // percent
    std::vector<long> confusion;                // Q x Q, row = true label, col = top-1 prediction
    std::vector<double> train_loss;             // per epoch
    std::vector<double> val_top1;               // per epoch, percent
};

// A generated dataset directory: manifest rows plus the recorded spec.
struct Dataset {
    std::string dir;
    DatasetSpec spec;
    std::vector<io::ManifestRow> rows;

    static Dataset load(const std::string& dir);
    // Indices of non-missed rows carrying the given split tag.
    std::vector<std::size_t> split_indices(const std::string& split) const;
};

// Per-predictor run settings; train defaults come from the training table
// (bbox: 128 / 1e-2 / {15,30} / 50 epochs; mask: 64 / 1e-3 / {10,20} / 30).
struct PredictorRunConfig {
    PredictorKind kind = PredictorKind::bbox_mlp;
    nn::TrainConfig train;
    int mask_size = 32;
    int image_width = 160;
    int image_height = 90;
    bool lenet_fc84 = false;
};

nn::TrainConfig default_train_config(PredictorKind kind);

struct ExperimentConfig {
    std::string dataset_dir;
    std::vector<PredictorRunConfig> predictors;
    SplitSpec split;
    std::uint64_t seed = 0;
    int threads = 1;

    // Parses the [experiment] / [split] / [train.<predictor>] sections;
    // missing keys fall back to the embedded defaults.
    static ExperimentConfig from_kv_file(const std::string& path);
    void validate() const;
};

struct TrainedPredictor {
    nn::Model model;        // best validation top-1 checkpoint (earliest on ties)
    nn::Model final_model;  // end-of-schedule parameters
    Metrics metrics;        // test-split metrics plus the run curves
    int best_epoch = 0;
    double train_seconds = 0.0;
    double infer_ms_per_sample = 0.0;
    PositionBounds position_bounds;  // train-split stats (position predictor)
};

// Runs the full schedule, evaluating val top-1 after each epoch and keeping
// the checkpoint with the best value (ties resolve to the earlier epoch).
TrainedPredictor train_predictor(const Dataset& data, const PredictorRunConfig& cfg,
                                 std::uint64_t run_seed, int threads = 1);

struct PredictorReport {
    std::string name;
    Metrics metrics;
    std::size_t params = 0;
    double train_s = 0.0;
    double infer_ms_per_sample = 0.0;
};

struct ExperimentReport {
    std::vector<PredictorReport> predictors;
    std::uint64_t seed = 0;
    std::string config_digest;
};

// Splits the dataset (writing tags back to the manifest), then builds,
// trains and evaluates every configured predictor.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

void write_report_json(const ExperimentReport& report, const std::string& path);
ExperimentReport read_report_json(const std::string& path);

struct TradeoffRow {
    std::string predictor;
    std::size_t params = 0;
    double top1 = 0.0;
};

// Rows sorted by parameter count ascending.
std::vector<TradeoffRow> tradeoff_table(const ExperimentReport& report);
void write_tradeoff_csv(const ExperimentReport& report, const std::string& path);

// Feature assembly shared by the harness, the CLI train/eval verbs and the
// test suites.
struct FeatureSet {
    nn::Tensor inputs;
    std::vector<int> labels;
};

PositionBounds position_bounds_from_rows(const std::vector<io::ManifestRow>& rows,
                                         const std::vector<std::size_t>& train_idx);

FeatureSet build_features(const Dataset& data, const std::vector<std::size_t>& idx,
                          const PredictorRunConfig& cfg, const PositionBounds& bounds,
                          int threads = 1);

// Forward in fixed-size slices to bound peak memory.
nn::Tensor forward_in_batches(const nn::Model& model, const nn::Tensor& inputs,
                              std::size_t batch = 64);

Metrics evaluate(const nn::Model& model, const FeatureSet& test, int num_classes);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace beamsema

#endif
