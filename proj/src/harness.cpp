// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "beamsema/io/kvconfig.hpp"
#include "beamsema/io/pgm.hpp"
#include "beamsema/parallel.hpp"
#include "beamsema/semantics.hpp"

namespace beamsema {

namespace fs = std::filesystem;
using nlohmann::json;

void SplitSpec::validate() const {
    if (!(train > 0.0) || !(val > 0.0) || !(test > 0.0))
        throw std::invalid_argument("SplitSpec: every ratio must be > 0");
    if (std::abs(train + val + test - 1.0) > 1e-9)
        throw std::invalid_argument("SplitSpec: ratios must sum to 1");
}

SplitCounts split_counts(std::size_t n, const SplitSpec& spec) {
    spec.validate();
    if (n < 3) throw std::invalid_argument("split: need at least 3 samples");
    SplitCounts c;
    c.val = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.val));
    c.test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.test));
    if (c.val + c.test >= n) throw std::invalid_argument("split: ratios leave no training samples");
    c.train = n - c.val - c.test;
    return c;
}

void split_dataset(std::vector<io::ManifestRow>& rows, const SplitSpec& spec) {
    const SplitCounts c = split_counts(rows.size(), spec);
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(spec.seed);
    rng.shuffle(order);
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const char* tag = pos < c.train ? "train" : (pos < c.train + c.val ? "val" : "test");
        rows[order[pos]].split = tag;
    }
}

double topk_accuracy(const nn::Tensor& logits, const std::vector<int>& labels, int k) {
    if (logits.shape.size() != 2) throw std::invalid_argument("topk_accuracy: logits must be N x Q");
    const std::size_t n = logits.shape[0], q = logits.shape[1];
    if (k < 1 || static_cast<std::size_t>(k) > q)
        throw std::invalid_argument("topk_accuracy: k outside [1, Q]");
    if (labels.size() != n) throw std::invalid_argument("topk_accuracy: label count mismatch");
    if (n == 0) throw std::invalid_argument("topk_accuracy: empty evaluation set");

    std::size_t hits = 0;
    for (std::size_t s = 0; s < n; ++s) {
        const double* row = logits.ptr() + s * q;
        const std::size_t label = static_cast<std::size_t>(labels[s]);
        const double lv = row[label];
        std::size_t rank = 0;
        for (std::size_t i = 0; i < q; ++i) {
            if (row[i] > lv || (row[i] == lv && i < label)) ++rank;
        }
        if (rank < static_cast<std::size_t>(k)) ++hits;
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(n);
}

Dataset Dataset::load(const std::string& dir) {
    Dataset d;
    d.dir = dir;
    const fs::path manifest = fs::path(dir) / "manifest.csv";
    if (!fs::exists(manifest))
        throw std::runtime_error("dataset: missing manifest at " + manifest.string());
    d.rows = io::read_manifest(manifest.string());
    d.spec = load_dataset_spec((fs::path(dir) / "dataset.cfg").string());
    return d;
}

std::vector<std::size_t> Dataset::split_indices(const std::string& split) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].split == split && !rows[i].missed) idx.push_back(i);
    return idx;
}

nn::TrainConfig default_train_config(PredictorKind kind) {
    nn::TrainConfig cfg;
    switch (kind) {
        case PredictorKind::bbox_mlp:
            cfg.batch_size = 128;
            cfg.base_lr = 1e-2;
            cfg.decay_epochs = {15, 30};
            cfg.total_epochs = 50;
            break;
        case PredictorKind::mask_lenet:
            cfg.batch_size = 64;
            cfg.base_lr = 1e-3;
            cfg.decay_epochs = {10, 20};
            cfg.total_epochs = 30;
            break;
        case PredictorKind::position_mlp:
            cfg.batch_size = 64;
            cfg.base_lr = 1e-3;
            cfg.decay_epochs = {10, 20};
            cfg.total_epochs = 30;
            break;
        case PredictorKind::image_cnn_baseline:
            cfg.batch_size = 32;
            cfg.base_lr = 1e-3;
            cfg.decay_epochs = {10, 20};
            cfg.total_epochs = 30;
            break;
    }
    cfg.decay_factor = 0.1;
    return cfg;
}

void ExperimentConfig::validate() const {
    if (dataset_dir.empty()) throw std::invalid_argument("experiment: dataset path missing");
    if (predictors.empty()) throw std::invalid_argument("experiment: no predictors configured");
    split.validate();
    std::vector<std::string> names;
    for (const auto& p : predictors) {
        p.train.validate();
        names.push_back(to_string(p.kind));
    }
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
        throw std::invalid_argument("experiment: duplicate predictor entries");
}

ExperimentConfig ExperimentConfig::from_kv_file(const std::string& path) {
    const io::KvConfig kv = io::KvConfig::parse_file(path);
    ExperimentConfig cfg;
    cfg.dataset_dir = kv.get("experiment", "dataset");
    cfg.seed = static_cast<std::uint64_t>(kv.get_int_or("experiment", "seed", 0));
    cfg.threads = static_cast<int>(kv.get_int_or("experiment", "threads", 1));
    cfg.split.train = kv.get_double_or("split", "train", 0.7);
    cfg.split.val = kv.get_double_or("split", "val", 0.2);
    cfg.split.test = kv.get_double_or("split", "test", 0.1);
    cfg.split.seed = static_cast<std::uint64_t>(kv.get_int_or("split", "seed",
                                                              static_cast<std::int64_t>(cfg.seed)));

    std::vector<std::string> names;
    if (kv.has("experiment", "predictors")) {
        names = kv.get_list("experiment", "predictors");
    } else {
        names = {"bbox_mlp", "mask_lenet", "position_mlp", "image_cnn_baseline"};
    }
    for (const auto& name : names) {
        PredictorRunConfig p;
        p.kind = predictor_from_string(name);
        p.train = default_train_config(p.kind);
        const std::string sec = "train." + name;
        p.train.batch_size = static_cast<int>(kv.get_int_or(sec, "batch_size", p.train.batch_size));
        p.train.base_lr = kv.get_double_or(sec, "base_lr", p.train.base_lr);
        if (kv.has(sec, "decay_epochs")) p.train.decay_epochs = kv.get_int_list(sec, "decay_epochs");
        p.train.decay_factor = kv.get_double_or(sec, "decay_factor", p.train.decay_factor);
        p.train.total_epochs =
            static_cast<int>(kv.get_int_or(sec, "total_epochs", p.train.total_epochs));
        p.train.seed = cfg.seed;
        p.mask_size = static_cast<int>(kv.get_int_or("experiment", "mask_size", 32));
        p.image_width = static_cast<int>(kv.get_int_or("experiment", "image_width", 160));
        p.image_height = static_cast<int>(kv.get_int_or("experiment", "image_height", 90));
        p.lenet_fc84 = kv.get_int_or("experiment", "lenet_fc84", 0) != 0;
        cfg.predictors.push_back(std::move(p));
    }
    cfg.validate();
    return cfg;
}

PositionBounds position_bounds_from_rows(const std::vector<io::ManifestRow>& rows,
                                         const std::vector<std::size_t>& train_idx) {
    if (train_idx.empty()) throw std::invalid_argument("position bounds: empty training split");
    PositionBounds b;
    b.min_x = b.max_x = rows[train_idx[0]].pos_x;
    b.min_y = b.max_y = rows[train_idx[0]].pos_y;
    for (std::size_t i : train_idx) {
        b.min_x = std::min(b.min_x, rows[i].pos_x);
        b.max_x = std::max(b.max_x, rows[i].pos_x);
        b.min_y = std::min(b.min_y, rows[i].pos_y);
        b.max_y = std::max(b.max_y, rows[i].pos_y);
    }
    // degenerate axes (e.g. a road at constant y) widen to a unit interval
    if (b.max_x - b.min_x < 1e-9) {
        b.min_x -= 0.5;
        b.max_x += 0.5;
    }
    if (b.max_y - b.min_y < 1e-9) {
        b.min_y -= 0.5;
        b.max_y += 0.5;
    }
    return b;
}

namespace {

// Area-average downsize with the same floor tiling as downsample_mask.
GrayImage resize_gray(const GrayImage& img, int out_w, int out_h) {
    GrayImage out = make_gray_image(out_w, out_h);
    std::vector<double> acc(static_cast<std::size_t>(out_w) * out_h, 0.0);
    std::vector<long> cnt(static_cast<std::size_t>(out_w) * out_h, 0);
    for (int y = 0; y < img.height; ++y) {
        const int j = static_cast<int>(static_cast<std::int64_t>(y) * out_h / img.height);
        for (int x = 0; x < img.width; ++x) {
            const int i = static_cast<int>(static_cast<std::int64_t>(x) * out_w / img.width);
            acc[static_cast<std::size_t>(j) * out_w + i] += img.at(x, y);
            cnt[static_cast<std::size_t>(j) * out_w + i] += 1;
        }
    }
    for (std::size_t i = 0; i < acc.size(); ++i)
        out.pixels[i] = cnt[i] > 0 ? acc[i] / cnt[i] : 0.0;
    return out;
}

nn::Tensor gather_rows(const nn::Tensor& all, const std::vector<std::size_t>& order,
                       std::size_t begin, std::size_t end) {
    std::vector<std::size_t> shape = all.shape;
    shape[0] = end - begin;
    nn::Tensor out(shape);
    const std::size_t stride = all.numel() / all.shape[0];
    for (std::size_t i = begin; i < end; ++i)
        std::copy_n(all.ptr() + order[i] * stride, stride, out.ptr() + (i - begin) * stride);
    return out;
}

int argmax_row(const double* row, std::size_t q) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < q; ++i)
        if (row[i] > row[best]) best = i;  // ties keep the lower index
    return static_cast<int>(best);
}

double wall_seconds(std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

nn::Model build_for(const PredictorRunConfig& cfg, int q) {
    switch (cfg.kind) {
        case PredictorKind::bbox_mlp: return build_bbox_mlp(q);
        case PredictorKind::mask_lenet:
            return build_mask_lenet(q, cfg.mask_size, cfg.mask_size, cfg.lenet_fc84);
        case PredictorKind::position_mlp: return build_position_mlp(q);
        case PredictorKind::image_cnn_baseline:
            return build_image_cnn_baseline(q, cfg.image_width, cfg.image_height);
    }
    throw std::invalid_argument("unknown predictor kind");
}

}  // namespace

FeatureSet build_features(const Dataset& data, const std::vector<std::size_t>& idx,
                          const PredictorRunConfig& cfg, const PositionBounds& bounds,
                          int threads) {
    const int w_img = data.spec.scene.image_width;
    const int h_img = data.spec.scene.image_height;
    const std::size_t n = idx.size();
    FeatureSet out;
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.labels[i] = data.rows[idx[i]].beam_index;

    switch (cfg.kind) {
        case PredictorKind::bbox_mlp: {
            out.inputs = nn::Tensor({n, 4});
            for (std::size_t i = 0; i < n; ++i) {
                const auto& r = data.rows[idx[i]];
                const BBoxSemantic s =
                    bbox_vector({r.bbox_xc, r.bbox_yc, r.bbox_w, r.bbox_h}, w_img, h_img);
                std::copy(s.values.begin(), s.values.end(), out.inputs.ptr() + i * 4);
            }
            break;
        }
        case PredictorKind::position_mlp: {
            out.inputs = nn::Tensor({n, 2});
            for (std::size_t i = 0; i < n; ++i) {
                const auto& r = data.rows[idx[i]];
                const PositionSemantic s = normalize_position(r.pos_x, r.pos_y, bounds);
                out.inputs.ptr()[i * 2] = s.values[0];
                out.inputs.ptr()[i * 2 + 1] = s.values[1];
            }
            break;
        }
        case PredictorKind::mask_lenet: {
            const std::size_t m = static_cast<std::size_t>(cfg.mask_size);
            out.inputs = nn::Tensor({n, 1, m, m});
            parallel_for(static_cast<long>(n), threads, [&](long i) {
                const auto& r = data.rows[idx[static_cast<std::size_t>(i)]];
                const ByteImage mask =
                    io::read_pgm_mask((fs::path(data.dir) / r.mask_path).string());
                const MaskSemantic s = downsample_mask(mask, cfg.mask_size, cfg.mask_size);
                std::copy(s.grid.begin(), s.grid.end(),
                          out.inputs.ptr() + static_cast<std::size_t>(i) * m * m);
            });
            break;
        }
        case PredictorKind::image_cnn_baseline: {
            const std::size_t w = static_cast<std::size_t>(cfg.image_width);
            const std::size_t h = static_cast<std::size_t>(cfg.image_height);
            out.inputs = nn::Tensor({n, 1, h, w});
            parallel_for(static_cast<long>(n), threads, [&](long i) {
                const auto& r = data.rows[idx[static_cast<std::size_t>(i)]];
                const GrayImage raster =
                    io::read_pgm_gray((fs::path(data.dir) / r.raster_path).string());
                const GrayImage small = resize_gray(raster, cfg.image_width, cfg.image_height);
                std::copy(small.pixels.begin(), small.pixels.end(),
                          out.inputs.ptr() + static_cast<std::size_t>(i) * w * h);
            });
            break;
        }
    }
    return out;
}

nn::Tensor forward_in_batches(const nn::Model& model, const nn::Tensor& inputs, std::size_t batch) {
    const std::size_t n = inputs.shape[0];
    nn::Tensor logits({n, static_cast<std::size_t>(model.num_classes())});
    std::vector<std::size_t> identity(n);
    for (std::size_t i = 0; i < n; ++i) identity[i] = i;
    const std::size_t q = static_cast<std::size_t>(model.num_classes());
    for (std::size_t begin = 0; begin < n; begin += batch) {
        const std::size_t end = std::min(n, begin + batch);
        const nn::Tensor part = gather_rows(inputs, identity, begin, end);
        const nn::Tensor out = model.forward(part);
        std::copy(out.data.begin(), out.data.end(), logits.ptr() + begin * q);
    }
    return logits;
}

Metrics evaluate(const nn::Model& model, const FeatureSet& test, int num_classes) {
    Metrics m;
    const nn::Tensor logits = forward_in_batches(model, test.inputs);
    m.top1 = topk_accuracy(logits, test.labels, 1);
    m.top2 = topk_accuracy(logits, test.labels, 2);
    m.top3 = topk_accuracy(logits, test.labels, 3);
    const std::size_t q = static_cast<std::size_t>(num_classes);
    m.confusion.assign(q * q, 0);
    for (std::size_t s = 0; s < test.labels.size(); ++s) {
        const int pred = argmax_row(logits.ptr() + s * q, q);
        m.confusion[static_cast<std::size_t>(test.labels[s]) * q +
                    static_cast<std::size_t>(pred)] += 1;
    }
    return m;
}

TrainedPredictor train_predictor(const Dataset& data, const PredictorRunConfig& cfg,
                                 std::uint64_t run_seed, int threads) {
    cfg.train.validate();
    const auto train_idx = data.split_indices("train");
    const auto val_idx = data.split_indices("val");
    const auto test_idx = data.split_indices("test");
    if (train_idx.empty() || val_idx.empty() || test_idx.empty())
        throw std::runtime_error("train_predictor: empty split (did the dataset get split?)");

    const int q = data.spec.channel.num_beams;
    for (std::size_t i : train_idx)
        if (data.rows[i].beam_index < 0 || data.rows[i].beam_index >= q)
            throw std::runtime_error("train_predictor: beam label outside the codebook");

    TrainedPredictor result;
    result.position_bounds = position_bounds_from_rows(data.rows, train_idx);

    const FeatureSet train_set = build_features(data, train_idx, cfg, result.position_bounds, threads);
    const FeatureSet val_set = build_features(data, val_idx, cfg, result.position_bounds, threads);
    const FeatureSet test_set = build_features(data, test_idx, cfg, result.position_bounds, threads);

    const std::uint64_t kind_tag = static_cast<std::uint64_t>(cfg.kind);
    nn::Model model = build_for(cfg, q);
    Rng init_rng(derive_seed(run_seed, kind_tag, 100));
    model.init_params(init_rng);
    Rng order_rng(derive_seed(run_seed, kind_tag, 101));

    const std::size_t n_train = train_idx.size();
    std::vector<std::size_t> order(n_train);
    for (std::size_t i = 0; i < n_train; ++i) order[i] = i;

    nn::Model best_model = model;
    double best_val = -1.0;
    result.best_epoch = 0;

    const auto t_start = std::chrono::steady_clock::now();
    nn::GradStore grads;
    const std::size_t batch = static_cast<std::size_t>(cfg.train.batch_size);
    for (int epoch = 0; epoch < cfg.train.total_epochs; ++epoch) {
        const double lr = nn::lr_at_epoch(cfg.train, epoch);
        order_rng.shuffle(order);
        double epoch_loss = 0.0;
        for (std::size_t begin = 0; begin < n_train; begin += batch) {
            const std::size_t end = std::min(n_train, begin + batch);
            const nn::Tensor inputs = gather_rows(train_set.inputs, order, begin, end);
            std::vector<int> labels(end - begin);
            for (std::size_t i = begin; i < end; ++i)
                labels[i - begin] = train_set.labels[order[i]];
            const double loss = model.loss_and_grad(inputs, labels, grads);
            nn::adam_step(model.params(), grads, lr);
            epoch_loss += loss * static_cast<double>(end - begin);
        }
        result.metrics.train_loss.push_back(epoch_loss / static_cast<double>(n_train));

        const nn::Tensor val_logits = forward_in_batches(model, val_set.inputs);
        const double val_top1 = topk_accuracy(val_logits, val_set.labels, 1);
        result.metrics.val_top1.push_back(val_top1);
        if (val_top1 > best_val) {  // strict: ties keep the earlier epoch
            best_val = val_top1;
            best_model = model;
            result.best_epoch = epoch;
        }
    }
    result.train_seconds = wall_seconds(t_start);
    result.final_model = std::move(model);
    result.model = std::move(best_model);

    const auto curves_loss = result.metrics.train_loss;
    const auto curves_val = result.metrics.val_top1;
    result.metrics = evaluate(result.model, test_set, q);
    result.metrics.train_loss = curves_loss;
    result.metrics.val_top1 = curves_val;

    // median wall time of 5 inference passes over the test split
    std::vector<double> pass_s;
    for (int pass = 0; pass < 5; ++pass) {
        const auto t0 = std::chrono::steady_clock::now();
        forward_in_batches(result.model, test_set.inputs);
        pass_s.push_back(wall_seconds(t0));
    }
    std::sort(pass_s.begin(), pass_s.end());
    result.infer_ms_per_sample =
        pass_s[2] * 1000.0 / static_cast<double>(test_set.labels.size());
    return result;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    Dataset data = Dataset::load(cfg.dataset_dir);
    split_dataset(data.rows, cfg.split);
    io::write_manifest((fs::path(cfg.dataset_dir) / "manifest.csv").string(), data.rows);

    ExperimentReport report;
    report.seed = cfg.seed;
    {
        std::string digest_src = std::to_string(cfg.seed) + "|" + cfg.dataset_dir;
        for (const auto& p : cfg.predictors) {
            digest_src += "|" + to_string(p.kind) + ":" + std::to_string(p.train.batch_size) + ":" +
                          std::to_string(p.train.base_lr) + ":" +
                          std::to_string(p.train.total_epochs);
        }
        report.config_digest = fnv1a_hex(digest_src);
    }

    for (const auto& p : cfg.predictors) {
        const TrainedPredictor trained = train_predictor(data, p, cfg.seed, cfg.threads);
        PredictorReport pr;
        pr.name = to_string(p.kind);
        pr.metrics = trained.metrics;
        pr.params = param_count(trained.model);
        pr.train_s = trained.train_seconds;
        pr.infer_ms_per_sample = trained.infer_ms_per_sample;
        report.predictors.push_back(std::move(pr));
    }
    return report;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_report_json(const ExperimentReport& report, const std::string& path) {
    json j;
    j["seed"] = report.seed;
    j["config_digest"] = report.config_digest;
    json preds = json::object();
    for (const auto& p : report.predictors) {
        preds[p.name] = {{"top1", p.metrics.top1},
                         {"top2", p.metrics.top2},
                         {"top3", p.metrics.top3},
                         {"params", p.params},
                         {"train_s", p.train_s},
                         {"infer_ms_per_sample", p.infer_ms_per_sample}};
    }
    j["predictors"] = preds;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("report: cannot write " + path);
    out << j.dump(2) << "\n";
}

ExperimentReport read_report_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("report: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("report: malformed JSON in " + path + ": " + e.what());
    }
    ExperimentReport report;
    report.seed = j.value("seed", 0ULL);
    report.config_digest = j.value("config_digest", "");
    if (!j.contains("predictors") || !j["predictors"].is_object())
        throw std::runtime_error("report: missing predictors object in " + path);
    for (const auto& [name, entry] : j["predictors"].items()) {
        PredictorReport pr;
        pr.name = name;
        pr.metrics.top1 = entry.at("top1").get<double>();
        pr.metrics.top2 = entry.at("top2").get<double>();
        pr.metrics.top3 = entry.at("top3").get<double>();
        pr.params = entry.at("params").get<std::size_t>();
        pr.train_s = entry.value("train_s", 0.0);
        pr.infer_ms_per_sample = entry.value("infer_ms_per_sample", 0.0);
        report.predictors.push_back(std::move(pr));
    }
    return report;
}

std::vector<TradeoffRow> tradeoff_table(const ExperimentReport& report) {
    std::vector<TradeoffRow> rows;
    for (const auto& p : report.predictors) rows.push_back({p.name, p.params, p.metrics.top1});
    std::sort(rows.begin(), rows.end(), [](const TradeoffRow& a, const TradeoffRow& b) {
        return a.params < b.params || (a.params == b.params && a.predictor < b.predictor);
    });
    return rows;
}

void write_tradeoff_csv(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("tradeoff: cannot write " + path);
    out << "predictor,params,top1\n";
    char buf[64];
    for (const auto& r : tradeoff_table(report)) {
        std::snprintf(buf, sizeof(buf), "%.4f", r.top1);
        out << r.predictor << ',' << r.params << ',' << buf << "\n";
    }
}

}  // namespace beamsema
