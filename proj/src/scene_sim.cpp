// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/scene_sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "beamsema/io/kvconfig.hpp"
#include "beamsema/io/pgm.hpp"
#include "beamsema/parallel.hpp"

namespace beamsema {

namespace fs = std::filesystem;

namespace {

constexpr double kMinDepth = 0.25;   // meters in front of the camera
constexpr double kGapMargin = 0.3;   // meters between vehicle footprints

struct Vec2 {
    double x, y;
};

struct CameraPoint {
    double u, v;
};

CameraPoint project_point(double x, double y, double z, const SceneConfig& cfg) {
    if (y < kMinDepth)
        throw std::runtime_error("projection: point behind or too close to the camera");
    return {cfg.image_width / 2.0 + cfg.focal_px * x / y,
            cfg.image_height / 2.0 + cfg.focal_px * (cfg.camera_height_m - z) / y};
}

// Eight corners of the vehicle box; long axis along the road direction.
std::vector<CameraPoint> project_box_corners(const VehiclePose& p, const SceneConfig& cfg) {
    double dx = cfg.road_x1 - cfg.road_x0;
    double dy = cfg.road_y1 - cfg.road_y0;
    const double len = std::hypot(dx, dy);
    if (len > 0.0) {
        dx /= len;
        dy /= len;
    } else {
        dx = 1.0;
        dy = 0.0;
    }
    const double nx = -dy, ny = dx;

    std::vector<CameraPoint> out;
    out.reserve(8);
    for (int sl : {-1, 1})
        for (int sw : {-1, 1})
            for (int sz : {0, 1}) {
                const double wx = p.x + sl * 0.5 * p.length * dx + sw * 0.5 * p.width * nx;
                const double wy = p.y + sl * 0.5 * p.length * dy + sw * 0.5 * p.width * ny;
                out.push_back(project_point(wx, wy, sz * p.height, cfg));
            }
    return out;
}

// Andrew monotone chain; returns a CCW hull (in image coordinates).
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;
    auto cross = [](const Vec2& o, const Vec2& a, const Vec2& b) {
        return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    };
    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

// Scanline fill over pixel centers; plot(ix, iy) is called once per pixel.
template <class Plot>
void fill_convex(const std::vector<Vec2>& hull, int width, int height, Plot&& plot) {
    if (hull.size() < 3) return;
    double vmin = hull[0].y, vmax = hull[0].y;
    for (const auto& p : hull) {
        vmin = std::min(vmin, p.y);
        vmax = std::max(vmax, p.y);
    }
    const int j0 = std::max(0, static_cast<int>(std::floor(vmin - 0.5)));
    const int j1 = std::min(height - 1, static_cast<int>(std::ceil(vmax)));
    for (int j = j0; j <= j1; ++j) {
        const double y = j + 0.5;
        double xl = 0.0, xr = 0.0;
        int hits = 0;
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const Vec2& a = hull[i];
            const Vec2& b = hull[(i + 1) % hull.size()];
            // half-open in y so shared vertices count once
            if ((a.y <= y && y < b.y) || (b.y <= y && y < a.y)) {
                const double x = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (hits == 0) {
                    xl = xr = x;
                } else {
                    xl = std::min(xl, x);
                    xr = std::max(xr, x);
                }
                ++hits;
            }
        }
        if (hits < 2) continue;
        const int i0 = std::max(0, static_cast<int>(std::ceil(xl - 0.5)));
        const int i1 = std::min(width - 1, static_cast<int>(std::floor(xr - 0.5)));
        for (int i = i0; i <= i1; ++i) plot(i, j);
    }
}

std::vector<Vec2> hull_of_pose(const VehiclePose& pose, const SceneConfig& cfg) {
    std::vector<Vec2> pts;
    for (const auto& c : project_box_corners(pose, cfg)) pts.push_back({c.u, c.v});
    return convex_hull(std::move(pts));
}

double road_length(const SceneConfig& cfg) {
    return std::hypot(cfg.road_x1 - cfg.road_x0, cfg.road_y1 - cfg.road_y0);
}

PixelBBox clip_bbox(double xmin, double xmax, double ymin, double ymax, const SceneConfig& cfg) {
    if (xmax <= 0.0 || xmin >= cfg.image_width || ymax <= 0.0 || ymin >= cfg.image_height)
        throw std::runtime_error("projection: bounding box entirely outside the image");
    xmin = std::max(xmin, 0.0);
    ymin = std::max(ymin, 0.0);
    xmax = std::min(xmax, static_cast<double>(cfg.image_width));
    ymax = std::min(ymax, static_cast<double>(cfg.image_height));
    return PixelBBox{(xmin + xmax) / 2.0, (ymin + ymax) / 2.0, xmax - xmin, ymax - ymin};
}

}  // namespace

void SceneConfig::validate() const {
    if (image_width <= 0 || image_height <= 0)
        throw std::invalid_argument("SceneConfig: image dimensions must be positive");
    if (channels != 1)
        throw std::invalid_argument("SceneConfig: only grayscale (channels = 1) is supported");
    if (!(focal_px > 0.0)) throw std::invalid_argument("SceneConfig: focal_px must be > 0");
    if (!(camera_height_m > 0.0))
        throw std::invalid_argument("SceneConfig: camera_height_m must be > 0");
    if (road_y0 < kMinDepth || road_y1 < kMinDepth)
        throw std::invalid_argument("SceneConfig: road must lie in front of the camera (y > 0)");
    if (!(veh_len_min > 0.0) || veh_len_min > veh_len_max || !(veh_wid_min > 0.0) ||
        veh_wid_min > veh_wid_max || !(veh_hgt_min > 0.0) || veh_hgt_min > veh_hgt_max)
        throw std::invalid_argument("SceneConfig: vehicle dimension ranges are invalid");
    if (distractors_min < 0 || distractors_min > distractors_max)
        throw std::invalid_argument("SceneConfig: distractor range is invalid");
    if (num_samples < 1) throw std::invalid_argument("SceneConfig: num_samples must be >= 1");
    // Road endpoints must project inside the image.
    for (const auto& [rx, ry] : {std::pair{road_x0, road_y0}, std::pair{road_x1, road_y1}}) {
        const auto p = project_point(rx, ry, 0.0, *this);
        if (p.u < 0.0 || p.u > image_width || p.v < 0.0 || p.v > image_height)
            throw std::invalid_argument("SceneConfig: road endpoint falls outside the camera frustum");
    }
}

void NoiseConfig::validate() const {
    if (bbox_jitter < 0.0 || gps_sigma_m < 0.0)
        throw std::invalid_argument("NoiseConfig: sigmas must be >= 0");
    for (double p : {mask_flip_prob, mask_speckle_prob, miss_prob})
        if (p < 0.0 || p > 1.0)
            throw std::invalid_argument("NoiseConfig: probabilities must lie in [0,1]");
}

SceneFrame sample_scene(const SceneConfig& cfg, Rng& rng) {
    cfg.validate();
    SceneFrame frame;

    auto sample_pose = [&](double t) {
        VehiclePose p;
        p.x = cfg.road_x0 + t * (cfg.road_x1 - cfg.road_x0);
        p.y = cfg.road_y0 + t * (cfg.road_y1 - cfg.road_y0);
        p.length = rng.uniform(cfg.veh_len_min, cfg.veh_len_max);
        p.width = rng.uniform(cfg.veh_wid_min, cfg.veh_wid_max);
        p.height = rng.uniform(cfg.veh_hgt_min, cfg.veh_hgt_max);
        return p;
    };

    const double t_tx = rng.uniform();
    frame.transmitter = sample_pose(t_tx);
    frame.azimuth = std::atan2(frame.transmitter.x, frame.transmitter.y);
    frame.range = std::hypot(frame.transmitter.x, frame.transmitter.y);

    const double len = road_length(cfg);
    const int n_distractors =
        static_cast<int>(rng.uniform_int(cfg.distractors_min, cfg.distractors_max));
    for (int d = 0; d < n_distractors; ++d) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            const double t = rng.uniform();
            VehiclePose p = sample_pose(t);
            const double gap = std::abs(t - t_tx) * len;
            if (gap >= (p.length + frame.transmitter.length) / 2.0 + kGapMargin) {
                frame.distractors.push_back(p);
                placed = true;
            }
        }
        if (!placed)
            throw std::runtime_error(
                "sample_scene: no feasible distractor placement (road too short?)");
    }
    return frame;
}

PixelBBox project_bbox(const SceneFrame& frame, const SceneConfig& cfg) {
    const auto corners = project_box_corners(frame.transmitter, cfg);
    double xmin = corners[0].u, xmax = corners[0].u;
    double ymin = corners[0].v, ymax = corners[0].v;
    for (const auto& c : corners) {
        xmin = std::min(xmin, c.u);
        xmax = std::max(xmax, c.u);
        ymin = std::min(ymin, c.v);
        ymax = std::max(ymax, c.v);
    }
    return clip_bbox(xmin, xmax, ymin, ymax, cfg);
}

ByteImage render_mask(const SceneFrame& frame, const SceneConfig& cfg) {
    ByteImage mask = make_byte_image(cfg.image_width, cfg.image_height, 0);
    const auto hull = hull_of_pose(frame.transmitter, cfg);
    fill_convex(hull, cfg.image_width, cfg.image_height,
                [&](int x, int y) { mask.set(x, y, 1); });
    if (mask.count_nonzero() == 0) {
        // Sub-pixel silhouette: keep at least the pixel nearest the bbox center.
        const PixelBBox b = project_bbox(frame, cfg);
        const int x = std::clamp(static_cast<int>(b.x_c), 0, cfg.image_width - 1);
        const int y = std::clamp(static_cast<int>(b.y_c), 0, cfg.image_height - 1);
        mask.set(x, y, 1);
    }
    return mask;
}

GrayImage render_raster_poses(const std::vector<VehiclePose>& poses, const SceneConfig& cfg) {
    GrayImage img = make_gray_image(cfg.image_width, cfg.image_height);
    for (int j = 0; j < cfg.image_height; ++j) {
        const double bg =
            0.15 + 0.25 * (cfg.image_height > 1 ? static_cast<double>(j) / (cfg.image_height - 1) : 0.0);
        for (int i = 0; i < cfg.image_width; ++i) img.set(i, j, bg);
    }
    if (poses.empty()) return img;

    // Gray level by ground-x order (reveals nothing about which is the
    // transmitter); painter order by distance so nearer vehicles overdraw.
    std::vector<std::size_t> by_x(poses.size()), paint(poses.size());
    for (std::size_t i = 0; i < poses.size(); ++i) by_x[i] = paint[i] = i;
    std::sort(by_x.begin(), by_x.end(),
              [&](std::size_t a, std::size_t b) { return poses[a].x < poses[b].x; });
    std::vector<double> gray(poses.size());
    for (std::size_t r = 0; r < by_x.size(); ++r)
        gray[by_x[r]] = 0.5 + 0.45 * (static_cast<double>(r) + 1.0) / static_cast<double>(poses.size());
    std::sort(paint.begin(), paint.end(),
              [&](std::size_t a, std::size_t b) { return poses[a].y > poses[b].y; });
    for (std::size_t idx : paint) {
        const auto hull = hull_of_pose(poses[idx], cfg);
        fill_convex(hull, cfg.image_width, cfg.image_height,
                    [&](int x, int y) { img.set(x, y, gray[idx]); });
    }
    return img;
}

GrayImage render_raster(const SceneFrame& frame, const SceneConfig& cfg) {
    std::vector<VehiclePose> poses;
    poses.push_back(frame.transmitter);
    poses.insert(poses.end(), frame.distractors.begin(), frame.distractors.end());
    return render_raster_poses(poses, cfg);
}

Sample perturb_detection(const Sample& clean, const NoiseConfig& noise, const SceneConfig& cfg,
                         Rng& rng) {
    noise.validate();
    Sample s = clean;

    // bbox: Gaussian center/size jitter with expected absolute offset
    // jitter * dimension. sqrt(pi/2) converts mean-|x| to a Gaussian sigma.
    const double k = noise.bbox_jitter * std::sqrt(3.14159265358979323846 / 2.0);
    const double dx = rng.normal(0.0, k * s.bbox.w);
    const double dy = rng.normal(0.0, k * s.bbox.h);
    const double dw = rng.normal(0.0, k * s.bbox.w);
    const double dh = rng.normal(0.0, k * s.bbox.h);
    double xmin = s.bbox.x_c + dx - std::max(1.0, s.bbox.w + dw) / 2.0;
    double xmax = s.bbox.x_c + dx + std::max(1.0, s.bbox.w + dw) / 2.0;
    double ymin = s.bbox.y_c + dy - std::max(1.0, s.bbox.h + dh) / 2.0;
    double ymax = s.bbox.y_c + dy + std::max(1.0, s.bbox.h + dh) / 2.0;
    if (noise.bbox_jitter > 0.0) {
        const double w_img = cfg.image_width, h_img = cfg.image_height;
        xmin = std::clamp(xmin, 0.0, w_img);
        xmax = std::clamp(xmax, 0.0, w_img);
        ymin = std::clamp(ymin, 0.0, h_img);
        ymax = std::clamp(ymax, 0.0, h_img);
        // keep at least one pixel inside the image
        if (xmax - xmin < 1.0) {
            xmin = std::min(xmin, w_img - 1.0);
            xmax = xmin + 1.0;
        }
        if (ymax - ymin < 1.0) {
            ymin = std::min(ymin, h_img - 1.0);
            ymax = ymin + 1.0;
        }
        s.bbox = PixelBBox{(xmin + xmax) / 2.0, (ymin + ymax) / 2.0, xmax - xmin, ymax - ymin};
    }

    // mask boundary flips (4-neighborhood edges)
    if (noise.mask_flip_prob > 0.0 && s.mask.width > 0) {
        const ByteImage& src = clean.mask;
        auto is_boundary = [&](int x, int y) {
            const std::uint8_t c = src.at(x, y);
            if (x > 0 && src.at(x - 1, y) != c) return true;
            if (x + 1 < src.width && src.at(x + 1, y) != c) return true;
            if (y > 0 && src.at(x, y - 1) != c) return true;
            if (y + 1 < src.height && src.at(x, y + 1) != c) return true;
            return false;
        };
        for (int y = 0; y < src.height; ++y)
            for (int x = 0; x < src.width; ++x)
                if (is_boundary(x, y) && rng.bernoulli(noise.mask_flip_prob))
                    s.mask.set(x, y, src.at(x, y) ? 0 : 1);
    }

    // speckle: geometric jumps, O(#flipped) draws
    if (noise.mask_speckle_prob > 0.0 && s.mask.width > 0) {
        const double log_q = std::log1p(-noise.mask_speckle_prob);
        const std::size_t n = s.mask.pixels.size();
        if (noise.mask_speckle_prob >= 1.0) {
            for (auto& p : s.mask.pixels) p = 1;
        } else {
            std::size_t i = 0;
            for (;;) {
                const double u = 1.0 - rng.uniform();
                i += static_cast<std::size_t>(std::floor(std::log(u) / log_q));
                if (i >= n) break;
                s.mask.pixels[i] = 1;
                ++i;
            }
        }
    }

    s.gps_x = clean.gps_x + rng.normal(0.0, noise.gps_sigma_m);
    s.gps_y = clean.gps_y + rng.normal(0.0, noise.gps_sigma_m);
    s.missed = rng.bernoulli(noise.miss_prob);
    return s;
}

namespace {

// Seed stream tags; changing these invalidates every recorded dataset.
enum SeedPurpose : std::uint64_t { kSceneStream = 0, kChannelStream = 1, kNoiseStream = 2 };

Sample make_sample(long id, const SceneConfig& scene, const ChannelConfig& channel,
                   const NoiseConfig& noise, const Codebook& cb, std::uint64_t seed,
                   const std::string& scenario) {
    Rng rng_scene(derive_seed(seed, static_cast<std::uint64_t>(id), kSceneStream));
    const SceneFrame frame = sample_scene(scene, rng_scene);

    const double cov_rad = channel.coverage_deg * 3.14159265358979323846 / 180.0;
    if (std::abs(frame.azimuth) > cov_rad)
        throw std::runtime_error("generate_dataset: transmitter azimuth outside codebook coverage");

    Rng rng_chan(derive_seed(seed, static_cast<std::uint64_t>(id), kChannelStream));
    const ChannelMatrix h = synth_channel(frame.azimuth, frame.range, channel, rng_chan);

    Sample s;
    s.sample_id = id;
    s.scenario = scenario;
    s.gps_x = frame.transmitter.x;
    s.gps_y = frame.transmitter.y;
    s.bbox_clean = project_bbox(frame, scene);
    s.bbox = s.bbox_clean;
    s.mask = render_mask(frame, scene);
    s.raster = render_raster(frame, scene);
    s.beam_index = optimal_beam(h, cb, channel);

    Rng rng_noise(derive_seed(seed, static_cast<std::uint64_t>(id), kNoiseStream));
    return perturb_detection(s, noise, scene, rng_noise);
}

std::string sample_file_name(long id) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%06ld.pgm", id);
    return buf;
}

}  // namespace

GenResult generate_dataset(const SceneConfig& scene, const ChannelConfig& channel,
                           const NoiseConfig& noise, std::uint64_t seed,
                           const std::string& out_dir, const std::string& scenario_name,
                           int threads) {
    scene.validate();
    channel.validate();
    noise.validate();

    std::error_code ec;
    fs::create_directories(fs::path(out_dir) / "masks", ec);
    fs::create_directories(fs::path(out_dir) / "rasters", ec);
    if (ec) throw std::runtime_error("generate_dataset: cannot create " + out_dir + ": " + ec.message());

    const Codebook cb = build_codebook(channel);
    const long total = scene.num_samples;
    std::vector<io::ManifestRow> rows(static_cast<std::size_t>(total));

    parallel_for(total, threads, [&](long id) {
        const Sample s = make_sample(id, scene, channel, noise, cb, seed, scenario_name);
        const std::string name = sample_file_name(id);
        const std::string mask_rel = "masks/" + name;
        const std::string raster_rel = "rasters/" + name;
        io::write_pgm_mask((fs::path(out_dir) / mask_rel).string(), s.mask);
        io::write_pgm_gray((fs::path(out_dir) / raster_rel).string(), s.raster);

        io::ManifestRow r;
        r.sample_id = id;
        r.scenario = scenario_name;
        r.split = "";
        r.pos_x = s.gps_x;
        r.pos_y = s.gps_y;
        r.bbox_xc = s.bbox.x_c;
        r.bbox_yc = s.bbox.y_c;
        r.bbox_w = s.bbox.w;
        r.bbox_h = s.bbox.h;
        r.mask_path = mask_rel;
        r.raster_path = raster_rel;
        r.beam_index = s.beam_index;
        r.missed = s.missed;
        rows[static_cast<std::size_t>(id)] = std::move(r);
    });

    GenResult result;
    result.manifest_path = (fs::path(out_dir) / "manifest.csv").string();
    result.config_path = (fs::path(out_dir) / "dataset.cfg").string();
    result.num_samples = total;
    for (const auto& r : rows) result.num_missed += r.missed ? 1 : 0;
    io::write_manifest(result.manifest_path, rows);

    DatasetSpec spec{scene, channel, noise, seed, scenario_name};
    save_dataset_spec(spec, result.config_path);
    return result;
}

long audit_labels(const std::string& dataset_dir) {
    const DatasetSpec spec = load_dataset_spec((fs::path(dataset_dir) / "dataset.cfg").string());
    const auto rows = io::read_manifest((fs::path(dataset_dir) / "manifest.csv").string());
    const Codebook cb = build_codebook(spec.channel);

    long mismatches = 0;
    for (const auto& row : rows) {
        Rng rng_scene(derive_seed(spec.seed, static_cast<std::uint64_t>(row.sample_id), kSceneStream));
        const SceneFrame frame = sample_scene(spec.scene, rng_scene);
        Rng rng_chan(derive_seed(spec.seed, static_cast<std::uint64_t>(row.sample_id), kChannelStream));
        const ChannelMatrix h = synth_channel(frame.azimuth, frame.range, spec.channel, rng_chan);
        if (optimal_beam(h, cb, spec.channel) != row.beam_index) ++mismatches;
    }
    return mismatches;
}

namespace {

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

void save_dataset_spec(const DatasetSpec& spec, const std::string& cfg_path) {
    io::KvConfig cfg;
    cfg.set("dataset", "scenario", spec.scenario);
    cfg.set("dataset", "seed", std::to_string(spec.seed));

    const SceneConfig& s = spec.scene;
    cfg.set("scene", "image_width", std::to_string(s.image_width));
    cfg.set("scene", "image_height", std::to_string(s.image_height));
    cfg.set("scene", "channels", std::to_string(s.channels));
    cfg.set("scene", "focal_px", fmt_g(s.focal_px));
    cfg.set("scene", "camera_height_m", fmt_g(s.camera_height_m));
    cfg.set("scene", "road_x0", fmt_g(s.road_x0));
    cfg.set("scene", "road_y0", fmt_g(s.road_y0));
    cfg.set("scene", "road_x1", fmt_g(s.road_x1));
    cfg.set("scene", "road_y1", fmt_g(s.road_y1));
    cfg.set("scene", "veh_len_min", fmt_g(s.veh_len_min));
    cfg.set("scene", "veh_len_max", fmt_g(s.veh_len_max));
    cfg.set("scene", "veh_wid_min", fmt_g(s.veh_wid_min));
    cfg.set("scene", "veh_wid_max", fmt_g(s.veh_wid_max));
    cfg.set("scene", "veh_hgt_min", fmt_g(s.veh_hgt_min));
    cfg.set("scene", "veh_hgt_max", fmt_g(s.veh_hgt_max));
    cfg.set("scene", "distractors_min", std::to_string(s.distractors_min));
    cfg.set("scene", "distractors_max", std::to_string(s.distractors_max));
    cfg.set("scene", "lighting", s.lighting);
    cfg.set("scene", "num_samples", std::to_string(s.num_samples));

    const ChannelConfig& c = spec.channel;
    cfg.set("channel", "num_antennas", std::to_string(c.num_antennas));
    cfg.set("channel", "num_beams", std::to_string(c.num_beams));
    cfg.set("channel", "num_subcarriers", std::to_string(c.num_subcarriers));
    cfg.set("channel", "cyclic_prefix", std::to_string(c.cyclic_prefix));
    cfg.set("channel", "snr_db", fmt_g(c.snr_db));
    cfg.set("channel", "antenna_spacing", fmt_g(c.antenna_spacing));
    cfg.set("channel", "num_nlos_paths", std::to_string(c.num_nlos_paths));
    cfg.set("channel", "nlos_gain_db", fmt_g(c.nlos_gain_db));
    cfg.set("channel", "coverage_deg", fmt_g(c.coverage_deg));

    const NoiseConfig& n = spec.noise;
    cfg.set("noise", "bbox_jitter", fmt_g(n.bbox_jitter));
    cfg.set("noise", "mask_flip_prob", fmt_g(n.mask_flip_prob));
    cfg.set("noise", "mask_speckle_prob", fmt_g(n.mask_speckle_prob));
    cfg.set("noise", "gps_sigma_m", fmt_g(n.gps_sigma_m));
    cfg.set("noise", "miss_prob", fmt_g(n.miss_prob));

    cfg.write_file(cfg_path);
}

DatasetSpec load_dataset_spec(const std::string& cfg_path) {
    const io::KvConfig cfg = io::KvConfig::parse_file(cfg_path);
    DatasetSpec spec;
    spec.scenario = cfg.get_or("dataset", "scenario", "custom");
    spec.seed = static_cast<std::uint64_t>(cfg.get_int_or("dataset", "seed", 0));

    SceneConfig& s = spec.scene;
    s.image_width = static_cast<int>(cfg.get_int_or("scene", "image_width", s.image_width));
    s.image_height = static_cast<int>(cfg.get_int_or("scene", "image_height", s.image_height));
    s.channels = static_cast<int>(cfg.get_int_or("scene", "channels", s.channels));
    s.focal_px = cfg.get_double_or("scene", "focal_px", s.focal_px);
    s.camera_height_m = cfg.get_double_or("scene", "camera_height_m", s.camera_height_m);
    s.road_x0 = cfg.get_double_or("scene", "road_x0", s.road_x0);
    s.road_y0 = cfg.get_double_or("scene", "road_y0", s.road_y0);
    s.road_x1 = cfg.get_double_or("scene", "road_x1", s.road_x1);
    s.road_y1 = cfg.get_double_or("scene", "road_y1", s.road_y1);
    s.veh_len_min = cfg.get_double_or("scene", "veh_len_min", s.veh_len_min);
    s.veh_len_max = cfg.get_double_or("scene", "veh_len_max", s.veh_len_max);
    s.veh_wid_min = cfg.get_double_or("scene", "veh_wid_min", s.veh_wid_min);
    s.veh_wid_max = cfg.get_double_or("scene", "veh_wid_max", s.veh_wid_max);
    s.veh_hgt_min = cfg.get_double_or("scene", "veh_hgt_min", s.veh_hgt_min);
    s.veh_hgt_max = cfg.get_double_or("scene", "veh_hgt_max", s.veh_hgt_max);
    s.distractors_min = static_cast<int>(cfg.get_int_or("scene", "distractors_min", s.distractors_min));
    s.distractors_max = static_cast<int>(cfg.get_int_or("scene", "distractors_max", s.distractors_max));
    s.lighting = cfg.get_or("scene", "lighting", s.lighting);
    s.num_samples = static_cast<int>(cfg.get_int_or("scene", "num_samples", s.num_samples));

    ChannelConfig& c = spec.channel;
    c.num_antennas = static_cast<int>(cfg.get_int_or("channel", "num_antennas", c.num_antennas));
    c.num_beams = static_cast<int>(cfg.get_int_or("channel", "num_beams", c.num_beams));
    c.num_subcarriers = static_cast<int>(cfg.get_int_or("channel", "num_subcarriers", c.num_subcarriers));
    c.cyclic_prefix = static_cast<int>(cfg.get_int_or("channel", "cyclic_prefix", c.cyclic_prefix));
    c.snr_db = cfg.get_double_or("channel", "snr_db", c.snr_db);
    c.antenna_spacing = cfg.get_double_or("channel", "antenna_spacing", c.antenna_spacing);
    c.num_nlos_paths = static_cast<int>(cfg.get_int_or("channel", "num_nlos_paths", c.num_nlos_paths));
    c.nlos_gain_db = cfg.get_double_or("channel", "nlos_gain_db", c.nlos_gain_db);
    c.coverage_deg = cfg.get_double_or("channel", "coverage_deg", c.coverage_deg);

    NoiseConfig& n = spec.noise;
    n.bbox_jitter = cfg.get_double_or("noise", "bbox_jitter", n.bbox_jitter);
    n.mask_flip_prob = cfg.get_double_or("noise", "mask_flip_prob", n.mask_flip_prob);
    n.mask_speckle_prob = cfg.get_double_or("noise", "mask_speckle_prob", n.mask_speckle_prob);
    n.gps_sigma_m = cfg.get_double_or("noise", "gps_sigma_m", n.gps_sigma_m);
    n.miss_prob = cfg.get_double_or("noise", "miss_prob", n.miss_prob);
    return spec;
}

}  // namespace beamsema
