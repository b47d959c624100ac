// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_SCENE_SIM_HPP
#define BEAMSEMA_SCENE_SIM_HPP

#include <string>
#include <vector>

#include "beamsema/array_channel.hpp"
#include "beamsema/image.hpp"
#include "beamsema/io/manifest.hpp"
#include "beamsema/rng.hpp"
#include "beamsema/semantics.hpp"

namespace beamsema {

// Scene geometry. The basestation sits at the ground-plane origin with the
// ULA along the x axis; the camera is at height camera_height looking along
// +y with a horizontal optical axis. Pixel u grows with world x, pixel v
// grows downward.
struct SceneConfig {
    int image_width = 640;   // W
    int image_height = 360;  // H
    int channels = 1;        // grayscale only
    double focal_px = 140.0;
    double camera_height_m = 5.0;
    // Road segment endpoints in ground-plane meters.
    double road_x0 = -17.0, road_y0 = 10.0;
    double road_x1 = 17.0, road_y1 = 10.0;
    double veh_len_min = 4.2, veh_len_max = 5.0;
    double veh_wid_min = 1.7, veh_wid_max = 2.0;
    double veh_hgt_min = 1.4, veh_hgt_max = 1.8;
    int distractors_min = 0, distractors_max = 3;
    std::string lighting = "day";  // metadata only
    int num_samples = 2300;        // U

    void validate() const;  // throws std::invalid_argument
};

// Ground-plane box pose: center position, box dims; long axis along the road.
struct VehiclePose {
    double x = 0.0, y = 0.0;
    double length = 4.5, width = 1.8, height = 1.5;
};

struct SceneFrame {
    VehiclePose transmitter;
    std::vector<VehiclePose> distractors;
    double azimuth = 0.0;  // from array broadside, radians
    double range = 1.0;    // meters from the basestation
};

// Detector / sensor imperfection model. jitter values are the expected
// absolute offset as a fraction of the box dimension.
struct NoiseConfig {
    double bbox_jitter = 0.0;
    double mask_flip_prob = 0.0;     // per boundary pixel
    double mask_speckle_prob = 0.0;  // per background pixel
    double gps_sigma_m = 2.0;
    double miss_prob = 0.0;

    void validate() const;
};

// One generated dataset entry, pre- and post-noise.
struct Sample {
    long sample_id = 0;
    std::string scenario;
    std::string split;
    double gps_x = 0.0, gps_y = 0.0;  // noisy reading
    PixelBBox bbox_clean;
    PixelBBox bbox;  // observed (noisy)
    ByteImage mask;  // observed transmitter silhouette, {0,1}
    GrayImage raster;
    int beam_index = 0;
    bool missed = false;
};

// Uniform transmitter position along the road; distractor count uniform in
// its range; distractor footprints never overlap the transmitter's.
SceneFrame sample_scene(const SceneConfig& cfg, Rng& rng);

// Axis-aligned hull of the eight projected transmitter box corners, clipped
// to the image. Throws if a corner is behind the camera or the hull misses
// the image entirely.
PixelBBox project_bbox(const SceneFrame& frame, const SceneConfig& cfg);

// Filled projected silhouette of the transmitter only.
ByteImage render_mask(const SceneFrame& frame, const SceneConfig& cfg);

// Background gradient plus every vehicle silhouette at a distinct gray level;
// the transmitter is not marked in any way.
GrayImage render_raster(const SceneFrame& frame, const SceneConfig& cfg);
GrayImage render_raster_poses(const std::vector<VehiclePose>& poses, const SceneConfig& cfg);

// Applies the noise model in a fixed draw order: bbox, mask boundary flips,
// mask speckle, gps, detector miss.
Sample perturb_detection(const Sample& clean, const NoiseConfig& noise, const SceneConfig& cfg,
                         Rng& rng);

struct GenResult {
    std::string manifest_path;
    std::string config_path;
    long num_samples = 0;
    long num_missed = 0;
};

// Writes masks/ rasters/ manifest.csv and dataset.cfg (the effective config
// plus seed, which makes the dataset auditable and regenerable) under
// out_dir. Fully reproducible from the seed; per-sample streams make the
// result independent of the thread count.
GenResult generate_dataset(const SceneConfig& scene, const ChannelConfig& channel,
                           const NoiseConfig& noise, std::uint64_t seed,
                           const std::string& out_dir, const std::string& scenario_name,
                           int threads = 1);

// Recomputes every sample's optimal beam from the recorded seed and configs;
// returns the number of manifest rows whose stored label disagrees.
long audit_labels(const std::string& dataset_dir);

// Round-trips SceneConfig/ChannelConfig/NoiseConfig through kv-config text.
struct DatasetSpec {
    SceneConfig scene;
    ChannelConfig channel;
    NoiseConfig noise;
    std::uint64_t seed = 0;
    std::string scenario;
};
DatasetSpec load_dataset_spec(const std::string& cfg_path);
void save_dataset_spec(const DatasetSpec& spec, const std::string& cfg_path);

}  // namespace beamsema

#endif
