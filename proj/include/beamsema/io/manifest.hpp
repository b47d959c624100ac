// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_IO_MANIFEST_HPP
#define BEAMSEMA_IO_MANIFEST_HPP

#include <string>
#include <vector>

namespace beamsema::io {

// One dataset sample as recorded on disk. Positions are the noisy GPS reading
// in meters; bbox fields are the observed (noisy) detection in pixels.
struct ManifestRow {
    long sample_id = 0;
    std::string scenario;
    std::string split;  // train | val | test | "" before splitting
    double pos_x = 0.0;
    double pos_y = 0.0;
    double bbox_xc = 0.0;
    double bbox_yc = 0.0;
    double bbox_w = 0.0;
    double bbox_h = 0.0;
    std::string mask_path;    // relative to the dataset directory
    std::string raster_path;  // relative to the dataset directory
    int beam_index = 0;
    bool missed = false;
};

inline const char* kManifestHeader =
    "sample_id,scenario,split,pos_x,pos_y,bbox_xc,bbox_yc,bbox_w,bbox_h,"
    "mask_path,raster_path,beam_index,missed";

// Doubles are written with round-trip precision so a written manifest parses
// back bit-identically.
void write_manifest(const std::string& path, const std::vector<ManifestRow>& rows);
std::vector<ManifestRow> read_manifest(const std::string& path);

}  // namespace beamsema::io

#endif
