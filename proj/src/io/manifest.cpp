// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/io/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace beamsema::io {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

void write_manifest(const std::string& path, const std::vector<ManifestRow>& rows) {
    std::ofstream out(path, std::ios::binary);  // binary: byte-stable line endings
    if (!out) throw std::runtime_error("manifest: cannot open for writing: " + path);
    out << kManifestHeader << "\n";
    for (const auto& r : rows) {
        out << r.sample_id << ',' << r.scenario << ',' << r.split << ','
            << fmt_double(r.pos_x) << ',' << fmt_double(r.pos_y) << ','
            << fmt_double(r.bbox_xc) << ',' << fmt_double(r.bbox_yc) << ','
            << fmt_double(r.bbox_w) << ',' << fmt_double(r.bbox_h) << ','
            << r.mask_path << ',' << r.raster_path << ','
            << r.beam_index << ',' << (r.missed ? 1 : 0) << "\n";
    }
    if (!out) throw std::runtime_error("manifest: write failed: " + path);
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("manifest: cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("manifest: empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kManifestHeader)
        throw std::runtime_error("manifest: unexpected header in " + path);

    std::vector<ManifestRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 13)
            throw std::runtime_error("manifest: expected 13 fields at " + path + ":" +
                                     std::to_string(line_no));
        ManifestRow r;
        try {
            r.sample_id = std::stol(f[0]);
            r.scenario = f[1];
            r.split = f[2];
            r.pos_x = std::stod(f[3]);
            r.pos_y = std::stod(f[4]);
            r.bbox_xc = std::stod(f[5]);
            r.bbox_yc = std::stod(f[6]);
            r.bbox_w = std::stod(f[7]);
            r.bbox_h = std::stod(f[8]);
            r.mask_path = f[9];
            r.raster_path = f[10];
            r.beam_index = std::stoi(f[11]);
            r.missed = std::stoi(f[12]) != 0;
        } catch (const std::exception&) {
            throw std::runtime_error("manifest: malformed row at " + path + ":" +
                                     std::to_string(line_no));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace beamsema::io
