// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/io/pgm.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace beamsema::io {

namespace {

void write_p5(const std::string& path, int width, int height, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("pgm: cannot open for writing: " + path);
    out << "P5\n" << width << " " << height << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("pgm: write failed: " + path);
}

// Header tokens may be separated by whitespace and '#' comment lines.
int next_header_int(std::istream& in, const std::string& path) {
    int c;
    while ((c = in.peek()) != EOF) {
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value;
    if (!(in >> value)) throw std::runtime_error("pgm: malformed header: " + path);
    return value;
}

std::vector<std::uint8_t> read_p5(const std::string& path, int& width, int& height) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("pgm: cannot open for reading: " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") throw std::runtime_error("pgm: not a P5 file: " + path);
    width = next_header_int(in, path);
    height = next_header_int(in, path);
    const int maxval = next_header_int(in, path);
    if (width <= 0 || height <= 0 || maxval != 255)
        throw std::runtime_error("pgm: unsupported header in " + path);
    in.get();  // single whitespace byte before raster data
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(bytes.size()))
        throw std::runtime_error("pgm: truncated raster data: " + path);
    return bytes;
}

}  // namespace

void write_pgm_mask(const std::string& path, const ByteImage& mask) {
    std::vector<std::uint8_t> bytes(mask.pixels.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) bytes[i] = mask.pixels[i] ? 255 : 0;
    write_p5(path, mask.width, mask.height, bytes);
}

void write_pgm_gray(const std::string& path, const GrayImage& img) {
    std::vector<std::uint8_t> bytes(img.pixels.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        const double v = img.pixels[i] < 0.0 ? 0.0 : (img.pixels[i] > 1.0 ? 1.0 : img.pixels[i]);
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    write_p5(path, img.width, img.height, bytes);
}

ByteImage read_pgm_mask(const std::string& path) {
    int w = 0, h = 0;
    const auto bytes = read_p5(path, w, h);
    ByteImage img = make_byte_image(w, h);
    for (std::size_t i = 0; i < bytes.size(); ++i) img.pixels[i] = bytes[i] > 127 ? 1 : 0;
    return img;
}

GrayImage read_pgm_gray(const std::string& path) {
    int w = 0, h = 0;
    const auto bytes = read_p5(path, w, h);
    GrayImage img = make_gray_image(w, h);
    for (std::size_t i = 0; i < bytes.size(); ++i) img.pixels[i] = bytes[i] / 255.0;
    return img;
}

}  // namespace beamsema::io
