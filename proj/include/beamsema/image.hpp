// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_IMAGE_HPP
#define BEAMSEMA_IMAGE_HPP

#include <cstdint>
#include <vector>

namespace beamsema {

// Row-major binary grid, values in {0, 1}.
struct ByteImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { pixels[static_cast<std::size_t>(y) * width + x] = v; }
    std::size_t count_nonzero() const {
        std::size_t n = 0;
        for (auto p : pixels) n += (p != 0);
        return n;
    }
};

inline ByteImage make_byte_image(int width, int height, std::uint8_t fill = 0) {
    return ByteImage{width, height,
                     std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, fill)};
}

// Row-major grayscale grid, values in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> pixels;

    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, double v) { pixels[static_cast<std::size_t>(y) * width + x] = v; }
};

inline GrayImage make_gray_image(int width, int height, double fill = 0.0) {
    return GrayImage{width, height,
                     std::vector<double>(static_cast<std::size_t>(width) * height, fill)};
}

}  // namespace beamsema

#endif
