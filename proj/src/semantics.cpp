// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#include "beamsema/semantics.hpp"

#include <algorithm>
#include <stdexcept>

namespace beamsema {

BBoxSemantic bbox_vector(const PixelBBox& b, int image_width, int image_height) {
    if (image_width <= 0 || image_height <= 0)
        throw std::invalid_argument("bbox_vector: image dimensions must be positive");
    const double w = static_cast<double>(image_width);
    const double h = static_cast<double>(image_height);
    return BBoxSemantic{{b.x_c / w, b.y_c / h, b.w / w, b.h / h}};
}

MaskSemantic downsample_mask(const ByteImage& mask, int out_width, int out_height) {
    if (out_width <= 0 || out_height <= 0)
        throw std::invalid_argument("downsample_mask: target dimensions must be positive");
    if (out_width > mask.width || out_height > mask.height)
        throw std::invalid_argument("downsample_mask: target must not exceed the input size");

    MaskSemantic out;
    out.width = out_width;
    out.height = out_height;
    out.grid.assign(static_cast<std::size_t>(out_width) * out_height, 0.0);

    // Cell i covers input pixels x with floor(x*out/in) == i, i.e. the
    // half-open interval [ceil(i*in/out), ceil((i+1)*in/out)).
    const std::int64_t in_w = mask.width, in_h = mask.height;
    auto lo = [](std::int64_t idx, std::int64_t in, std::int64_t out) {
        return static_cast<int>((idx * in + out - 1) / out);
    };
    for (int j = 0; j < out_height; ++j) {
        const int y0 = lo(j, in_h, out_height);
        const int y1 = lo(j + 1, in_h, out_height);
        for (int i = 0; i < out_width; ++i) {
            const int x0 = lo(i, in_w, out_width);
            const int x1 = lo(i + 1, in_w, out_width);
            double cell = 0.0;
            for (int y = y0; y < y1 && cell == 0.0; ++y)
                for (int x = x0; x < x1; ++x)
                    if (mask.at(x, y)) {
                        cell = 1.0;
                        break;
                    }
            out.grid[static_cast<std::size_t>(j) * out_width + i] = cell;
        }
    }
    return out;
}

PositionSemantic normalize_position(double x_m, double y_m, const PositionBounds& bounds) {
    if (!(bounds.min_x < bounds.max_x) || !(bounds.min_y < bounds.max_y))
        throw std::invalid_argument("normalize_position: degenerate bounds");
    const double nx = (x_m - bounds.min_x) / (bounds.max_x - bounds.min_x);
    const double ny = (y_m - bounds.min_y) / (bounds.max_y - bounds.min_y);
    return PositionSemantic{{std::clamp(nx, 0.0, 1.0), std::clamp(ny, 0.0, 1.0)}};
}

}  // namespace beamsema
