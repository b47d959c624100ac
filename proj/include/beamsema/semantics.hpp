// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_SEMANTICS_HPP
#define BEAMSEMA_SEMANTICS_HPP

#include <array>
#include <vector>

#include "beamsema/image.hpp"

namespace beamsema {

// Detected-object box in pixel coordinates: center, width, height.
struct PixelBBox {
    double x_c = 0.0;
    double y_c = 0.0;
    double w = 0.0;
    double h = 0.0;
};

// Normalized [x_c/W, y_c/H, w/W, h/H], each entry in [0, 1].
struct BBoxSemantic {
    std::array<double, 4> values{};
};

// Downsampled mask grid, values in [0, 1] (binary after block-max pooling).
struct MaskSemantic {
    int width = 0;
    int height = 0;
    std::vector<double> grid;
};

// Min-max normalized 2-D position.
struct PositionSemantic {
    std::array<double, 2> values{};
};

// Per-dimension training-split min/max used for leak-free position scaling.
struct PositionBounds {
    double min_x = 0.0, max_x = 1.0;
    double min_y = 0.0, max_y = 1.0;
};

BBoxSemantic bbox_vector(const PixelBBox& b, int image_width, int image_height);

// Block-max pooling over a uniform tiling: input pixel x belongs to output
// column floor(x*out_w/W) (same for rows), and a cell is 1 iff any covered
// input pixel is 1. Nonempty masks stay nonempty.
MaskSemantic downsample_mask(const ByteImage& mask, int out_width, int out_height);

// Min-max scaling with training-split bounds; out-of-bounds inputs clip to [0, 1].
PositionSemantic normalize_position(double x_m, double y_m, const PositionBounds& bounds);

}  // namespace beamsema

#endif
