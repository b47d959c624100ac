// SPDX-License-Identifier: Apache-2.0
// beamsema: environment-semantics aided beam prediction testbed

#ifndef BEAMSEMA_IO_PGM_HPP
#define BEAMSEMA_IO_PGM_HPP

#include <string>

#include "beamsema/image.hpp"

namespace beamsema::io {

// Binary PGM (P5), 8-bit, maxval 255. Masks map {0,1} -> {0,255}; grayscale
// values in [0,1] quantize to round(v*255).

void write_pgm_mask(const std::string& path, const ByteImage& mask);
void write_pgm_gray(const std::string& path, const GrayImage& img);

// Reads any 8-bit P5 file; values > 127 become 1.
ByteImage read_pgm_mask(const std::string& path);
// Reads any 8-bit P5 file; values scale back to [0,1].
GrayImage read_pgm_gray(const std::string& path);

}  // namespace beamsema::io

#endif
