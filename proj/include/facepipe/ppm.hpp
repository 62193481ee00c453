#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "facepipe/trace.hpp"

namespace facepipe {

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb; // row-major, 3 bytes per pixel
};

/// Draws track boxes and label strings onto a blank frame. For human
/// inspection only; nothing downstream reads these.
Image render_annotated(const AnnotatedFrame& frame, int width, int height);

void write_ppm(const Image& img, const std::string& path); // binary P6

/// One tick_NNNNNN.ppm per annotated frame, creating `dir` if needed.
void dump_frames(const std::vector<AnnotatedFrame>& frames, int width, int height,
                 const std::string& dir);

} // namespace facepipe
