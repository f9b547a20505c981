#pragma once

#include <filesystem>

#include "ocreval/synth/image.hpp"

namespace ocreval::synth {

/// Any PNG, converted to 8-bit grayscale, scaled to [0, 1].
GrayImage read_png(const std::filesystem::path& path);

/// 8-bit grayscale PNG. Throws IoError.
void write_png(const GrayImage& image, const std::filesystem::path& path);

}  // namespace ocreval::synth
