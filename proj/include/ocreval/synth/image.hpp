#pragma once

#include <cstddef>
#include <vector>

namespace ocreval::synth {

/// Single-channel float image, row-major. Intensity 0 = black, 1 = white.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t width, std::size_t height, float fill = 1.0f)
      : width_(width), height_(height), pixels_(width * height, fill) {}

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  float& at(std::size_t x, std::size_t y) { return pixels_[y * width_ + x]; }
  float at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

  std::vector<float>& pixels() { return pixels_; }
  const std::vector<float>& pixels() const { return pixels_; }

  double mean() const;

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<float> pixels_;
};

/// 8-bit quantization used for PNG output: round(clamp(v, 0, 1) * 255).
unsigned char to_byte(float v);

}  // namespace ocreval::synth
