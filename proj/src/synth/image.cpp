#include "ocreval/synth/image.hpp"

#include <algorithm>
#include <cmath>

namespace ocreval::synth {

double GrayImage::mean() const {
  if (pixels_.empty()) return 0.0;
  double sum = 0.0;
  for (float v : pixels_) sum += v;
  return sum / static_cast<double>(pixels_.size());
}

unsigned char to_byte(float v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

}  // namespace ocreval::synth
