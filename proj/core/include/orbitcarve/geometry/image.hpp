#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

#include "orbitcarve/geometry/types.hpp"

namespace orbitcarve {

struct RgbTag {};
struct MaskTag {};
struct NormalTag {};

// Row-major, channel-interleaved image of doubles. The tag keeps RGB and
// normal images (both 3-channel) from being mixed up.
template <int Channels, typename Tag>
class Image {
 public:
  static constexpr int kChannels = Channels;

  Image() = default;
  Image(int width, int height, double fill = 0.0)
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * height * Channels, fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }

  double& at(int x, int y, int c = 0) {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_ && c >= 0 && c < Channels);
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }
  double at(int x, int y, int c = 0) const {
    assert(x >= 0 && x < width_ && y >= 0 && y < height_ && c >= 0 && c < Channels);
    return data_[(static_cast<std::size_t>(y) * width_ + x) * Channels + c];
  }

  // Pixel by flat index (y * width + x).
  double& operator[](std::size_t i)
    requires(Channels == 1)
  {
    return data_[i];
  }
  double operator[](std::size_t i) const
    requires(Channels == 1)
  {
    return data_[i];
  }

  Vec3 pixel(std::size_t i) const
    requires(Channels == 3)
  {
    return Vec3(data_[3 * i], data_[3 * i + 1], data_[3 * i + 2]);
  }
  void set_pixel(std::size_t i, const Vec3& v)
    requires(Channels == 3)
  {
    data_[3 * i] = v.x();
    data_[3 * i + 1] = v.y();
    data_[3 * i + 2] = v.z();
  }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  bool same_size(int w, int h) const { return width_ == w && height_ == h; }
  template <int C2, typename T2>
  bool same_size(const Image<C2, T2>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  // Box-filter downsampling by an integer factor (width and height must divide).
  Image downsampled(int factor) const {
    assert(factor >= 1 && width_ % factor == 0 && height_ % factor == 0);
    if (factor == 1) return *this;
    Image out(width_ / factor, height_ / factor);
    const double inv = 1.0 / (factor * factor);
    for (int y = 0; y < out.height_; ++y) {
      for (int x = 0; x < out.width_; ++x) {
        for (int c = 0; c < Channels; ++c) {
          double s = 0.0;
          for (int dy = 0; dy < factor; ++dy) {
            for (int dx = 0; dx < factor; ++dx) s += at(x * factor + dx, y * factor + dy, c);
          }
          out.at(x, y, c) = s * inv;
        }
      }
    }
    return out;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

using RgbImage = Image<3, RgbTag>;
using MaskImage = Image<1, MaskTag>;
using NormalImage = Image<3, NormalTag>;

// Bilinear sample of a mask at continuous image coordinates (pixel centers at
// i + 0.5). Points outside the image return 0.
double sample_bilinear(const MaskImage& mask, double x, double y);

// Renormalizes normal pixels where mask > 0; zero-length vectors are left alone.
void renormalize_under_mask(NormalImage& normals, const MaskImage& mask);

}  // namespace orbitcarve
