#include "orbitcarve/geometry/image.hpp"

#include <algorithm>
#include <cmath>

namespace orbitcarve {

double sample_bilinear(const MaskImage& mask, double x, double y) {
  const int w = mask.width();
  const int h = mask.height();
  if (!(x >= 0.0 && x < w && y >= 0.0 && y < h)) return 0.0;
  const double u = std::clamp(x - 0.5, 0.0, static_cast<double>(w - 1));
  const double v = std::clamp(y - 0.5, 0.0, static_cast<double>(h - 1));
  const int x0 = std::min(static_cast<int>(u), w - 1);
  const int y0 = std::min(static_cast<int>(v), h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fx = u - x0;
  const double fy = v - y0;
  const double top = (1.0 - fx) * mask.at(x0, y0) + fx * mask.at(x1, y0);
  const double bottom = (1.0 - fx) * mask.at(x0, y1) + fx * mask.at(x1, y1);
  return (1.0 - fy) * top + fy * bottom;
}

void renormalize_under_mask(NormalImage& normals, const MaskImage& mask) {
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (mask[i] <= 0.0) continue;
    const Vec3 n = normals.pixel(i);
    const double len = n.norm();
    if (len > 0.0) normals.set_pixel(i, n / len);
  }
}

}  // namespace orbitcarve
