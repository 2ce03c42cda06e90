#include "orbitcarve/carve/losses.hpp"

#include <cmath>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"

namespace orbitcarve {
namespace {

template <typename A, typename B>
void check_size(const A& a, const B& b, const char* what) {
  if (!a.same_size(b)) {
    throw DimensionError(fmt::format("{}: {}x{} vs {}x{}", what, a.width(), a.height(), b.width(), b.height()));
  }
}

template <typename A, typename B>
void check_count(const A& a, const B& b, const char* what) {
  if (a.size() != b.size()) throw DimensionError(fmt::format("{}: {} vs {} views", what, a.size(), b.size()));
}

}  // namespace

double mask_loss(const MaskImage& rendered, const MaskImage& target, MaskImage* grad) {
  check_size(rendered, target, "mask loss");
  if (grad) *grad = MaskImage(rendered.width(), rendered.height());
  double sum = 0.0;
  for (std::size_t p = 0; p < rendered.pixel_count(); ++p) {
    const double r = target[p] - rendered[p];
    sum += r * r;
    if (grad) (*grad)[p] = -2.0 * r;
  }
  return sum;
}

double normal_loss(const NormalImage& rendered, const NormalImage& target, const MaskImage& mask,
                   NormalImage* grad) {
  check_size(rendered, target, "normal loss");
  check_size(rendered, mask, "normal loss mask");
  if (grad) *grad = NormalImage(rendered.width(), rendered.height());
  double sum = 0.0;
  for (std::size_t p = 0; p < rendered.pixel_count(); ++p) {
    const double m = mask[p];
    if (m == 0.0) continue;
    const Vec3 r = target.pixel(p) - rendered.pixel(p);
    sum += m * r.squaredNorm();
    if (grad) grad->set_pixel(p, -2.0 * m * r);
  }
  return sum;
}

double color_loss(const RgbImage& rendered, const RgbImage& target, const MaskImage& mask, RgbImage* grad) {
  check_size(rendered, target, "color loss");
  check_size(rendered, mask, "color loss mask");
  if (grad) *grad = RgbImage(rendered.width(), rendered.height());
  double sum = 0.0;
  for (std::size_t p = 0; p < rendered.pixel_count(); ++p) {
    const double m = mask[p];
    if (m == 0.0) continue;
    const Vec3 r = target.pixel(p) - rendered.pixel(p);
    sum += m * r.squaredNorm();
    if (grad) grad->set_pixel(p, -2.0 * m * r);
  }
  return sum;
}

double color_loss_unsquared(const RgbImage& rendered, const RgbImage& target, const MaskImage& mask) {
  check_size(rendered, target, "color loss");
  check_size(rendered, mask, "color loss mask");
  double sum = 0.0;
  for (std::size_t p = 0; p < rendered.pixel_count(); ++p) {
    if (mask[p] != 0.0) sum += mask[p] * (target.pixel(p) - rendered.pixel(p)).norm();
  }
  return sum;
}

double mask_loss(const std::vector<MaskImage>& rendered, const std::vector<MaskImage>& target,
                 std::vector<MaskImage>* grads) {
  check_count(rendered, target, "mask loss");
  if (grads) grads->assign(rendered.size(), MaskImage());
  double sum = 0.0;
  for (std::size_t v = 0; v < rendered.size(); ++v) {
    sum += mask_loss(rendered[v], target[v], grads ? &(*grads)[v] : nullptr);
  }
  return sum;
}

double normal_loss(const std::vector<NormalImage>& rendered, const std::vector<NormalImage>& target,
                   const std::vector<MaskImage>& masks, std::vector<NormalImage>* grads) {
  check_count(rendered, target, "normal loss");
  check_count(rendered, masks, "normal loss masks");
  if (grads) grads->assign(rendered.size(), NormalImage());
  double sum = 0.0;
  for (std::size_t v = 0; v < rendered.size(); ++v) {
    sum += normal_loss(rendered[v], target[v], masks[v], grads ? &(*grads)[v] : nullptr);
  }
  return sum;
}

}  // namespace orbitcarve
