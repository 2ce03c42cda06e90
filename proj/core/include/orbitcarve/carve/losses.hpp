#pragma once

#include <vector>

#include "orbitcarve/geometry/image.hpp"

namespace orbitcarve {

// Single-view terms. When `grad` is non-null it receives dL/d(rendered) with
// the rendered image's size. Throw DimensionError on size mismatch.

// sum_p (M - M_hat)^2
double mask_loss(const MaskImage& rendered, const MaskImage& target, MaskImage* grad = nullptr);

// sum_p M * |N - N_hat|^2
double normal_loss(const NormalImage& rendered, const NormalImage& target, const MaskImage& mask,
                   NormalImage* grad = nullptr);

// sum_p M * |I - I_hat|^2
double color_loss(const RgbImage& rendered, const RgbImage& target, const MaskImage& mask,
                  RgbImage* grad = nullptr);

// sum_p M * |I - I_hat|, the unsquared form, reported alongside the squared one.
double color_loss_unsquared(const RgbImage& rendered, const RgbImage& target, const MaskImage& mask);

// Multi-view sums in view order. `grads` is resized to the view count.
double mask_loss(const std::vector<MaskImage>& rendered, const std::vector<MaskImage>& target,
                 std::vector<MaskImage>* grads = nullptr);
double normal_loss(const std::vector<NormalImage>& rendered, const std::vector<NormalImage>& target,
                   const std::vector<MaskImage>& masks, std::vector<NormalImage>* grads = nullptr);

inline double total_loss(double mask_part, double normal_part) { return mask_part + normal_part; }

}  // namespace orbitcarve
