#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "orbitcarve/carve/losses.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/random.hpp"

using namespace orbitcarve;

namespace {

template <typename Img>
Img random_image(int w, int h, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Img img(w, h);
  for (double& v : img.data()) v = lo + (hi - lo) * uniform01(rng);
  return img;
}

MaskImage binary_mask(int w, int h, Rng& rng) {
  MaskImage m(w, h);
  for (double& v : m.data()) v = uniform01(rng) < 0.5 ? 0.0 : 1.0;
  return m;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("mask loss of a perfect render is zero") {
  Rng rng(1);
  const MaskImage m = random_image<MaskImage>(8, 8, rng);
  CHECK(mask_loss(m, m) == 0.0);
}

TEST_CASE("mask loss on a 2x2 view") {
  CHECK(mask_loss(MaskImage(2, 2, 0.0), MaskImage(2, 2, 1.0)) == 4.0);
}

TEST_CASE("mask loss matches a scalar recomputation and its gradient") {
  Rng rng(2);
  const MaskImage rendered = random_image<MaskImage>(7, 5, rng);
  const MaskImage target = random_image<MaskImage>(7, 5, rng);
  MaskImage grad;
  const double loss = mask_loss(rendered, target, &grad);
  double ref = 0.0;
  for (int y = 0; y < 5; ++y) {
    for (int x = 0; x < 7; ++x) ref += std::pow(target.at(x, y) - rendered.at(x, y), 2);
  }
  CHECK(loss == doctest::Approx(ref).epsilon(1e-14));
  const double h = 1e-3;
  for (std::size_t i = 0; i < rendered.pixel_count(); ++i) {
    CHECK(grad[i] == -2.0 * (target[i] - rendered[i]));
    MaskImage plus = rendered;
    MaskImage minus = rendered;
    plus[i] += h;
    minus[i] -= h;
    const double fd = (mask_loss(plus, target) - mask_loss(minus, target)) / (2 * h);
    CHECK(std::abs(fd - grad[i]) < 1e-8);
  }
}

TEST_CASE("normal loss ignores pixels outside the mask") {
  Rng rng(3);
  const NormalImage target = random_image<NormalImage>(6, 6, rng, -1, 1);
  const MaskImage mask = binary_mask(6, 6, rng);
  NormalImage rendered = target;
  for (std::size_t i = 0; i < mask.pixel_count(); ++i) {
    if (mask[i] == 0.0) rendered.set_pixel(i, Vec3(9, -9, 9));
  }
  CHECK(normal_loss(rendered, target, mask) == 0.0);
}

TEST_CASE("normal loss of one opposite pixel") {
  NormalImage n(1, 1);
  n.set_pixel(0, Vec3(0, 0, 1));
  NormalImage r(1, 1);
  r.set_pixel(0, Vec3(0, 0, -1));
  CHECK(normal_loss(r, n, MaskImage(1, 1, 1.0)) == 4.0);
}

TEST_CASE("normal loss equals a brute-force pixel loop") {
  Rng rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const NormalImage rendered = random_image<NormalImage>(9, 4, rng, -1, 1);
    const NormalImage target = random_image<NormalImage>(9, 4, rng, -1, 1);
    const MaskImage mask = random_image<MaskImage>(9, 4, rng);
    NormalImage grad;
    const double loss = normal_loss(rendered, target, mask, &grad);
    double ref = 0.0;
    for (int y = 0; y < 4; ++y) {
      for (int x = 0; x < 9; ++x) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) {
          s += std::pow(target.at(x, y, c) - rendered.at(x, y, c), 2);
          CHECK(grad.at(x, y, c) == -2.0 * mask.at(x, y) * (target.at(x, y, c) - rendered.at(x, y, c)));
        }
        ref += mask.at(x, y) * s;
      }
    }
    CHECK(loss == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("total loss is the plain sum") {
  CHECK(total_loss(0.0, 0.0) == 0.0);
  CHECK(total_loss(4.0, 4.0) == 8.0);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const double a = 1e3 * uniform01(rng);
    const double b = 1e-3 * uniform01(rng);
    CHECK(same_bits(total_loss(a, b), a + b));
  }
}

TEST_CASE("multi-view losses sum over views and ignore view order") {
  Rng rng(6);
  std::vector<MaskImage> rm, tm, masks;
  std::vector<NormalImage> rn, tn;
  for (int v = 0; v < 4; ++v) {
    rm.push_back(random_image<MaskImage>(5, 5, rng));
    tm.push_back(random_image<MaskImage>(5, 5, rng));
    masks.push_back(binary_mask(5, 5, rng));
    rn.push_back(random_image<NormalImage>(5, 5, rng, -1, 1));
    tn.push_back(random_image<NormalImage>(5, 5, rng, -1, 1));
  }
  double ms = 0.0;
  double ns = 0.0;
  for (int v = 0; v < 4; ++v) {
    ms += mask_loss(rm[v], tm[v]);
    ns += normal_loss(rn[v], tn[v], masks[v]);
  }
  std::vector<MaskImage> grads;
  CHECK(mask_loss(rm, tm, &grads) == ms);
  CHECK(grads.size() == 4);
  CHECK(normal_loss(rn, tn, masks) == ns);

  const std::vector<int> order = {2, 0, 3, 1};
  std::vector<MaskImage> rm2, tm2, masks2;
  std::vector<NormalImage> rn2, tn2;
  for (int v : order) {
    rm2.push_back(rm[v]);
    tm2.push_back(tm[v]);
    masks2.push_back(masks[v]);
    rn2.push_back(rn[v]);
    tn2.push_back(tn[v]);
  }
  CHECK(mask_loss(rm2, tm2) == doctest::Approx(ms).epsilon(1e-14));
  CHECK(normal_loss(rn2, tn2, masks2) == doctest::Approx(ns).epsilon(1e-14));
}

TEST_CASE("losses are non-negative and vanish only with the residual") {
  Rng rng(7);
  const MaskImage a = random_image<MaskImage>(4, 4, rng);
  MaskImage b = a;
  b[5] += 1e-6;
  CHECK(mask_loss(a, b) > 0.0);
  const NormalImage n = random_image<NormalImage>(4, 4, rng, -1, 1);
  NormalImage m = n;
  m.at(1, 1, 2) += 1e-6;
  MaskImage cover(4, 4, 1.0);
  CHECK(normal_loss(m, n, cover) > 0.0);
  cover.at(1, 1) = 0.0;
  CHECK(normal_loss(m, n, cover) == 0.0);
}

TEST_CASE("color loss in squared and unsquared form") {
  RgbImage target(2, 1);
  target.set_pixel(0, Vec3(1, 0, 0));
  target.set_pixel(1, Vec3(0, 1, 0));
  RgbImage rendered(2, 1);
  rendered.set_pixel(0, Vec3(0, 0, 0));
  rendered.set_pixel(1, Vec3(0, 0.5, 0));
  MaskImage mask(2, 1, 1.0);
  RgbImage grad;
  CHECK(color_loss(rendered, target, mask, &grad) == 1.25);
  CHECK(color_loss_unsquared(rendered, target, mask) == 1.5);
  CHECK(grad.pixel(0) == Vec3(-2, 0, 0));
  mask.at(0, 0) = 0.0;
  CHECK(color_loss(rendered, target, mask) == 0.25);
}

TEST_CASE("loss size mismatches are rejected") {
  CHECK_THROWS_AS(mask_loss(MaskImage(2, 2), MaskImage(2, 3)), DimensionError);
  CHECK_THROWS_AS(normal_loss(NormalImage(2, 2), NormalImage(2, 2), MaskImage(3, 2)), DimensionError);
  CHECK_THROWS_AS(mask_loss(std::vector<MaskImage>(2, MaskImage(2, 2)), std::vector<MaskImage>(3, MaskImage(2, 2))),
                  DimensionError);
}
