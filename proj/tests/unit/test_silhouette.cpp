#include <doctest.h>

#include "fixtures.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/metrics/silhouette.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

namespace {

MaskImage square(int x0, int y0, int side) {
  MaskImage m(16, 16, 0.0);
  for (int y = y0; y < y0 + side; ++y) {
    for (int x = x0; x < x0 + side; ++x) m.at(x, y) = 1.0;
  }
  return m;
}

}  // namespace

TEST_CASE("mask IoU arithmetic") {
  CHECK(mask_iou(square(0, 0, 4), square(0, 0, 4)) == 1.0);
  CHECK(mask_iou(square(0, 0, 4), square(8, 8, 4)) == 0.0);
  CHECK(mask_iou(square(0, 0, 4), square(2, 0, 4)) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  MaskImage soft = square(0, 0, 4);
  soft.at(0, 0) = 0.49;
  CHECK(mask_iou(soft, square(0, 0, 4)) == 15.0 / 16.0);
  bool empty = false;
  CHECK(mask_iou(MaskImage(16, 16), MaskImage(16, 16), &empty) == 1.0);
  CHECK(empty);
  CHECK_THROWS_AS(mask_iou(MaskImage(4, 4), MaskImage(4, 5)), DimensionError);
}

TEST_CASE("silhouette IoU is 1 on a self-generated dataset") {
  const auto dir = test::scratch_dir("silhouette_self");
  const TriMesh m = make_primitive(PrimitiveKind::torus, 3);
  const OrbitDataset ds = generate_dataset(m, test::test_rig(6, 64), dir);
  const SilhouetteResult r = silhouette_iou(m, ds);
  REQUIRE(r.per_view.size() == 6);
  for (int v = 0; v < 6; ++v) {
    CHECK(r.per_view[v] == 1.0);
    CHECK_FALSE(r.empty_union[v]);
  }
  CHECK(r.mean == 1.0);

  TriMesh moved = m;
  transform_in_place(moved, 1.0, Vec3(0.2, 0, 0));
  const SilhouetteResult off = silhouette_iou(moved, ds);
  CHECK(off.mean < 1.0);
  CHECK(off.mean > 0.0);

  TriMesh far = m;
  transform_in_place(far, 0.1, Vec3(100, 0, 0));
  for (double iou : silhouette_iou(far, ds).per_view) CHECK((iou >= 0.0 && iou <= 1.0));
}
