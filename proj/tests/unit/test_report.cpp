#include <doctest.h>

#include <nlohmann/json.hpp>
#include <fstream>

#include "fixtures.hpp"
#include "orbitcarve/metrics/report.hpp"
#include "orbitcarve/synth/primitives.hpp"

using namespace orbitcarve;

TEST_CASE("report of a mesh against itself") {
  const auto dir = test::scratch_dir("report_self");
  const TriMesh m = make_primitive(PrimitiveKind::sphere, 3);
  const OrbitDataset ds = generate_dataset(m, test::test_rig(3, 32), dir);
  const EvalReport r = evaluate_meshes(m, m, 2000, 5, &ds);
  CHECK(r.chamfer.mean < 1e-12);
  CHECK(r.normal_consistency == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(r.silhouette.has_value());
  CHECK(r.silhouette->mean == 1.0);
  CHECK_FALSE(r.clip_score.has_value());

  write_eval_report(r, dir / "eval.json");
  std::ifstream in(dir / "eval.json");
  const nlohmann::json j = nlohmann::json::parse(in);
  CHECK(j.at("samples") == 2000);
  CHECK(j.at("seed") == 5);
  CHECK(j.at("chamfer").at("mean").get<double>() < 1e-12);
  CHECK(j.at("chamfer").contains("rms_pred_to_gt"));
  CHECK(j.at("normal_consistency").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("silhouette_iou").at("views").size() == 3);
  CHECK(j.at("silhouette_iou").at("views")[0].at("empty_union") == false);

  const std::string table = format_eval_table(r);
  CHECK(table.find("chamfer") != std::string::npos);
  CHECK(table.find("silhouette") != std::string::npos);
}

TEST_CASE("report without a dataset has no silhouette section") {
  const TriMesh a = make_primitive(PrimitiveKind::sphere, 3);
  TriMesh b = a;
  transform_in_place(b, 1.1, Vec3::Zero());
  const EvalReport r = evaluate_meshes(a, b, 2000, 1);
  CHECK_FALSE(r.silhouette.has_value());
  CHECK(r.chamfer.mean > 0.04);
  const nlohmann::json j = nlohmann::json::parse(eval_report_json(r));
  CHECK_FALSE(j.contains("silhouette_iou"));
}
