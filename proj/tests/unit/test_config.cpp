#include <doctest.h>

#include <nlohmann/json.hpp>
#include <fstream>

#include "fixtures.hpp"
#include "orbitcarve/common/error.hpp"
#include "orbitcarve/pipeline/config.hpp"
#include "orbitcarve/pipeline/reconstruct.hpp"

using namespace orbitcarve;
namespace fs = std::filesystem;

TEST_CASE("init method names") {
  CHECK(parse_init_method("auto") == InitMethod::automatic);
  CHECK(parse_init_method("poisson") == InitMethod::poisson);
  CHECK(parse_init_method("hull") == InitMethod::hull);
  CHECK(parse_init_method("mesh-file") == InitMethod::mesh_file);
  CHECK(to_string(InitMethod::mesh_file) == "mesh-file");
  CHECK_THROWS_AS(parse_init_method("smpl"), InvariantError);
}

TEST_CASE("config file keys override defaults and resolve paths") {
  const fs::path dir = test::scratch_dir("config_file");
  {
    std::ofstream out(dir / "run.json");
    out << R"({"dataset": "data/manifest.json", "output": "/abs/out.ply", "iterations": 50,
               "render_size": 128, "sigma": 0.7, "fit_colors": false, "init": "hull",
               "seed": 42, "color_lr_end": 0.002})";
  }
  const PipelineConfig c = load_pipeline_config(dir / "run.json");
  CHECK(c.dataset == dir / "data/manifest.json");
  CHECK(c.output == fs::path("/abs/out.ply"));
  CHECK(c.carve.iterations == 50);
  CHECK(c.carve.render_size == 128);
  CHECK(c.carve.raster.sigma == 0.7);
  CHECK_FALSE(c.fit_colors);
  CHECK(c.init == InitMethod::hull);
  CHECK(c.seed == 42);
  CHECK(c.color.lr_end == 0.002);
  CHECK(c.carve.lr_start == CarveConfig{}.lr_start);
  CHECK(c.grid_resolution == 96);
}

TEST_CASE("config echo round-trips") {
  PipelineConfig c;
  c.dataset = "/d/manifest.json";
  c.output = "/o/mesh.ply";
  c.carve.iterations = 77;
  c.carve.edge_end = 0.03;
  c.color.initial_color = 0.25;
  c.threads = 3;
  PipelineConfig back;
  apply_pipeline_config(back, pipeline_config_json(c));
  CHECK(pipeline_config_json(back) == pipeline_config_json(c));
  CHECK(back.carve.iterations == 77);
  CHECK(back.threads == 3);
  const nlohmann::json j = nlohmann::json::parse(pipeline_config_json(c));
  CHECK(j.is_object());
  for (const auto& [key, value] : j.items()) CHECK_FALSE(value.is_object());
}

TEST_CASE("bad config content") {
  PipelineConfig c;
  CHECK_THROWS_AS(apply_pipeline_config(c, R"({"iteratons": 5})"), InvariantError);
  CHECK_THROWS_AS(apply_pipeline_config(c, R"({"iterations": "five"})"), InvariantError);
  CHECK_THROWS_AS(apply_pipeline_config(c, R"({"fit_colors": 1})"), InvariantError);
  CHECK_THROWS_AS(apply_pipeline_config(c, R"([1, 2])"), InvariantError);
  CHECK_THROWS_AS(apply_pipeline_config(c, "{"), InvariantError);
  CHECK_THROWS_AS(load_pipeline_config("/nonexistent/run.json"), IoError);
}

TEST_CASE("validation") {
  const fs::path dir = test::scratch_dir("config_validate");
  std::ofstream(dir / "manifest.json") << "{}";
  PipelineConfig c;
  c.dataset = dir / "manifest.json";
  c.output = dir / "out.ply";
  CHECK_NOTHROW(c.validate());

  PipelineConfig bad = c;
  bad.carve.iterations = 0;
  CHECK_THROWS_AS(bad.validate(), InvariantError);
  bad = c;
  bad.grid_resolution = 4;
  CHECK_THROWS_AS(bad.validate(), InvariantError);
  bad = c;
  bad.threads = -1;
  CHECK_THROWS_AS(bad.validate(), InvariantError);
  bad = c;
  bad.output.clear();
  CHECK_THROWS_AS(bad.validate(), InvariantError);
  bad = c;
  bad.init = InitMethod::mesh_file;
  CHECK_THROWS_AS(bad.validate(), InvariantError);
  bad.init_mesh = dir / "missing.ply";
  CHECK_THROWS_AS(bad.validate(), IoError);
  bad = c;
  bad.init = InitMethod::poisson;
  CHECK_THROWS_AS(bad.validate(), InvariantError);
  bad = c;
  bad.dataset = dir / "missing.json";
  CHECK_THROWS_AS(bad.validate(), IoError);
  bad = c;
  bad.fit_colors = false;
  bad.color.initial_color = 9.0;
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("side outputs sit next to the mesh") {
  const ReconstructOutputs o = reconstruct_outputs("/x/run/mesh.ply");
  CHECK(o.mesh == fs::path("/x/run/mesh.ply"));
  CHECK(o.loss_log == fs::path("/x/run/mesh.loss.csv"));
  CHECK(o.report == fs::path("/x/run/mesh.report.json"));
  CHECK(o.summary == fs::path("/x/run/mesh.summary.json"));
}

TEST_CASE("pipeline failures name the stage") {
  const fs::path dir = test::scratch_dir("config_stage");
  std::ofstream(dir / "manifest.json") << R"({"name": "x"})";
  PipelineConfig c;
  c.dataset = dir / "manifest.json";
  c.output = dir / "out.ply";
  try {
    reconstruct(c);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "load dataset");
    CHECK(std::string(e.what()).rfind("load dataset: ", 0) == 0);
  }
}
