#include <doctest.h>

#include <cmath>
#include <string>

#include "orbitcarve/common/error.hpp"
#include "orbitcarve/common/random.hpp"
#include "orbitcarve/metrics/clip_score.hpp"

using namespace orbitcarve;

namespace {

RgbImage random_rgb(int w, int h, Rng& rng) {
  RgbImage img(w, h);
  for (double& v : img.data()) v = uniform01(rng);
  return img;
}

// Looks up a fixed vector by the value of the first pixel's red channel.
class TableProvider : public EmbeddingProvider {
 public:
  explicit TableProvider(std::vector<std::vector<double>> table) : table_(std::move(table)) {}
  int dimension() const override { return static_cast<int>(table_[0].size()); }
  std::vector<double> embed(const RgbImage& image) const override {
    return table_[static_cast<std::size_t>(image.at(0, 0, 0))];
  }

 private:
  std::vector<std::vector<double>> table_;
};

RgbImage tagged(int id) {
  RgbImage img(1, 1);
  img.at(0, 0, 0) = id;
  return img;
}

}  // namespace

TEST_CASE("identical views score exactly 1") {
  Rng rng(1);
  const RgbImage prompt = random_rgb(64, 48, rng);
  const ToyEmbeddingProvider toy;
  CHECK(clip_score(prompt, {prompt, prompt, prompt}, toy) == 1.0);
}

TEST_CASE("orthogonal embeddings score 0") {
  const TableProvider p({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(clip_score(tagged(0), {tagged(1), tagged(2)}, p) == 0.0);
}

TEST_CASE("mean of hand-built cosines") {
  const double s = std::sqrt(3.0) / 2.0;
  const TableProvider p({{1, 0}, {1, 0}, {0.5, s}, {0, 1}});
  CHECK(std::abs(clip_score(tagged(0), {tagged(1), tagged(2), tagged(3)}, p) - 0.5) < 1e-12);
}

TEST_CASE("toy provider reproduces the cosine average") {
  Rng rng(2);
  const ToyEmbeddingProvider toy;
  const RgbImage prompt = random_rgb(40, 40, rng);
  std::vector<RgbImage> views;
  for (int i = 0; i < 5; ++i) views.push_back(random_rgb(32 + 8 * i, 40, rng));
  const std::vector<double> ep = toy.embed(prompt);
  CHECK(static_cast<int>(ep.size()) == toy.dimension());
  double expected = 0.0;
  for (const RgbImage& v : views) {
    const std::vector<double> ev = toy.embed(v);
    double dot = 0.0, pp = 0.0, vv = 0.0;
    for (std::size_t k = 0; k < ep.size(); ++k) {
      dot += ep[k] * ev[k];
      pp += ep[k] * ep[k];
      vv += ev[k] * ev[k];
    }
    CHECK(std::abs(vv - 1.0) < 1e-12);
    expected += dot / std::sqrt(pp * vv);
  }
  expected /= views.size();
  const double score = clip_score(prompt, views, toy);
  CHECK(std::abs(score - expected) < 1e-12);

  std::vector<RgbImage> permuted = {views[3], views[0], views[4], views[2], views[1]};
  CHECK(std::abs(clip_score(prompt, permuted, toy) - score) < 1e-12);
}

TEST_CASE("rescaled embeddings give the same score") {
  const TableProvider a({{1, 2, 3}, {3, -1, 2}, {0.5, 0.5, -1}});
  const TableProvider b({{10, 20, 30}, {0.3, -0.1, 0.2}, {5, 5, -10}});
  const double sa = clip_score(tagged(0), {tagged(1), tagged(2)}, a);
  const double sb = clip_score(tagged(0), {tagged(1), tagged(2)}, b);
  CHECK(std::abs(sa - sb) < 1e-12);
}

TEST_CASE("clip score errors") {
  const ToyEmbeddingProvider toy;
  Rng rng(3);
  const RgbImage img = random_rgb(16, 16, rng);
  CHECK_THROWS_AS(clip_score(img, {}, toy), InvariantError);
  const RgbImage flat(16, 16, 0.25);
  try {
    clip_score(img, {img, flat}, toy);
    FAIL("expected InvariantError");
  } catch (const InvariantError& e) {
    CHECK(std::string(e.what()).find("view 1") != std::string::npos);
  }
  try {
    clip_score(flat, {img}, toy);
    FAIL("expected InvariantError");
  } catch (const InvariantError& e) {
    CHECK(std::string(e.what()).find("prompt") != std::string::npos);
  }
  class Liar : public EmbeddingProvider {
   public:
    int dimension() const override { return 3; }
    std::vector<double> embed(const RgbImage&) const override { return {1, 0}; }
  };
  CHECK_THROWS_AS(clip_score(img, {img}, Liar{}), DimensionError);
}
