#include "orbitcarve/metrics/clip_score.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "orbitcarve/common/error.hpp"

namespace orbitcarve {
namespace {

// weights[j] holds, for output cell j, the overlap of each source pixel with
// the cell [j * n / m, (j + 1) * n / m), divided by the cell length.
std::vector<std::vector<std::pair<int, double>>> area_weights(int n, int m) {
  std::vector<std::vector<std::pair<int, double>>> w(m);
  const double step = static_cast<double>(n) / m;
  for (int j = 0; j < m; ++j) {
    const double lo = j * step;
    const double hi = (j + 1) * step;
    for (int i = static_cast<int>(std::floor(lo)); i < n && i < hi; ++i) {
      const double overlap = std::min(hi, i + 1.0) - std::max(lo, static_cast<double>(i));
      if (overlap > 0.0) w[j].emplace_back(i, overlap / step);
    }
  }
  return w;
}

std::vector<double> checked_embedding(const EmbeddingProvider& provider, const RgbImage& image,
                                      const std::string& label, double& norm_sq) {
  std::vector<double> e = provider.embed(image);
  if (static_cast<int>(e.size()) != provider.dimension()) {
    throw DimensionError("embedding of " + label + " has " + std::to_string(e.size()) +
                         " entries, provider dimension is " + std::to_string(provider.dimension()));
  }
  norm_sq = 0.0;
  for (double x : e) norm_sq += x * x;
  if (!(norm_sq > 0.0) || !std::isfinite(norm_sq)) {
    throw InvariantError("embedding of " + label + " has zero or non-finite norm");
  }
  return e;
}

}  // namespace

std::vector<double> ToyEmbeddingProvider::embed(const RgbImage& image) const {
  if (image.empty()) throw DimensionError("cannot embed an empty image");
  const auto wx = area_weights(image.width(), kSide);
  const auto wy = area_weights(image.height(), kSide);
  std::vector<double> out(static_cast<std::size_t>(dimension()), 0.0);
  for (int Y = 0; Y < kSide; ++Y) {
    for (int X = 0; X < kSide; ++X) {
      for (const auto& [y, ay] : wy[Y]) {
        for (const auto& [x, ax] : wx[X]) {
          for (int c = 0; c < 3; ++c) out[(Y * kSide + X) * 3 + c] += ay * ax * image.at(x, y, c);
        }
      }
    }
  }
  double mean = 0.0;
  for (double v : out) mean += v;
  mean /= static_cast<double>(out.size());
  double norm_sq = 0.0;
  for (double& v : out) {
    v -= mean;
    norm_sq += v * v;
  }
  // Rounding leaves tiny residues on constant images.
  if (norm_sq <= 1e-24 * out.size()) {
    std::fill(out.begin(), out.end(), 0.0);
    return out;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : out) v *= inv;
  return out;
}

double clip_score(const RgbImage& prompt, const std::vector<RgbImage>& views,
                  const EmbeddingProvider& provider) {
  if (views.empty()) throw InvariantError("clip score needs at least one view");
  double pp = 0.0;
  const std::vector<double> p = checked_embedding(provider, prompt, "the prompt image", pp);
  double sum = 0.0;
  for (std::size_t i = 0; i < views.size(); ++i) {
    double vv = 0.0;
    const std::vector<double> v = checked_embedding(provider, views[i], "view " + std::to_string(i), vv);
    double pv = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) pv += p[k] * v[k];
    sum += std::clamp(pv / std::sqrt(pp * vv), -1.0, 1.0);
  }
  return sum / static_cast<double>(views.size());
}

}  // namespace orbitcarve
