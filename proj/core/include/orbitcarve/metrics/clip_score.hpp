#pragma once

#include <vector>

#include "orbitcarve/geometry/image.hpp"

namespace orbitcarve {

// Maps an image to a feature vector of fixed dimension. Implementations are
// expected to be deterministic and return finite values.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dimension() const = 0;
  virtual std::vector<double> embed(const RgbImage& image) const = 0;
};

// Deterministic stand-in for a learned image encoder: area-averaged 16x16
// thumbnail, flattened RGB, mean-subtracted and L2-normalized. A constant
// image maps to the zero vector.
class ToyEmbeddingProvider : public EmbeddingProvider {
 public:
  static constexpr int kSide = 16;
  int dimension() const override { return kSide * kSide * 3; }
  std::vector<double> embed(const RgbImage& image) const override;
};

// Mean cosine similarity between the prompt embedding and each view embedding.
// Throws InvariantError for an empty view list or for a zero-norm embedding
// (the message names the image), DimensionError when the provider output size
// is wrong. The result is clamped to [-1, 1].
double clip_score(const RgbImage& prompt, const std::vector<RgbImage>& views,
                  const EmbeddingProvider& provider);

}  // namespace orbitcarve
