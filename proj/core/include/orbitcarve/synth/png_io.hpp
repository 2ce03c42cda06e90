#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "orbitcarve/geometry/image.hpp"

namespace orbitcarve {

// Raw PNG pixels: 8- or 16-bit samples, 1 (gray) or 3 (RGB) channels, row-major
// and channel-interleaved.
struct PngData {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;
};

// Writes with fixed compression settings so identical pixels give identical bytes.
void write_png(const std::filesystem::path& path, const PngData& png);

// Accepts 8/16-bit gray or RGB without alpha or palette. Throws IoError.
PngData read_png(const std::filesystem::path& path);

// Normal maps: channel = round((n + 1) / 2 * 65535) in a 16-bit RGB PNG.
std::uint16_t encode_normal_channel(double n);
double decode_normal_channel(std::uint16_t value);

// Image conversions. Masks are 8-bit gray (foreground 255), RGB is 8-bit,
// depth is 16-bit gray holding round(z * 1000) with 0 for background.
void save_rgb_png(const RgbImage& image, const std::filesystem::path& path);
void save_mask_png(const MaskImage& image, const std::filesystem::path& path);
void save_normal_png(const NormalImage& image, const std::filesystem::path& path);
void save_depth_png(const std::vector<double>& depth, int width, int height,
                    const std::filesystem::path& path);

RgbImage load_rgb_png(const std::filesystem::path& path);
MaskImage load_mask_png(const std::filesystem::path& path);
// Raw decode, no renormalization.
NormalImage load_normal_png(const std::filesystem::path& path);

}  // namespace orbitcarve
