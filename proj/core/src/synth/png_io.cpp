#include "orbitcarve/synth/png_io.hpp"

#include <png.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <memory>

#include <fmt/format.h>

#include "orbitcarve/common/error.hpp"

namespace orbitcarve {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors by longjmp; these helpers keep only trivially
// destructible locals between setjmp and the libpng calls.
bool write_rows(std::FILE* fp, const PngData& png, const std::vector<png_bytep>& rows) {
  png_structp ptr = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ptr) return false;
  png_infop info = png_create_info_struct(ptr);
  if (!info || setjmp(png_jmpbuf(ptr))) {
    png_destroy_write_struct(&ptr, &info);
    return false;
  }
  png_init_io(ptr, fp);
  png_set_compression_level(ptr, 6);
  png_set_filter(ptr, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_IHDR(ptr, info, png.width, png.height, png.bit_depth,
               png.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ptr, info);
  png_write_image(ptr, const_cast<png_bytepp>(rows.data()));
  png_write_end(ptr, nullptr);
  png_destroy_write_struct(&ptr, &info);
  return true;
}

struct ReadHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
};

bool read_all(std::FILE* fp, ReadHeader& header, std::vector<unsigned char>& bytes) {
  png_structp ptr = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!ptr) return false;
  png_infop info = png_create_info_struct(ptr);
  std::vector<png_bytep>* rows = nullptr;
  if (!info || setjmp(png_jmpbuf(ptr))) {
    delete rows;
    png_destroy_read_struct(&ptr, &info, nullptr);
    return false;
  }
  png_init_io(ptr, fp);
  png_read_info(ptr, info);
  int interlace = 0;
  png_get_IHDR(ptr, info, &header.width, &header.height, &header.bit_depth, &header.color_type,
               &interlace, nullptr, nullptr);
  if (header.color_type == PNG_COLOR_TYPE_GRAY && header.bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(ptr);
    header.bit_depth = 8;
  }
  png_read_update_info(ptr, info);
  const std::size_t row_bytes = png_get_rowbytes(ptr, info);
  bytes.assign(row_bytes * header.height, 0);
  rows = new std::vector<png_bytep>(header.height);
  for (png_uint_32 y = 0; y < header.height; ++y) (*rows)[y] = bytes.data() + y * row_bytes;
  png_read_image(ptr, rows->data());
  png_read_end(ptr, nullptr);
  delete rows;
  png_destroy_read_struct(&ptr, &info, nullptr);
  return true;
}

std::uint16_t quantize(double v, double scale) {
  return static_cast<std::uint16_t>(std::lround(std::clamp(v, 0.0, 1.0) * scale));
}

}  // namespace

void write_png(const std::filesystem::path& path, const PngData& png) {
  if (png.width <= 0 || png.height <= 0 || (png.channels != 1 && png.channels != 3) ||
      (png.bit_depth != 8 && png.bit_depth != 16) ||
      png.samples.size() != static_cast<std::size_t>(png.width) * png.height * png.channels) {
    throw IoError(fmt::format("{}: inconsistent PNG buffer", path.string()));
  }
  const int bytes_per_sample = png.bit_depth / 8;
  const std::size_t row_bytes = static_cast<std::size_t>(png.width) * png.channels * bytes_per_sample;
  std::vector<unsigned char> buffer(row_bytes * png.height);
  for (std::size_t i = 0; i < png.samples.size(); ++i) {
    if (bytes_per_sample == 1) {
      buffer[i] = static_cast<unsigned char>(png.samples[i]);
    } else {
      buffer[2 * i] = static_cast<unsigned char>(png.samples[i] >> 8);
      buffer[2 * i + 1] = static_cast<unsigned char>(png.samples[i] & 0xff);
    }
  }
  std::vector<png_bytep> rows(png.height);
  for (int y = 0; y < png.height; ++y) rows[y] = buffer.data() + y * row_bytes;

  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw IoError(fmt::format("{}: cannot open for writing", path.string()));
  if (!write_rows(fp.get(), png, rows)) throw IoError(fmt::format("{}: PNG encoding failed", path.string()));
  if (std::fflush(fp.get()) != 0 || ::fsync(::fileno(fp.get())) != 0) {
    throw IoError(fmt::format("{}: write failed", path.string()));
  }
}

PngData read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw IoError(fmt::format("{}: cannot open", path.string()));
  unsigned char sig[8] = {};
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw IoError(fmt::format("{}: not a PNG file", path.string()));
  }
  std::rewind(fp.get());
  ReadHeader header;
  std::vector<unsigned char> bytes;
  if (!read_all(fp.get(), header, bytes)) throw IoError(fmt::format("{}: corrupt PNG", path.string()));
  PngData png;
  png.width = static_cast<int>(header.width);
  png.height = static_cast<int>(header.height);
  png.bit_depth = header.bit_depth;
  if (header.color_type == PNG_COLOR_TYPE_GRAY) {
    png.channels = 1;
  } else if (header.color_type == PNG_COLOR_TYPE_RGB) {
    png.channels = 3;
  } else {
    throw IoError(fmt::format("{}: unsupported PNG color type {} (need gray or RGB)", path.string(),
                              header.color_type));
  }
  const std::size_t count = static_cast<std::size_t>(png.width) * png.height * png.channels;
  png.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    png.samples[i] = png.bit_depth == 8
                         ? bytes[i]
                         : static_cast<std::uint16_t>((bytes[2 * i] << 8) | bytes[2 * i + 1]);
  }
  return png;
}

std::uint16_t encode_normal_channel(double n) {
  return static_cast<std::uint16_t>(std::lround(std::clamp((n + 1.0) * 0.5, 0.0, 1.0) * 65535.0));
}

double decode_normal_channel(std::uint16_t value) { return value / 65535.0 * 2.0 - 1.0; }

void save_rgb_png(const RgbImage& image, const std::filesystem::path& path) {
  PngData png{image.width(), image.height(), 3, 8, {}};
  png.samples.reserve(image.data().size());
  for (double v : image.data()) png.samples.push_back(quantize(v, 255.0));
  write_png(path, png);
}

void save_mask_png(const MaskImage& image, const std::filesystem::path& path) {
  PngData png{image.width(), image.height(), 1, 8, {}};
  png.samples.reserve(image.data().size());
  for (double v : image.data()) png.samples.push_back(quantize(v, 255.0));
  write_png(path, png);
}

void save_normal_png(const NormalImage& image, const std::filesystem::path& path) {
  PngData png{image.width(), image.height(), 3, 16, {}};
  png.samples.reserve(image.data().size());
  for (double v : image.data()) png.samples.push_back(encode_normal_channel(v));
  write_png(path, png);
}

void save_depth_png(const std::vector<double>& depth, int width, int height,
                    const std::filesystem::path& path) {
  PngData png{width, height, 1, 16, {}};
  png.samples.reserve(depth.size());
  for (double z : depth) {
    png.samples.push_back(std::isfinite(z) ? static_cast<std::uint16_t>(std::lround(std::clamp(z * 1000.0, 0.0, 65535.0)))
                                           : std::uint16_t{0});
  }
  write_png(path, png);
}

namespace {

template <typename ImageT>
ImageT to_image(const PngData& png, const std::filesystem::path& path, const char* what) {
  if (png.channels != ImageT::kChannels) {
    throw IoError(fmt::format("{}: {} needs {} channel(s), file has {}", path.string(), what,
                              ImageT::kChannels, png.channels));
  }
  ImageT image(png.width, png.height);
  const double scale = png.bit_depth == 8 ? 255.0 : 65535.0;
  for (std::size_t i = 0; i < png.samples.size(); ++i) image.data()[i] = png.samples[i] / scale;
  return image;
}

}  // namespace

RgbImage load_rgb_png(const std::filesystem::path& path) {
  return to_image<RgbImage>(read_png(path), path, "RGB image");
}

MaskImage load_mask_png(const std::filesystem::path& path) {
  return to_image<MaskImage>(read_png(path), path, "mask");
}

NormalImage load_normal_png(const std::filesystem::path& path) {
  const PngData png = read_png(path);
  if (png.bit_depth != 16) {
    throw IoError(fmt::format("{}: normal map must be 16-bit (file is {}-bit)", path.string(), png.bit_depth));
  }
  if (png.channels != 3) throw IoError(fmt::format("{}: normal map must be RGB", path.string()));
  NormalImage image(png.width, png.height);
  for (std::size_t i = 0; i < png.samples.size(); ++i) {
    image.data()[i] = decode_normal_channel(png.samples[i]);
  }
  return image;
}

}  // namespace orbitcarve
