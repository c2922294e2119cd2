#pragma once

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include "wavedenoise/error.hpp"
#include "wavedenoise/image.hpp"

namespace wavedenoise {

/// BT.601 luma weights for RGB to gray conversion.
inline constexpr double kLumaRed = 0.299;
inline constexpr double kLumaGreen = 0.587;
inline constexpr double kLumaBlue = 0.114;

inline double luma(double r, double g, double b) noexcept {
  return kLumaRed * r + kLumaGreen * g + kLumaBlue * b;
}

/// Clip to [0, 255] and round half away from zero.
inline std::uint8_t quantize_pixel(double v) noexcept {
  const double clipped = std::clamp(v, 0.0, kPeakValue);
  return static_cast<std::uint8_t>(std::round(clipped));
}

namespace detail {

inline std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

inline std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Cursor over a PGM byte buffer. Header tokens are separated by whitespace;
/// '#' starts a comment running to end of line.
class PgmReader {
 public:
  PgmReader(std::span<const unsigned char> bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const unsigned char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long long read_uint(const char* what) {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw Error(ErrorCode::CorruptData, name_ + ": expected " + what);
    }
    long long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (1LL << 40)) throw Error(ErrorCode::CorruptData, name_ + ": " + what + " overflow");
      ++pos_;
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from a binary raster.
  void consume_single_whitespace() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw Error(ErrorCode::CorruptData, name_ + ": missing whitespace after header");
    }
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
  bool at_end() {
    skip_space_and_comments();
    return pos_ >= bytes_.size();
  }

 private:
  std::span<const unsigned char> bytes_;
  std::string name_;
  std::size_t pos_ = 2;
};

inline Image decode_pgm(std::span<const unsigned char> bytes, const std::string& name) {
  const bool ascii = bytes[1] == '2';
  PgmReader reader(bytes, name);
  const long long width = reader.read_uint("width");
  const long long height = reader.read_uint("height");
  const long long maxval = reader.read_uint("maxval");
  if (width <= 0 || height <= 0) throw Error(ErrorCode::CorruptData, name + ": zero dimension");
  if (maxval > 255) {
    throw Error(ErrorCode::UnsupportedFormat,
                name + ": maxval " + std::to_string(maxval) + " exceeds 8-bit range");
  }
  if (maxval == 0) throw Error(ErrorCode::CorruptData, name + ": maxval is zero");

  const auto count = static_cast<std::size_t>(width * height);
  const double scale = kPeakValue / static_cast<double>(maxval);
  std::vector<double> pixels(count);
  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      const long long v = reader.read_uint("pixel value");
      if (v > maxval) throw Error(ErrorCode::CorruptData, name + ": pixel exceeds maxval");
      pixels[i] = static_cast<double>(v) * scale;
    }
    if (!reader.at_end()) throw Error(ErrorCode::CorruptData, name + ": trailing data after raster");
  } else {
    reader.consume_single_whitespace();
    if (reader.remaining() < count) {
      throw Error(ErrorCode::CorruptData, name + ": raster truncated");
    }
    const std::size_t base = reader.position();
    for (std::size_t i = 0; i < count; ++i) {
      const unsigned char v = bytes[base + i];
      if (v > maxval) throw Error(ErrorCode::CorruptData, name + ": pixel exceeds maxval");
      pixels[i] = static_cast<double>(v) * scale;
    }
  }
  return Image(static_cast<std::size_t>(width), static_cast<std::size_t>(height), std::move(pixels));
}

inline Image decode_png(std::span<const unsigned char> bytes, const std::string& name) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size())) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::CorruptData, name + ": " + msg);
  }
  if (png.format & PNG_FORMAT_FLAG_LINEAR) {
    png_image_free(&png);
    throw Error(ErrorCode::UnsupportedFormat, name + ": bit depth above 8 is not supported");
  }
  const bool color = (png.format & PNG_FORMAT_FLAG_COLOR) != 0;
  // Reading with an alpha channel keeps libpng from compositing; alpha is dropped here.
  png.format = color ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
  const std::size_t channels = color ? 4 : 2;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::CorruptData, name + ": " + msg);
  }
  const std::size_t count = static_cast<std::size_t>(png.width) * png.height;
  std::vector<double> pixels(count);
  for (std::size_t i = 0; i < count; ++i) {
    const png_byte* px = buffer.data() + i * channels;
    pixels[i] = color ? luma(px[0], px[1], px[2]) : static_cast<double>(px[0]);
  }
  return Image(png.width, png.height, std::move(pixels));
}

}  // namespace detail

/// Load an 8-bit grayscale or RGB image from PGM (P2/P5) or PNG. The format
/// is detected from the file's magic bytes.
inline Image load_image(const std::filesystem::path& path) {
  const std::vector<unsigned char> bytes = detail::read_file_bytes(path);
  const std::string name = path.string();
  static constexpr std::array<unsigned char, 8> kPngSignature = {0x89, 'P', 'N', 'G',
                                                                 '\r', '\n', 0x1a, '\n'};
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '2' || bytes[1] == '5')) {
    return detail::decode_pgm(bytes, name);
  }
  if (bytes.size() >= kPngSignature.size() &&
      std::equal(kPngSignature.begin(), kPngSignature.end(), bytes.begin())) {
    return detail::decode_png(bytes, name);
  }
  throw Error(ErrorCode::UnsupportedFormat, name + ": not a PGM (P2/P5) or PNG file");
}

/// Write an 8-bit grayscale image. The extension selects the format:
/// .png for PNG, .pgm for binary PGM (P5).
inline void save_image(const Image& img, const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes(img.size());
  std::transform(img.pixels().begin(), img.pixels().end(), bytes.begin(), quantize_pixel);

  const std::string ext = detail::lower_extension(path);
  if (ext == ".png") {
    png_image png;
    std::memset(&png, 0, sizeof(png));
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(img.width());
    png.height = static_cast<png_uint_32>(img.height());
    png.format = PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&png, path.string().c_str(), 0, bytes.data(), 0, nullptr)) {
      const std::string msg = png.message;
      png_image_free(&png);
      throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "': " + msg);
    }
    return;
  }
  if (ext != ".pgm") {
    throw Error(ErrorCode::UnsupportedFormat,
                "cannot infer output format from '" + path.string() + "' (use .pgm or .png)");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

/// Affine rescale mapping the minimum pixel to 0 and the maximum to 255.
/// A constant image maps to all zeros.
inline Image normalize(const Image& img) {
  const auto [lo_it, hi_it] = std::minmax_element(img.pixels().begin(), img.pixels().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  std::vector<double> out(img.size(), 0.0);
  if (hi > lo) {
    const double scale = kPeakValue / (hi - lo);
    std::transform(img.pixels().begin(), img.pixels().end(), out.begin(), [&](double v) {
      if (v == hi) return kPeakValue;
      return (v - lo) * scale;
    });
  }
  return Image(img.width(), img.height(), std::move(out));
}

}  // namespace wavedenoise
