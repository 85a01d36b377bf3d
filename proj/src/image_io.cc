// Copyright 2026 The ejpeg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ejpeg/image_io.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "ejpeg/error.h"

namespace ejpeg {
namespace {

uint8_t To8(double v) {
  return static_cast<uint8_t>(std::clamp(std::round(v), 0.0, 255.0));
}

// Interleaved 8-bit samples.
std::vector<uint8_t> Interleave(const PixelImage& image) {
  const int c = image.channels();
  std::vector<uint8_t> out(static_cast<size_t>(image.width()) *
                           image.height() * c);
  size_t i = 0;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int k = 0; k < c; ++k) out[i++] = To8(image.at(k, x, y));
    }
  }
  return out;
}

PixelImage Deinterleave(const uint8_t* data, int width, int height,
                        int channels) {
  PixelImage image(width, height, channels);
  size_t i = 0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      for (int k = 0; k < channels; ++k) image.at(k, x, y) = data[i++];
    }
  }
  return image;
}

void CheckImage(const PixelImage& image) {
  if (image.empty() || image.width() < 1 || image.height() < 1 ||
      (image.channels() != 1 && image.channels() != 3)) {
    Fail(ErrorCode::kInvalidArgument, "image must be non-empty with 1 or 3 channels");
  }
}

class PnmReader {
 public:
  explicit PnmReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  int Number() {
    SkipSpaceAndComments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw ParseError(pos_, "expected a number in PNM header");
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1 << 24)) throw ParseError(pos_, "PNM header value too large");
    }
    return static_cast<int>(v);
  }

  size_t pos() const { return pos_; }
  void Skip(size_t n) { pos_ += n; }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

void AppendPngBytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

std::string Lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(ch));
  return s;
}

}  // namespace

PixelImage DecodePnm(std::span<const uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
    Fail(ErrorCode::kUnsupportedFormat, "not a binary PGM/PPM (P5/P6) file");
  }
  const int channels = bytes[1] == '5' ? 1 : 3;
  PnmReader reader(bytes);
  reader.Skip(2);
  const int width = reader.Number();
  const int height = reader.Number();
  const int maxval = reader.Number();
  if (width < 1 || height < 1) throw ParseError(reader.pos(), "empty PNM image");
  if (maxval < 1 || maxval > 255) {
    Fail(ErrorCode::kUnsupportedFormat, "only 8-bit PNM files are supported");
  }
  reader.Skip(1);  // single whitespace after maxval
  const size_t need = static_cast<size_t>(width) * height * channels;
  if (reader.pos() + need > bytes.size()) {
    throw ParseError(bytes.size(), "truncated PNM pixel data");
  }
  PixelImage image = Deinterleave(bytes.data() + reader.pos(), width, height,
                                  channels);
  if (maxval != 255) {
    for (int c = 0; c < channels; ++c) {
      for (double& v : image.plane(c).values()) v = v * 255.0 / maxval;
    }
  }
  return image;
}

std::vector<uint8_t> EncodePnm(const PixelImage& image) {
  CheckImage(image);
  const std::string header = std::string(image.channels() == 1 ? "P5" : "P6") +
                             "\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<uint8_t> out(header.begin(), header.end());
  const std::vector<uint8_t> data = Interleave(image);
  out.insert(out.end(), data.begin(), data.end());
  return out;
}

PixelImage DecodePng(std::span<const uint8_t> bytes) {
  png_image img;
  std::memset(&img, 0, sizeof(img));
  img.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&img, bytes.data(), bytes.size())) {
    Fail(ErrorCode::kParseError,
         std::string("cannot read PNG: ") + img.message);
  }
  const bool gray = (img.format & PNG_FORMAT_FLAG_COLOR) == 0;
  img.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  const int channels = gray ? 1 : 3;
  std::vector<uint8_t> buffer(PNG_IMAGE_SIZE(img));
  if (!png_image_finish_read(&img, nullptr, buffer.data(), 0, nullptr)) {
    const std::string message = img.message;
    png_image_free(&img);
    Fail(ErrorCode::kParseError, "cannot decode PNG: " + message);
  }
  return Deinterleave(buffer.data(), static_cast<int>(img.width),
                      static_cast<int>(img.height), channels);
}

std::vector<uint8_t> EncodePng(const PixelImage& image) {
  CheckImage(image);
  std::vector<uint8_t> out;
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    Fail(ErrorCode::kIo, "cannot allocate PNG writer");
  }
  const std::vector<uint8_t> data = Interleave(image);
  std::vector<png_bytep> rows(image.height());
  const size_t stride = static_cast<size_t>(image.width()) * image.channels();
  for (int y = 0; y < image.height(); ++y) {
    rows[y] = const_cast<png_bytep>(data.data() + y * stride);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    Fail(ErrorCode::kIo, "PNG encoding failed");
  }
  png_set_write_fn(png, &out, AppendPngBytes, nullptr);
  png_set_IHDR(png, info, image.width(), image.height(), 8,
               image.channels() == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

PixelImage DecodeImage(std::span<const uint8_t> bytes) {
  static const uint8_t kPngSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  if (bytes.size() >= 8 && std::equal(kPngSig, kPngSig + 8, bytes.begin())) {
    return DecodePng(bytes);
  }
  if (bytes.size() >= 2 && bytes[0] == 'P' &&
      (bytes[1] == '5' || bytes[1] == '6')) {
    return DecodePnm(bytes);
  }
  Fail(ErrorCode::kUnsupportedFormat,
       "unrecognized image format (expected PNG, PGM or PPM)");
}

bool LooksLikeJpeg(std::span<const uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8;
}

RegionMask MaskFromImage(const PixelImage& image) {
  RegionMask mask(image.width(), image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      mask.at(x, y) = std::clamp(image.at(0, x, y) / 255.0, 0.0, 1.0);
    }
  }
  return mask;
}

PixelImage MaskToImage(const RegionMask& mask) {
  PixelImage image(mask.width(), mask.height(), 1);
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      image.at(0, x, y) = mask.at(x, y) * 255.0;
    }
  }
  return image;
}

std::vector<uint8_t> ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void WriteFileBytes(const std::string& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) Fail(ErrorCode::kIo, "short write to " + path);
}

PixelImage ReadImageFile(const std::string& path) {
  return DecodeImage(ReadFileBytes(path));
}

void WriteImageFile(const std::string& path, const PixelImage& image) {
  const std::string lower = Lower(path);
  const auto ends = [&](const std::string& ext) {
    return lower.size() >= ext.size() &&
           lower.compare(lower.size() - ext.size(), ext.size(), ext) == 0;
  };
  if (ends(".png")) {
    WriteFileBytes(path, EncodePng(image));
  } else if (ends(".ppm") || ends(".pgm") || ends(".pnm")) {
    WriteFileBytes(path, EncodePnm(image));
  } else {
    Fail(ErrorCode::kInvalidArgument,
         "output extension must be .png, .ppm, .pgm or .pnm: " + path);
  }
}

}  // namespace ejpeg
