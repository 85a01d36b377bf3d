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

#include "ejpeg/jfif.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include "ejpeg/error.h"

namespace ejpeg {
namespace {

constexpr uint8_t kSoi = 0xD8;
constexpr uint8_t kEoi = 0xD9;
constexpr uint8_t kSos = 0xDA;
constexpr uint8_t kDqt = 0xDB;
constexpr uint8_t kDri = 0xDD;
constexpr uint8_t kDht = 0xC4;
constexpr uint8_t kDac = 0xCC;
constexpr uint8_t kSof0 = 0xC0;
constexpr uint8_t kSof1 = 0xC1;
constexpr uint8_t kRst0 = 0xD0;

// Huffman table as stored in DHT: code counts per length and symbols.
struct HuffmanSpec {
  std::array<uint8_t, 16> counts{};
  std::vector<uint8_t> symbols;
};

const HuffmanSpec& StdDcLuma() {
  static const HuffmanSpec kSpec{
      {0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0},
      {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
  return kSpec;
}

const HuffmanSpec& StdDcChroma() {
  static const HuffmanSpec kSpec{
      {0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0},
      {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}};
  return kSpec;
}

const HuffmanSpec& StdAcLuma() {
  static const HuffmanSpec kSpec{
      {0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7d},
      {0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06,
       0x13, 0x51, 0x61, 0x07, 0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xa1, 0x08,
       0x23, 0x42, 0xb1, 0xc1, 0x15, 0x52, 0xd1, 0xf0, 0x24, 0x33, 0x62, 0x72,
       0x82, 0x09, 0x0a, 0x16, 0x17, 0x18, 0x19, 0x1a, 0x25, 0x26, 0x27, 0x28,
       0x29, 0x2a, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44, 0x45,
       0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
       0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74, 0x75,
       0x76, 0x77, 0x78, 0x79, 0x7a, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
       0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a, 0xa2, 0xa3,
       0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4, 0xb5, 0xb6,
       0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7, 0xc8, 0xc9,
       0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda, 0xe1, 0xe2,
       0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf1, 0xf2, 0xf3, 0xf4,
       0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa}};
  return kSpec;
}

const HuffmanSpec& StdAcChroma() {
  static const HuffmanSpec kSpec{
      {0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 0x77},
      {0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21, 0x31, 0x06, 0x12, 0x41,
       0x51, 0x07, 0x61, 0x71, 0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91,
       0xa1, 0xb1, 0xc1, 0x09, 0x23, 0x33, 0x52, 0xf0, 0x15, 0x62, 0x72, 0xd1,
       0x0a, 0x16, 0x24, 0x34, 0xe1, 0x25, 0xf1, 0x17, 0x18, 0x19, 0x1a, 0x26,
       0x27, 0x28, 0x29, 0x2a, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3a, 0x43, 0x44,
       0x45, 0x46, 0x47, 0x48, 0x49, 0x4a, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58,
       0x59, 0x5a, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6a, 0x73, 0x74,
       0x75, 0x76, 0x77, 0x78, 0x79, 0x7a, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87,
       0x88, 0x89, 0x8a, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9a,
       0xa2, 0xa3, 0xa4, 0xa5, 0xa6, 0xa7, 0xa8, 0xa9, 0xaa, 0xb2, 0xb3, 0xb4,
       0xb5, 0xb6, 0xb7, 0xb8, 0xb9, 0xba, 0xc2, 0xc3, 0xc4, 0xc5, 0xc6, 0xc7,
       0xc8, 0xc9, 0xca, 0xd2, 0xd3, 0xd4, 0xd5, 0xd6, 0xd7, 0xd8, 0xd9, 0xda,
       0xe2, 0xe3, 0xe4, 0xe5, 0xe6, 0xe7, 0xe8, 0xe9, 0xea, 0xf2, 0xf3, 0xf4,
       0xf5, 0xf6, 0xf7, 0xf8, 0xf9, 0xfa}};
  return kSpec;
}

// Canonical decoder tables (T.81 F.2.2.3).
struct HuffmanDecoder {
  std::array<int32_t, 17> max_code{};
  std::array<int32_t, 17> val_offset{};
  std::array<int32_t, 17> min_code{};
  std::vector<uint8_t> symbols;
  bool defined = false;

  void Build(const HuffmanSpec& spec) {
    symbols = spec.symbols;
    int32_t code = 0;
    int32_t k = 0;
    for (int len = 1; len <= 16; ++len) {
      const int n = spec.counts[len - 1];
      if (n == 0) {
        max_code[len] = -1;
      } else {
        val_offset[len] = k;
        min_code[len] = code;
        code += n;
        k += n;
        max_code[len] = code - 1;
      }
      code <<= 1;
    }
    defined = true;
  }
};

struct HuffmanEncoder {
  std::array<uint16_t, 256> code{};
  std::array<uint8_t, 256> length{};

  explicit HuffmanEncoder(const HuffmanSpec& spec) {
    uint16_t c = 0;
    size_t k = 0;
    for (int len = 1; len <= 16; ++len) {
      for (int i = 0; i < spec.counts[len - 1]; ++i) {
        code[spec.symbols[k]] = c++;
        length[spec.symbols[k]] = static_cast<uint8_t>(len);
        ++k;
      }
      c <<= 1;
    }
  }
};

std::string MarkerName(uint8_t m) {
  switch (m) {
    case 0xC2:
      return "SOF2 (progressive DCT)";
    case 0xC3:
      return "SOF3 (lossless)";
    case 0xC5:
      return "SOF5 (differential sequential)";
    case 0xC6:
      return "SOF6 (differential progressive)";
    case 0xC7:
      return "SOF7 (differential lossless)";
    case 0xC9:
      return "SOF9 (arithmetic sequential)";
    case 0xCA:
      return "SOF10 (arithmetic progressive)";
    case 0xCB:
      return "SOF11 (arithmetic lossless)";
    case 0xCD:
      return "SOF13 (arithmetic differential sequential)";
    case 0xCE:
      return "SOF14 (arithmetic differential progressive)";
    case 0xCF:
      return "SOF15 (arithmetic differential lossless)";
    case kDac:
      return "DAC (arithmetic coding conditioning)";
    case 0xDE:
      return "DHP (hierarchical progression)";
    case 0xDC:
      return "DNL (define number of lines)";
    default: {
      char buf[8];
      std::snprintf(buf, sizeof(buf), "0x%02X", m);
      return std::string("marker ") + buf;
    }
  }
}

struct FrameComponent {
  uint8_t id = 0;
  int h = 1;
  int v = 1;
  int table_index = 0;
  int dc_table = 0;
  int ac_table = 0;
  int pred = 0;
};

class Parser {
 public:
  explicit Parser(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  CompressedImage Run() {
    if (bytes_.size() < 2 || bytes_[0] != 0xFF || bytes_[1] != kSoi) {
      throw ParseError(0, "missing SOI marker");
    }
    pos_ = 2;
    bool saw_eoi = false;
    while (!saw_eoi) {
      const uint8_t marker = NextMarker();
      switch (marker) {
        case kEoi:
          saw_eoi = true;
          break;
        case kDqt:
          ReadDqt();
          break;
        case kDht:
          ReadDht();
          break;
        case kSof0:
        case kSof1:
          ReadSof();
          break;
        case kDri:
          ReadDri();
          break;
        case kSos:
          ReadScan();
          break;
        case 0xC2: case 0xC3: case 0xC5: case 0xC6: case 0xC7: case 0xC9:
        case 0xCA: case 0xCB: case 0xCD: case 0xCE: case 0xCF: case kDac:
        case 0xDE: case 0xDC:
          Fail(ErrorCode::kUnsupportedFormat,
               "unsupported JPEG feature: " + MarkerName(marker));
        default:
          if ((marker >= 0xE0 && marker <= 0xEF) || marker == 0xFE ||
              marker == 0xDF) {
            SkipSegment();
          } else if (marker >= kRst0 && marker <= kRst0 + 7) {
            throw ParseError(pos_ - 2, "unexpected restart marker");
          } else {
            throw ParseError(pos_ - 2,
                             "unexpected " + MarkerName(marker));
          }
      }
    }
    if (!frame_seen_) throw ParseError(pos_, "no frame header before EOI");
    if (scans_ == 0) throw ParseError(pos_, "no scan before EOI");
    return std::move(code_);
  }

 private:
  uint8_t Byte() {
    if (pos_ >= bytes_.size()) throw ParseError(pos_, "truncated stream");
    return bytes_[pos_++];
  }

  int Word() {
    const int hi = Byte();
    return (hi << 8) | Byte();
  }

  uint8_t NextMarker() {
    if (Byte() != 0xFF) throw ParseError(pos_ - 1, "expected marker");
    uint8_t m = Byte();
    while (m == 0xFF) m = Byte();
    return m;
  }

  // Returns the end offset of the segment whose length field is at pos_.
  size_t SegmentEnd() {
    const size_t start = pos_;
    const int len = Word();
    if (len < 2 || start + len > bytes_.size()) {
      throw ParseError(start, "segment length exceeds stream");
    }
    return start + len;
  }

  void SkipSegment() { pos_ = SegmentEnd(); }

  void ReadDqt() {
    const size_t end = SegmentEnd();
    while (pos_ < end) {
      const uint8_t pq_tq = Byte();
      const int precision = pq_tq >> 4;
      const int id = pq_tq & 15;
      if (id > 3 || precision > 1) {
        throw ParseError(pos_ - 1, "bad DQT table header");
      }
      QuantTable t;
      for (int i = 0; i < 64; ++i) {
        const int v = precision == 0 ? Byte() : Word();
        if (v == 0) throw ParseError(pos_ - 1, "zero quantization step");
        if (v > 255) {
          Fail(ErrorCode::kUnsupportedFormat,
               "quantization steps above 255 are not baseline");
        }
        t.steps[kZigzagToNatural[i]] = static_cast<uint16_t>(v);
      }
      qtables_[id] = t;
    }
    if (pos_ != end) throw ParseError(pos_, "DQT length mismatch");
  }

  void ReadDht() {
    const size_t end = SegmentEnd();
    while (pos_ < end) {
      const uint8_t tc_th = Byte();
      const int cls = tc_th >> 4;
      const int id = tc_th & 15;
      if (cls > 1 || id > 3) throw ParseError(pos_ - 1, "bad DHT header");
      HuffmanSpec spec;
      int total = 0;
      for (int i = 0; i < 16; ++i) {
        spec.counts[i] = Byte();
        total += spec.counts[i];
      }
      if (total > 256) throw ParseError(pos_, "too many Huffman symbols");
      for (int i = 0; i < total; ++i) spec.symbols.push_back(Byte());
      (cls == 0 ? dc_[id] : ac_[id]).Build(spec);
    }
    if (pos_ != end) throw ParseError(pos_, "DHT length mismatch");
  }

  void ReadDri() {
    const size_t end = SegmentEnd();
    restart_interval_ = Word();
    if (pos_ != end) throw ParseError(pos_, "DRI length mismatch");
  }

  void ReadSof() {
    if (frame_seen_) throw ParseError(pos_, "multiple frame headers");
    const size_t end = SegmentEnd();
    const int precision = Byte();
    if (precision != 8) {
      Fail(ErrorCode::kUnsupportedFormat,
           std::to_string(precision) + "-bit samples are not supported");
    }
    const int height = Word();
    const int width = Word();
    if (height == 0) {
      Fail(ErrorCode::kUnsupportedFormat, "DNL-defined height is unsupported");
    }
    if (width == 0) throw ParseError(pos_ - 2, "zero image width");
    const int nf = Byte();
    if (nf != 1 && nf != 3) {
      Fail(ErrorCode::kUnsupportedFormat,
           std::to_string(nf) + "-component images are not supported");
    }
    for (int i = 0; i < nf; ++i) {
      FrameComponent c;
      c.id = Byte();
      const uint8_t hv = Byte();
      c.h = hv >> 4;
      c.v = hv & 15;
      c.table_index = Byte();
      if (c.h < 1 || c.h > 4 || c.v < 1 || c.v > 4 || c.table_index > 3) {
        throw ParseError(pos_ - 1, "bad frame component");
      }
      components_.push_back(c);
    }
    if (pos_ != end) throw ParseError(pos_, "SOF length mismatch");

    Sampling sampling = Sampling::k444;
    if (nf == 1) {
      components_[0].h = components_[0].v = 1;
    } else {
      const auto& y = components_[0];
      const auto& cb = components_[1];
      const auto& cr = components_[2];
      const bool chroma_unit =
          cb.h == 1 && cb.v == 1 && cr.h == 1 && cr.v == 1;
      if (chroma_unit && y.h == 2 && y.v == 2) {
        sampling = Sampling::k420;
      } else if (chroma_unit && y.h == 1 && y.v == 1) {
        sampling = Sampling::k444;
      } else {
        Fail(ErrorCode::kUnsupportedFormat,
             "only 4:4:4 and 4:2:0 chroma sampling are supported");
      }
    }
    code_ = MakeEmptyCode(width, height, nf, sampling, QuantTable{},
                          QuantTable{});
    h_max_ = nf == 3 && sampling == Sampling::k420 ? 2 : 1;
    frame_seen_ = true;
  }

  void BindTables() {
    for (size_t i = 0; i < components_.size(); ++i) {
      const auto& t = qtables_[components_[i].table_index];
      if (!t) {
        throw ParseError(pos_, "scan references an undefined quantization table");
      }
      code_.planes[i].table = *t;
    }
  }

  // --- entropy-coded segment ---

  int ReadBit() {
    if (bit_count_ == 0) {
      if (pos_ >= bytes_.size()) {
        throw ParseError(pos_, "truncated entropy-coded segment");
      }
      uint8_t b = bytes_[pos_];
      if (b == 0xFF) {
        if (pos_ + 1 >= bytes_.size()) {
          throw ParseError(pos_, "truncated entropy-coded segment");
        }
        const uint8_t next = bytes_[pos_ + 1];
        if (next != 0x00) {
          throw ParseError(pos_, "premature marker in entropy-coded segment");
        }
        pos_ += 2;
      } else {
        ++pos_;
      }
      bit_buffer_ = b;
      bit_count_ = 8;
    }
    --bit_count_;
    return (bit_buffer_ >> bit_count_) & 1;
  }

  int ReceiveExtend(int s) {
    if (s == 0) return 0;
    int v = 0;
    for (int i = 0; i < s; ++i) v = (v << 1) | ReadBit();
    if (v < (1 << (s - 1))) v += (-1 << s) + 1;
    return v;
  }

  int DecodeSymbol(const HuffmanDecoder& d) {
    int32_t code = ReadBit();
    for (int len = 1; len <= 16; ++len) {
      if (d.max_code[len] >= 0 && code <= d.max_code[len]) {
        const int idx = d.val_offset[len] + code - d.min_code[len];
        if (idx < 0 || idx >= static_cast<int>(d.symbols.size())) break;
        return d.symbols[idx];
      }
      code = (code << 1) | ReadBit();
    }
    throw ParseError(pos_, "invalid Huffman code");
  }

  void DecodeBlock(FrameComponent& c, std::span<int32_t> out) {
    const HuffmanDecoder& dc = dc_[c.dc_table];
    const HuffmanDecoder& ac = ac_[c.ac_table];
    const int s = DecodeSymbol(dc);
    if (s > 11) throw ParseError(pos_, "DC magnitude category out of range");
    c.pred += ReceiveExtend(s);
    out[0] = c.pred;
    for (int k = 1; k < 64;) {
      const int rs = DecodeSymbol(ac);
      const int r = rs >> 4;
      const int size = rs & 15;
      if (size == 0) {
        if (r != 15) break;
        k += 16;
        continue;
      }
      k += r;
      if (k > 63) throw ParseError(pos_, "AC coefficient index overflow");
      out[kZigzagToNatural[k]] = ReceiveExtend(size);
      ++k;
    }
  }

  void ProcessRestart(int expected) {
    bit_count_ = 0;
    if (pos_ + 1 >= bytes_.size() || bytes_[pos_] != 0xFF) {
      throw ParseError(pos_, "missing restart marker");
    }
    size_t p = pos_ + 1;
    while (p < bytes_.size() && bytes_[p] == 0xFF) ++p;
    if (p >= bytes_.size() || bytes_[p] != kRst0 + expected) {
      throw ParseError(pos_, "missing or out-of-order restart marker");
    }
    pos_ = p + 1;
    for (auto& c : components_) c.pred = 0;
  }

  void ReadScan() {
    if (!frame_seen_) throw ParseError(pos_, "scan before frame header");
    BindTables();
    const size_t end = SegmentEnd();
    const int ns = Byte();
    if (ns < 1 || ns > static_cast<int>(components_.size())) {
      throw ParseError(pos_ - 1, "bad scan component count");
    }
    std::vector<int> scan;
    for (int i = 0; i < ns; ++i) {
      const uint8_t id = Byte();
      const uint8_t tables = Byte();
      int index = -1;
      for (size_t k = 0; k < components_.size(); ++k) {
        if (components_[k].id == id) index = static_cast<int>(k);
      }
      if (index < 0) throw ParseError(pos_ - 2, "scan names unknown component");
      components_[index].dc_table = tables >> 4;
      components_[index].ac_table = tables & 15;
      if (components_[index].dc_table > 3 || components_[index].ac_table > 3 ||
          !dc_[components_[index].dc_table].defined ||
          !ac_[components_[index].ac_table].defined) {
        throw ParseError(pos_ - 1, "scan references an undefined Huffman table");
      }
      scan.push_back(index);
    }
    const int ss = Byte();
    const int se = Byte();
    const int ah_al = Byte();
    if (ss != 0 || se != 63 || ah_al != 0) {
      Fail(ErrorCode::kUnsupportedFormat,
           "spectral selection or successive approximation in a sequential "
           "scan");
    }
    if (pos_ != end) throw ParseError(pos_, "SOS length mismatch");

    for (auto& c : components_) c.pred = 0;
    bit_count_ = 0;
    const int width = code_.width;
    const int height = code_.height;
    int mcu_rows, mcu_cols;
    if (ns == 1) {
      const FrameComponent& c = components_[scan[0]];
      const int comp_w = (width * c.h + h_max_ - 1) / h_max_;
      const int comp_h = (height * c.v + h_max_ - 1) / h_max_;
      mcu_cols = (comp_w + 7) / 8;
      mcu_rows = (comp_h + 7) / 8;
    } else {
      mcu_cols = (width + 8 * h_max_ - 1) / (8 * h_max_);
      mcu_rows = (height + 8 * h_max_ - 1) / (8 * h_max_);
    }
    const int total = mcu_rows * mcu_cols;
    int restarts = 0;
    for (int m = 0; m < total; ++m) {
      if (restart_interval_ > 0 && m > 0 && m % restart_interval_ == 0) {
        ProcessRestart(restarts % 8);
        ++restarts;
      }
      const int my = m / mcu_cols;
      const int mx = m % mcu_cols;
      for (int index : scan) {
        FrameComponent& c = components_[index];
        QuantizedPlane& plane = code_.planes[index];
        const int bh = ns == 1 ? 1 : c.h;
        const int bv = ns == 1 ? 1 : c.v;
        for (int v = 0; v < bv; ++v) {
          for (int h = 0; h < bh; ++h) {
            const int row = my * bv + v;
            const int col = mx * bh + h;
            if (row >= plane.block_rows || col >= plane.block_cols) {
              throw ParseError(pos_, "scan exceeds component block grid");
            }
            auto blk = plane.block(row * plane.block_cols + col);
            std::fill(blk.begin(), blk.end(), 0);
            DecodeBlock(c, blk);
          }
        }
      }
    }
    bit_count_ = 0;
    ++scans_;
  }

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
  std::array<std::optional<QuantTable>, 4> qtables_;
  std::array<HuffmanDecoder, 4> dc_;
  std::array<HuffmanDecoder, 4> ac_;
  std::vector<FrameComponent> components_;
  CompressedImage code_;
  bool frame_seen_ = false;
  int h_max_ = 1;
  int restart_interval_ = 0;
  int scans_ = 0;
  uint32_t bit_buffer_ = 0;
  int bit_count_ = 0;
};

class BitWriter {
 public:
  explicit BitWriter(std::vector<uint8_t>* out) : out_(out) {}

  void Put(uint32_t bits, int count) {
    for (int i = count - 1; i >= 0; --i) {
      acc_ = static_cast<uint8_t>((acc_ << 1) | ((bits >> i) & 1));
      if (++n_ == 8) Emit();
    }
  }

  void Flush() {
    while (n_ != 0) {
      acc_ = static_cast<uint8_t>((acc_ << 1) | 1);
      if (++n_ == 8) Emit();
    }
  }

 private:
  void Emit() {
    out_->push_back(acc_);
    if (acc_ == 0xFF) out_->push_back(0x00);
    acc_ = 0;
    n_ = 0;
  }

  std::vector<uint8_t>* out_;
  uint8_t acc_ = 0;
  int n_ = 0;
};

int MagnitudeCategory(int v) {
  int a = std::abs(v);
  int s = 0;
  while (a > 0) {
    a >>= 1;
    ++s;
  }
  return s;
}

void PutValue(BitWriter& w, int v, int s) {
  if (s == 0) return;
  const int bits = v >= 0 ? v : v + (1 << s) - 1;
  w.Put(static_cast<uint32_t>(bits), s);
}

void EncodeBlock(BitWriter& w, std::span<const int32_t> blk, int& pred,
                 const HuffmanEncoder& dc, const HuffmanEncoder& ac) {
  const int diff = blk[0] - pred;
  pred = blk[0];
  if (std::abs(diff) > 2047) {
    Fail(ErrorCode::kInvalidArgument,
         "DC difference " + std::to_string(diff) + " exceeds baseline range");
  }
  const int s = MagnitudeCategory(diff);
  w.Put(dc.code[s], dc.length[s]);
  PutValue(w, diff, s);
  int run = 0;
  for (int k = 1; k < 64; ++k) {
    const int v = blk[kZigzagToNatural[k]];
    if (v == 0) {
      ++run;
      continue;
    }
    if (std::abs(v) > 1023) {
      Fail(ErrorCode::kInvalidArgument,
           "AC coefficient " + std::to_string(v) + " exceeds baseline range");
    }
    while (run > 15) {
      w.Put(ac.code[0xF0], ac.length[0xF0]);
      run -= 16;
    }
    const int size = MagnitudeCategory(v);
    const int rs = (run << 4) | size;
    w.Put(ac.code[rs], ac.length[rs]);
    PutValue(w, v, size);
    run = 0;
  }
  if (run > 0) w.Put(ac.code[0x00], ac.length[0x00]);
}

void PutWord(std::vector<uint8_t>& out, int v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v & 0xFF));
}

void PutMarker(std::vector<uint8_t>& out, uint8_t m) {
  out.push_back(0xFF);
  out.push_back(m);
}

void PutDht(std::vector<uint8_t>& out, int cls, int id,
            const HuffmanSpec& spec) {
  PutMarker(out, kDht);
  PutWord(out, 2 + 1 + 16 + static_cast<int>(spec.symbols.size()));
  out.push_back(static_cast<uint8_t>((cls << 4) | id));
  out.insert(out.end(), spec.counts.begin(), spec.counts.end());
  out.insert(out.end(), spec.symbols.begin(), spec.symbols.end());
}

}  // namespace

CompressedImage ParseJfif(std::span<const uint8_t> bytes) {
  return Parser(bytes).Run();
}

std::vector<uint8_t> SerializeJfif(const CompressedImage& code) {
  code.Validate();
  if (code.width > 65535 || code.height > 65535) {
    Fail(ErrorCode::kInvalidArgument, "image too large for a JPEG frame");
  }
  std::vector<uint8_t> out;
  PutMarker(out, kSoi);

  // APP0 JFIF 1.01, 1:1 aspect, no thumbnail.
  PutMarker(out, 0xE0);
  PutWord(out, 16);
  for (char ch : std::string("JFIF")) out.push_back(static_cast<uint8_t>(ch));
  out.insert(out.end(), {0x00, 0x01, 0x01, 0x00, 0x00, 0x01, 0x00, 0x01, 0x00,
                         0x00});

  // Distinct tables get their own slot.
  std::vector<QuantTable> tables;
  std::vector<int> table_of_plane;
  for (const QuantizedPlane& p : code.planes) {
    int id = -1;
    for (size_t i = 0; i < tables.size(); ++i) {
      if (tables[i] == p.table) id = static_cast<int>(i);
    }
    if (id < 0) {
      id = static_cast<int>(tables.size());
      tables.push_back(p.table);
    }
    table_of_plane.push_back(id);
  }
  for (size_t i = 0; i < tables.size(); ++i) {
    PutMarker(out, kDqt);
    PutWord(out, 2 + 65);
    out.push_back(static_cast<uint8_t>(i));
    for (int k = 0; k < 64; ++k) {
      out.push_back(static_cast<uint8_t>(tables[i].steps[kZigzagToNatural[k]]));
    }
  }

  const int nf = static_cast<int>(code.planes.size());
  PutMarker(out, kSof0);
  PutWord(out, 8 + 3 * nf);
  out.push_back(8);
  PutWord(out, code.height);
  PutWord(out, code.width);
  out.push_back(static_cast<uint8_t>(nf));
  for (int p = 0; p < nf; ++p) {
    out.push_back(static_cast<uint8_t>(p + 1));
    const bool big = p == 0 && nf == 3 && code.sampling == Sampling::k420;
    out.push_back(big ? 0x22 : 0x11);
    out.push_back(static_cast<uint8_t>(table_of_plane[p]));
  }

  PutDht(out, 0, 0, StdDcLuma());
  PutDht(out, 1, 0, StdAcLuma());
  if (nf == 3) {
    PutDht(out, 0, 1, StdDcChroma());
    PutDht(out, 1, 1, StdAcChroma());
  }

  PutMarker(out, kSos);
  PutWord(out, 6 + 2 * nf);
  out.push_back(static_cast<uint8_t>(nf));
  for (int p = 0; p < nf; ++p) {
    out.push_back(static_cast<uint8_t>(p + 1));
    out.push_back(p == 0 ? 0x00 : 0x11);
  }
  out.push_back(0);
  out.push_back(63);
  out.push_back(0);

  const HuffmanEncoder dc_luma(StdDcLuma());
  const HuffmanEncoder ac_luma(StdAcLuma());
  const HuffmanEncoder dc_chroma(StdDcChroma());
  const HuffmanEncoder ac_chroma(StdAcChroma());
  BitWriter w(&out);
  std::vector<int> pred(nf, 0);
  const int per_mcu = nf == 3 && code.sampling == Sampling::k420 ? 2 : 1;
  const QuantizedPlane& luma = code.planes[0];
  const int mcu_rows = luma.block_rows / per_mcu;
  const int mcu_cols = luma.block_cols / per_mcu;
  for (int my = 0; my < mcu_rows; ++my) {
    for (int mx = 0; mx < mcu_cols; ++mx) {
      for (int v = 0; v < per_mcu; ++v) {
        for (int h = 0; h < per_mcu; ++h) {
          const int row = my * per_mcu + v;
          const int col = mx * per_mcu + h;
          EncodeBlock(w, luma.block(row * luma.block_cols + col), pred[0],
                      dc_luma, ac_luma);
        }
      }
      for (int p = 1; p < nf; ++p) {
        const QuantizedPlane& c = code.planes[p];
        EncodeBlock(w, c.block(my * c.block_cols + mx), pred[p], dc_chroma,
                    ac_chroma);
      }
    }
  }
  w.Flush();
  PutMarker(out, kEoi);
  return out;
}

}  // namespace ejpeg
