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

// Offline oracle generator built on the system libjpeg. Produces the
// reference files committed under tests/reference; the test suite itself does
// not depend on libjpeg.
//
//   libjpeg_ref encode IN.pnm OUT.jpg QUALITY [progressive] [restart=N] [444]
//   libjpeg_ref dump IN.jpg OUT.coef
//   libjpeg_ref decode IN.jpg OUT.pnm
//
// decode uses the floating point IDCT and replicating (non-fancy) chroma
// upsampling.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <jpeglib.h>

#include "ejpeg/image_io.h"

namespace {

int Encode(int argc, char** argv) {
  if (argc < 5) return 2;
  const ejpeg::PixelImage image = ejpeg::ReadImageFile(argv[2]);
  const int quality = std::atoi(argv[4]);
  bool progressive = false;
  bool full_chroma = false;
  int restart = 0;
  for (int i = 5; i < argc; ++i) {
    const std::string opt = argv[i];
    if (opt == "progressive") progressive = true;
    if (opt == "444") full_chroma = true;
    if (opt.rfind("restart=", 0) == 0) restart = std::atoi(opt.c_str() + 8);
  }
  jpeg_compress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_compress(&cinfo);
  FILE* out = std::fopen(argv[3], "wb");
  if (!out) return 1;
  jpeg_stdio_dest(&cinfo, out);
  cinfo.image_width = image.width();
  cinfo.image_height = image.height();
  cinfo.input_components = image.channels();
  cinfo.in_color_space = image.channels() == 3 ? JCS_RGB : JCS_GRAYSCALE;
  jpeg_set_defaults(&cinfo);
  jpeg_set_quality(&cinfo, quality, TRUE);
  if (full_chroma && image.channels() == 3) {
    cinfo.comp_info[0].h_samp_factor = 1;
    cinfo.comp_info[0].v_samp_factor = 1;
  }
  if (progressive) jpeg_simple_progression(&cinfo);
  cinfo.restart_interval = restart;
  jpeg_start_compress(&cinfo, TRUE);
  std::vector<JSAMPLE> row(image.width() * image.channels());
  while (cinfo.next_scanline < cinfo.image_height) {
    const int y = cinfo.next_scanline;
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < image.channels(); ++c) {
        row[x * image.channels() + c] =
            static_cast<JSAMPLE>(image.at(c, x, y));
      }
    }
    JSAMPROW rows[1] = {row.data()};
    jpeg_write_scanlines(&cinfo, rows, 1);
  }
  jpeg_finish_compress(&cinfo);
  jpeg_destroy_compress(&cinfo);
  std::fclose(out);
  return 0;
}

int Dump(int argc, char** argv) {
  if (argc < 4) return 2;
  jpeg_decompress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_decompress(&cinfo);
  FILE* in = std::fopen(argv[2], "rb");
  if (!in) return 1;
  jpeg_stdio_src(&cinfo, in);
  jpeg_read_header(&cinfo, TRUE);
  jvirt_barray_ptr* arrays = jpeg_read_coefficients(&cinfo);
  std::ofstream out(argv[3]);
  out << "ejpeg-coef 1\n";
  out << "size " << cinfo.image_width << " " << cinfo.image_height << " "
      << cinfo.num_components << "\n";
  for (int ci = 0; ci < cinfo.num_components; ++ci) {
    jpeg_component_info* comp = &cinfo.comp_info[ci];
    // Interleaved scans code whole MCUs, so the grid is rounded up to the
    // sampling factors.
    const int rows = cinfo.num_components == 1
                         ? static_cast<int>(comp->height_in_blocks)
                         : (comp->height_in_blocks + comp->v_samp_factor - 1) /
                               comp->v_samp_factor * comp->v_samp_factor;
    const int cols = cinfo.num_components == 1
                         ? static_cast<int>(comp->width_in_blocks)
                         : (comp->width_in_blocks + comp->h_samp_factor - 1) /
                               comp->h_samp_factor * comp->h_samp_factor;
    out << "component " << ci << " " << comp->h_samp_factor << " "
        << comp->v_samp_factor << " " << rows << " " << cols << "\n";
    out << "table";
    for (int k = 0; k < 64; ++k) out << " " << comp->quant_table->quantval[k];
    out << "\n";
    for (int r = 0; r < rows; ++r) {
      JBLOCKARRAY blocks = (*cinfo.mem->access_virt_barray)(
          reinterpret_cast<j_common_ptr>(&cinfo), arrays[ci], r, 1, FALSE);
      for (int c = 0; c < cols; ++c) {
        for (int k = 0; k < 64; ++k) {
          out << (k ? " " : "") << blocks[0][c][k];
        }
        out << "\n";
      }
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  std::fclose(in);
  return 0;
}

int Decode(int argc, char** argv) {
  if (argc < 4) return 2;
  jpeg_decompress_struct cinfo;
  jpeg_error_mgr jerr;
  cinfo.err = jpeg_std_error(&jerr);
  jpeg_create_decompress(&cinfo);
  FILE* in = std::fopen(argv[2], "rb");
  if (!in) return 1;
  jpeg_stdio_src(&cinfo, in);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.dct_method = JDCT_FLOAT;
  cinfo.do_fancy_upsampling = FALSE;
  jpeg_start_decompress(&cinfo);
  const int w = cinfo.output_width;
  const int h = cinfo.output_height;
  const int nc = cinfo.output_components;
  ejpeg::PixelImage image(w, h, nc);
  std::vector<JSAMPLE> row(w * nc);
  while (cinfo.output_scanline < cinfo.output_height) {
    const int y = cinfo.output_scanline;
    JSAMPROW rows[1] = {row.data()};
    jpeg_read_scanlines(&cinfo, rows, 1);
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < nc; ++c) image.at(c, x, y) = row[x * nc + c];
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  std::fclose(in);
  ejpeg::WriteImageFile(argv[3], image);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc >= 2) {
    const std::string cmd = argv[1];
    if (cmd == "encode") return Encode(argc, argv);
    if (cmd == "dump") return Dump(argc, argv);
    if (cmd == "decode") return Decode(argc, argv);
  }
  std::fprintf(stderr,
               "usage: libjpeg_ref encode|dump|decode ... (see source)\n");
  return 2;
}
