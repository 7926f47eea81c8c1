// Copyright 2026 The thermofoot Authors
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

#include "thermofoot/io/image_io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include <nlohmann/json.hpp>

#include "thermofoot/errors.hpp"
#include "thermofoot/io/csv.hpp"

namespace thermo::io {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

void read_png(const std::string& path, int target_channels, int& h, int& w,
              std::vector<std::uint8_t>& out) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw MissingFile("cannot open " + path);
  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  r.info = png_create_info_struct(r.png);
  if (setjmp(png_jmpbuf(r.png))) throw Error("png read failed: " + path);
  png_init_io(r.png, fp.get());
  png_read_info(r.png, r.info);

  png_set_strip_16(r.png);
  png_set_packing(r.png);
  png_set_strip_alpha(r.png);
  const int color = png_get_color_type(r.png, r.info);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (target_channels == 3 &&
      (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)) {
    png_set_gray_to_rgb(r.png);
  }
  if (target_channels == 1 &&
      (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
       color == PNG_COLOR_TYPE_PALETTE)) {
    png_set_rgb_to_gray_fixed(r.png, 1, -1, -1);
  }
  png_read_update_info(r.png, r.info);

  h = static_cast<int>(png_get_image_height(r.png, r.info));
  w = static_cast<int>(png_get_image_width(r.png, r.info));
  const std::size_t stride = png_get_rowbytes(r.png, r.info);
  if (stride != static_cast<std::size_t>(w) * target_channels)
    throw Error("unexpected png layout: " + path);
  out.assign(static_cast<std::size_t>(h) * stride, 0);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) rows[y] = out.data() + static_cast<std::size_t>(y) * stride;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
}

void write_png(const std::string& path, int channels, int h, int w,
               const std::uint8_t* data) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw Error("cannot write " + path);
  PngWriter wr;
  wr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  wr.info = png_create_info_struct(wr.png);
  if (setjmp(png_jmpbuf(wr.png))) throw Error("png write failed: " + path);
  png_init_io(wr.png, fp.get());
  png_set_IHDR(wr.png, wr.info, w, h, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wr.png, wr.info);
  const std::size_t stride = static_cast<std::size_t>(w) * channels;
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = const_cast<png_bytep>(data + static_cast<std::size_t>(y) * stride);
  png_write_image(wr.png, rows.data());
  png_write_end(wr.png, nullptr);
}

bool has_extension(const std::string& path, const char* ext) {
  const auto pos = path.rfind('.');
  if (pos == std::string::npos) return false;
  return path.substr(pos) == ext;
}

}  // namespace

VisualImage read_png_rgb(const std::string& path) {
  VisualImage img;
  read_png(path, 3, img.height, img.width, img.pixels);
  return img;
}

void write_png_rgb(const std::string& path, const VisualImage& img) {
  write_png(path, 3, img.height, img.width, img.pixels.data());
}

BinaryMask read_mask_png(const std::string& path) {
  BinaryMask m;
  std::vector<std::uint8_t> raw;
  read_png(path, 1, m.height, m.width, raw);
  m.values.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) m.values[i] = raw[i] ? 1 : 0;
  return m;
}

void write_mask_png(const std::string& path, const BinaryMask& mask) {
  std::vector<std::uint8_t> raw(mask.values.size());
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = mask.values[i] ? 255 : 0;
  write_png(path, 1, mask.height, mask.width, raw.data());
}

ThermalGrid read_thermal(const std::string& path) {
  ThermalGrid g;
  if (has_extension(path, ".csv")) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw SchemaMismatch("empty thermal csv: " + path);
    g.height = static_cast<int>(rows.size());
    g.width = static_cast<int>(rows[0].size());
    g.values.reserve(static_cast<std::size_t>(g.height) * g.width);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (static_cast<int>(rows[r].size()) != g.width)
        throw SchemaMismatch("ragged thermal csv row " + std::to_string(r + 1) +
                             " in " + path);
      for (const auto& cell : rows[r]) g.values.push_back(std::stof(cell));
    }
  } else {
    std::ifstream side(path + ".json");
    if (!side) throw MissingFile("missing thermal sidecar " + path + ".json");
    nlohmann::json meta = nlohmann::json::parse(side);
    g.height = meta.at("height").get<int>();
    g.width = meta.at("width").get<int>();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile("cannot open " + path);
    g.values.resize(static_cast<std::size_t>(g.height) * g.width);
    in.read(reinterpret_cast<char*>(g.values.data()),
            static_cast<std::streamsize>(g.values.size() * sizeof(float)));
    if (in.gcount() !=
        static_cast<std::streamsize>(g.values.size() * sizeof(float)))
      throw SchemaMismatch("short thermal raw file " + path);
  }
  return g;
}

void write_thermal(const std::string& path, const ThermalGrid& grid) {
  if (has_extension(path, ".csv")) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    for (int r = 0; r < grid.height; ++r) {
      for (int c = 0; c < grid.width; ++c) {
        if (c) out << ',';
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.6g", grid.at(r, c));
        out << buf;
      }
      out << '\n';
    }
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(grid.values.data()),
              static_cast<std::streamsize>(grid.values.size() * sizeof(float)));
    nlohmann::json meta;
    meta["height"] = grid.height;
    meta["width"] = grid.width;
    meta["units"] = "C";
    std::ofstream side(path + ".json", std::ios::binary);
    side << meta.dump(2) << '\n';
  }
}

void write_float_matrix(const std::string& path, const float* data,
                        std::size_t rows, std::size_t cols) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data),
            static_cast<std::streamsize>(rows * cols * sizeof(float)));
  nlohmann::json meta;
  meta["rows"] = rows;
  meta["cols"] = cols;
  std::ofstream side(path + ".json", std::ios::binary);
  side << meta.dump(2) << '\n';
}

std::pair<std::vector<float>, std::pair<std::size_t, std::size_t>>
read_float_matrix(const std::string& path) {
  std::ifstream side(path + ".json");
  if (!side) throw MissingFile("missing matrix sidecar " + path + ".json");
  nlohmann::json meta = nlohmann::json::parse(side);
  const auto rows = meta.at("rows").get<std::size_t>();
  const auto cols = meta.at("cols").get<std::size_t>();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot open " + path);
  std::vector<float> data(rows * cols);
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(data.size() * sizeof(float)))
    throw SchemaMismatch("short matrix file " + path);
  return {std::move(data), {rows, cols}};
}

}  // namespace thermo::io
