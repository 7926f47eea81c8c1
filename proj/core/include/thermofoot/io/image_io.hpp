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

#pragma once

#include <string>

#include "thermofoot/types.hpp"

namespace thermo::io {

/// PNG, 8-bit RGB. Grayscale/RGBA files are expanded/stripped to RGB on read.
VisualImage read_png_rgb(const std::string& path);
void write_png_rgb(const std::string& path, const VisualImage& img);

/// PNG, 8-bit single channel. Masks use foot=255, background=0 on disk; the
/// reader maps any nonzero byte to mask value 1.
BinaryMask read_mask_png(const std::string& path);
void write_mask_png(const std::string& path, const BinaryMask& mask);

/// Thermal grids. `.csv` holds one row of comma-separated Celsius values per
/// image row; any other extension is raw little-endian float32 (row-major)
/// with a JSON sidecar `<path>.json` carrying {"height":H,"width":W,
/// "units":"C"}. The loader auto-detects by extension.
ThermalGrid read_thermal(const std::string& path);
void write_thermal(const std::string& path, const ThermalGrid& grid);

/// Latent matrices: raw little-endian float32 row-major, JSON sidecar with
/// {"rows":N,"cols":D}, plus an id index CSV written next to the data file.
void write_float_matrix(const std::string& path, const float* data,
                        std::size_t rows, std::size_t cols);
std::pair<std::vector<float>, std::pair<std::size_t, std::size_t>>
read_float_matrix(const std::string& path);

}  // namespace thermo::io
