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

#include "thermofoot/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace thermo::imgproc {

FloatPlane pad_to_square(const FloatPlane& in, float fill) {
  const int side = std::max(in.height, in.width);
  FloatPlane out;
  out.height = out.width = side;
  out.values.assign(static_cast<std::size_t>(side) * side, fill);
  const int top = (side - in.height) / 2;
  const int left = (side - in.width) / 2;
  for (int r = 0; r < in.height; ++r)
    for (int c = 0; c < in.width; ++c) out.at(r + top, c + left) = in.at(r, c);
  return out;
}

BinaryMask pad_to_square(const BinaryMask& in) {
  const int side = std::max(in.height, in.width);
  BinaryMask out;
  out.height = out.width = side;
  out.values.assign(static_cast<std::size_t>(side) * side, 0);
  const int top = (side - in.height) / 2;
  const int left = (side - in.width) / 2;
  for (int r = 0; r < in.height; ++r)
    for (int c = 0; c < in.width; ++c) out.at(r + top, c + left) = in.at(r, c);
  return out;
}

FloatPlane resize_bilinear(const FloatPlane& in, int out_h, int out_w) {
  FloatPlane out;
  out.height = out_h;
  out.width = out_w;
  out.values.resize(static_cast<std::size_t>(out_h) * out_w);
  if (in.height == out_h && in.width == out_w) {
    out.values = in.values;
    return out;
  }
  const double sy = static_cast<double>(in.height) / out_h;
  const double sx = static_cast<double>(in.width) / out_w;
  for (int r = 0; r < out_h; ++r) {
    const double fy = (r + 0.5) * sy - 0.5;
    const int y0 = static_cast<int>(std::floor(fy));
    const double wy = fy - y0;
    const int ya = std::clamp(y0, 0, in.height - 1);
    const int yb = std::clamp(y0 + 1, 0, in.height - 1);
    for (int c = 0; c < out_w; ++c) {
      const double fx = (c + 0.5) * sx - 0.5;
      const int x0 = static_cast<int>(std::floor(fx));
      const double wx = fx - x0;
      const int xa = std::clamp(x0, 0, in.width - 1);
      const int xb = std::clamp(x0 + 1, 0, in.width - 1);
      const double top = in.at(ya, xa) * (1.0 - wx) + in.at(ya, xb) * wx;
      const double bot = in.at(yb, xa) * (1.0 - wx) + in.at(yb, xb) * wx;
      out.at(r, c) = static_cast<float>(top * (1.0 - wy) + bot * wy);
    }
  }
  return out;
}

BinaryMask resize_nearest(const BinaryMask& in, int out_h, int out_w) {
  BinaryMask out;
  out.height = out_h;
  out.width = out_w;
  out.values.resize(static_cast<std::size_t>(out_h) * out_w);
  const double sy = static_cast<double>(in.height) / out_h;
  const double sx = static_cast<double>(in.width) / out_w;
  for (int r = 0; r < out_h; ++r) {
    const int y = std::clamp(static_cast<int>((r + 0.5) * sy), 0, in.height - 1);
    for (int c = 0; c < out_w; ++c) {
      const int x = std::clamp(static_cast<int>((c + 0.5) * sx), 0, in.width - 1);
      out.at(r, c) = in.at(y, x);
    }
  }
  return out;
}

BinaryMask restore_mask(const BinaryMask& square_mask, int orig_h, int orig_w) {
  const int side = std::max(orig_h, orig_w);
  BinaryMask sq = resize_nearest(square_mask, side, side);
  BinaryMask out;
  out.height = orig_h;
  out.width = orig_w;
  out.values.resize(static_cast<std::size_t>(orig_h) * orig_w);
  const int top = (side - orig_h) / 2;
  const int left = (side - orig_w) / 2;
  for (int r = 0; r < orig_h; ++r)
    for (int c = 0; c < orig_w; ++c) out.at(r, c) = sq.at(r + top, c + left);
  return out;
}

std::pair<std::vector<int>, int> connected_components(const BinaryMask& mask) {
  std::vector<int> labels(mask.values.size(), 0);
  int next = 0;
  for (int r = 0; r < mask.height; ++r) {
    for (int c = 0; c < mask.width; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * mask.width + c;
      if (!mask.values[idx] || labels[idx]) continue;
      ++next;
      std::queue<std::pair<int, int>> q;
      q.emplace(r, c);
      labels[idx] = next;
      while (!q.empty()) {
        auto [y, x] = q.front();
        q.pop();
        const int dy[] = {-1, 1, 0, 0};
        const int dx[] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
          const int ny = y + dy[k], nx = x + dx[k];
          if (ny < 0 || ny >= mask.height || nx < 0 || nx >= mask.width) continue;
          const std::size_t nidx = static_cast<std::size_t>(ny) * mask.width + nx;
          if (mask.values[nidx] && !labels[nidx]) {
            labels[nidx] = next;
            q.emplace(ny, nx);
          }
        }
      }
    }
  }
  return {std::move(labels), next};
}

}  // namespace thermo::imgproc
