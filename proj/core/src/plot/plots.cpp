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

#include "thermofoot/plot/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>

#include "thermofoot/errors.hpp"
#include "thermofoot/imgproc.hpp"
#include "thermofoot/io/image_io.hpp"

namespace thermo::plot {
namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

const char* kPalette[] = {"#d95f02", "#1b9e77", "#7570b3", "#e7298a",
                          "#66a61e", "#e6ab02"};

struct Svg {
  std::string body;
  double width, height;
  Svg(double w, double h) : width(w), height(h) {}
  void line(double x1, double y1, double x2, double y2, const char* color,
            double sw = 1.0) {
    body += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" +
            num(x2) + "\" y2=\"" + num(y2) + "\" stroke=\"" + color +
            "\" stroke-width=\"" + num(sw) + "\"/>\n";
  }
  void circle(double cx, double cy, double r, const char* color) {
    body += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" +
            num(r) + "\" fill=\"" + color + "\"/>\n";
  }
  void text(double x, double y, const std::string& s, int size = 12) {
    body += "<text x=\"" + num(x) + "\" y=\"" + num(y) +
            "\" font-family=\"sans-serif\" font-size=\"" +
            std::to_string(size) + "\">" + s + "</text>\n";
  }
  void save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width)
        << "\" height=\"" << num(height) << "\" viewBox=\"0 0 " << num(width)
        << " " << num(height) << "\">\n<rect width=\"100%\" height=\"100%\" "
        << "fill=\"white\"/>\n"
        << body << "</svg>\n";
  }
};

// Cold-to-hot colormap (dark blue -> red -> yellow), u in [0,1].
void colormap(double u, std::uint8_t& r, std::uint8_t& g, std::uint8_t& b) {
  u = std::clamp(u, 0.0, 1.0);
  const double rr = std::clamp(1.5 * u - 0.25, 0.0, 1.0);
  const double gg = std::clamp(1.5 * u - 0.6, 0.0, 1.0) * 0.9;
  const double bb = std::clamp(0.9 - 1.6 * u, 0.0, 1.0);
  r = static_cast<std::uint8_t>(255.0 * rr);
  g = static_cast<std::uint8_t>(255.0 * gg);
  b = static_cast<std::uint8_t>(255.0 * bb);
}

}  // namespace

void write_dendrogram_svg(const std::string& path,
                          const cluster::LinkageTree& tree) {
  const int n = tree.n_leaves;
  const double width = std::max(400.0, 12.0 * n + 80.0);
  const double height = 400.0;
  const double left = 40.0, right = width - 20.0, top = 30.0, bottom = height - 40.0;

  // Leaf order: left-to-right traversal of the merge tree.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  std::function<void(int)> visit = [&](int node) {
    if (node < n) {
      order.push_back(node);
      return;
    }
    const auto& m = tree.merges[static_cast<std::size_t>(node - n)];
    visit(m.a);
    visit(m.b);
  };
  visit(n + static_cast<int>(tree.merges.size()) - 1);

  std::vector<double> leaf_x(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < order.size(); ++i)
    leaf_x[static_cast<std::size_t>(order[i])] =
        left + (right - left) * (static_cast<double>(i) + 0.5) / n;

  double max_h = 0.0;
  for (const auto& m : tree.merges) max_h = std::max(max_h, m.height);
  if (max_h <= 0.0) max_h = 1.0;
  auto y_of = [&](double h) { return bottom - (bottom - top) * (h / max_h); };

  Svg svg(width, height);
  std::vector<double> node_x(static_cast<std::size_t>(2 * n - 1));
  std::vector<double> node_h(static_cast<std::size_t>(2 * n - 1), 0.0);
  for (int i = 0; i < n; ++i) node_x[static_cast<std::size_t>(i)] = leaf_x[i];
  for (std::size_t t = 0; t < tree.merges.size(); ++t) {
    const auto& m = tree.merges[t];
    const double xa = node_x[static_cast<std::size_t>(m.a)];
    const double xb = node_x[static_cast<std::size_t>(m.b)];
    const double ya = y_of(node_h[static_cast<std::size_t>(m.a)]);
    const double yb = y_of(node_h[static_cast<std::size_t>(m.b)]);
    const double ym = y_of(m.height);
    svg.line(xa, ya, xa, ym, "#333333");
    svg.line(xb, yb, xb, ym, "#333333");
    svg.line(xa, ym, xb, ym, "#333333");
    node_x[static_cast<std::size_t>(n) + t] = 0.5 * (xa + xb);
    node_h[static_cast<std::size_t>(n) + t] = m.height;
  }
  svg.line(left, bottom, right, bottom, "#000000");
  svg.text(left, 18, "Ward linkage dendrogram");
  svg.text(left, bottom + 24, "participants");
  svg.save(path);
}

void write_elbow_svg(const std::string& path,
                     const std::vector<std::pair<int, double>>& curve,
                     int chosen_k) {
  const double width = 480.0, height = 360.0;
  const double left = 60.0, right = width - 20.0, top = 30.0, bottom = height - 50.0;
  int k_max = 1;
  for (const auto& [k, v] : curve) k_max = std::max(k_max, k);
  auto x_of = [&](double k) {
    return left + (right - left) * (k - 1.0) / std::max(1, k_max - 1);
  };
  auto y_of = [&](double v) { return bottom - (bottom - top) * v; };

  Svg svg(width, height);
  svg.line(left, bottom, right, bottom, "#000000");
  svg.line(left, bottom, left, top, "#000000");
  for (std::size_t i = 1; i < curve.size(); ++i) {
    svg.line(x_of(curve[i - 1].first), y_of(curve[i - 1].second),
             x_of(curve[i].first), y_of(curve[i].second), "#1b9e77", 2.0);
  }
  for (const auto& [k, v] : curve) {
    svg.circle(x_of(k), y_of(v), 3.5, k == chosen_k ? "#d95f02" : "#1b9e77");
    svg.text(x_of(k) - 4, bottom + 18, std::to_string(k));
  }
  svg.text(left, 18, "Explained variance vs number of clusters (elbow at k=" +
                         std::to_string(chosen_k) + ")");
  svg.text(10, top + 6, "1.0", 10);
  svg.text(10, bottom + 4, "0.0", 10);
  svg.save(path);
}

void write_scatter_svg(const std::string& path, const Eigen::MatrixX2d& xy,
                       const std::vector<int>& labels) {
  const double width = 520.0, height = 480.0;
  const double left = 40.0, right = width - 20.0, top = 40.0, bottom = height - 30.0;
  double xmin = xy.col(0).minCoeff(), xmax = xy.col(0).maxCoeff();
  double ymin = xy.col(1).minCoeff(), ymax = xy.col(1).maxCoeff();
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;

  Svg svg(width, height);
  std::map<int, const char*> color;
  int next = 0;
  for (int l : labels)
    if (!color.count(l)) color[l] = kPalette[next++ % 6];
  for (Eigen::Index i = 0; i < xy.rows(); ++i) {
    const double px = left + (right - left) * (xy(i, 0) - xmin) / (xmax - xmin);
    const double py = bottom - (bottom - top) * (xy(i, 1) - ymin) / (ymax - ymin);
    svg.circle(px, py, 3.0, color[labels[static_cast<std::size_t>(i)]]);
  }
  svg.text(left, 20, "t-SNE embedding of thermography representations");
  double lx = left;
  for (const auto& [lab, col] : color) {
    svg.circle(lx + 5, 32, 4.0, col);
    svg.text(lx + 14, 36, "cluster " + std::to_string(lab), 11);
    lx += 90.0;
  }
  svg.save(path);
}

void write_exemplar_grid_png(
    const std::string& path,
    const std::vector<std::vector<const SegmentedThermal*>>& per_cluster,
    int thumb_side) {
  std::size_t cols = 0;
  for (const auto& row : per_cluster) cols = std::max(cols, row.size());
  if (cols == 0 || per_cluster.empty())
    throw EmptyRegion("exemplar grid has no images");
  const int pad = 4;
  const int rows = static_cast<int>(per_cluster.size());
  VisualImage canvas;
  canvas.height = rows * (thumb_side + pad) + pad;
  canvas.width = static_cast<int>(cols) * (thumb_side + pad) + pad;
  canvas.pixels.assign(static_cast<std::size_t>(canvas.height) * canvas.width * 3, 20);

  for (int cr = 0; cr < rows; ++cr) {
    for (std::size_t cc = 0; cc < per_cluster[static_cast<std::size_t>(cr)].size(); ++cc) {
      const SegmentedThermal* seg = per_cluster[static_cast<std::size_t>(cr)][cc];
      // Window each thumbnail to its own foot-temperature range.
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t i = 0; i < seg->values.size(); ++i) {
        if (!seg->mask.values[i]) continue;
        lo = std::min(lo, static_cast<double>(seg->values[i]));
        hi = std::max(hi, static_cast<double>(seg->values[i]));
      }
      if (!(hi > lo)) hi = lo + 1.0;
      imgproc::FloatPlane plane;
      plane.height = seg->height;
      plane.width = seg->width;
      plane.values.resize(seg->values.size());
      for (std::size_t i = 0; i < seg->values.size(); ++i)
        plane.values[i] = seg->mask.values[i]
                              ? static_cast<float>((seg->values[i] - lo) / (hi - lo))
                              : -1.0f;
      plane = imgproc::pad_to_square(plane, -1.0f);
      plane = imgproc::resize_bilinear(plane, thumb_side, thumb_side);
      const int oy = pad + cr * (thumb_side + pad);
      const int ox = pad + static_cast<int>(cc) * (thumb_side + pad);
      for (int r = 0; r < thumb_side; ++r) {
        for (int c = 0; c < thumb_side; ++c) {
          std::uint8_t rr = 15, gg = 15, bb = 25;
          const float u = plane.at(r, c);
          if (u >= -0.25f) colormap(u, rr, gg, bb);
          canvas.at(oy + r, ox + c, 0) = rr;
          canvas.at(oy + r, ox + c, 1) = gg;
          canvas.at(oy + r, ox + c, 2) = bb;
        }
      }
    }
  }
  io::write_png_rgb(path, canvas);
}

}  // namespace thermo::plot
