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

#include <Eigen/Core>

#include <string>
#include <vector>

#include "thermofoot/cluster/cluster.hpp"
#include "thermofoot/types.hpp"

namespace thermo::plot {

/// Dendrogram of a linkage tree (SVG).
void write_dendrogram_svg(const std::string& path,
                          const cluster::LinkageTree& tree);

/// Explained-variance elbow curve with the chosen k marked (SVG).
void write_elbow_svg(const std::string& path,
                     const std::vector<std::pair<int, double>>& curve,
                     int chosen_k);

/// 2D embedding scatter colored by cluster label (SVG).
void write_scatter_svg(const std::string& path, const Eigen::MatrixX2d& xy,
                       const std::vector<int>& labels);

/// Grid of exemplar thermographs, one row per cluster, rendered through a
/// fixed cold-to-hot colormap (PNG).
void write_exemplar_grid_png(
    const std::string& path,
    const std::vector<std::vector<const SegmentedThermal*>>& per_cluster,
    int thumb_side = 112);

}  // namespace thermo::plot
