// SPDX-License-Identifier: Apache-2.0
//
// rislocate: RIS-aided mmWave localization simulator and sparse recovery toolkit
// Copyright (C) 2026 The rislocate authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace rislocate {

using Vec2 = Eigen::Vector2d;

// Propagation speed used throughout the simulator (m/s).
inline constexpr double kSpeedOfLight = 2.99792e8;

enum class Segment { BsRis, RisUe };

// Planar deployment. Scatterers listed under a segment create one extra
// single-bounce path on that segment each.
struct Scene {
    Vec2 bs{0.0, 0.0};
    Vec2 ris{2.5, 4.0};
    Vec2 ue{5.0, 3.0};
    std::vector<Vec2> scatterers_br{Vec2{1.0, 3.0}};
    std::vector<Vec2> scatterers_rm{Vec2{4.0, 2.0}};

    // Throws InvalidArgument when positions are non-finite, when BS/RIS/UE
    // coincide, or when a scatterer sits on one of its segment endpoints.
    void validate() const;

    // LoS path plus one path per scatterer.
    std::size_t path_count(Segment segment) const;
};

// Geometry of one path. Angles are measured from the global +x axis in
// (-pi, pi]: the departure angle points from the transmit array along the
// first hop, the arrival angle points from the receive array back along the
// last hop toward where the wave came from.
struct PathGeometry {
    Segment segment = Segment::BsRis;
    int path_index = 0;
    double distance = 0.0;
    double toa = 0.0;
    double departure_angle = 0.0;
    double arrival_angle = 0.0;
};

struct PathAngles {
    double departure = 0.0;
    double arrival = 0.0;
};

double path_distance(const Scene& scene, Segment segment, int path_index);

PathAngles path_angles(const Scene& scene, Segment segment, int path_index);

PathGeometry path_geometry(const Scene& scene, Segment segment, int path_index);

// All paths of a segment, LoS first.
std::vector<PathGeometry> segment_paths(const Scene& scene, Segment segment);

// m = r + c * toa_rm * [cos(aor), sin(aor)].
Vec2 recover_position(const Vec2& ris_position, double aor, double toa_rm);

} // namespace rislocate
