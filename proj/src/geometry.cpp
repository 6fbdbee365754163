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

#include "rislocate/geometry.hpp"

#include "rislocate/errors.hpp"

#include <cmath>
#include <string>

namespace rislocate {

namespace {

bool finite(const Vec2& p) { return std::isfinite(p.x()) && std::isfinite(p.y()); }

double direction(const Vec2& from, const Vec2& to) {
    const Vec2 d = to - from;
    return std::atan2(d.y(), d.x());
}

struct Endpoints {
    Vec2 tx;
    Vec2 rx;
    const std::vector<Vec2>* scatterers;
};

Endpoints endpoints(const Scene& scene, Segment segment) {
    if (segment == Segment::BsRis) return {scene.bs, scene.ris, &scene.scatterers_br};
    return {scene.ris, scene.ue, &scene.scatterers_rm};
}

void check_index(const Endpoints& e, int path_index) {
    if (path_index < 0 || static_cast<std::size_t>(path_index) > e.scatterers->size())
        throw InvalidPathError("path index " + std::to_string(path_index) + " out of range [0, " +
                               std::to_string(e.scatterers->size()) + "]");
}

} // namespace

void Scene::validate() const {
    if (!finite(bs) || !finite(ris) || !finite(ue)) throw InvalidArgument("scene positions must be finite");
    if ((bs - ris).norm() <= 0.0 || (bs - ue).norm() <= 0.0 || (ris - ue).norm() <= 0.0)
        throw InvalidArgument("BS, RIS and UE positions must be pairwise distinct");
    for (const auto& s : scatterers_br) {
        if (!finite(s)) throw InvalidArgument("scatterer positions must be finite");
        if ((s - bs).norm() <= 0.0 || (s - ris).norm() <= 0.0)
            throw InvalidArgument("BS-RIS scatterer coincides with a segment endpoint");
    }
    for (const auto& s : scatterers_rm) {
        if (!finite(s)) throw InvalidArgument("scatterer positions must be finite");
        if ((s - ris).norm() <= 0.0 || (s - ue).norm() <= 0.0)
            throw InvalidArgument("RIS-UE scatterer coincides with a segment endpoint");
    }
}

std::size_t Scene::path_count(Segment segment) const {
    return 1 + (segment == Segment::BsRis ? scatterers_br.size() : scatterers_rm.size());
}

double path_distance(const Scene& scene, Segment segment, int path_index) {
    const auto e = endpoints(scene, segment);
    check_index(e, path_index);
    if (path_index == 0) return (e.rx - e.tx).norm();
    const Vec2& s = (*e.scatterers)[static_cast<std::size_t>(path_index - 1)];
    return (s - e.tx).norm() + (e.rx - s).norm();
}

PathAngles path_angles(const Scene& scene, Segment segment, int path_index) {
    const auto e = endpoints(scene, segment);
    check_index(e, path_index);
    const Vec2& hop = path_index == 0 ? e.rx : (*e.scatterers)[static_cast<std::size_t>(path_index - 1)];
    const Vec2& last = path_index == 0 ? e.tx : hop;
    return {direction(e.tx, hop), direction(e.rx, last)};
}

PathGeometry path_geometry(const Scene& scene, Segment segment, int path_index) {
    PathGeometry g;
    g.segment = segment;
    g.path_index = path_index;
    g.distance = path_distance(scene, segment, path_index);
    g.toa = g.distance / kSpeedOfLight;
    const auto angles = path_angles(scene, segment, path_index);
    g.departure_angle = angles.departure;
    g.arrival_angle = angles.arrival;
    return g;
}

std::vector<PathGeometry> segment_paths(const Scene& scene, Segment segment) {
    std::vector<PathGeometry> paths;
    const auto n = scene.path_count(segment);
    paths.reserve(n);
    for (std::size_t l = 0; l < n; ++l) paths.push_back(path_geometry(scene, segment, static_cast<int>(l)));
    return paths;
}

Vec2 recover_position(const Vec2& ris_position, double aor, double toa_rm) {
    if (!(toa_rm >= 0.0)) throw InvalidDelayError("RIS-UE delay estimate must be non-negative");
    const double range = kSpeedOfLight * toa_rm;
    return ris_position + range * Vec2{std::cos(aor), std::sin(aor)};
}

} // namespace rislocate
