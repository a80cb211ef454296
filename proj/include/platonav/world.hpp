// Copyright 2026 The platonav Authors
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

#ifndef PLATONAV_WORLD_HPP_
#define PLATONAV_WORLD_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "platonav/rng.hpp"

namespace platonav {

using Vec2 = Eigen::Vector2d;

struct Circle {
  Vec2 center;
  double radius;
};

struct Segment {
  Vec2 a;
  Vec2 b;
};

// Axis-aligned world extent.
struct Rect {
  Vec2 lo;
  Vec2 hi;
  bool contains(const Vec2& p, double margin = 0.0) const {
    return p.x() >= lo.x() - margin && p.x() <= hi.x() + margin &&
           p.y() >= lo.y() - margin && p.y() <= hi.y() + margin;
  }
};

// Immutable obstacle geometry. Generated once, shareable across threads.
struct ObstacleField {
  enum class Kind { kEmpty, kCanyon, kForest };

  Kind kind = Kind::kEmpty;
  std::uint64_t seed = 0;
  std::vector<Circle> circles;
  std::vector<Segment> segments;
  Rect extent{Vec2(-10.0, -10.0), Vec2(10.0, 10.0)};
  // Canyon centerline (spawn sites + local corridor direction); empty for
  // other variants.
  std::vector<Vec2> centerline;

  bool empty() const { return circles.empty() && segments.empty(); }
};

// Distance from p to the nearest obstacle surface. Negative inside a circle;
// +infinity for an empty field.
double signed_distance(const ObstacleField& field, const Vec2& p);

// Signed distance plus its spatial gradient (unit vector away from the
// nearest surface point; zero at the degenerate center point).
double signed_distance_gradient(const ObstacleField& field, const Vec2& p,
                                Vec2* grad);

// First-hit distances for `beam_count` rays spanning `fan_angle` centered on
// `heading`; max_range where nothing is hit. Noise is the caller's business.
std::vector<double> raycast_laser(const ObstacleField& field, const Vec2& origin,
                                  double heading, int beam_count,
                                  double fan_angle, double max_range);

struct CanyonParams {
  double length = 60.0;
  double width = 4.0;
  double max_turn = 0.5 * 1.5707963267948966;  // pi/4 per segment
  double segment_length = 0.5;
  // Cap on the corridor direction relative to +x; <= 0 disables the cap
  // (pure random walk of direction deltas).
  double heading_limit = 1.0471975511965976;  // pi/3
};

// Winding corridor: direction delta per segment uniform in [-max_turn,
// +max_turn]; both walls offset width/2 from the centerline. Deterministic in
// `seed`.
ObstacleField generate_canyon(std::uint64_t seed, const CanyonParams& params);

struct ForestParams {
  double extent = 20.0;  // world is [0, extent] x [-extent/2, extent/2]
  double tree_radius = 0.5;
  double avg_spacing = 2.5;
  double min_gap = 0.5;            // guaranteed surface-to-surface clearance
  double spawn_clear_radius = 3.0;  // obstacle-free disk around the origin
};

// Poisson-disk-style dart throwing with a hard minimum center distance and a
// clear spawn region. Deterministic in `seed`. Throws GenerationError when
// the density is infeasible for the minimum gap.
ObstacleField generate_forest(std::uint64_t seed, const ForestParams& params);

// True iff the vehicle body overlaps an obstacle (strict inequality: touching
// exactly at vehicle_radius is not a crash).
bool crash_check(const ObstacleField& field, const Vec2& position,
                 double vehicle_radius);

// A rest pose with signed_distance >= clearance. Empty field -> origin.
// Canyon fields spawn on the centerline facing along the corridor; other
// fields sample the extent uniformly. Deterministic given `rng`. Throws
// GenerationError if no safe location is found after bounded retries.
struct SpawnPose {
  Vec2 position;
  double heading;
};
SpawnPose respawn(const ObstacleField& field, double clearance, Rng& rng);

// Plain-text geometry listing, one primitive per line:
//   circle cx cy r
//   segment x1 y1 x2 y2
std::string export_geometry(const ObstacleField& field);

}  // namespace platonav

#endif  // PLATONAV_WORLD_HPP_
