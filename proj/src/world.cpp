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

#include "platonav/world.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "platonav/errors.hpp"

namespace platonav {

namespace {

constexpr double kPi = 3.14159265358979323846;

double circle_distance(const Circle& c, const Vec2& p) {
  return (p - c.center).norm() - c.radius;
}

// Closest point on segment ab to p.
Vec2 segment_closest(const Segment& s, const Vec2& p) {
  const Vec2 d = s.b - s.a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return s.a;
  const double t = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
  return s.a + t * d;
}

double segment_distance(const Segment& s, const Vec2& p) {
  return (p - segment_closest(s, p)).norm();
}

// Smallest positive ray parameter hitting the circle, or -1.
double ray_circle(const Vec2& origin, const Vec2& dir, const Circle& c) {
  const Vec2 oc = origin - c.center;
  const double b = oc.dot(dir);
  const double disc = b * b - (oc.squaredNorm() - c.radius * c.radius);
  if (disc < 0.0) return -1.0;
  const double sq = std::sqrt(disc);
  const double t0 = -b - sq;
  if (t0 >= 0.0) return t0;
  const double t1 = -b + sq;
  if (t1 >= 0.0) return t1;  // origin inside the circle
  return -1.0;
}

// Smallest positive ray parameter hitting the segment, or -1.
double ray_segment(const Vec2& origin, const Vec2& dir, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const double denom = dir.x() * e.y() - dir.y() * e.x();
  if (std::abs(denom) < 1e-15) return -1.0;  // parallel
  const Vec2 ao = s.a - origin;
  const double t = (ao.x() * e.y() - ao.y() * e.x()) / denom;
  const double u = (ao.x() * dir.y() - ao.y() * dir.x()) / denom;
  if (t >= 0.0 && u >= 0.0 && u <= 1.0) return t;
  return -1.0;
}

}  // namespace

double signed_distance(const ObstacleField& field, const Vec2& p) {
  double best = std::numeric_limits<double>::infinity();
  for (const Circle& c : field.circles) best = std::min(best, circle_distance(c, p));
  for (const Segment& s : field.segments) best = std::min(best, segment_distance(s, p));
  return best;
}

double signed_distance_gradient(const ObstacleField& field, const Vec2& p,
                                Vec2* grad) {
  double best = std::numeric_limits<double>::infinity();
  Vec2 g = Vec2::Zero();
  for (const Circle& c : field.circles) {
    const double d = circle_distance(c, p);
    if (d < best) {
      best = d;
      const Vec2 r = p - c.center;
      const double n = r.norm();
      g = n > 0.0 ? Vec2(r / n) : Vec2::Zero();
    }
  }
  for (const Segment& s : field.segments) {
    const double d = segment_distance(s, p);
    if (d < best) {
      best = d;
      const Vec2 r = p - segment_closest(s, p);
      const double n = r.norm();
      g = n > 0.0 ? Vec2(r / n) : Vec2::Zero();
    }
  }
  if (grad != nullptr) *grad = g;
  return best;
}

std::vector<double> raycast_laser(const ObstacleField& field, const Vec2& origin,
                                  double heading, int beam_count,
                                  double fan_angle, double max_range) {
  if (beam_count < 1) {
    throw ContractViolation("raycast_laser: beam_count must be >= 1");
  }
  std::vector<double> ranges(static_cast<std::size_t>(beam_count), max_range);
  for (int i = 0; i < beam_count; ++i) {
    const double offset =
        beam_count == 1
            ? 0.0
            : -0.5 * fan_angle + fan_angle * static_cast<double>(i) /
                                     static_cast<double>(beam_count - 1);
    const double a = heading + offset;
    const Vec2 dir(std::cos(a), std::sin(a));
    double best = max_range;
    for (const Circle& c : field.circles) {
      const double t = ray_circle(origin, dir, c);
      if (t >= 0.0 && t < best) best = t;
    }
    for (const Segment& s : field.segments) {
      const double t = ray_segment(origin, dir, s);
      if (t >= 0.0 && t < best) best = t;
    }
    ranges[static_cast<std::size_t>(i)] = best;
  }
  return ranges;
}

ObstacleField generate_canyon(std::uint64_t seed, const CanyonParams& params) {
  ObstacleField field;
  field.kind = ObstacleField::Kind::kCanyon;
  field.seed = seed;
  Rng rng(seed);

  const int segments = std::max(1, static_cast<int>(std::ceil(params.length / params.segment_length)));
  std::vector<Vec2> center;
  std::vector<double> headings;
  center.reserve(static_cast<std::size_t>(segments) + 1);
  center.push_back(Vec2::Zero());
  double heading = 0.0;
  for (int i = 0; i < segments; ++i) {
    double delta = rng.uniform(-params.max_turn, params.max_turn);
    if (params.heading_limit > 0.0) {
      while (std::abs(heading + delta) > params.heading_limit) {
        delta = rng.uniform(-params.max_turn, params.max_turn);
      }
    }
    heading += delta;
    headings.push_back(heading);
    center.push_back(center.back() +
                     params.segment_length * Vec2(std::cos(heading), std::sin(heading)));
  }

  // Wall vertices offset along the averaged normal at each centerline vertex.
  const auto normal_at = [&](std::size_t i) {
    double h;
    if (i == 0) {
      h = headings.front();
    } else if (i == headings.size()) {
      h = headings.back();
    } else {
      // average direction of the two adjacent segments
      const Vec2 d = Vec2(std::cos(headings[i - 1]), std::sin(headings[i - 1])) +
                     Vec2(std::cos(headings[i]), std::sin(headings[i]));
      h = std::atan2(d.y(), d.x());
    }
    return Vec2(-std::sin(h), std::cos(h));
  };

  const double half = 0.5 * params.width;
  std::vector<Vec2> left, right;
  for (std::size_t i = 0; i < center.size(); ++i) {
    const Vec2 n = normal_at(i);
    left.push_back(center[i] + half * n);
    right.push_back(center[i] - half * n);
  }
  for (std::size_t i = 0; i + 1 < center.size(); ++i) {
    field.segments.push_back({left[i], left[i + 1]});
    field.segments.push_back({right[i], right[i + 1]});
  }

  field.centerline = std::move(center);

  Vec2 lo = field.centerline.front(), hi = field.centerline.front();
  for (const Segment& s : field.segments) {
    lo = lo.cwiseMin(s.a).cwiseMin(s.b);
    hi = hi.cwiseMax(s.a).cwiseMax(s.b);
  }
  field.extent = {lo - Vec2(1.0, 1.0), hi + Vec2(1.0, 1.0)};
  return field;
}

ObstacleField generate_forest(std::uint64_t seed, const ForestParams& params) {
  if (params.avg_spacing <= 2.0 * params.tree_radius) {
    throw GenerationError("generate_forest: avg_spacing must exceed tree diameter");
  }
  const double min_center_dist = 2.0 * params.tree_radius + params.min_gap;
  if (params.avg_spacing < min_center_dist) {
    throw GenerationError(
        "generate_forest: density too high for the configured minimum gap");
  }

  ObstacleField field;
  field.kind = ObstacleField::Kind::kForest;
  field.seed = seed;
  field.extent = {Vec2(0.0, -0.5 * params.extent), Vec2(params.extent, 0.5 * params.extent)};

  const double area = params.extent * params.extent;
  const int target = static_cast<int>(std::floor(area / (params.avg_spacing * params.avg_spacing)));
  if (target < 1 || params.extent < 2.0 * params.tree_radius) {
    return field;  // too small for a single tree
  }

  // Dart throwing with a hard core at 0.88 * avg_spacing; the hard core plus
  // rejection saturation puts the mean nearest-neighbor distance near
  // avg_spacing itself.
  const double hard_core = std::max(min_center_dist, 0.88 * params.avg_spacing);
  Rng rng(seed);
  const int max_attempts = 200 * target;
  int attempts = 0;
  while (static_cast<int>(field.circles.size()) < target && attempts < max_attempts) {
    ++attempts;
    const Vec2 p(rng.uniform(field.extent.lo.x(), field.extent.hi.x()),
                 rng.uniform(field.extent.lo.y(), field.extent.hi.y()));
    if (p.norm() < params.spawn_clear_radius + params.tree_radius) continue;
    bool ok = true;
    for (const Circle& c : field.circles) {
      if ((p - c.center).norm() < hard_core) {
        ok = false;
        break;
      }
    }
    if (ok) field.circles.push_back({p, params.tree_radius});
  }
  return field;
}

bool crash_check(const ObstacleField& field, const Vec2& position,
                 double vehicle_radius) {
  return signed_distance(field, position) < vehicle_radius;
}

SpawnPose respawn(const ObstacleField& field, double clearance, Rng& rng) {
  if (field.empty()) return {Vec2::Zero(), 0.0};

  constexpr int kMaxRetries = 500;
  if (field.kind == ObstacleField::Kind::kCanyon && field.centerline.size() >= 2) {
    for (int i = 0; i < kMaxRetries; ++i) {
      const std::size_t idx = static_cast<std::size_t>(
          rng.uniform_index(field.centerline.size() - 1));
      const Vec2 p = field.centerline[idx];
      const Vec2 d = field.centerline[idx + 1] - field.centerline[idx];
      if (signed_distance(field, p) >= clearance) {
        return {p, std::atan2(d.y(), d.x())};
      }
    }
    throw GenerationError(
        "respawn: no canyon site satisfies the clearance (corridor too "
        "narrow?)");
  }

  for (int i = 0; i < kMaxRetries; ++i) {
    const Vec2 p(rng.uniform(field.extent.lo.x(), field.extent.hi.x()),
                 rng.uniform(field.extent.lo.y(), field.extent.hi.y()));
    if (signed_distance(field, p) >= clearance) return {p, 0.0};
  }
  throw GenerationError("respawn: no safe location found after bounded retries");
}

std::string export_geometry(const ObstacleField& field) {
  std::string out;
  char line[160];
  for (const Circle& c : field.circles) {
    std::snprintf(line, sizeof(line), "circle %.17g %.17g %.17g\n", c.center.x(),
                  c.center.y(), c.radius);
    out += line;
  }
  for (const Segment& s : field.segments) {
    std::snprintf(line, sizeof(line), "segment %.17g %.17g %.17g %.17g\n",
                  s.a.x(), s.a.y(), s.b.x(), s.b.y());
    out += line;
  }
  return out;
}

}  // namespace platonav
