// Copyright 2026 The srpmap Authors.
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

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

namespace srp {

using Point3 = Eigen::Vector3d;

enum class Field { Near, Far };

const char* to_string(Field field);

inline constexpr double kDefaultSpeedOfSound = 340.0;

struct MicrophoneArray {
  std::vector<Point3> positions;
  double speed_of_sound = kDefaultSpeedOfSound;

  std::size_t size() const { return positions.size(); }
  Point3 centroid() const;
  // Throws InvalidGeometry unless M >= 2, positions are distinct and c > 0.
  void validate() const;
};

// Equispaced microphones on a horizontal circle, the first one on the x axis.
MicrophoneArray make_circular_array(const Point3& center, double radius, int count,
                                    double speed_of_sound = kDefaultSpeedOfSound);

// A microphone pair (m, m') with m > m'. Indices are 0-based.
struct MicPair {
  int mic = 0;
  int ref = 0;
  double distance = 0.0;
};

struct PairTable {
  std::vector<MicPair> pairs;

  std::size_t size() const { return pairs.size(); }
  const MicPair& operator[](std::size_t p) const { return pairs[p]; }
};

// Pairs ordered by (m', m) ascending, i.e. P = M(M-1)/2 entries
// (1,0), (2,0), ..., (M-1,0), (2,1), ...
PairTable enumerate_pairs(const MicrophoneArray& array);

// Axis-aligned box of candidate points; x varies fastest.
struct VolumeGridSpec {
  Point3 origin = Point3::Zero();
  Point3 extent = Point3::Zero();
  double resolution = 0.1;
};

// Lower half-sphere of directions sampled in polar angle (measured from the
// downward vertical) and azimuth, both at the same resolution in degrees.
struct HemisphereGridSpec {
  double resolution_deg = 2.0;
};

struct AxisAlignedBox {
  Point3 lower = Point3::Zero();
  Point3 upper = Point3::Zero();

  bool contains(const Point3& p, double tol = 1e-9) const;
};

struct CandidateGrid {
  Field field = Field::Near;
  // Meters for Field::Near, unit direction vectors for Field::Far.
  std::vector<Point3> points;
  // Lattice counts along (x, y, z) for volume grids, (azimuth, polar) for
  // hemisphere grids; informational only.
  std::vector<int> axis_counts;
  // Polar and azimuth angle per point in degrees (far field only).
  std::vector<std::pair<double, double>> angles_deg;

  std::size_t size() const { return points.size(); }
  AxisAlignedBox bounds() const;
};

// Throws InvalidGrid for a non-positive resolution, an empty extent, or
// points falling outside `room` when given.
CandidateGrid build_volume_grid(const VolumeGridSpec& spec,
                                const std::optional<AxisAlignedBox>& room = std::nullopt);

// The pole is emitted once; azimuth varies fastest within each polar ring.
CandidateGrid build_hemisphere_grid(const HemisphereGridSpec& spec);

// Unit direction for a polar angle from the downward vertical and an azimuth
// from the x axis, both in radians.
Point3 lower_hemisphere_direction(double polar, double azimuth);

struct TdoaTable {
  // J x P, seconds.
  Eigen::MatrixXd delta;
  // Per-pair limit d_p / c, seconds.
  Eigen::VectorXd limit;

  Eigen::Index candidates() const { return delta.rows(); }
  Eigen::Index pairs() const { return delta.cols(); }
};

// Near field: (|p_m - q| - |p_m' - q|) / c.
// Far field: q is the unit direction from the array towards the source and
// the delay is the plane-wave limit of the near-field rule, -(p_m - p_m')^T q / c.
TdoaTable tdoa_table(const MicrophoneArray& array, const PairTable& pairs,
                     const CandidateGrid& grid);

// TDOA of a single point for every pair, same conventions as tdoa_table.
Eigen::VectorXd tdoa_for_point(const MicrophoneArray& array, const PairTable& pairs,
                               Field field, const Point3& q);

}  // namespace srp
