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

#include "srpmap/scene.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "srpmap/error.hpp"

namespace srp {

const char* to_string(Field field) { return field == Field::Near ? "near" : "far"; }

Point3 MicrophoneArray::centroid() const {
  Point3 c = Point3::Zero();
  for (const auto& p : positions) c += p;
  return positions.empty() ? c : Point3(c / static_cast<double>(positions.size()));
}

void MicrophoneArray::validate() const {
  if (positions.size() < 2) {
    throw InvalidGeometry("microphone array needs at least 2 microphones, got " +
                          std::to_string(positions.size()));
  }
  if (!(speed_of_sound > 0.0) || !std::isfinite(speed_of_sound)) {
    throw InvalidGeometry("speed of sound must be positive");
  }
  for (std::size_t a = 0; a < positions.size(); ++a) {
    if (!positions[a].allFinite()) throw InvalidGeometry("non-finite microphone position");
    for (std::size_t b = 0; b < a; ++b) {
      if ((positions[a] - positions[b]).norm() <= 0.0) {
        throw InvalidGeometry("microphones " + std::to_string(b) + " and " + std::to_string(a) +
                              " coincide");
      }
    }
  }
}

MicrophoneArray make_circular_array(const Point3& center, double radius, int count,
                                    double speed_of_sound) {
  if (count < 2 || !(radius > 0.0)) throw InvalidGeometry("circular array needs radius > 0 and >= 2 microphones");
  MicrophoneArray array;
  array.speed_of_sound = speed_of_sound;
  for (int m = 0; m < count; ++m) {
    const double phi = 2.0 * std::numbers::pi * m / count;
    array.positions.push_back(center + radius * Point3(std::cos(phi), std::sin(phi), 0.0));
  }
  array.validate();
  return array;
}

PairTable enumerate_pairs(const MicrophoneArray& array) {
  array.validate();
  const int M = static_cast<int>(array.size());
  PairTable table;
  table.pairs.reserve(static_cast<std::size_t>(M * (M - 1) / 2));
  for (int ref = 0; ref < M; ++ref) {
    for (int mic = ref + 1; mic < M; ++mic) {
      table.pairs.push_back({mic, ref, (array.positions[mic] - array.positions[ref]).norm()});
    }
  }
  return table;
}

bool AxisAlignedBox::contains(const Point3& p, double tol) const {
  return (p.array() >= lower.array() - tol).all() && (p.array() <= upper.array() + tol).all();
}

AxisAlignedBox CandidateGrid::bounds() const {
  AxisAlignedBox box;
  if (points.empty()) return box;
  box.lower = box.upper = points.front();
  for (const auto& p : points) {
    box.lower = box.lower.cwiseMin(p);
    box.upper = box.upper.cwiseMax(p);
  }
  return box;
}

namespace {

// Number of lattice points covering [0, extent] at the given step. A small
// slack absorbs representation error when the extent is a multiple of the step.
int lattice_count(double extent, double resolution) {
  return static_cast<int>(std::floor(extent / resolution + 1e-9)) + 1;
}

}  // namespace

CandidateGrid build_volume_grid(const VolumeGridSpec& spec, const std::optional<AxisAlignedBox>& room) {
  if (!(spec.resolution > 0.0) || !std::isfinite(spec.resolution)) {
    throw InvalidGrid("grid resolution must be positive");
  }
  if (!spec.origin.allFinite() || !spec.extent.allFinite() || (spec.extent.array() < 0.0).any()) {
    throw InvalidGrid("grid extent must be finite and non-negative");
  }
  if ((spec.extent.array() <= 0.0).all()) throw InvalidGrid("grid extent is empty");

  CandidateGrid grid;
  grid.field = Field::Near;
  const int nx = lattice_count(spec.extent.x(), spec.resolution);
  const int ny = lattice_count(spec.extent.y(), spec.resolution);
  const int nz = lattice_count(spec.extent.z(), spec.resolution);
  grid.axis_counts = {nx, ny, nz};
  grid.points.reserve(static_cast<std::size_t>(nx) * ny * nz);
  for (int iz = 0; iz < nz; ++iz) {
    for (int iy = 0; iy < ny; ++iy) {
      for (int ix = 0; ix < nx; ++ix) {
        grid.points.push_back(spec.origin + spec.resolution * Point3(ix, iy, iz));
      }
    }
  }
  if (room) {
    for (const auto& q : grid.points) {
      if (!room->contains(q)) throw InvalidGrid("candidate grid extends outside the room");
    }
  }
  return grid;
}

Point3 lower_hemisphere_direction(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), -std::cos(polar)};
}

CandidateGrid build_hemisphere_grid(const HemisphereGridSpec& spec) {
  const double res = spec.resolution_deg;
  if (!(res > 0.0) || !std::isfinite(res)) throw InvalidGrid("angular resolution must be positive");
  const double rings = 90.0 / res;
  const double steps = 360.0 / res;
  if (std::abs(rings - std::round(rings)) > 1e-9 || std::abs(steps - std::round(steps)) > 1e-9) {
    throw InvalidGrid("angular resolution must divide 90 and 360 degrees");
  }
  const int n_polar = static_cast<int>(std::round(rings));
  const int n_azimuth = static_cast<int>(std::round(steps));
  constexpr double deg = std::numbers::pi / 180.0;

  CandidateGrid grid;
  grid.field = Field::Far;
  grid.axis_counts = {n_azimuth, n_polar + 1};
  grid.points.push_back(Point3(0.0, 0.0, -1.0));
  grid.angles_deg.emplace_back(0.0, 0.0);
  for (int ip = 1; ip <= n_polar; ++ip) {
    for (int ia = 0; ia < n_azimuth; ++ia) {
      const double polar = ip * res;
      const double azimuth = ia * res;
      grid.points.push_back(lower_hemisphere_direction(polar * deg, azimuth * deg));
      grid.angles_deg.emplace_back(polar, azimuth);
    }
  }
  return grid;
}

namespace {

double tdoa(const MicrophoneArray& array, const MicPair& pair, Field field, const Point3& q) {
  const Point3& pm = array.positions[pair.mic];
  const Point3& pr = array.positions[pair.ref];
  if (field == Field::Near) return ((pm - q).norm() - (pr - q).norm()) / array.speed_of_sound;
  return -(pm - pr).dot(q) / array.speed_of_sound;
}

void check_direction(const Point3& q) {
  if (std::abs(q.norm() - 1.0) > 1e-9) throw InvalidGrid("far-field candidate is not a unit vector");
}

}  // namespace

TdoaTable tdoa_table(const MicrophoneArray& array, const PairTable& pairs, const CandidateGrid& grid) {
  array.validate();
  if (grid.points.empty()) throw InvalidGrid("candidate grid is empty");
  for (const auto& pair : pairs.pairs) {
    if (pair.mic < 0 || pair.ref < 0 || static_cast<std::size_t>(std::max(pair.mic, pair.ref)) >= array.size()) {
      throw DimensionError("pair table does not match the microphone array");
    }
  }
  const auto J = static_cast<Eigen::Index>(grid.size());
  const auto P = static_cast<Eigen::Index>(pairs.size());
  TdoaTable table;
  table.delta.resize(J, P);
  table.limit.resize(P);
  if (grid.field == Field::Far) {
    for (const auto& q : grid.points) check_direction(q);
  }
  for (Eigen::Index p = 0; p < P; ++p) {
    const auto& pair = pairs[static_cast<std::size_t>(p)];
    table.limit(p) = pair.distance / array.speed_of_sound;
    for (Eigen::Index i = 0; i < J; ++i) {
      table.delta(i, p) = tdoa(array, pair, grid.field, grid.points[static_cast<std::size_t>(i)]);
    }
  }
  return table;
}

Eigen::VectorXd tdoa_for_point(const MicrophoneArray& array, const PairTable& pairs, Field field,
                               const Point3& q) {
  if (field == Field::Far) check_direction(q);
  Eigen::VectorXd out(static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out(static_cast<Eigen::Index>(p)) = tdoa(array, pairs[p], field, q);
  }
  return out;
}

}  // namespace srp
