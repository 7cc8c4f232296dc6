#pragma once

// Analytic test shapes. Every generator tags each triangle with the face it
// was cut from so tests can compare against closed-form expectations.

#include "diemap/geometry.hpp"

#include <cstdint>
#include <vector>

namespace diemap::fixtures {

struct Fixture {
    std::vector<Triangle> triangles;
    std::vector<int> tags;
};

enum PocketTag : int { kPocketTop = 0, kPocketFloor, kPocketWallXMin, kPocketWallXMax, kPocketWallYMin, kPocketWallYMax, kPocketBottom };

struct PocketParams {
    int cells = 40;        // top face grid is cells x cells
    int margin = 8;        // opening starts `margin` cells in from each side
    double cell = 2.5;     // mm
    double depth = 20.0;   // mm
    double draft_deg = 5.0;
    int wall_rows = 4;
    bool with_bottom = true; // separate downward plate under the block
};

/// Flat top frame, rectangular pocket with drafted walls, flat floor.
Fixture drafted_pocket(const PocketParams& p = {});
double pocket_area_by_tag(const PocketParams& p, int tag);

Fixture unit_cube(double size = 1.0);
Fixture single_triangle();

/// Two stacked, unconnected sheets: top faces +Z, bottom faces -Z.
Fixture flat_plate(int cells = 4, double size = 10.0, double thickness = 2.0);

/// Three triangles sharing one edge.
Fixture nonmanifold_fan();

/// Open upper hemisphere, polar rings x azimuth segments. Tag = ring index.
Fixture hemisphere(double radius = 50.0, int rings = 32, int segments = 96);

/// Flat disk at polar angle `cap_deg` joined to a spherical zone running
/// from `cap_deg` to `band_deg`. Tag 0 = disk, 1 = zone.
Fixture dome(double radius = 50.0, double cap_deg = 40.0, double band_deg = 70.0, int rings = 8, int segments = 64);

enum RoofTag : int { kRoofSlopeA = 0, kRoofSlopeB, kRoofGable, kRoofBase };

/// Prism with a ridge along Y (before rotation), two slopes inclined
/// `incline_deg` from horizontal, vertical gable ends and a flat base. The
/// ridge-perpendicular direction is `azimuth_deg` after rotation about Z.
Fixture gabled_roof(double azimuth_deg = 0.0, double incline_deg = 15.0, int across = 6, int along = 10,
                    double half_width = 20.0, double half_length = 30.0);

Fixture rotated_z(Fixture f, double angle_rad);
Fixture translated(Fixture f, const Vec3& offset);

/// Regular grid surface z = h(x, y) with random heights, `n` x `n` cells.
Fixture bumpy_grid(int n, std::uint32_t seed, double amplitude = 1.0);

} // namespace diemap::fixtures
