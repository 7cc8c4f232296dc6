#include "fixtures.hpp"

#include <cmath>
#include <random>

namespace diemap::fixtures {

namespace {

// Adds a triangle wound so its normal points along `outward`.
void add_tri(Fixture& f, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& outward, int tag)
{
    if (dot(cross(b - a, c - a), outward) >= 0.0) {
        f.triangles.push_back({a, b, c});
    } else {
        f.triangles.push_back({a, c, b});
    }
    f.tags.push_back(tag);
}

void add_quad(Fixture& f, const Vec3& p00, const Vec3& p10, const Vec3& p11, const Vec3& p01, const Vec3& outward,
              int tag)
{
    add_tri(f, p00, p10, p11, outward, tag);
    add_tri(f, p00, p11, p01, outward, tag);
}

Vec3 lerp(const Vec3& a, const Vec3& b, double t) { return a + (b - a) * t; }

Vec3 sphere_point(double r, double polar, double azimuth)
{
    return {r * std::sin(polar) * std::cos(azimuth), r * std::sin(polar) * std::sin(azimuth), r * std::cos(polar)};
}

} // namespace

Fixture drafted_pocket(const PocketParams& p)
{
    Fixture f;
    const int n = p.cells;
    const int a = p.margin;
    const int m = n - 2 * a;
    const double h = p.cell;
    const double inset = p.depth * std::tan(deg_to_rad(p.draft_deg));
    const double open_lo = a * h;
    const double open_hi = (n - a) * h;
    const double floor_lo = open_lo + inset;
    const double floor_step = (open_hi - open_lo - 2.0 * inset) / m;
    const double zf = -p.depth;

    auto top_coord = [&](int k) { return open_lo + k * h; };
    auto floor_coord = [&](int k) { return k == m ? open_hi - inset : floor_lo + k * floor_step; };

    const Vec3 up{0, 0, 1};
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i >= a && i < n - a && j >= a && j < n - a) {
                continue;
            }
            add_quad(f, {i * h, j * h, 0}, {(i + 1) * h, j * h, 0}, {(i + 1) * h, (j + 1) * h, 0},
                     {i * h, (j + 1) * h, 0}, up, kPocketTop);
        }
    }

    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            add_quad(f, {floor_coord(i), floor_coord(j), zf}, {floor_coord(i + 1), floor_coord(j), zf},
                     {floor_coord(i + 1), floor_coord(j + 1), zf}, {floor_coord(i), floor_coord(j + 1), zf}, up,
                     kPocketFloor);
        }
    }

    // Each wall: column k runs from the opening edge down to the floor edge.
    struct Wall {
        int tag;
        Vec3 outward;
    };
    auto wall_top = [&](int tag, int k) -> Vec3 {
        switch (tag) {
        case kPocketWallXMin: return {open_lo, top_coord(k), 0};
        case kPocketWallXMax: return {open_hi, top_coord(k), 0};
        case kPocketWallYMin: return {top_coord(k), open_lo, 0};
        default: return {top_coord(k), open_hi, 0};
        }
    };
    auto wall_bottom = [&](int tag, int k) -> Vec3 {
        switch (tag) {
        case kPocketWallXMin: return {floor_coord(0), floor_coord(k), zf};
        case kPocketWallXMax: return {floor_coord(m), floor_coord(k), zf};
        case kPocketWallYMin: return {floor_coord(k), floor_coord(0), zf};
        default: return {floor_coord(k), floor_coord(m), zf};
        }
    };
    for (const Wall& w : {Wall{kPocketWallXMin, {1, 0, 1}}, Wall{kPocketWallXMax, {-1, 0, 1}},
                          Wall{kPocketWallYMin, {0, 1, 1}}, Wall{kPocketWallYMax, {0, -1, 1}}}) {
        for (int k = 0; k < m; ++k) {
            for (int r = 0; r < p.wall_rows; ++r) {
                const double t0 = static_cast<double>(r) / p.wall_rows;
                const double t1 = static_cast<double>(r + 1) / p.wall_rows;
                const Vec3 a0 = lerp(wall_top(w.tag, k), wall_bottom(w.tag, k), t0);
                const Vec3 b0 = lerp(wall_top(w.tag, k + 1), wall_bottom(w.tag, k + 1), t0);
                const Vec3 a1 = lerp(wall_top(w.tag, k), wall_bottom(w.tag, k), t1);
                const Vec3 b1 = lerp(wall_top(w.tag, k + 1), wall_bottom(w.tag, k + 1), t1);
                add_quad(f, a0, b0, b1, a1, w.outward, w.tag);
            }
        }
    }

    if (p.with_bottom) {
        const double zb = zf - 5.0;
        const double size = n * h;
        add_quad(f, {0, 0, zb}, {size, 0, zb}, {size, size, zb}, {0, size, zb}, {0, 0, -1}, kPocketBottom);
    }
    return f;
}

double pocket_area_by_tag(const PocketParams& p, int tag)
{
    const double size = p.cells * p.cell;
    const double open = (p.cells - 2 * p.margin) * p.cell;
    const double inset = p.depth * std::tan(deg_to_rad(p.draft_deg));
    const double floor = open - 2.0 * inset;
    switch (tag) {
    case kPocketTop: return size * size - open * open;
    case kPocketFloor: return floor * floor;
    case kPocketBottom: return p.with_bottom ? size * size : 0.0;
    default: return 0.5 * (open + floor) * std::hypot(p.depth, inset);
    }
}

Fixture unit_cube(double s)
{
    Fixture f;
    const Vec3 v[8] = {{0, 0, 0}, {s, 0, 0}, {s, s, 0}, {0, s, 0}, {0, 0, s}, {s, 0, s}, {s, s, s}, {0, s, s}};
    add_quad(f, v[0], v[1], v[2], v[3], {0, 0, -1}, 0);
    add_quad(f, v[4], v[5], v[6], v[7], {0, 0, 1}, 1);
    add_quad(f, v[0], v[1], v[5], v[4], {0, -1, 0}, 2);
    add_quad(f, v[1], v[2], v[6], v[5], {1, 0, 0}, 3);
    add_quad(f, v[2], v[3], v[7], v[6], {0, 1, 0}, 4);
    add_quad(f, v[3], v[0], v[4], v[7], {-1, 0, 0}, 5);
    return f;
}

Fixture single_triangle()
{
    Fixture f;
    f.triangles.push_back({Vec3{0, 0, 0}, Vec3{2, 0, 0}, Vec3{0, 1, 1}});
    f.tags.push_back(0);
    return f;
}

Fixture flat_plate(int cells, double size, double thickness)
{
    Fixture f;
    const double h = size / cells;
    for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < cells; ++j) {
            add_quad(f, {i * h, j * h, thickness}, {(i + 1) * h, j * h, thickness},
                     {(i + 1) * h, (j + 1) * h, thickness}, {i * h, (j + 1) * h, thickness}, {0, 0, 1}, 0);
        }
    }
    for (int i = 0; i < cells; ++i) {
        for (int j = 0; j < cells; ++j) {
            add_quad(f, {i * h, j * h, 0}, {(i + 1) * h, j * h, 0}, {(i + 1) * h, (j + 1) * h, 0}, {i * h, (j + 1) * h, 0},
                     {0, 0, -1}, 1);
        }
    }
    return f;
}

Fixture nonmanifold_fan()
{
    Fixture f;
    const Vec3 a{0, 0, 0}, b{1, 0, 0};
    f.triangles.push_back({a, b, Vec3{0.5, 1, 0}});
    f.triangles.push_back({b, a, Vec3{0.5, -1, 0}});
    f.triangles.push_back({a, b, Vec3{0.5, 0, 1}});
    f.tags = {0, 1, 2};
    return f;
}

Fixture hemisphere(double radius, int rings, int segments)
{
    Fixture f;
    const double dpolar = (kPi / 2) / rings;
    const double daz = 2.0 * kPi / segments;
    const Vec3 pole{0, 0, radius};
    for (int j = 0; j < segments; ++j) {
        const Vec3 a = sphere_point(radius, dpolar, j * daz);
        const Vec3 b = sphere_point(radius, dpolar, (j + 1) * daz);
        add_tri(f, pole, a, b, (pole + a + b), 0);
    }
    for (int i = 1; i < rings; ++i) {
        for (int j = 0; j < segments; ++j) {
            const Vec3 p00 = sphere_point(radius, i * dpolar, j * daz);
            const Vec3 p01 = sphere_point(radius, i * dpolar, (j + 1) * daz);
            const Vec3 p10 = sphere_point(radius, (i + 1) * dpolar, j * daz);
            const Vec3 p11 = sphere_point(radius, (i + 1) * dpolar, (j + 1) * daz);
            const Vec3 mid = (p00 + p01 + p10 + p11) * 0.25;
            add_quad(f, p00, p10, p11, p01, mid, i);
        }
    }
    return f;
}

Fixture dome(double radius, double cap_deg, double band_deg, int rings, int segments)
{
    Fixture f;
    const double cap = deg_to_rad(cap_deg);
    const double band = deg_to_rad(band_deg);
    const double daz = 2.0 * kPi / segments;
    const Vec3 center{0, 0, radius * std::cos(cap)};
    for (int j = 0; j < segments; ++j) {
        add_tri(f, center, sphere_point(radius, cap, j * daz), sphere_point(radius, cap, (j + 1) * daz), {0, 0, 1}, 0);
    }
    const double dpolar = (band - cap) / rings;
    for (int i = 0; i < rings; ++i) {
        for (int j = 0; j < segments; ++j) {
            const Vec3 p00 = sphere_point(radius, cap + i * dpolar, j * daz);
            const Vec3 p01 = sphere_point(radius, cap + i * dpolar, (j + 1) * daz);
            const Vec3 p10 = sphere_point(radius, cap + (i + 1) * dpolar, j * daz);
            const Vec3 p11 = sphere_point(radius, cap + (i + 1) * dpolar, (j + 1) * daz);
            add_quad(f, p00, p10, p11, p01, (p00 + p01 + p10 + p11) * 0.25, 1);
        }
    }
    return f;
}

Fixture gabled_roof(double azimuth_deg, double incline_deg, int across, int along, double half_width,
                    double half_length)
{
    Fixture f;
    const double w = half_width;
    const double l = half_length;
    const double rise = w * std::tan(deg_to_rad(incline_deg));
    auto slope_point = [&](int i, int j) -> Vec3 {
        // i in [0, 2 * across]: x from -w to w through the ridge at i == across.
        const double x = -w + i * (w / across);
        const double y = -l + j * (2.0 * l / along);
        return {x, y, rise * (1.0 - std::abs(x) / w)};
    };
    for (int i = 0; i < 2 * across; ++i) {
        const int tag = i < across ? kRoofSlopeA : kRoofSlopeB;
        const Vec3 outward = i < across ? Vec3{-rise, 0, w} : Vec3{rise, 0, w};
        for (int j = 0; j < along; ++j) {
            add_quad(f, slope_point(i, j), slope_point(i + 1, j), slope_point(i + 1, j + 1), slope_point(i, j + 1),
                     outward, tag);
        }
    }
    for (int end = 0; end < 2; ++end) {
        const int j = end == 0 ? 0 : along;
        const Vec3 outward{0, end == 0 ? -1.0 : 1.0, 0};
        const Vec3 base_mid{0, slope_point(0, j).y, 0};
        for (int i = 0; i < 2 * across; ++i) {
            add_tri(f, base_mid, slope_point(i, j), slope_point(i + 1, j), outward, kRoofGable);
        }
    }
    for (int j = 0; j < along; ++j) {
        const double y0 = slope_point(0, j).y;
        const double y1 = slope_point(0, j + 1).y;
        add_quad(f, {-w, y0, 0}, {0, y0, 0}, {0, y1, 0}, {-w, y1, 0}, {0, 0, -1}, kRoofBase);
        add_quad(f, {0, y0, 0}, {w, y0, 0}, {w, y1, 0}, {0, y1, 0}, {0, 0, -1}, kRoofBase);
    }
    return rotated_z(std::move(f), deg_to_rad(azimuth_deg));
}

Fixture rotated_z(Fixture f, double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    for (Triangle& t : f.triangles) {
        for (Vec3& p : t) {
            p = {c * p.x - s * p.y, s * p.x + c * p.y, p.z};
        }
    }
    return f;
}

Fixture translated(Fixture f, const Vec3& offset)
{
    for (Triangle& t : f.triangles) {
        for (Vec3& p : t) {
            p = p + offset;
        }
    }
    return f;
}

Fixture bumpy_grid(int n, std::uint32_t seed, double amplitude)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> height(-amplitude, amplitude);
    std::vector<double> z((n + 1) * (n + 1));
    for (double& v : z) {
        v = height(rng);
    }
    auto at = [&](int i, int j) { return Vec3{double(i), double(j), z[i * (n + 1) + j]}; };
    Fixture f;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            add_quad(f, at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1), {0, 0, 1}, 0);
        }
    }
    return f;
}

} // namespace diemap::fixtures
