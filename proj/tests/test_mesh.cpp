#include "diemap/error.hpp"
#include "diemap/mesh.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <vector>

using namespace diemap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "diemap_test_mesh";
    fs::create_directories(dir);
    return dir / name;
}

void write_bytes(const fs::path& p, const std::vector<char>& bytes)
{
    std::ofstream out(p, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<char> read_bytes(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidMesh;
}

} // namespace

TEST_CASE("cube welds to 8 vertices, 12 facets with 3 neighbors each")
{
    const auto cube = fixtures::unit_cube(10.0);
    const TriangleMesh mesh = TriangleMesh::from_triangles(cube.triangles);
    CHECK(mesh.facet_count() == 12);
    CHECK(mesh.vertex_count() == 8);
    CHECK(mesh.diagnostics().welded_vertices == 36 - 8);
    CHECK(mesh.diagnostics().boundary_edges == 0);
    CHECK(mesh.diagnostics().non_manifold_edges == 0);
    for (FacetId f = 0; f < mesh.facet_count(); ++f) {
        CHECK(mesh.neighbor_count(f) == 3);
        CHECK(std::abs(norm(mesh.normal(f)) - 1.0) < 1e-12);
        CHECK(mesh.area(f) == doctest::Approx(50.0));
    }
    CHECK(mesh.total_area() == doctest::Approx(600.0));
}

TEST_CASE("adjacency is symmetric and slot edges match")
{
    const auto grid = fixtures::bumpy_grid(6, 3);
    const TriangleMesh mesh = TriangleMesh::from_triangles(grid.triangles);
    for (FacetId f = 0; f < mesh.facet_count(); ++f) {
        for (int s = 0; s < 3; ++s) {
            const FacetId g = mesh.neighbor_slots(f)[s];
            if (g == kNoFacet) {
                continue;
            }
            bool back = false;
            for (int t = 0; t < 3; ++t) {
                if (mesh.neighbor_slots(g)[t] == f) {
                    back = true;
                    CHECK(mesh.edge(g, t) == mesh.edge(f, s));
                }
            }
            CHECK(back);
        }
    }
}

TEST_CASE("normals follow the winding")
{
    const Triangle t{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}};
    const TriangleMesh up = TriangleMesh::from_triangles(std::span(&t, 1));
    CHECK(up.normal(0).z == doctest::Approx(1.0));
    const Triangle r{t[0], t[2], t[1]};
    const TriangleMesh down = TriangleMesh::from_triangles(std::span(&r, 1));
    CHECK(down.normal(0).z == doctest::Approx(-1.0));
}

TEST_CASE("degenerate facets are dropped and counted")
{
    auto cube = fixtures::unit_cube(1.0);
    cube.triangles.push_back({Vec3{0, 0, 0}, Vec3{0.5, 0, 0}, Vec3{1, 0, 0}});
    const TriangleMesh mesh = TriangleMesh::from_triangles(cube.triangles);
    CHECK(mesh.facet_count() == 12);
    CHECK(mesh.diagnostics().source_facets == 13);
    CHECK(mesh.diagnostics().dropped_degenerate == 1);
}

TEST_CASE("facets collapsing under welding are degenerate")
{
    const std::vector<Triangle> tris{{Vec3{0, 0, 0}, Vec3{1e-8, 0, 0}, Vec3{0, 1, 0}},
                                     {Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0, 1, 0}}};
    const TriangleMesh mesh = TriangleMesh::from_triangles(tris);
    CHECK(mesh.facet_count() == 1);
    CHECK(mesh.diagnostics().dropped_degenerate == 1);
}

TEST_CASE("empty input is EmptyMesh")
{
    CHECK(kind_of([] { TriangleMesh::from_triangles({}); }) == ErrorKind::EmptyMesh);
    const std::vector<Triangle> flat{{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{2, 0, 0}}};
    CHECK(kind_of([&] { TriangleMesh::from_triangles(flat); }) == ErrorKind::EmptyMesh);
}

TEST_CASE("non-manifold edge is reported and left unlinked")
{
    const auto fan = fixtures::nonmanifold_fan();
    const TriangleMesh mesh = TriangleMesh::from_triangles(fan.triangles);
    CHECK(mesh.facet_count() == 3);
    CHECK(mesh.diagnostics().non_manifold_edges == 1);
    for (FacetId f = 0; f < 3; ++f) {
        CHECK(mesh.neighbor_count(f) == 0);
    }
}

TEST_CASE("open mesh has boundary edges")
{
    const auto grid = fixtures::bumpy_grid(3, 1);
    const TriangleMesh mesh = TriangleMesh::from_triangles(grid.triangles);
    CHECK(mesh.diagnostics().boundary_edges == 12);
}

TEST_CASE("from_indexed welds coincident vertices")
{
    const std::vector<Vec3> v{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    const std::vector<std::array<VertexId, 3>> f{{0, 1, 2}, {3, 4, 5}};
    const TriangleMesh mesh = TriangleMesh::from_indexed(v, f);
    CHECK(mesh.vertex_count() == 4);
    CHECK(mesh.neighbor_count(0) == 1);
    CHECK(kind_of([&] {
              const std::vector<std::array<VertexId, 3>> bad{{0, 1, 9}};
              TriangleMesh::from_indexed(v, bad);
          }) == ErrorKind::InvalidMesh);
}

TEST_CASE("ASCII STL with one triangle")
{
    const fs::path p = scratch("one.stl");
    std::ofstream(p) << "solid one\n facet normal 0 0 1\n  outer loop\n   vertex 0 0 0\n   vertex 1 0 0\n"
                        "   vertex 0 1 0\n  endloop\n endfacet\nendsolid one\n";
    const StlData data = read_stl(p);
    CHECK(data.encoding == StlEncoding::Ascii);
    REQUIRE(data.triangles.size() == 1);
    CHECK(data.triangles[0][1] == Vec3{1, 0, 0});
    const TriangleMesh mesh = load_stl(p);
    CHECK(mesh.facet_count() == 1);
    CHECK(mesh.normal(0).z == doctest::Approx(1.0));
}

TEST_CASE("stored normals are ignored")
{
    const fs::path p = scratch("lying_normal.stl");
    std::ofstream(p) << "solid x\nfacet normal 0 0 -1\nouter loop\nvertex 0 0 0\nvertex 1 0 0\nvertex 0 1 0\n"
                        "endloop\nendfacet\nendsolid x\n";
    CHECK(load_stl(p).normal(0).z == doctest::Approx(1.0));
}

TEST_CASE("binary STL round trip and a 13-facet file with a collinear facet")
{
    auto cube = fixtures::unit_cube(1.0);
    const fs::path p12 = scratch("cube.stl");
    write_stl_binary(p12, cube.triangles);
    CHECK(fs::file_size(p12) == 84 + 50 * 12);
    const StlData data = read_stl(p12);
    CHECK(data.encoding == StlEncoding::Binary);
    CHECK(data.triangles == cube.triangles);

    cube.triangles.push_back({Vec3{0, 0, 0}, Vec3{0.25, 0.25, 0.25}, Vec3{1, 1, 1}});
    const fs::path p13 = scratch("cube13.stl");
    write_stl_binary(p13, cube.triangles);
    const TriangleMesh mesh = load_stl(p13);
    CHECK(mesh.facet_count() == 12);
    CHECK(mesh.diagnostics().dropped_degenerate == 1);
}

TEST_CASE("binary STL whose header starts with 'solid' is still binary")
{
    const auto cube = fixtures::unit_cube(2.0);
    const fs::path p = scratch("solid_header.stl");
    write_stl_binary(p, cube.triangles);
    auto bytes = read_bytes(p);
    std::memcpy(bytes.data(), "solid cube", 10);
    write_bytes(p, bytes);
    const StlData data = read_stl(p);
    CHECK(data.encoding == StlEncoding::Binary);
    CHECK(data.triangles.size() == 12);
}

TEST_CASE("ASCII writer round trips exactly")
{
    const auto hemi = fixtures::hemisphere(10.0, 4, 12);
    const fs::path p = scratch("hemi_ascii.stl");
    write_stl_ascii(p, hemi.triangles);
    const StlData data = read_stl(p);
    CHECK(data.encoding == StlEncoding::Ascii);
    CHECK(data.triangles == hemi.triangles);
}

TEST_CASE("malformed STL inputs")
{
    const auto cube = fixtures::unit_cube(1.0);
    const fs::path good = scratch("good.stl");
    write_stl_binary(good, cube.triangles);
    const auto bytes = read_bytes(good);

    SUBCASE("truncated record")
    {
        const fs::path p = scratch("truncated.stl");
        write_bytes(p, std::vector<char>(bytes.begin(), bytes.end() - 20));
        CHECK(kind_of([&] { read_stl(p); }) == ErrorKind::MalformedStl);
    }
    SUBCASE("facet count mismatch")
    {
        auto b = bytes;
        const std::uint32_t n = 11;
        std::memcpy(b.data() + 80, &n, 4);
        const fs::path p = scratch("count.stl");
        write_bytes(p, b);
        CHECK(kind_of([&] { read_stl(p); }) == ErrorKind::MalformedStl);
    }
    SUBCASE("shorter than a header")
    {
        const fs::path p = scratch("tiny.stl");
        write_bytes(p, std::vector<char>(40, 'x'));
        CHECK(kind_of([&] { read_stl(p); }) == ErrorKind::MalformedStl);
    }
    SUBCASE("zero facets")
    {
        const fs::path p = scratch("zero.stl");
        write_bytes(p, std::vector<char>(84, 0));
        CHECK(kind_of([&] { load_stl(p); }) == ErrorKind::EmptyMesh);
    }
    SUBCASE("missing file")
    {
        CHECK(kind_of([] { read_stl("/nonexistent/nope.stl"); }) == ErrorKind::UnreadableFile);
    }
    SUBCASE("non-finite coordinate")
    {
        auto b = bytes;
        const float nan = std::nanf("");
        std::memcpy(b.data() + 84 + 12, &nan, 4);
        const fs::path p = scratch("nan.stl");
        write_bytes(p, b);
        CHECK(kind_of([&] { load_stl(p); }) == ErrorKind::MalformedStl);
    }
}
