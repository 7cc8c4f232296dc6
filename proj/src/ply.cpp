#include "diemap/ply.hpp"

#include "diemap/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace diemap {

namespace {

constexpr const char* kModule = "cli_report";

void put_double(std::ostream& out, double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

[[noreturn]] void malformed(const std::filesystem::path& path, const std::string& msg)
{
    throw Error(ErrorKind::MalformedPly, kModule, path.string() + ": " + msg);
}

} // namespace

void export_colored_mesh(const TriangleMesh& mesh, std::span<const Rgb> colors, const std::filesystem::path& path,
                         const std::string& comment)
{
    if (colors.size() != mesh.facet_count()) {
        throw Error(ErrorKind::MapMismatch, kModule,
                    std::to_string(colors.size()) + " colors for " + std::to_string(mesh.facet_count()) + " facets");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::UnwritableOutput, kModule, "cannot write '" + path.string() + "'");
    }
    out << "ply\nformat ascii 1.0\n";
    if (!comment.empty()) {
        out << "comment " << comment << '\n';
    }
    out << "element vertex " << mesh.vertex_count() << '\n'
        << "property double x\nproperty double y\nproperty double z\n"
        << "element face " << mesh.facet_count() << '\n'
        << "property list uchar int vertex_indices\n"
        << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
        << "end_header\n";
    for (const Vec3& v : mesh.vertices()) {
        put_double(out, v.x);
        out << ' ';
        put_double(out, v.y);
        out << ' ';
        put_double(out, v.z);
        out << '\n';
    }
    for (FacetId f = 0; f < mesh.facet_count(); ++f) {
        const auto& t = mesh.facets()[f];
        const Rgb c = colors[f];
        out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << ' ' << int{c.r} << ' ' << int{c.g} << ' ' << int{c.b}
            << '\n';
    }
    if (!out) {
        throw Error(ErrorKind::UnwritableOutput, kModule, "write failed on '" + path.string() + "'");
    }
}

ColoredPly read_colored_ply(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::UnreadableFile, kModule, "cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != "ply") {
        malformed(path, "missing 'ply' magic");
    }
    if (!std::getline(in, line) || line != "format ascii 1.0") {
        malformed(path, "only 'format ascii 1.0' is supported");
    }

    std::size_t vertex_count = 0;
    std::size_t face_count = 0;
    std::vector<std::string> vertex_props;
    std::vector<std::string> face_props;
    std::vector<std::string>* current = nullptr;
    bool ended = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word == "comment" || word.empty()) {
            continue;
        }
        if (word == "end_header") {
            ended = true;
            break;
        }
        if (word == "element") {
            std::string name;
            std::size_t n = 0;
            if (!(ls >> name >> n)) {
                malformed(path, "bad element line");
            }
            if (name == "vertex") {
                vertex_count = n;
                current = &vertex_props;
            } else if (name == "face") {
                face_count = n;
                current = &face_props;
            } else {
                malformed(path, "unexpected element '" + name + "'");
            }
        } else if (word == "property") {
            if (!current) {
                malformed(path, "property before element");
            }
            std::string rest;
            std::getline(ls, rest);
            current->push_back(rest.substr(rest.find_first_not_of(' ')));
        } else {
            malformed(path, "unexpected header line '" + line + "'");
        }
    }
    const std::vector<std::string> want_vertex{"double x", "double y", "double z"};
    const std::vector<std::string> want_face{"list uchar int vertex_indices", "uchar red", "uchar green", "uchar blue"};
    if (!ended || vertex_props != want_vertex || face_props != want_face) {
        malformed(path, "header does not describe a per-face colored triangle mesh");
    }

    ColoredPly ply;
    ply.vertices.resize(vertex_count);
    for (Vec3& v : ply.vertices) {
        if (!(in >> v.x >> v.y >> v.z)) {
            malformed(path, "truncated vertex list");
        }
    }
    ply.faces.resize(face_count);
    ply.colors.resize(face_count);
    for (std::size_t i = 0; i < face_count; ++i) {
        int n = 0;
        int r = 0, g = 0, b = 0;
        auto& face = ply.faces[i];
        if (!(in >> n) || n != 3 || !(in >> face[0] >> face[1] >> face[2] >> r >> g >> b)) {
            malformed(path, "bad face record " + std::to_string(i));
        }
        for (VertexId v : face) {
            if (v >= vertex_count) {
                malformed(path, "face " + std::to_string(i) + " references missing vertex");
            }
        }
        for (int c : {r, g, b}) {
            if (c < 0 || c > 255) {
                malformed(path, "color out of range in face " + std::to_string(i));
            }
        }
        ply.colors[i] = {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g), static_cast<std::uint8_t>(b)};
    }
    return ply;
}

} // namespace diemap
