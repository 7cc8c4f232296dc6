#include "diemap/error.hpp"
#include "diemap/mesh.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <optional>
#include <string_view>

namespace diemap {

namespace {

constexpr const char* kModule = "mesh_core";
constexpr std::size_t kHeaderBytes = 80;
constexpr std::size_t kRecordBytes = 50;

static_assert(std::endian::native == std::endian::little, "binary STL reader assumes a little-endian host");

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

class Tokenizer {
public:
    explicit Tokenizer(std::string_view text) : text_(text) {}

    std::string_view next()
    {
        while (pos_ < text_.size() && is_space(text_[pos_])) {
            ++pos_;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !is_space(text_[pos_])) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    void skip_line()
    {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
            ++pos_;
        }
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

bool parse_double(std::string_view token, double& out)
{
    if (token.empty()) {
        return false;
    }
    if (token.front() == '+') {
        token.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
    return ec == std::errc{} && ptr == token.data() + token.size() && std::isfinite(out);
}

bool parse_vec(Tokenizer& tok, Vec3& v)
{
    return parse_double(tok.next(), v.x) && parse_double(tok.next(), v.y) && parse_double(tok.next(), v.z);
}

bool expect(Tokenizer& tok, std::string_view word) { return tok.next() == word; }

// Returns nullopt when the text is not a well-formed ASCII STL.
std::optional<std::vector<Triangle>> parse_ascii(std::string_view text)
{
    Tokenizer tok(text);
    if (tok.next() != "solid") {
        return std::nullopt;
    }
    tok.skip_line(); // solid name

    std::vector<Triangle> triangles;
    for (;;) {
        const std::string_view word = tok.next();
        if (word == "endsolid") {
            return triangles;
        }
        if (word != "facet") {
            return std::nullopt;
        }
        Vec3 ignored_normal;
        if (!expect(tok, "normal") || !parse_vec(tok, ignored_normal) || !expect(tok, "outer") || !expect(tok, "loop")) {
            return std::nullopt;
        }
        Triangle t;
        for (Vec3& corner : t) {
            if (!expect(tok, "vertex") || !parse_vec(tok, corner)) {
                return std::nullopt;
            }
        }
        if (!expect(tok, "endloop") || !expect(tok, "endfacet")) {
            return std::nullopt;
        }
        triangles.push_back(t);
    }
}

float read_f32(const std::byte* p)
{
    float v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

std::vector<Triangle> parse_binary(std::span<const std::byte> bytes)
{
    if (bytes.size() < kHeaderBytes + 4) {
        throw Error(ErrorKind::MalformedStl, kModule,
                    "truncated header: " + std::to_string(bytes.size()) + " bytes");
    }
    std::uint32_t count = 0;
    std::memcpy(&count, bytes.data() + kHeaderBytes, sizeof count);
    const std::size_t expected = kHeaderBytes + 4 + std::size_t{count} * kRecordBytes;
    if (bytes.size() < expected) {
        const std::size_t complete = (bytes.size() - kHeaderBytes - 4) / kRecordBytes;
        throw Error(ErrorKind::MalformedStl, kModule,
                    "truncated record " + std::to_string(complete) + " of " + std::to_string(count) +
                        " declared facets");
    }
    if (bytes.size() > expected) {
        throw Error(ErrorKind::MalformedStl, kModule,
                    "facet count mismatch: header declares " + std::to_string(count) + " facets but file holds " +
                        std::to_string(bytes.size() - expected) + " extra bytes");
    }

    std::vector<Triangle> triangles(count);
    const std::byte* rec = bytes.data() + kHeaderBytes + 4;
    for (std::uint32_t i = 0; i < count; ++i, rec += kRecordBytes) {
        // Skip the stored normal; it is recomputed from the winding.
        const std::byte* p = rec + 12;
        for (Vec3& corner : triangles[i]) {
            corner = {read_f32(p), read_f32(p + 4), read_f32(p + 8)};
            p += 12;
        }
        for (const Vec3& corner : triangles[i]) {
            if (!std::isfinite(corner.x) || !std::isfinite(corner.y) || !std::isfinite(corner.z)) {
                throw Error(ErrorKind::MalformedStl, kModule, "non-finite coordinate in facet " + std::to_string(i));
            }
        }
    }
    return triangles;
}

bool starts_with_solid(std::span<const std::byte> bytes)
{
    std::size_t i = 0;
    while (i < bytes.size() && is_space(static_cast<char>(bytes[i]))) {
        ++i;
    }
    return bytes.size() - i >= 5 && std::memcmp(bytes.data() + i, "solid", 5) == 0;
}

void put_f32(std::ostream& out, double v)
{
    const auto f = static_cast<float>(v);
    char buf[4];
    std::memcpy(buf, &f, 4);
    out.write(buf, 4);
}

Vec3 unit_normal(const Triangle& t)
{
    const Vec3 c = cross(t[1] - t[0], t[2] - t[0]);
    const double len = norm(c);
    return len > 0.0 ? c * (1.0 / len) : Vec3{};
}

} // namespace

StlData parse_stl(std::span<const std::byte> bytes)
{
    if (starts_with_solid(bytes)) {
        const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        if (auto ascii = parse_ascii(text)) {
            return {std::move(*ascii), StlEncoding::Ascii};
        }
    }
    return {parse_binary(bytes), StlEncoding::Binary};
}

StlData read_stl(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    std::error_code ec;
    if (!in || std::filesystem::is_directory(path, ec)) {
        throw Error(ErrorKind::UnreadableFile, kModule, "cannot open '" + path.string() + "'");
    }
    std::vector<std::byte> bytes;
    in.seekg(0, std::ios::end);
    const auto size = in.tellg();
    if (size < 0) {
        throw Error(ErrorKind::UnreadableFile, kModule, "cannot read '" + path.string() + "'");
    }
    bytes.resize(static_cast<std::size_t>(size));
    in.seekg(0, std::ios::beg);
    in.read(reinterpret_cast<char*>(bytes.data()), size);
    if (!in) {
        throw Error(ErrorKind::UnreadableFile, kModule, "short read on '" + path.string() + "'");
    }
    return parse_stl(bytes);
}

TriangleMesh load_stl(const std::filesystem::path& path, const MeshHygiene& hygiene)
{
    const StlData data = read_stl(path);
    return TriangleMesh::from_triangles(data.triangles, hygiene);
}

void write_stl_binary(const std::filesystem::path& path, std::span<const Triangle> triangles)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::UnwritableOutput, kModule, "cannot write '" + path.string() + "'");
    }
    char header[kHeaderBytes] = {};
    std::memcpy(header, "binary STL written by diemap", 28);
    out.write(header, kHeaderBytes);
    const auto count = static_cast<std::uint32_t>(triangles.size());
    out.write(reinterpret_cast<const char*>(&count), 4);
    for (const Triangle& t : triangles) {
        const Vec3 n = unit_normal(t);
        put_f32(out, n.x);
        put_f32(out, n.y);
        put_f32(out, n.z);
        for (const Vec3& p : t) {
            put_f32(out, p.x);
            put_f32(out, p.y);
            put_f32(out, p.z);
        }
        const char attribute[2] = {0, 0};
        out.write(attribute, 2);
    }
    if (!out) {
        throw Error(ErrorKind::UnwritableOutput, kModule, "write failed on '" + path.string() + "'");
    }
}

void write_stl_ascii(const std::filesystem::path& path, std::span<const Triangle> triangles)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::UnwritableOutput, kModule, "cannot write '" + path.string() + "'");
    }
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    out << "solid diemap\n";
    for (const Triangle& t : triangles) {
        const Vec3 n = unit_normal(t);
        out << "  facet normal " << n.x << ' ' << n.y << ' ' << n.z << "\n    outer loop\n";
        for (const Vec3& p : t) {
            out << "      vertex " << p.x << ' ' << p.y << ' ' << p.z << '\n';
        }
        out << "    endloop\n  endfacet\n";
    }
    out << "endsolid diemap\n";
    if (!out) {
        throw Error(ErrorKind::UnwritableOutput, kModule, "write failed on '" + path.string() + "'");
    }
}

} // namespace diemap
