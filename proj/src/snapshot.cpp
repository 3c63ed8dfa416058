#include "rnls/snapshot.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace rnls {
namespace {

static_assert(std::endian::native == std::endian::little,
              "snapshot i/o assumes a little-endian host");

template <class T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw FormatError("truncated snapshot header");
    return v;
}

template <class Tag>
void write_any(const std::string& path, const Field<Tag>& f, bool profile) {
    SnapshotHeader h;
    h.version = snapshot_version;
    h.dimension = static_cast<std::uint32_t>(f.spectrum().dimension());
    h.cutoff = static_cast<std::uint32_t>(f.spectrum().cutoff());
    h.points = f.points();
    h.half_width = f.grid().half_width();
    h.time = f.time();
    h.flags = static_cast<std::uint8_t>((f.representation() == Representation::spectral ? 1u : 0u) |
                                        (profile ? 2u : 0u));
    std::ofstream os(path, std::ios::binary);
    if (!os) throw FormatError("cannot open " + path + " for writing");
    os.write("RNLS", 4);
    put(os, h.version);
    put(os, h.dimension);
    put(os, h.cutoff);
    put(os, h.points);
    put(os, h.half_width);
    put(os, h.time);
    put(os, h.flags);
    os.write(reinterpret_cast<const char*>(f.data().data()),
             static_cast<std::streamsize>(f.data().size() * sizeof(cplx)));
    if (!os) throw FormatError("write failed for " + path);

    nlohmann::json j = {
        {"format", "RNLS"},
        {"version", h.version},
        {"d", h.dimension},
        {"K", h.cutoff},
        {"N_x", h.points},
        {"L", h.half_width},
        {"t", h.time},
        {"representation", h.spectral() ? "line-spectral/torus-spectral" : "line-physical/torus-spectral"},
        {"kind", profile ? "profile" : "product"},
        {"dealias_size", f.spectrum().dealias_size()},
        {"value_layout", "interleaved f64 (re,im), line index outer, lexicographic torus modes inner"},
        {"data_bytes", f.data().size() * sizeof(cplx)},
        {"file", std::filesystem::path(path).filename().string()}};
    std::ofstream js(sidecar_path(path));
    js << j.dump(2) << "\n";
}

SnapshotHeader read_header(std::istream& is) {
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "RNLS", 4) != 0) throw FormatError("bad snapshot magic");
    SnapshotHeader h;
    h.version = get<std::uint32_t>(is);
    if (h.version != snapshot_version) throw FormatError("unsupported snapshot version");
    h.dimension = get<std::uint32_t>(is);
    h.cutoff = get<std::uint32_t>(is);
    h.points = get<std::uint64_t>(is);
    h.half_width = get<double>(is);
    h.time = get<double>(is);
    h.flags = get<std::uint8_t>(is);
    return h;
}

template <class Tag>
Field<Tag> read_any(const std::string& path, bool profile) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    SnapshotHeader h = read_header(is);
    if (h.profile() != profile)
        throw FormatError(profile ? "snapshot holds a product field" : "snapshot holds a profile field");
    Field<Tag> f(LineGrid(h.half_width, h.points),
                 TorusSpectrum(static_cast<int>(h.dimension), static_cast<int>(h.cutoff)), h.time,
                 h.spectral() ? Representation::spectral : Representation::physical);
    is.read(reinterpret_cast<char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size() * sizeof(cplx)));
    if (!is) throw FormatError("truncated snapshot data in " + path);
    return f;
}

}  // namespace

std::string sidecar_path(const std::string& path) {
    return std::filesystem::path(path).replace_extension(".json").string();
}

void write_snapshot(const std::string& path, const ProductField& f) { write_any(path, f, false); }
void write_snapshot(const std::string& path, const ProfileField& f) { write_any(path, f, true); }

SnapshotHeader read_snapshot_header(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw FormatError("cannot open " + path);
    return read_header(is);
}

ProductField read_product_snapshot(const std::string& path) {
    return read_any<ProductTag>(path, false);
}

ProfileField read_profile_snapshot(const std::string& path) {
    return read_any<ProfileTag>(path, true);
}

}  // namespace rnls
