#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "illposed/field.hpp"

namespace illposed::spectral {

// ILF2 flat binary field format:
//   bytes 0..3   magic "ILF2"
//   bytes 4..7   format version (uint32 LE), currently 1
//   bytes 8..15  half width L (float64 LE)
//   bytes 16..19 resolution N (uint32 LE)
//   then N*N float64 LE physical samples, row major (x1 index outer).
inline constexpr std::uint32_t kIlf2Version = 1;

inline void write_ilf2(const Field2D& f, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_ilf2: cannot open " + path);
    out.write("ILF2", 4);
    std::uint32_t version = kIlf2Version;
    out.write(reinterpret_cast<const char*>(&version), 4);
    double L = f.grid().half_width;
    out.write(reinterpret_cast<const char*>(&L), 8);
    std::uint32_t n = static_cast<std::uint32_t>(f.grid().resolution);
    out.write(reinterpret_cast<const char*>(&n), 4);
    auto s = f.samples();
    out.write(reinterpret_cast<const char*>(s.data()),
              static_cast<std::streamsize>(s.size() * sizeof(double)));
    if (!out) throw IoError("write_ilf2: short write to " + path);
}

inline Field2D read_ilf2(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("read_ilf2: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "ILF2", 4) != 0)
        throw IoError("read_ilf2: bad magic in " + path);
    std::uint32_t version = 0;
    in.read(reinterpret_cast<char*>(&version), 4);
    if (version != kIlf2Version)
        throw IoError("read_ilf2: unsupported version " + std::to_string(version));
    double L = 0.0;
    in.read(reinterpret_cast<char*>(&L), 8);
    std::uint32_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in) throw IoError("read_ilf2: truncated header in " + path);
    GridSpec g = make_grid(L, static_cast<int>(n));
    std::vector<double> v(g.cells());
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
    if (!in) throw IoError("read_ilf2: truncated payload in " + path);
    return Field2D::from_samples(g, std::move(v));
}

}  // namespace illposed::spectral
