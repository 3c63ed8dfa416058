#pragma once

#include <cstdint>
#include <string>

#include "rnls/field.hpp"

namespace rnls {

// Binary layout (little endian, no padding):
//   char[4]  "RNLS"
//   u32      format version
//   u32      d
//   u32      K
//   u64      N_x
//   f64      L   (half width of the line axis: x for product, v for profile)
//   f64      t
//   u8       flags: bit 0 = line axis spectral, bit 1 = profile field
//   then N_x * (2K+1)^d pairs (re, im) as f64, line index outer, torus mode
//   index inner in lexicographic order with k_1 slowest.
//
// A JSON sidecar with the same header fields is written next to the file
// (same path with extension ".json").
struct SnapshotHeader {
    std::uint32_t version = 1;
    std::uint32_t dimension = 1;
    std::uint32_t cutoff = 0;
    std::uint64_t points = 0;
    double half_width = 0.0;
    double time = 0.0;
    std::uint8_t flags = 0;

    bool spectral() const { return flags & 1u; }
    bool profile() const { return flags & 2u; }
};

inline constexpr std::uint32_t snapshot_version = 1;

void write_snapshot(const std::string& path, const ProductField& f);
void write_snapshot(const std::string& path, const ProfileField& f);

SnapshotHeader read_snapshot_header(const std::string& path);
ProductField read_product_snapshot(const std::string& path);
ProfileField read_profile_snapshot(const std::string& path);

std::string sidecar_path(const std::string& path);

}  // namespace rnls
