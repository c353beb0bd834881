#ifndef WAVESRC_IO_HPP
#define WAVESRC_IO_HPP

#include <string>

#include "wavesrc/gmig.hpp"

namespace wavesrc::io {

/// Binary field container. Little-endian, fixed 64-byte header:
///   bytes 0..7   magic "WSRCFLD1"
///   bytes 8..15  u32 d, u32 n
///   bytes 16..23 f64 length
///   bytes 24..31 u32 ncomp, u32 reserved (0)
///   bytes 32..39 f64 order_m
///   bytes 40..47 f64 delta
///   bytes 48..55 u64 seed
///   bytes 56..63 u64 payload count (node_count * ncomp)
/// followed by payload complex128 values, node-major with interleaved
/// components (the in-memory layout of FieldRealization::values).
void save_field(const std::string& path, const gmig::FieldRealization& field);
gmig::FieldRealization load_field(const std::string& path);

/// Lossy CSV: one row per node, "x0,x1[,x2],re_c,im_c" per component,
/// %.17g. Intended for inspection and plotting, not round-trips.
void export_field_csv(const std::string& path, const gmig::FieldRealization& field);

} // namespace wavesrc::io

#endif
