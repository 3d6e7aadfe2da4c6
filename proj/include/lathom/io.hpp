#pragma once

#include <string>

#include "lathom/environment.hpp"
#include "lathom/fields.hpp"

namespace lathom {

inline constexpr const char* kVersion = "lathom 0.1.0";

// Field dumps: a small binary header (magic, dimension, size, domain tag,
// count) followed by little-endian 64-bit floats, and a CSV with one row per
// site (index, coordinates, value).
void write_field_binary(const std::string& path, const VertexField& u);
VertexField read_field_binary(const std::string& path);
void write_field_csv(const std::string& path, const VertexField& u);

// Environment file: one JSON header line (d, topology, size, law, seed)
// terminated by '\n', then the raw conductance array in the fixed axis-major
// slot order.  Round-trips bit-exactly.
void write_environment(const std::string& path, const Environment& env);
Environment read_environment(const std::string& path);

// FNV-1a over the serialized configuration, used in run manifests
uint64_t config_hash(const std::string& serialized);

}  // namespace lathom
