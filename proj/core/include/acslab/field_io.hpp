#pragma once

// Binary field files: a fixed header followed by the component arrays as
// little-endian doubles, plus a JSON sidecar "<path>.json" with the same header.

#include <string>

#include "acslab/grid.hpp"

namespace acslab {

/// Throws IoError.
void write_field(const std::string& path, const FormField& field);
/// Throws IoError.
FormField read_field(const std::string& path);

std::string field_header_json(const FormField& field);

}  // namespace acslab
