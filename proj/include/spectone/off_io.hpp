#pragma once

#include <iosfwd>
#include <string>

#include "spectone/mesh.hpp"

namespace spectone::mesh {

/// Reads an ASCII OFF triangle mesh: "OFF", "V F E", V coordinate lines and
/// F lines "3 i j k". Comment lines starting with '#' are skipped.
/// Throws ParseError on malformed input and MeshError on invalid geometry.
TriMesh read_off(std::istream& in);
TriMesh read_off_file(const std::string& path);

/// Writes coordinates with 17 significant digits, so vertices round-trip
/// exactly.
void write_off(std::ostream& out, const TriMesh& mesh);
void write_off_file(const std::string& path, const TriMesh& mesh);

}  // namespace spectone::mesh
