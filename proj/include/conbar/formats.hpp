#pragma once

#include <array>
#include <iosfwd>
#include <string>

#include "conbar/extension.hpp"
#include "conbar/polygon.hpp"

// Flat-file formats: JSON documents for measures, polygons and curves, ASCII
// OBJ (v/f records) for extension meshes. JSON documents carry a
// schema_version field; parsers accept major version 1 only.

namespace conbar {

inline constexpr const char* kSchemaVersion = "1.0";

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// {"dimension": d, "atoms": [[...]...], "weights": [...]}
DiscreteMeasure read_measure_json(std::istream& in);
void write_measure_json(const DiscreteMeasure& mu, std::ostream& out);

// {"dimension": d, "vertices": [[...]...]} or
// {"dimension": d, "edges": [{"direction": [...], "length": l}...], "anchor": [...]}
OpenPolygon read_polygon_json(std::istream& in);
void write_open_polygon_json(const OpenPolygon& p, std::ostream& out);
void write_closed_polygon_json(const ClosedPolygon& p, std::ostream& out);

// {"dimension": 3, "samples": [[x,y,z]...]}
SphericalCurve read_curve_json(std::istream& in);

struct ObjMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;  // 0-based
};

// Fan + quad-split triangulation of the polar grid (center followed by the
// solved rings; the boundary ring is diagnostics-only and not meshed).
void write_obj(const ExtensionGrid& grid, std::ostream& out);
ObjMesh read_obj(std::istream& in);

}  // namespace conbar
