#include "conbar/formats.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace conbar {

namespace {

using nlohmann::json;

json parse_document(std::istream& in) {
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("expected a JSON object");
  if (doc.contains("schema_version")) {
    const std::string v = doc["schema_version"].is_string()
                              ? doc["schema_version"].get<std::string>()
                              : doc["schema_version"].dump();
    if (v.rfind("1.", 0) != 0 && v != "1")
      throw FormatError("unsupported schema_version " + v);
  }
  return doc;
}

Eigen::Index read_dimension(const json& doc) {
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
    throw FormatError("missing integer field 'dimension'");
  const auto d = doc["dimension"].get<Eigen::Index>();
  if (d < 2) throw FormatError("'dimension' must be >= 2");
  return d;
}

Vector read_vector(const json& arr, Eigen::Index d, const char* what) {
  if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != d)
    throw FormatError(std::string(what) + ": expected an array of " + std::to_string(d) + " numbers");
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!arr[static_cast<size_t>(i)].is_number())
      throw FormatError(std::string(what) + ": non-numeric entry");
    v[i] = arr[static_cast<size_t>(i)].get<double>();
  }
  return v;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

}  // namespace

DiscreteMeasure read_measure_json(std::istream& in) {
  const json doc = parse_document(in);
  const Eigen::Index d = read_dimension(doc);
  if (!doc.contains("atoms") || !doc["atoms"].is_array() || doc["atoms"].empty())
    throw FormatError("missing nonempty array field 'atoms'");
  if (!doc.contains("weights") || !doc["weights"].is_array())
    throw FormatError("missing array field 'weights'");
  const auto& atoms_json = doc["atoms"];
  const auto& weights_json = doc["weights"];
  if (atoms_json.size() != weights_json.size())
    throw FormatError("'atoms' and 'weights' must have equal length");

  Matrix atoms(d, static_cast<Eigen::Index>(atoms_json.size()));
  Vector weights(static_cast<Eigen::Index>(weights_json.size()));
  for (size_t i = 0; i < atoms_json.size(); ++i) {
    atoms.col(static_cast<Eigen::Index>(i)) = read_vector(atoms_json[i], d, "atom");
    if (!weights_json[i].is_number()) throw FormatError("weight: non-numeric entry");
    weights[static_cast<Eigen::Index>(i)] = weights_json[i].get<double>();
  }
  try {
    return DiscreteMeasure(std::move(atoms), std::move(weights));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void write_measure_json(const DiscreteMeasure& mu, std::ostream& out) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dimension"] = mu.dim();
  json atoms = json::array();
  for (Eigen::Index i = 0; i < mu.size(); ++i) atoms.push_back(vector_to_json(mu.atoms().col(i)));
  doc["atoms"] = std::move(atoms);
  doc["weights"] = vector_to_json(mu.weights());
  out << doc.dump(2) << '\n';
}

OpenPolygon read_polygon_json(std::istream& in) {
  const json doc = parse_document(in);
  const Eigen::Index d = read_dimension(doc);
  try {
    if (doc.contains("edges")) {
      const auto& edges = doc["edges"];
      if (!edges.is_array() || edges.empty()) throw FormatError("'edges' must be a nonempty array");
      std::vector<SpherePoint> dirs;
      std::vector<double> lengths;
      for (const auto& e : edges) {
        if (!e.is_object() || !e.contains("direction") || !e.contains("length"))
          throw FormatError("edge entries need 'direction' and 'length'");
        dirs.emplace_back(read_vector(e["direction"], d, "edge direction"));
        if (!e["length"].is_number()) throw FormatError("edge length: non-numeric entry");
        lengths.push_back(e["length"].get<double>());
      }
      Vector anchor = doc.contains("anchor") ? read_vector(doc["anchor"], d, "anchor")
                                             : Vector::Zero(d);
      return OpenPolygon(std::move(dirs), std::move(lengths), std::move(anchor));
    }
    if (doc.contains("vertices")) {
      const auto& verts = doc["vertices"];
      if (!verts.is_array() || verts.size() < 2)
        throw FormatError("'vertices' must be an array of at least two points");
      Matrix m(d, static_cast<Eigen::Index>(verts.size()));
      for (size_t i = 0; i < verts.size(); ++i)
        m.col(static_cast<Eigen::Index>(i)) = read_vector(verts[i], d, "vertex");
      return OpenPolygon::from_vertices(m);
    }
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  throw FormatError("polygon document needs either 'edges' or 'vertices'");
}

namespace {
json polygon_to_json(const OpenPolygon& p) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dimension"] = p.dim();
  json edges = json::array();
  for (Eigen::Index i = 0; i < p.edge_count(); ++i) {
    json e;
    e["direction"] = vector_to_json(p.edge_vectors[static_cast<size_t>(i)].coords());
    e["length"] = p.edge_lengths[static_cast<size_t>(i)];
    edges.push_back(std::move(e));
  }
  doc["edges"] = std::move(edges);
  doc["anchor"] = vector_to_json(p.anchor);
  return doc;
}
}  // namespace

void write_open_polygon_json(const OpenPolygon& p, std::ostream& out) {
  out << polygon_to_json(p).dump(2) << '\n';
}

void write_closed_polygon_json(const ClosedPolygon& p, std::ostream& out) {
  json doc = polygon_to_json(p.polygon);
  doc["closure_error"] = p.closure_error;
  out << doc.dump(2) << '\n';
}

SphericalCurve read_curve_json(std::istream& in) {
  const json doc = parse_document(in);
  const Eigen::Index d = read_dimension(doc);
  if (d != 3) throw FormatError("curve documents require dimension 3");
  if (!doc.contains("samples") || !doc["samples"].is_array() || doc["samples"].size() < 3)
    throw FormatError("missing array field 'samples' with at least 3 points");
  std::vector<Eigen::Vector3d> samples;
  samples.reserve(doc["samples"].size());
  for (const auto& s : doc["samples"]) samples.emplace_back(read_vector(s, 3, "sample"));
  try {
    return SphericalCurve(std::move(samples));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

void write_obj(const ExtensionGrid& grid, std::ostream& out) {
  char buf[96];
  auto emit_vertex = [&](const Eigen::Vector3d& v) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v[0], v[1], v[2]);
    out << buf;
  };
  for (const Eigen::Vector3d& v : grid.images) emit_vertex(v);

  const int nt = grid.n_theta;
  auto ring_index = [nt](int j, int l) { return 2 + (j - 1) * nt + (l % nt); };  // 1-based
  for (int l = 0; l < nt; ++l)
    out << "f 1 " << ring_index(1, l) << ' ' << ring_index(1, l + 1) << '\n';
  for (int j = 1; j < grid.n_r; ++j) {
    for (int l = 0; l < nt; ++l) {
      const int a = ring_index(j, l), b = ring_index(j, l + 1);
      const int c = ring_index(j + 1, l + 1), d = ring_index(j + 1, l);
      out << "f " << a << ' ' << b << ' ' << c << '\n';
      out << "f " << a << ' ' << c << ' ' << d << '\n';
    }
  }
}

ObjMesh read_obj(std::istream& in) {
  ObjMesh mesh;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "v") {
      Eigen::Vector3d v;
      if (!(ls >> v[0] >> v[1] >> v[2])) throw FormatError("malformed OBJ vertex line");
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<int, 3> f{};
      if (!(ls >> f[0] >> f[1] >> f[2])) throw FormatError("malformed OBJ face line");
      for (int& idx : f) idx -= 1;
      mesh.faces.push_back(f);
    }
  }
  return mesh;
}

}  // namespace conbar
