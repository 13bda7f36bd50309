#pragma once

#include <vector>

#include "conbar/solve.hpp"

// Polygon closure: an open polygonal line with fixed edge lengths is closed
// by shifting its unit edge vectors with the boundary extension of the shift
// that centralizes the induced measure.

namespace conbar {

struct UnstableInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFailure : std::runtime_error {
  SolveStatus status;
  SolverFailure(SolveStatus s, const std::string& msg) : std::runtime_error(msg), status(s) {}
};

// n edges stored as unit directions plus positive lengths, anchored at the
// first vertex. vertices()[i+1] - vertices()[i] = length_i * direction_i.
struct OpenPolygon {
  std::vector<SpherePoint> edge_vectors;
  std::vector<double> edge_lengths;
  Vector anchor;

  OpenPolygon(std::vector<SpherePoint> dirs, std::vector<double> lengths, Vector anchor_pos);

  static OpenPolygon from_vertices(const Matrix& vertices);  // d x (n+1) columns

  Eigen::Index dim() const { return anchor.size(); }
  Eigen::Index edge_count() const { return static_cast<Eigen::Index>(edge_vectors.size()); }
  Matrix vertices() const;

  // Edge lengths normalized to total 1, as measure weights.
  Vector normalized_weights() const;
};

struct ClosedPolygon {
  OpenPolygon polygon;
  double closure_error;  // |sum omega_i y_i| over the normalized weights
};

// atoms = edge directions, weights = normalized lengths.
DiscreteMeasure polygon_to_measure(const OpenPolygon& p);

// Closes p by shifting the edge directions with the barycenter of its edge
// measure (computed by DRNM). Lengths are copied verbatim; the anchor vertex
// is kept. Throws UnstableInputError / SolverFailure.
ClosedPolygon close_polygon(const OpenPolygon& p, const SolverConfig& cfg);

}  // namespace conbar
