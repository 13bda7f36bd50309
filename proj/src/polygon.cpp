#include "conbar/polygon.hpp"

namespace conbar {

OpenPolygon::OpenPolygon(std::vector<SpherePoint> dirs, std::vector<double> lengths,
                         Vector anchor_pos)
    : edge_vectors(std::move(dirs)), edge_lengths(std::move(lengths)), anchor(std::move(anchor_pos)) {
  if (edge_vectors.empty()) throw std::invalid_argument("OpenPolygon: needs at least one edge");
  if (edge_vectors.size() != edge_lengths.size())
    throw std::invalid_argument("OpenPolygon: direction/length count mismatch");
  for (const SpherePoint& e : edge_vectors)
    detail::require_same_dim(anchor.size(), e.dim(), "OpenPolygon");
  for (double l : edge_lengths)
    if (!(l > 0.0)) throw std::invalid_argument("OpenPolygon: edge lengths must be positive");
}

OpenPolygon OpenPolygon::from_vertices(const Matrix& vertices) {
  if (vertices.cols() < 2) throw std::invalid_argument("OpenPolygon: needs at least two vertices");
  std::vector<SpherePoint> dirs;
  std::vector<double> lengths;
  for (Eigen::Index i = 0; i + 1 < vertices.cols(); ++i) {
    Vector edge = vertices.col(i + 1) - vertices.col(i);
    const double len = edge.norm();
    if (!(len > 0.0)) throw std::invalid_argument("OpenPolygon: zero-length edge");
    dirs.emplace_back(edge / len);
    lengths.push_back(len);
  }
  return OpenPolygon(std::move(dirs), std::move(lengths), vertices.col(0));
}

Matrix OpenPolygon::vertices() const {
  Matrix v(dim(), edge_count() + 1);
  v.col(0) = anchor;
  for (Eigen::Index i = 0; i < edge_count(); ++i)
    v.col(i + 1) = v.col(i) + edge_lengths[static_cast<size_t>(i)] *
                                  edge_vectors[static_cast<size_t>(i)].coords();
  return v;
}

Vector OpenPolygon::normalized_weights() const {
  Vector w = Eigen::Map<const Vector>(edge_lengths.data(), edge_count());
  return w / w.sum();
}

DiscreteMeasure polygon_to_measure(const OpenPolygon& p) {
  Matrix atoms(p.dim(), p.edge_count());
  for (Eigen::Index i = 0; i < p.edge_count(); ++i)
    atoms.col(i) = p.edge_vectors[static_cast<size_t>(i)].coords();
  return DiscreteMeasure(std::move(atoms), p.normalized_weights());
}

ClosedPolygon close_polygon(const OpenPolygon& p, const SolverConfig& cfg) {
  DiscreteMeasure mu = polygon_to_measure(p);
  if (classify_stability(mu).cls != StabilityClass::Stable)
    throw UnstableInputError("close_polygon: edge measure is not stable");

  SolveResult res = solve_drnm(mu, BallPoint::origin(p.dim()), cfg);
  if (res.trace.status != SolveStatus::Converged)
    throw SolverFailure(res.trace.status, "close_polygon: barycenter solve failed");

  std::vector<SpherePoint> closed;
  closed.reserve(p.edge_vectors.size());
  for (const SpherePoint& e : p.edge_vectors) closed.push_back(boundary_shift(res.barycenter, e));

  Vector weights = p.normalized_weights();
  Vector residual = Vector::Zero(p.dim());
  for (Eigen::Index i = 0; i < p.edge_count(); ++i)
    residual += weights[i] * closed[static_cast<size_t>(i)].coords();

  OpenPolygon out(std::move(closed), p.edge_lengths, p.anchor);
  return {std::move(out), residual.norm()};
}

}  // namespace conbar
