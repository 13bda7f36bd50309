#include "conbar/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace conbar {

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (Eigen::Index p = 0; p < a.rows(); ++p)
    for (Eigen::Index q = p + 1; q < a.cols(); ++q) s += 2.0 * a(p, q) * a(p, q);
  return std::sqrt(s);
}

// Two-sided Givens update A <- G^T A G zeroing a(p,q), G = [[c, s], [-s, c]]
// in the (p,q) plane.
void rotate(Eigen::MatrixXd& a, Eigen::MatrixXd* v, Eigen::Index p, Eigen::Index q) {
  const double apq = a(p, q);
  const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double akp = a(k, p), akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const double apk = a(p, k), aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = a(q, p) = 0.0;  // annihilated by construction
  if (v) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const double vkp = (*v)(k, p), vkq = (*v)(k, q);
      (*v)(k, p) = c * vkp - s * vkq;
      (*v)(k, q) = s * vkp + c * vkq;
    }
  }
}

}  // namespace

SymmetricEigen jacobi_eigen(Eigen::MatrixXd a, double tol, bool with_vectors) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix not square");
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw std::invalid_argument("jacobi_eigen: matrix not symmetric");
  a = 0.5 * (a + a.transpose()).eval();

  Eigen::MatrixXd v;
  if (with_vectors) v = Eigen::MatrixXd::Identity(n, n);

  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps && off_diagonal_norm(a) > tol; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q)
        if (a(p, q) != 0.0) rotate(a, with_vectors ? &v : nullptr, p, q);
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&a](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  SymmetricEigen out;
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.values[i] = a(order[i], order[i]);
  if (with_vectors) {
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out.vectors.col(i) = v.col(order[i]);
  }
  return out;
}

double smallest_eigenvalue(const Eigen::MatrixXd& a) { return jacobi_eigen(a).values[0]; }

double sym_operator_norm(const Eigen::MatrixXd& a) {
  const Eigen::VectorXd ev = jacobi_eigen(a).values;
  return std::max(std::abs(ev[0]), std::abs(ev[ev.size() - 1]));
}

}  // namespace conbar
