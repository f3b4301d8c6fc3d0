#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace maxstab {

// Parameter domain for the Husler-Reiss family: symmetric, zero diagonal,
// nonnegative entries, and conditionally negative definite, i.e. v' G v <= 0
// for every v with sum(v) = 0.  The CND check projects G onto the zero-sum
// hyperplane with an orthonormal (Helmert) basis and inspects eigenvalues.
inline void validate_variogram(const Eigen::MatrixXd& g, double rel_tol = 1e-9) {
  const auto d = g.rows();
  if (d < 1 || g.cols() != d) throw std::invalid_argument("variogram: matrix must be square");
  double scale = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) scale = std::max(scale, std::abs(g(i, j)));
  const double tol = rel_tol * std::max(1.0, scale);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(g(i, i)) > tol)
      throw std::invalid_argument("variogram: nonzero diagonal at index " + std::to_string(i + 1));
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (std::abs(g(i, j) - g(j, i)) > tol)
        throw std::invalid_argument("variogram: asymmetric at (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
      if (g(i, j) < -tol)
        throw std::invalid_argument("variogram: negative entry at (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
    }
  }
  if (d == 1) return;
  Eigen::MatrixXd u(d, d - 1);  // Helmert columns, orthonormal, orthogonal to 1
  u.setZero();
  for (Eigen::Index k = 0; k < d - 1; ++k) {
    const double nrm = std::sqrt(static_cast<double>((k + 1) * (k + 2)));
    for (Eigen::Index i = 0; i <= k; ++i) u(i, k) = 1.0 / nrm;
    u(k + 1, k) = -static_cast<double>(k + 1) / nrm;
  }
  const Eigen::MatrixXd b = u.transpose() * g * u;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (b + b.transpose()),
                                                    Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().maxCoeff();
  if (lmax > tol)
    throw std::invalid_argument(
        "variogram: not conditionally negative definite (projected eigenvalue " +
        std::to_string(lmax) + " > tol " + std::to_string(tol) + ")");
}

}  // namespace maxstab
