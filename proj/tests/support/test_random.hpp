#pragma once

// Seeded helpers for property-style tests.

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace qdot::test {

inline Eigen::VectorXcd random_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXcd psi(dim);
  for (int i = 0; i < dim; ++i) psi(i) = std::complex<double>(gauss(rng), gauss(rng));
  psi /= psi.norm();
  return psi;
}

// Haar-ish random single-qubit unitary from two random states via Gram-Schmidt.
inline Eigen::Matrix2cd random_local_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Vector2cd a, b;
  for (int i = 0; i < 2; ++i) {
    a(i) = std::complex<double>(gauss(rng), gauss(rng));
    b(i) = std::complex<double>(gauss(rng), gauss(rng));
  }
  a /= a.norm();
  b -= a * (a.dot(b));
  b /= b.norm();
  Eigen::Matrix2cd u;
  u.col(0) = a;
  u.col(1) = b;
  return u;
}

inline Eigen::Matrix2d random_two_level(std::mt19937_64& rng, double scale = 5.0) {
  std::uniform_real_distribution<double> uni(-scale, scale);
  const double e0 = uni(rng), e1 = uni(rng), g = uni(rng);
  Eigen::Matrix2d h;
  h << e0, g, g, e1;
  return h;
}

}  // namespace qdot::test
