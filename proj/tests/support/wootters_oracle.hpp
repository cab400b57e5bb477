#pragma once

// Test-only oracle: Wootters concurrence through the spin-flipped density
// matrix rho_tilde = (sy x sy) rho^* (sy x sy). For a pure state
// R = rho * rho_tilde has rank one, so its single nonzero eigenvalue is
// tr(R) exactly and c = sqrt(tr R); a general eigensolve would turn the
// three zero eigenvalues into ~sqrt(eps) noise.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>

namespace qdot::test {

inline double wootters_concurrence(const Eigen::Vector4cd& psi) {
  const Eigen::Matrix4cd rho = psi * psi.adjoint();

  Eigen::Matrix4d flip = Eigen::Matrix4d::Zero();  // sigma_y x sigma_y
  flip(0, 3) = -1.0;
  flip(1, 2) = 1.0;
  flip(2, 1) = 1.0;
  flip(3, 0) = -1.0;

  const Eigen::Matrix4cd rho_tilde = flip * rho.conjugate() * flip;
  const Eigen::Matrix4cd r = rho * rho_tilde;
  return std::sqrt(std::max(0.0, r.trace().real()));
}

}  // namespace qdot::test
