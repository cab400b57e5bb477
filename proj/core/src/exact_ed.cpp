#include "qdot/exact_ed.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qdot/constants.hpp"

namespace qdot::ed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPairDimCap = 20000;
constexpr int kDenseSolveLimit = 2500;

// <n| x |m> over [0,1] in the sine basis; nonzero for n = m and odd n+m.
double x_element(int n, int m) {
  if (n == m) return 0.5;
  if ((n + m) % 2 == 0) return 0.0;
  const double dm = n - m, sm = n + m;
  return (2.0 / (kPi * kPi)) * (1.0 / (sm * sm) - 1.0 / (dm * dm));
}

// one-body matrix: kinetic diagonal plus bilinear corner-bias weights
Eigen::MatrixXd one_body_matrix(const EDConfig& cfg) {
  const int c = cfg.sp_cutoff;
  const int n1 = c * c;
  const double kin_scale = 1.0 / (cfg.L_over_a * cfg.L_over_a);

  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(n1, n1);
  for (int o = 0; o < n1; ++o) {
    const Orbital orb = orbital_of(o, c);
    h1(o, o) = 0.5 * kPi * kPi * (orb.nx * orb.nx + orb.ny * orb.ny) * kin_scale;
  }

  bool has_bias = false;
  for (double b : cfg.corner_bias)
    if (b != 0.0) has_bias = true;
  if (!has_bias) return h1;

  // corner weights, clockwise from top-left: (1-x)y, xy, x(1-y), (1-x)(1-y)
  for (int o = 0; o < n1; ++o) {
    const Orbital a = orbital_of(o, c);
    for (int p = o; p < n1; ++p) {
      const Orbital b = orbital_of(p, c);
      const double xe = x_element(a.nx, b.nx);
      const double ye = x_element(a.ny, b.ny);
      const double xd = (a.nx == b.nx ? 1.0 : 0.0) - xe;  // <1-x>
      const double yd = (a.ny == b.ny ? 1.0 : 0.0) - ye;
      const double val = cfg.corner_bias[0] * xd * ye + cfg.corner_bias[1] * xe * ye +
                         cfg.corner_bias[2] * xe * yd + cfg.corner_bias[3] * xd * yd;
      h1(o, p) += val;
      if (p != o) h1(p, o) += val;
    }
  }
  return h1;
}

}  // namespace

std::vector<std::pair<int, int>> pair_basis(const EDConfig& cfg) {
  cfg.validate();
  const int n1 = cfg.sp_cutoff * cfg.sp_cutoff;
  const bool symmetric = cfg.channel == model::SpinKind::Singlet;

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(symmetric ? n1 * (n1 + 1) / 2 : n1 * (n1 - 1) / 2);
  for (int p = 0; p < n1; ++p)
    for (int q = symmetric ? p : p + 1; q < n1; ++q) pairs.emplace_back(p, q);
  return pairs;
}

EDMatrix build_h(const EDConfig& cfg, const CoulombTensor& tensor) {
  cfg.validate();
  if (tensor.cutoff() < cfg.sp_cutoff)
    throw std::invalid_argument("build_h: tensor cutoff below config cutoff");

  const int c = cfg.sp_cutoff;
  const auto pairs = pair_basis(cfg);
  const int dim = static_cast<int>(pairs.size());
  if (dim > kPairDimCap)
    throw std::length_error("build_h: pair basis exceeds the desk-scale cap");

  const Eigen::MatrixXd h1 = one_body_matrix(cfg);
  const bool diagonal_h1 = cfg.corner_bias == std::array<double, 4>{};
  const double vscale = cfg.interaction_scale / cfg.L_over_a;

  const int n1 = c * c;
  std::vector<Orbital> orbs(n1);
  for (int o = 0; o < n1; ++o) orbs[o] = orbital_of(o, c);

  EDMatrix out;
  out.channel = cfg.channel;
  out.cutoff = c;
  out.h = Eigen::MatrixXd::Zero(dim, dim);

  const bool symmetric = cfg.channel == model::SpinKind::Singlet;
  std::int64_t terms = 0, flagged = 0;

  // raw two-electron element <ab|H|cd> in the unsymmetrised product basis
  auto raw = [&](int a, int b, int cc_, int d) {
    double val = 0.0;
    if (b == d && (!diagonal_h1 || a == cc_)) val += h1(a, cc_);
    if (a == cc_ && (!diagonal_h1 || b == d)) val += h1(b, d);
    if (vscale != 0.0) {
      const double v = tensor.element_unit_box(orbs[a], orbs[b], orbs[cc_], orbs[d]);
      if (v != 0.0) {
        const double check = tensor.element_unit_box_check(orbs[a], orbs[b], orbs[cc_], orbs[d]);
        ++terms;
        if (std::abs(v - check) * vscale > 1e-9 * (1.0 + std::abs(v) * vscale)) ++flagged;
        val += vscale * v;
      }
    }
    return val;
  };

  for (int r = 0; r < dim; ++r) {
    const auto [pr, qr] = pairs[r];
    const double nr = (pr == qr) ? std::numbers::sqrt2 : 1.0;
    for (int col = r; col < dim; ++col) {
      const auto [pc, qc] = pairs[col];
      double val;
      if (symmetric) {
        const double nc = (pc == qc) ? std::numbers::sqrt2 : 1.0;
        val = (raw(pr, qr, pc, qc) + raw(pr, qr, qc, pc)) / (nr * nc);
      } else {
        val = raw(pr, qr, pc, qc) - raw(pr, qr, qc, pc);
      }
      if (val != 0.0) {
        out.h(r, col) = val;
        out.h(col, r) = val;
      }
    }
  }

  out.coulomb_terms = terms;
  out.flagged_terms = flagged;
  return out;
}

namespace {

SpectrumResult dense_lowest(const EDMatrix& hm, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hm.h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("solve_lowest: dense eigensolver failed");

  SpectrumResult out;
  out.channel = hm.channel;
  out.cutoff = hm.cutoff;
  out.iterations = 0;
  out.energies_eh.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
  out.vectors = es.eigenvectors().leftCols(k);
  double max_rel = 0.0;
  for (int i = 0; i < k; ++i) {
    const double e = out.energies_eh[i];
    const double res = (hm.h * out.vectors.col(i) - e * out.vectors.col(i)).norm();
    max_rel = std::max(max_rel, res / std::max(1.0, std::abs(e)));
  }
  out.max_residual = max_rel;
  return out;
}

// Blocked Krylov expansion with full reorthogonalisation and explicit
// Rayleigh-Ritz extraction. The block keeps symmetry-forced degenerate pairs
// (the triplet ground doublet) resolvable, and residuals are exact because
// H*Q is kept alongside Q.
SpectrumResult krylov_lowest(const EDMatrix& hm, int k) {
  const Eigen::MatrixXd& h = hm.h;
  const int n = static_cast<int>(h.rows());
  const int block = std::min(n, std::max(2, std::min(k, 6)));
  const int m_cap = std::min(n, 600 + 8 * k);

  Eigen::MatrixXd basis(n, m_cap);
  Eigen::MatrixXd h_basis(n, m_cap);

  std::mt19937_64 rng(0x51a7c0deULL);
  auto random_column = [&](Eigen::Ref<Eigen::VectorXd> col) {
    for (int i = 0; i < n; ++i)
      col(i) = static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
  };

  // orthogonalise `cols` columns starting at `start` against everything before
  // them (two passes) and among themselves; tiny columns are replaced by
  // fresh random vectors
  auto append_orthonormal = [&](int start, int cols) {
    for (int j = 0; j < cols; ++j) {
      auto col = basis.col(start + j);
      for (int attempt = 0; attempt < 5; ++attempt) {
        for (int pass = 0; pass < 2; ++pass) {
          if (start + j > 0) {
            auto prev = basis.leftCols(start + j);
            col -= prev * (prev.transpose() * col).eval();
          }
        }
        const double norm = col.norm();
        if (norm > 1e-8) {
          col /= norm;
          break;
        }
        random_column(col);
      }
    }
  };

  int m = 0;
  for (int j = 0; j < block; ++j) random_column(basis.col(j));
  append_orthonormal(0, block);
  m = block;

  SpectrumResult out;
  out.channel = hm.channel;
  out.cutoff = hm.cutoff;

  int blocks_since_ritz = 0;
  while (true) {
    // H times the newest block; this is also the next Krylov direction
    h_basis.middleCols(m - block, block).noalias() =
        h * basis.middleCols(m - block, block);

    const bool room = m + block <= m_cap;
    if (room) {
      basis.middleCols(m, block) = h_basis.middleCols(m - block, block);
      append_orthonormal(m, block);
    }

    ++blocks_since_ritz;
    if (blocks_since_ritz >= 8 || !room) {
      blocks_since_ritz = 0;
      Eigen::MatrixXd t = basis.leftCols(m).transpose() * h_basis.leftCols(m);
      t = 0.5 * (t + t.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
      const int kk = std::min(k, m);
      const Eigen::MatrixXd y = es.eigenvectors().leftCols(kk);
      const Eigen::VectorXd theta = es.eigenvalues().head(kk);

      const Eigen::MatrixXd ritz = basis.leftCols(m) * y;
      const Eigen::MatrixXd h_ritz = h_basis.leftCols(m) * y;
      double max_rel = 0.0;
      for (int i = 0; i < kk; ++i) {
        const double res = (h_ritz.col(i) - theta(i) * ritz.col(i)).norm();
        max_rel = std::max(max_rel, res / std::max(1.0, std::abs(theta(i))));
      }

      const bool converged = (kk == k) && (max_rel <= 1e-10);
      if (converged || !room) {
        if (max_rel > 1e-8)
          throw std::runtime_error(
              "solve_lowest: Krylov iteration did not reach the residual target");
        out.energies_eh.assign(theta.data(), theta.data() + kk);
        out.vectors = ritz;
        out.max_residual = max_rel;
        out.iterations = m;
        return out;
      }
    }
    if (room) m += block;
  }
}

}  // namespace

SpectrumResult solve_lowest(const EDMatrix& hm, int k) {
  const int dim = static_cast<int>(hm.h.rows());
  if (k < 1 || k > dim) throw std::invalid_argument("solve_lowest: bad k");
  if (dim <= kDenseSolveLimit) return dense_lowest(hm, k);
  return krylov_lowest(hm, k);
}

ChargeDensity charge_density(const EDConfig& cfg, const Eigen::VectorXd& eigvec,
                             int grid_n) {
  cfg.validate();
  if (grid_n < 3 || grid_n % 2 == 0)
    throw std::invalid_argument("charge_density: grid_n must be odd and >= 3");
  const auto pairs = pair_basis(cfg);
  if (eigvec.size() != static_cast<Eigen::Index>(pairs.size()))
    throw std::invalid_argument("charge_density: eigenvector does not match basis");
  if (std::abs(eigvec.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("charge_density: eigenvector is not normalised");

  const int c = cfg.sp_cutoff;
  const int n1 = c * c;
  const bool symmetric = cfg.channel == model::SpinKind::Singlet;

  // unsymmetrised coefficient matrix psi(r1,r2) = sum C(p,q) phi_p(r1) phi_q(r2)
  Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(n1, n1);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    const auto [p, q] = pairs[idx];
    const double x = eigvec(static_cast<Eigen::Index>(idx));
    if (p == q) {
      coeff(p, p) = x;
    } else {
      coeff(p, q) = x * inv_sqrt2;
      coeff(q, p) = symmetric ? x * inv_sqrt2 : -x * inv_sqrt2;
    }
  }
  const Eigen::MatrixXd dmat = coeff * coeff.transpose();  // one-body, trace 1

  Eigen::MatrixXd u(grid_n, c);  // u(a, n-1) = sqrt(2) sin(n pi x_a)
  for (int a = 0; a < grid_n; ++a) {
    const double x = static_cast<double>(a) / (grid_n - 1);
    for (int nq = 1; nq <= c; ++nq)
      u(a, nq - 1) = std::numbers::sqrt2 * std::sin(nq * kPi * x);
  }

  std::vector<Orbital> orbs(n1);
  for (int o = 0; o < n1; ++o) orbs[o] = orbital_of(o, c);

  ChargeDensity out;
  out.grid_n = grid_n;
  out.rho = Eigen::MatrixXd::Zero(grid_n, grid_n);

  Eigen::MatrixXd phi(grid_n, n1);
  for (int b = 0; b < grid_n; ++b) {
    for (int o = 0; o < n1; ++o)
      phi.col(o) = u.col(orbs[o].nx - 1) * u(b, orbs[o].ny - 1);
    const Eigen::MatrixXd m = phi * dmat;
    out.rho.col(b) = 2.0 * (phi.array() * m.array()).rowwise().sum().matrix();
  }

  // composite Simpson over the grid
  Eigen::VectorXd sw(grid_n);
  const double hstep = 1.0 / (grid_n - 1);
  for (int a = 0; a < grid_n; ++a)
    sw(a) = (a == 0 || a == grid_n - 1) ? 1.0 : (a % 2 == 1 ? 4.0 : 2.0);
  sw *= hstep / 3.0;
  out.integral_grid = sw.transpose() * out.rho * sw;
  out.integral_exact = 2.0 * dmat.trace();
  return out;
}

DeltaExtraction extract_delta(const SpectrumResult& singlets,
                              const SpectrumResult& triplets) {
  if (singlets.channel != model::SpinKind::Singlet ||
      triplets.channel != model::SpinKind::Triplet)
    throw std::invalid_argument("extract_delta: sector mismatch");
  if (singlets.energies_eh.size() < 2)
    throw std::invalid_argument("extract_delta: need at least two singlet levels");
  if (triplets.energies_eh.empty())
    throw std::invalid_argument("extract_delta: need at least one triplet level");

  const double es1 = singlets.energies_eh[0];
  const double es2 = singlets.energies_eh[1];
  const double et = triplets.energies_eh[0];
  const double splitting = es2 - es1;

  DeltaExtraction out;
  out.delta_eh = 0.25 * splitting;
  out.midway_ratio = (splitting > 0.0) ? (et - 0.5 * (es1 + es2)) / splitting : 0.0;
  if (singlets.energies_eh.size() >= 3)
    out.isolated = (singlets.energies_eh[2] - es2) >= 2.0 * splitting;
  return out;
}

double effective_bohr_nm(const model::MaterialParams& material) {
  material.validate();
  return constants::bohr_radius_nm * material.relative_permittivity /
         material.effective_mass_ratio;
}

double effective_hartree_ueV(const model::MaterialParams& material) {
  return constants::coulomb_ueV_nm /
         (material.relative_permittivity * effective_bohr_nm(material));
}

}  // namespace qdot::ed
