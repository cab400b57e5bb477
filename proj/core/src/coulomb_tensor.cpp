#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "qdot/exact_ed.hpp"

namespace qdot::ed {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint32_t kCacheVersion = 1;

// Gauss-Legendre nodes and weights on [0,1], Newton iteration on the
// Legendre recurrence.
void gauss_legendre_01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = t;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    const double weight = 2.0 / ((1.0 - t * t) * dp * dp);
    x[i] = 0.5 * (1.0 - t);  // roots come out descending; mirror to ascending
    w[i] = 0.5 * weight;
    x[n - 1 - i] = 0.5 * (1.0 + t);
    w[n - 1 - i] = 0.5 * weight;
  }
}

// Cross-correlation of two box cosines over the shifted overlap interval:
//   cc(A,B,s) = int_{max(0,s)}^{min(1,1+s)} cos(A pi x) cos(B pi (x - s)) dx
double cc(int a, int b, double s) {
  const double x0 = std::max(0.0, s);
  const double x1 = std::min(1.0, 1.0 + s);
  if (x1 <= x0) return 0.0;
  const double d = b * kPi * s;
  auto seg = [&](double c, double dd) {
    if (c == 0.0) return (x1 - x0) * std::cos(dd);
    const double cpi = c * kPi;
    return (std::sin(cpi * x1 + dd) - std::sin(cpi * x0 + dd)) / cpi;
  };
  return 0.5 * (seg(static_cast<double>(a - b), d) +
                seg(static_cast<double>(a + b), -d));
}

// W[(A,B),(A',B')] = int_{[-1,1]^2} cc(A,B,s) cc(A',B',sigma) / sqrt(s^2+sigma^2)
// Each quadrant is Duffy-split into two triangles, which cancels the 1/rho
// singularity exactly; the remaining integrand is smooth.
Eigen::MatrixXd build_w_table(int cutoff, int order) {
  const int n_ab = 2 * cutoff + 1;   // A, B in [0, 2*cutoff]
  const int n_pairs = n_ab * n_ab;

  std::vector<double> xi, wx;
  gauss_legendre_01(order, xi, wx);

  // cc values at the outer Duffy nodes +-xi_p ...
  Eigen::MatrixXd u_sum(order, n_pairs);
  // ... and weighted sums over the inner nodes +-xi_p eta_j
  Eigen::MatrixXd g_sum = Eigen::MatrixXd::Zero(order, n_pairs);

  for (int p = 0; p < order; ++p) {
    for (int a = 0; a < n_ab; ++a)
      for (int b = 0; b < n_ab; ++b)
        u_sum(p, a * n_ab + b) = cc(a, b, xi[p]) + cc(a, b, -xi[p]);
  }
  for (int p = 0; p < order; ++p) {
    for (int j = 0; j < order; ++j) {
      const double node = xi[p] * xi[j];
      const double weight = wx[p] * wx[j] / std::sqrt(1.0 + xi[j] * xi[j]);
      for (int a = 0; a < n_ab; ++a)
        for (int b = 0; b < n_ab; ++b)
          g_sum(p, a * n_ab + b) +=
              weight * (cc(a, b, node) + cc(a, b, -node));
    }
  }

  Eigen::MatrixXd w = u_sum.transpose() * g_sum;
  w += w.transpose().eval();
  return w;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

std::uint64_t key_hash(int cutoff, int order) {
  std::uint64_t h = kFnvOffset;
  const std::uint32_t fields[3] = {kCacheVersion, static_cast<std::uint32_t>(cutoff),
                                   static_cast<std::uint32_t>(order)};
  return fnv1a(fields, sizeof(fields), h);
}

int check_order(int order) { return std::max(8, (3 * order) / 4); }

template <typename T>
void put(std::ofstream& out, const T& value) {
  static_assert(std::endian::native == std::endian::little,
                "cache format is little-endian");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
bool get(std::ifstream& in, T& value) {
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return static_cast<bool>(in);
}

}  // namespace

void EDConfig::validate() const {
  if (!(L_over_a > 0.0)) throw std::invalid_argument("EDConfig: L_over_a must be > 0");
  if (sp_cutoff < 2) throw std::invalid_argument("EDConfig: sp_cutoff must be >= 2");
  if (quadrature_order < 8)
    throw std::invalid_argument("EDConfig: quadrature_order must be >= 8");
  if (interaction_scale < 0.0)
    throw std::invalid_argument("EDConfig: interaction_scale must be >= 0");
  for (double b : corner_bias)
    if (!std::isfinite(b)) throw std::invalid_argument("EDConfig: corner bias not finite");
}

std::uint64_t EDConfig::tensor_hash() const {
  return key_hash(sp_cutoff, quadrature_order);
}

int orbital_index(const Orbital& o, int cutoff) {
  if (o.nx < 1 || o.nx > cutoff || o.ny < 1 || o.ny > cutoff)
    throw std::out_of_range("orbital_index: quantum number outside cutoff");
  return (o.nx - 1) * cutoff + (o.ny - 1);
}

Orbital orbital_of(int flat_index, int cutoff) {
  if (flat_index < 0 || flat_index >= cutoff * cutoff)
    throw std::out_of_range("orbital_of: index outside basis");
  return {flat_index / cutoff + 1, flat_index % cutoff + 1};
}

CoulombTensor CoulombTensor::build(int cutoff, int order) {
  if (cutoff < 1) throw std::invalid_argument("CoulombTensor: cutoff must be >= 1");
  if (order < 8) throw std::invalid_argument("CoulombTensor: order must be >= 8");
  CoulombTensor t;
  t.cutoff_ = cutoff;
  t.order_ = order;
  t.order_check_ = check_order(order);
  t.w_main_ = build_w_table(cutoff, order);
  t.w_check_ = build_w_table(cutoff, t.order_check_);
  return t;
}

namespace {

// 16-term assembly of <ij|V|kl> from the cross-correlation table. The sine
// product u_n u_m = cos(|n-m| pi x) - cos((n+m) pi x) expands each electron
// pair into two cosine labels with signs.
double assemble_element(const Eigen::MatrixXd& w, int n_ab, const Orbital& i,
                        const Orbital& j, const Orbital& k, const Orbital& l) {
  const int ax[2] = {std::abs(i.nx - k.nx), i.nx + k.nx};
  const int bx[2] = {std::abs(j.nx - l.nx), j.nx + l.nx};
  const int ay[2] = {std::abs(i.ny - k.ny), i.ny + k.ny};
  const int by[2] = {std::abs(j.ny - l.ny), j.ny + l.ny};

  double acc = 0.0;
  for (int pa = 0; pa < 2; ++pa)
    for (int pb = 0; pb < 2; ++pb) {
      const double sx = (pa == pb) ? 1.0 : -1.0;
      const int row = ax[pa] * n_ab + bx[pb];
      for (int qa = 0; qa < 2; ++qa)
        for (int qb = 0; qb < 2; ++qb) {
          const double sy = (qa == qb) ? 1.0 : -1.0;
          acc += sx * sy * w(row, ay[qa] * n_ab + by[qb]);
        }
    }
  return acc;
}

bool parity_allowed(const Orbital& i, const Orbital& j, const Orbital& k,
                    const Orbital& l) {
  // reflection about the box centre forces odd-sum elements to vanish
  return ((i.nx + j.nx + k.nx + l.nx) % 2 == 0) &&
         ((i.ny + j.ny + k.ny + l.ny) % 2 == 0);
}

}  // namespace

double CoulombTensor::element_unit_box(const Orbital& i, const Orbital& j,
                                       const Orbital& k, const Orbital& l) const {
  if (!parity_allowed(i, j, k, l)) return 0.0;
  return assemble_element(w_main_, 2 * cutoff_ + 1, i, j, k, l);
}

double CoulombTensor::element_unit_box_check(const Orbital& i, const Orbital& j,
                                             const Orbital& k,
                                             const Orbital& l) const {
  if (!parity_allowed(i, j, k, l)) return 0.0;
  return assemble_element(w_check_, 2 * cutoff_ + 1, i, j, k, l);
}

double CoulombTensor::max_table_diff() const {
  return (w_main_ - w_check_).cwiseAbs().maxCoeff();
}

std::string CoulombTensor::cache_key() const {
  return "c" + std::to_string(cutoff_) + "_q" + std::to_string(order_) + "_v" +
         std::to_string(kCacheVersion);
}

void CoulombTensor::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("CoulombTensor: cannot open cache file for writing");

  out.write("QDCT", 4);
  put(out, kCacheVersion);
  put(out, static_cast<std::uint32_t>(cutoff_));
  put(out, static_cast<std::uint32_t>(order_));
  put(out, static_cast<std::uint32_t>(order_check_));
  put(out, key_hash(cutoff_, order_));

  auto write_table = [&](const Eigen::MatrixXd& m) {
    put(out, static_cast<std::uint64_t>(m.size()));
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(m.size() * sizeof(double)));
  };
  write_table(w_main_);
  write_table(w_check_);

  std::uint64_t payload_hash = fnv1a(w_main_.data(), w_main_.size() * sizeof(double), kFnvOffset);
  payload_hash = fnv1a(w_check_.data(), w_check_.size() * sizeof(double), payload_hash);
  put(out, payload_hash);
  if (!out) throw std::runtime_error("CoulombTensor: cache write failed");
}

std::optional<CoulombTensor> CoulombTensor::load(const std::filesystem::path& path,
                                                 int cutoff, int order) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "QDCT", 4) != 0) return std::nullopt;

  std::uint32_t version = 0, file_cutoff = 0, file_order = 0, file_check = 0;
  std::uint64_t hash = 0;
  if (!get(in, version) || !get(in, file_cutoff) || !get(in, file_order) ||
      !get(in, file_check))
    return std::nullopt;
  if (!get(in, hash)) return std::nullopt;
  if (version != kCacheVersion || static_cast<int>(file_cutoff) != cutoff ||
      static_cast<int>(file_order) != order ||
      hash != key_hash(cutoff, order))
    return std::nullopt;

  const int n_pairs = (2 * cutoff + 1) * (2 * cutoff + 1);
  auto read_table = [&](Eigen::MatrixXd& m) {
    std::uint64_t count = 0;
    if (!get(in, count) ||
        count != static_cast<std::uint64_t>(n_pairs) * n_pairs)
      return false;
    m.resize(n_pairs, n_pairs);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    return static_cast<bool>(in);
  };

  CoulombTensor t;
  t.cutoff_ = cutoff;
  t.order_ = order;
  t.order_check_ = static_cast<int>(file_check);
  if (!read_table(t.w_main_) || !read_table(t.w_check_)) return std::nullopt;

  std::uint64_t trailer = 0;
  if (!get(in, trailer)) return std::nullopt;
  std::uint64_t payload_hash =
      fnv1a(t.w_main_.data(), t.w_main_.size() * sizeof(double), kFnvOffset);
  payload_hash =
      fnv1a(t.w_check_.data(), t.w_check_.size() * sizeof(double), payload_hash);
  if (trailer != payload_hash) return std::nullopt;
  return t;
}

CoulombElement coulomb_element(const Orbital& i, const Orbital& j,
                               const Orbital& k, const Orbital& l,
                               const EDConfig& cfg, const CoulombTensor& tensor) {
  cfg.validate();
  for (const Orbital* o : {&i, &j, &k, &l})
    (void)orbital_index(*o, cfg.sp_cutoff);
  if (tensor.cutoff() < cfg.sp_cutoff)
    throw std::invalid_argument("coulomb_element: tensor cutoff too small");

  const double scale = 1.0 / cfg.L_over_a;
  CoulombElement e;
  const double main = tensor.element_unit_box(i, j, k, l);
  const double check = tensor.element_unit_box_check(i, j, k, l);
  e.value = scale * main;
  e.quad_diff = scale * std::abs(main - check);
  e.converged = e.quad_diff <= 1e-9 * (1.0 + std::abs(e.value));
  return e;
}

}  // namespace qdot::ed
