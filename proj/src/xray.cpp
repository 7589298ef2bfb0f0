#include "slabxrt/xray.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace slabxrt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t grid_points(int n, int size) {
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(size);
  return total;
}

std::vector<double> fibre_direction(const std::vector<double>& b) {
  std::vector<double> u(b.size() + 1);
  u[0] = 1.0;
  std::copy(b.begin(), b.end(), u.begin() + 1);
  return u;
}

void check_b(const FourierTensorField& f, const std::vector<double>& b, const char* what) {
  if (static_cast<int>(b.size()) != f.n()) {
    throw std::invalid_argument(std::string(what) + ": b has length " + std::to_string(b.size()) +
                                ", field has n = " + std::to_string(f.n()));
  }
}

void check_grid(const FourierTensorField& f, int a_grid_size) {
  if (a_grid_size < 1 || (f.n() > 0 && a_grid_size <= 2 * f.k_band())) {
    throw std::invalid_argument("sinogram: a-grid size " + std::to_string(a_grid_size) +
                                " does not exceed twice the k band limit " +
                                std::to_string(f.k_band()));
  }
}

// Fourier coefficients c_k of a -> I f(a, b) for every stored k.
std::map<std::vector<int>, cplx> sinogram_coefficients(const FourierTensorField& f,
                                                       const std::vector<double>& b) {
  const auto u = fibre_direction(b);
  std::map<std::vector<int>, cplx> coeffs;
  for (const auto& [mode, p] : f.modes()) {
    double kb = 0.0;
    for (int i = 0; i < f.n(); ++i) kb += mode.k[i] * b[i];
    coeffs[mode.k] += poly_eval(p, u) * phi(mode.j + kb);
  }
  return coeffs;
}

cplx synthesize(const std::map<std::vector<int>, cplx>& coeffs, const std::vector<double>& a) {
  cplx sum = 0.0;
  for (const auto& [k, c] : coeffs) {
    double phase = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) phase += k[i] * a[i];
    sum += c * expi2pi(phase);
  }
  return sum;
}

// Integrand of I f(a, b) at the quadrature nodes, split as
// sum_modes [P(1,b) e(k.a)] * e((j + k.b) t_q); the second factor does not
// depend on a and is tabulated once per direction.
class NodeTable {
 public:
  NodeTable(const FourierTensorField& f, const std::vector<double>& b, int nodes)
      : rule_(gauss_legendre(nodes)), n_(f.n()) {
    const auto u = fibre_direction(b);
    for (const auto& [mode, p] : f.modes()) {
      coefs_.push_back(poly_eval(p, u));
      ks_.push_back(mode.k);
      double kb = 0.0;
      for (int i = 0; i < n_; ++i) kb += mode.k[i] * b[i];
      freqs_.push_back(mode.j + kb);
    }
    const std::size_t count = coefs_.size();
    phases_.resize(static_cast<std::size_t>(nodes) * count);
    for (int q = 0; q < nodes; ++q)
      for (std::size_t t = 0; t < count; ++t) phases_[q * count + t] = expi2pi(freqs_[t] * rule_.nodes[q]);
  }

  cplx integrate(const std::vector<double>& a) const {
    const std::size_t count = coefs_.size();
    std::vector<cplx> start(count);
    for (std::size_t t = 0; t < count; ++t) {
      double phase = 0.0;
      for (int i = 0; i < n_; ++i) phase += ks_[t][i] * a[i];
      start[t] = coefs_[t] * expi2pi(phase);
    }
    cplx sum = 0.0;
    for (std::size_t q = 0; q < rule_.nodes.size(); ++q) {
      const cplx* row = &phases_[q * count];
      cplx value = 0.0;
      for (std::size_t t = 0; t < count; ++t) value += start[t] * row[t];
      sum += rule_.weights[q] * value;
    }
    return sum;
  }

 private:
  const QuadratureRule& rule_;
  int n_;
  std::vector<cplx> coefs_;
  std::vector<std::vector<int>> ks_;
  std::vector<double> freqs_;
  std::vector<cplx> phases_;
};

Sinogram empty_sinogram(const FourierTensorField& f, const std::vector<double>& b, int size) {
  Sinogram s;
  s.b = b;
  s.a_grid_size = size;
  s.values.assign(grid_points(f.n(), size), cplx{});
  return s;
}

}  // namespace

std::vector<double> Sinogram::point(std::size_t flat) const {
  std::vector<double> a(b.size());
  for (int d = n() - 1; d >= 0; --d) {
    a[d] = static_cast<double>(flat % a_grid_size) / a_grid_size;
    flat /= a_grid_size;
  }
  return a;
}

cplx phi(double t) {
  if (std::abs(t) < 1e-4) {
    // sum_{n>=0} z^n / (n+1)!, z = 2 pi i t
    const cplx z(0.0, kTwoPi * t);
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int n = 1; n < 6; ++n) {
      term *= z / static_cast<double>(n + 1);
      sum += term;
    }
    return sum;
  }
  return (expi2pi(t) - 1.0) / cplx(0.0, kTwoPi * t);
}

const QuadratureRule& gauss_legendre(int nodes) {
  if (nodes < 2) throw std::invalid_argument("gauss_legendre: need at least 2 nodes");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[nodes];
  if (slot) return *slot;

  auto rule = std::make_unique<QuadratureRule>();
  rule->nodes.resize(nodes);
  rule->weights.resize(nodes);
  const int half = (nodes + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (nodes + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int l = 1; l <= nodes; ++l) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * l - 1.0) * z * p1 - (l - 1.0) * p2) / l;
      }
      dp = nodes * (z * p0 - p1) / (z * z - 1.0);
      const double step = p0 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    // map [-1,1] -> [0,1]
    rule->nodes[i] = 0.5 * (1.0 - z);
    rule->nodes[nodes - 1 - i] = 0.5 * (1.0 + z);
    rule->weights[i] = rule->weights[nodes - 1 - i] = 0.5 * w;
  }
  slot = std::move(rule);
  return *slot;
}

int default_quadrature_nodes(const FourierTensorField& f, const std::vector<double>& b) {
  double max_b = 0.0;
  for (double c : b) max_b = std::max(max_b, std::abs(c));
  const int cycles = f.j_band() + f.n() * f.k_band() * static_cast<int>(std::ceil(max_b));
  return 4 * (cycles + 1) + 16;
}

cplx xray_quadrature(const FourierTensorField& f, const Geodesic& geo, int nodes) {
  check_b(f, geo.b, "xray_quadrature");
  if (geo.a.size() != geo.b.size()) throw std::invalid_argument("xray_quadrature: a and b lengths differ");
  const QuadratureRule& rule = gauss_legendre(nodes);
  const auto u = fibre_direction(geo.b);

  // Polynomial values are constant along the curve; only the phases vary.
  std::vector<std::pair<cplx, const Mode*>> terms;
  terms.reserve(f.modes().size());
  for (const auto& [mode, p] : f.modes()) terms.emplace_back(poly_eval(p, u), &mode);

  SlabPoint pt{0.0, std::vector<double>(f.n())};
  cplx sum = 0.0;
  for (int q = 0; q < nodes; ++q) {
    const double t = rule.nodes[q];
    cplx value = 0.0;
    for (const auto& [coef, mode] : terms) {
      double phase = mode->j * t;
      for (int i = 0; i < f.n(); ++i) phase += mode->k[i] * (geo.a[i] + geo.b[i] * t);
      value += coef * expi2pi(phase);
    }
    sum += rule.weights[q] * value;
  }
  return sum;
}

cplx xray_fourier_coeff(const FourierTensorField& f, const std::vector<int>& k,
                        const std::vector<double>& b) {
  check_b(f, b, "xray_fourier_coeff");
  const auto u = fibre_direction(b);
  double kb = 0.0;
  for (int i = 0; i < f.n(); ++i) kb += k[i] * b[i];
  cplx sum = 0.0;
  for (const auto& [mode, p] : f.modes()) {
    if (mode.k != k) continue;
    sum += poly_eval(p, u) * phi(mode.j + kb);
  }
  return sum;
}

Sinogram xray_sinogram(const FourierTensorField& f, const std::vector<double>& b, int a_grid_size) {
  check_b(f, b, "xray_sinogram");
  check_grid(f, a_grid_size);
  const auto coeffs = sinogram_coefficients(f, b);
  Sinogram s = empty_sinogram(f, b, a_grid_size);
  const auto total = static_cast<std::int64_t>(s.values.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < total; ++i) s.values[i] = synthesize(coeffs, s.point(i));
  return s;
}

Sinogram xray_sinogram_serial(const FourierTensorField& f, const std::vector<double>& b,
                              int a_grid_size) {
  check_b(f, b, "xray_sinogram");
  check_grid(f, a_grid_size);
  const auto coeffs = sinogram_coefficients(f, b);
  Sinogram s = empty_sinogram(f, b, a_grid_size);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = synthesize(coeffs, s.point(i));
  return s;
}

Sinogram quadrature_sinogram(const FourierTensorField& f, const std::vector<double>& b,
                             int a_grid_size, int nodes) {
  check_b(f, b, "quadrature_sinogram");
  const NodeTable table(f, b, nodes);
  Sinogram s = empty_sinogram(f, b, a_grid_size);
  const auto total = static_cast<std::int64_t>(s.values.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t i = 0; i < total; ++i) s.values[i] = table.integrate(s.point(i));
  return s;
}

Sinogram quadrature_sinogram_serial(const FourierTensorField& f, const std::vector<double>& b,
                                    int a_grid_size, int nodes) {
  check_b(f, b, "quadrature_sinogram");
  const NodeTable table(f, b, nodes);
  Sinogram s = empty_sinogram(f, b, a_grid_size);
  for (std::size_t i = 0; i < s.values.size(); ++i) s.values[i] = table.integrate(s.point(i));
  return s;
}

cplx potential_trace(const FourierTensorField& g, const std::vector<double>& a,
                     const std::vector<double>& b) {
  check_b(g, b, "potential_trace");
  const auto u = fibre_direction(b);
  SlabPoint start{0.0, a};
  SlabPoint shifted{0.0, a};
  for (std::size_t i = 0; i < b.size(); ++i) shifted.y[i] += b[i];
  return field_eval(g, shifted, u) - field_eval(g, start, u);
}

double max_abs(const Sinogram& s) {
  double m = 0.0;
  for (cplx v : s.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace slabxrt
