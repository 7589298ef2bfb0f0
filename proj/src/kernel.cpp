#include "slabxrt/kernel.hpp"

#include <omp.h>

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slabxrt {

namespace {

const cplx kTwoPiI(0.0, 2.0 * std::numbers::pi);

// What a single Fourier mode contributes to the decomposition.
struct ModeSplit {
  enum class Kind { interval, potential, residual } kind = Kind::residual;
  HomogeneousPoly potential;  // ghat(j,k), degree m-1
  HomogeneousPoly remainder;  // part left in the residual
};

ModeSplit split_mode(const Mode& mode, const HomogeneousPoly& p, double tol) {
  ModeSplit out;
  if (mode.is_spatially_constant()) {
    out.kind = mode.j == 0 ? ModeSplit::Kind::residual : ModeSplit::Kind::interval;
    return out;
  }
  std::vector<double> xi(mode.k.size() + 1);
  xi[0] = mode.j;
  for (std::size_t i = 0; i < mode.k.size(); ++i) xi[i + 1] = mode.k[i];
  Factorization fac = factor_linear(p, xi, tol);
  if (!fac.divisible) {
    out.kind = ModeSplit::Kind::residual;
    return out;
  }
  out.kind = ModeSplit::Kind::potential;
  // Keep the rounding-level remainder so the split is exact.
  out.remainder = p - mul_linear(fac.quotient, xi);
  out.potential = (1.0 / kTwoPiI) * fac.quotient;
  return out;
}

Decomposition assemble(const FourierTensorField& f, const std::vector<const Mode*>& modes,
                       const std::vector<const HomogeneousPoly*>& polys,
                       const std::vector<ModeSplit>& splits) {
  Decomposition d;
  d.h = IntervalField(f.n(), f.m());
  d.g = FourierTensorField(f.n(), f.m() - 1);
  d.residual = FourierTensorField(f.n(), f.m());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const ModeSplit& s = splits[i];
    switch (s.kind) {
      case ModeSplit::Kind::interval:
        d.h.set(modes[i]->j, *polys[i]);
        break;
      case ModeSplit::Kind::potential:
        d.g.set(*modes[i], s.potential);
        if (!s.remainder.is_zero()) d.residual.set(*modes[i], s.remainder);
        break;
      case ModeSplit::Kind::residual:
        if (!polys[i]->is_zero()) d.residual.set(*modes[i], *polys[i]);
        break;
    }
  }
  d.boundary_defect = trace_norm(boundary_trace(d.g, 0.0));
  return d;
}

void check_degree(const FourierTensorField& f) {
  if (f.m() < 0) throw std::invalid_argument("decompose: field degree must be >= 0");
}

}  // namespace

Decomposition decompose(const FourierTensorField& f, double tol) {
  check_degree(f);
  std::vector<const Mode*> modes;
  std::vector<const HomogeneousPoly*> polys;
  for (const auto& [mode, p] : f.modes()) {
    modes.push_back(&mode);
    polys.push_back(&p);
  }
  // Warm the shape caches outside the parallel region.
  if (f.m() >= 1) factor_linear(HomogeneousPoly(f.n() + 1, f.m()), std::vector<double>(f.n() + 1, 1.0), tol);

  std::vector<ModeSplit> splits(modes.size());
  const auto count = static_cast<std::int64_t>(modes.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) splits[i] = split_mode(*modes[i], *polys[i], tol);
  return assemble(f, modes, polys, splits);
}

Decomposition decompose_serial(const FourierTensorField& f, double tol) {
  check_degree(f);
  std::vector<const Mode*> modes;
  std::vector<const HomogeneousPoly*> polys;
  std::vector<ModeSplit> splits;
  for (const auto& [mode, p] : f.modes()) {
    modes.push_back(&mode);
    polys.push_back(&p);
    splits.push_back(split_mode(mode, p, tol));
  }
  return assemble(f, modes, polys, splits);
}

FourierTensorField reassemble(const Decomposition& d) {
  FourierTensorField f = pullback_interval(d.h);
  f += sym_derivative(d.g);
  f += d.residual;
  return f;
}

KernelVerdict is_in_kernel(const FourierTensorField& f, double tol) {
  KernelVerdict verdict;
  verdict.certificate = decompose(f, tol);
  const double scale = tol * sobolev_norm(f, 0.0);
  verdict.in_kernel = verdict.certificate.residual_norm() <= scale &&
                      verdict.certificate.boundary_defect <= scale;
  return verdict;
}

double stability_constant(int n, int m) {
  if (m < 1) return 0.0;
  return std::numbers::sqrt2 / (2.0 * std::numbers::pi * mu_min_singular(n, m));
}

cplx weyl_sum(const std::vector<int>& k, const std::vector<double>& b, long N) {
  if (N < 1) throw std::invalid_argument("weyl_sum: N must be >= 1");
  if (k.size() != b.size()) throw std::invalid_argument("weyl_sum: dimension mismatch");
  double kb = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) kb += k[i] * b[i];
  // Reduce once so l * kb stays well conditioned.
  kb -= std::round(kb);
  cplx sum = 0.0;
  for (long l = 1; l <= N; ++l) sum += expi2pi(static_cast<double>(l) * kb);
  return sum / static_cast<double>(N);
}

namespace {

bool is_relation(const std::vector<long long>& q, const std::vector<double>& b) {
  long double dot = 0.0L;
  long double scale = 1.0L;
  for (std::size_t i = 0; i < b.size(); ++i) {
    dot += static_cast<long double>(q[i]) * b[i];
    scale += std::abs(static_cast<long double>(q[i]) * b[i]);
  }
  const long double frac = dot - std::round(dot);
  return std::abs(frac) <= 1e-10L * scale;
}

bool exhaustive_relation_search(const std::vector<double>& b, int bound) {
  const int n = static_cast<int>(b.size());
  std::vector<long long> q(n, -bound);
  while (true) {
    if (std::any_of(q.begin(), q.end(), [](long long c) { return c != 0; }) && is_relation(q, b)) return true;
    int i = n - 1;
    while (i >= 0 && q[i] == bound) q[i--] = -bound;
    if (i < 0) return false;
    ++q[i];
  }
}

// LLL on the lattice spanned by (e_i, W x_i), x = (1, b_1, ..., b_n). Short
// reduced vectors carry candidate relations in their first n+1 entries.
bool lattice_relation_search(const std::vector<double>& b, int bound) {
  const int dim = static_cast<int>(b.size()) + 1;
  using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const long double weight = 1e12L;
  Mat basis = Mat::Zero(dim, dim + 1);
  for (int i = 0; i < dim; ++i) {
    basis(i, i) = 1.0L;
    basis(i, dim) = weight * (i == 0 ? 1.0L : static_cast<long double>(b[i - 1]));
  }

  auto gram_schmidt = [&](Mat& ortho, Mat& mu, std::vector<long double>& norms) {
    ortho = basis;
    mu = Mat::Zero(dim, dim);
    norms.assign(dim, 0.0L);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < i; ++j) {
        mu(i, j) = basis.row(i).dot(ortho.row(j)) / norms[j];
        ortho.row(i) -= mu(i, j) * ortho.row(j);
      }
      norms[i] = ortho.row(i).squaredNorm();
    }
  };

  Mat ortho, mu;
  std::vector<long double> norms;
  gram_schmidt(ortho, mu, norms);
  int k = 1;
  int guard = 0;
  while (k < dim && guard++ < 100000) {
    for (int j = k - 1; j >= 0; --j) {
      const long double r = std::round(mu(k, j));
      if (r != 0.0L) {
        basis.row(k) -= r * basis.row(j);
        gram_schmidt(ortho, mu, norms);
      }
    }
    if (norms[k] >= (0.75L - mu(k, k - 1) * mu(k, k - 1)) * norms[k - 1]) {
      ++k;
    } else {
      basis.row(k).swap(basis.row(k - 1));
      gram_schmidt(ortho, mu, norms);
      k = std::max(k - 1, 1);
    }
  }

  for (int i = 0; i < dim; ++i) {
    std::vector<long long> q(dim - 1);
    bool small = true;
    bool nonzero = false;
    for (int c = 1; c < dim; ++c) {
      q[c - 1] = std::llround(basis(i, c));
      small = small && std::llabs(q[c - 1]) <= bound;
      nonzero = nonzero || q[c - 1] != 0;
    }
    if (small && nonzero && is_relation(q, b)) return true;
  }
  return false;
}

}  // namespace

bool is_dense_orbit(const std::vector<double>& b, int denominator_bound) {
  if (denominator_bound < 1) throw std::invalid_argument("is_dense_orbit: bound must be >= 1");
  if (b.empty()) return true;  // T^0 is a point
  const bool found = b.size() <= 2 ? exhaustive_relation_search(b, denominator_bound)
                                   : lattice_relation_search(b, denominator_bound);
  return !found;
}

bool interval_field_is_potential(const IntervalField& h) {
  if (h.m() < 1) return h.modes().empty() || std::all_of(h.modes().begin(), h.modes().end(),
                                                          [](const auto& e) { return e.second.is_zero(); });
  const auto& basis = monomials(h.n() + 1, h.m());
  for (const auto& [j, p] : h.modes()) {
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (basis[i][0] == 0 && p[i] != cplx{}) return false;
    }
  }
  return true;
}

FourierTensorField random_boundary_free_potential(int n, int m_minus_one, int J, int K,
                                                  std::uint64_t seed) {
  FourierTensorField raw = random_field(n, m_minus_one, J, K, seed);
  FourierTensorField g(n, m_minus_one);
  if (m_minus_one < 0) return g;
  for (const auto& [mode, p] : raw.modes()) {
    if (mode.is_spatially_constant() || mode.j == 0) continue;
    g.set(mode, p);
    // ghat(0,k) absorbs the trace so that sum_j ghat(j,k) = 0.
    g.add(Mode{0, mode.k}, -1.0 * p);
  }
  return g;
}

KernelSample random_kernel_element(int n, int m, int J, int K, std::uint64_t seed) {
  KernelSample s;
  s.h = random_interval_field(n, m, J, seed);
  s.g = random_boundary_free_potential(n, m - 1, J, K, seed ^ 0x9e3779b97f4a7c15ULL);
  s.f = pullback_interval(s.h);
  s.f += sym_derivative(s.g);
  return s;
}

}  // namespace slabxrt
