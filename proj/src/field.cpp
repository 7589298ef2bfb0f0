#include "slabxrt/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace slabxrt {

cplx expi2pi(double t) {
  const double r = t - std::round(t);
  if (r == 0.0) return 1.0;
  if (r == 0.5 || r == -0.5) return -1.0;
  if (r == 0.25) return cplx(0.0, 1.0);
  if (r == -0.25) return cplx(0.0, -1.0);
  const double angle = 2.0 * std::numbers::pi * r;
  return {std::cos(angle), std::sin(angle)};
}

bool Mode::is_spatially_constant() const {
  return std::all_of(k.begin(), k.end(), [](int c) { return c == 0; });
}

FourierTensorField::FourierTensorField(int n, int m) : n_(n), m_(std::max(m, -1)) {
  if (n < 0) throw std::invalid_argument("FourierTensorField: n must be >= 0");
}

void FourierTensorField::check_shape(const Mode& mode, const HomogeneousPoly& p) const {
  if (static_cast<int>(mode.k.size()) != n_) {
    throw std::invalid_argument("FourierTensorField: mode k has length " +
                                std::to_string(mode.k.size()) + ", expected " + std::to_string(n_));
  }
  if (p.dim() != n_ + 1 || p.degree() != m_) {
    throw std::invalid_argument("FourierTensorField: polynomial shape (" + std::to_string(p.dim()) +
                                "," + std::to_string(p.degree()) + ") does not match field (" +
                                std::to_string(n_ + 1) + "," + std::to_string(m_) + ")");
  }
}

void FourierTensorField::check_same_shape(const FourierTensorField& other) const {
  if (n_ != other.n_ || m_ != other.m_) {
    throw std::invalid_argument("FourierTensorField: shape mismatch");
  }
}

const HomogeneousPoly* FourierTensorField::find(const Mode& mode) const {
  auto it = modes_.find(mode);
  return it == modes_.end() ? nullptr : &it->second;
}

HomogeneousPoly FourierTensorField::at(const Mode& mode) const {
  if (const auto* p = find(mode)) return *p;
  return HomogeneousPoly(n_ + 1, m_);
}

void FourierTensorField::set(const Mode& mode, HomogeneousPoly p) {
  check_shape(mode, p);
  modes_.insert_or_assign(mode, std::move(p));
}

void FourierTensorField::add(const Mode& mode, const HomogeneousPoly& p) {
  check_shape(mode, p);
  auto [it, inserted] = modes_.try_emplace(mode, p);
  if (!inserted) it->second += p;
}

void FourierTensorField::prune(double threshold) {
  std::erase_if(modes_, [&](const auto& entry) { return entry.second.max_abs() <= threshold; });
}

int FourierTensorField::j_band() const {
  int band = 0;
  for (const auto& [mode, p] : modes_) band = std::max(band, std::abs(mode.j));
  return band;
}

int FourierTensorField::k_band() const {
  int band = 0;
  for (const auto& [mode, p] : modes_)
    for (int c : mode.k) band = std::max(band, std::abs(c));
  return band;
}

FourierTensorField& FourierTensorField::operator+=(const FourierTensorField& other) {
  check_same_shape(other);
  for (const auto& [mode, p] : other.modes_) add(mode, p);
  return *this;
}

FourierTensorField& FourierTensorField::operator-=(const FourierTensorField& other) {
  check_same_shape(other);
  for (const auto& [mode, p] : other.modes_) add(mode, -1.0 * p);
  return *this;
}

FourierTensorField& FourierTensorField::operator*=(cplx s) {
  for (auto& [mode, p] : modes_) p *= s;
  return *this;
}

double FourierTensorField::max_abs() const {
  double m = 0.0;
  for (const auto& [mode, p] : modes_) m = std::max(m, p.max_abs());
  return m;
}

// ---------------------------------------------------------------------------

IntervalField::IntervalField(int n, int m) : n_(n), m_(std::max(m, -1)) {}

HomogeneousPoly IntervalField::at(int j) const {
  auto it = modes_.find(j);
  return it == modes_.end() ? HomogeneousPoly(n_ + 1, m_) : it->second;
}

void IntervalField::set(int j, HomogeneousPoly p) {
  if (p.dim() != n_ + 1 || p.degree() != m_) {
    throw std::invalid_argument("IntervalField: polynomial shape mismatch");
  }
  if (j == 0) {
    if (!p.is_zero()) throw std::invalid_argument("IntervalField: mode j = 0 must vanish (zero mean)");
    return;
  }
  modes_.insert_or_assign(j, std::move(p));
}

cplx IntervalField::eval(double x, std::span<const double> u) const {
  cplx sum = 0.0;
  for (const auto& [j, p] : modes_) sum += poly_eval(p, u) * expi2pi(j * x);
  return sum;
}

// ---------------------------------------------------------------------------

cplx field_eval(const FourierTensorField& f, const SlabPoint& pt, std::span<const double> u) {
  if (static_cast<int>(pt.y.size()) != f.n()) throw std::invalid_argument("field_eval: point dimension mismatch");
  if (static_cast<int>(u.size()) != f.fibre_dim()) throw std::invalid_argument("field_eval: fibre dimension mismatch");
  cplx sum = 0.0;
  for (const auto& [mode, p] : f.modes()) {
    double phase = mode.j * pt.x;
    for (int i = 0; i < f.n(); ++i) phase += mode.k[i] * pt.y[i];
    sum += poly_eval(p, u) * expi2pi(phase);
  }
  return sum;
}

FourierTensorField sym_derivative(const FourierTensorField& g) {
  FourierTensorField f(g.n(), g.m() + 1);
  const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
  std::vector<double> xi(g.n() + 1);
  for (const auto& [mode, p] : g.modes()) {
    if (mode.j == 0 && mode.is_spatially_constant()) continue;
    xi[0] = mode.j;
    for (int i = 0; i < g.n(); ++i) xi[i + 1] = mode.k[i];
    f.set(mode, two_pi_i * mul_linear(p, xi));
  }
  return f;
}

FourierTensorField pullback_interval(const IntervalField& h) {
  FourierTensorField f(h.n(), h.m());
  for (const auto& [j, p] : h.modes()) f.set(Mode{j, std::vector<int>(h.n(), 0)}, p);
  return f;
}

IntervalField interval_part(const FourierTensorField& f) {
  IntervalField h(f.n(), f.m());
  for (const auto& [mode, p] : f.modes()) {
    if (mode.j != 0 && mode.is_spatially_constant()) h.set(mode.j, p);
  }
  return h;
}

double sobolev_norm(const FourierTensorField& f, double s) {
  double total = 0.0;
  for (const auto& [mode, p] : f.modes()) {
    double freq2 = 1.0 + static_cast<double>(mode.j) * mode.j;
    for (int c : mode.k) freq2 += static_cast<double>(c) * c;
    const double n2 = sphere_inner(p, p).real();
    total += std::pow(freq2, s) * n2;
  }
  return std::sqrt(std::max(total, 0.0));
}

double l2_norm(const IntervalField& h) {
  double total = 0.0;
  for (const auto& [j, p] : h.modes()) total += sphere_inner(p, p).real();
  return std::sqrt(std::max(total, 0.0));
}

bool is_real_valued(const FourierTensorField& f, double tol) {
  const double bound = tol * f.max_abs();
  for (const auto& [mode, p] : f.modes()) {
    Mode mirror{-mode.j, mode.k};
    for (int& c : mirror.k) c = -c;
    const HomogeneousPoly q = f.at(mirror);
    for (std::size_t i = 0; i < p.size(); ++i)
      if (std::abs(std::conj(p[i]) - q[i]) > bound) return false;
  }
  return true;
}

std::map<std::vector<int>, HomogeneousPoly> boundary_trace(const FourierTensorField& g, double x0) {
  std::map<std::vector<int>, HomogeneousPoly> trace;
  for (const auto& [mode, p] : g.modes()) {
    auto [it, inserted] = trace.try_emplace(mode.k, g.n() + 1, g.m());
    it->second += expi2pi(mode.j * x0) * p;
  }
  return trace;
}

double trace_norm(const std::map<std::vector<int>, HomogeneousPoly>& trace) {
  double total = 0.0;
  for (const auto& [k, p] : trace) total += sphere_norm(p);
  return total;
}

std::vector<std::vector<int>> lattice_box(int n, int K) {
  std::vector<std::vector<int>> out;
  std::vector<int> k(n, -K);
  while (true) {
    out.push_back(k);
    int i = n - 1;
    while (i >= 0 && k[i] == K) k[i--] = -K;
    if (i < 0) break;
    ++k[i];
  }
  return out;
}

namespace {

HomogeneousPoly random_poly(int dim, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  HomogeneousPoly p(dim, degree);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    p[i] = cplx(re, im);
  }
  return p;
}

}  // namespace

FourierTensorField random_field(int n, int m, int J, int K, std::uint64_t seed) {
  if (J < 0 || K < 0) throw std::invalid_argument("random_field: band limits must be >= 0");
  std::mt19937_64 rng(seed);
  FourierTensorField f(n, m);
  if (m < 0) return f;
  const auto ks = lattice_box(n, K);
  for (int j = -J; j <= J; ++j)
    for (const auto& k : ks) f.set(Mode{j, k}, random_poly(n + 1, m, rng));
  return f;
}

IntervalField random_interval_field(int n, int m, int J, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  IntervalField h(n, m);
  if (m < 0) return h;
  for (int j = -J; j <= J; ++j) {
    if (j != 0) h.set(j, random_poly(n + 1, m, rng));
  }
  return h;
}

}  // namespace slabxrt
