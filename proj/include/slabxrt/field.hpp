#pragma once

// Band-limited symmetric m-tensor fields on the periodic slab [0,1] x T^n.
//
// A tensor field is a function of the base point (x, y) that is a homogeneous
// polynomial of degree m in the fibre variable u = (v, w) in R^{n+1}. It is
// stored through its Fourier series
//
//   f(x, y; v, w) = sum_{j,k} fhat(j, k; v, w) e_j(x) e_k(y),
//
// where e_j(x) = exp(2 pi i j x) and [0,1] is identified with T^1. Absent
// modes are zero.

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "slabxrt/poly.hpp"

namespace slabxrt {

/// exp(2 pi i t), with t reduced modulo 1 first so integer arguments give 1 exactly.
cplx expi2pi(double t);

struct Mode {
  int j = 0;
  std::vector<int> k;

  bool is_spatially_constant() const;  // k == 0
  friend auto operator<=>(const Mode&, const Mode&) = default;
};

struct SlabPoint {
  double x = 0.0;
  std::vector<double> y;
};

class FourierTensorField {
 public:
  using ModeMap = std::map<Mode, HomogeneousPoly>;

  FourierTensorField() = default;
  FourierTensorField(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }
  int fibre_dim() const { return n_ + 1; }

  const ModeMap& modes() const { return modes_; }
  /// Stored polynomial or nullptr.
  const HomogeneousPoly* find(const Mode& mode) const;
  /// Stored polynomial or the zero polynomial of the field's shape.
  HomogeneousPoly at(const Mode& mode) const;
  void set(const Mode& mode, HomogeneousPoly p);
  /// Adds p to the stored mode, creating it if needed.
  void add(const Mode& mode, const HomogeneousPoly& p);

  /// Drops modes whose coefficients all have magnitude <= threshold.
  void prune(double threshold = 0.0);

  int j_band() const;  // max |j| over stored modes
  int k_band() const;  // max |k|_inf over stored modes

  FourierTensorField& operator+=(const FourierTensorField& other);
  FourierTensorField& operator-=(const FourierTensorField& other);
  FourierTensorField& operator*=(cplx s);
  friend FourierTensorField operator+(FourierTensorField a, const FourierTensorField& b) { return a += b; }
  friend FourierTensorField operator-(FourierTensorField a, const FourierTensorField& b) { return a -= b; }
  friend FourierTensorField operator*(cplx s, FourierTensorField a) { return a *= s; }

  /// Largest coefficient magnitude over all modes.
  double max_abs() const;

 private:
  void check_shape(const Mode& mode, const HomogeneousPoly& p) const;
  void check_same_shape(const FourierTensorField& other) const;

  int n_ = 0;
  int m_ = 0;
  ModeMap modes_;
};

/// A field depending only on x in [0,1], valued in degree-m polynomials in
/// n+1 variables. The j = 0 mode is always zero (zero mean over [0,1]).
class IntervalField {
 public:
  IntervalField() = default;
  IntervalField(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }
  const std::map<int, HomogeneousPoly>& modes() const { return modes_; }
  HomogeneousPoly at(int j) const;
  /// Throws std::invalid_argument for a nonzero j = 0 mode.
  void set(int j, HomogeneousPoly p);

  /// h(x; u).
  cplx eval(double x, std::span<const double> u) const;

 private:
  int n_ = 0;
  int m_ = 0;
  std::map<int, HomogeneousPoly> modes_;
};

/// Sum over stored modes of fhat(j,k)(u) e^{2 pi i (j x + k.y)}.
cplx field_eval(const FourierTensorField& f, const SlabPoint& pt, std::span<const double> u);

/// dg: mode (j,k) -> 2 pi i (j v + k.w) ghat(j,k). Raises the degree by one.
FourierTensorField sym_derivative(const FourierTensorField& g);

/// pi^* h: the (j, 0) modes carry hhat(j).
FourierTensorField pullback_interval(const IntervalField& h);

/// The k = 0 slice of f with the j = 0 mode dropped.
IntervalField interval_part(const FourierTensorField& f);

/// Torus Sobolev norm: sqrt(sum (1 + j^2 + |k|^2)^s ||fhat(j,k)||^2_{L^2(S^n)}).
double sobolev_norm(const FourierTensorField& f, double s);

double l2_norm(const IntervalField& h);

/// fhat(-j,-k) = conj(fhat(j,k)) coefficientwise up to tol * max_abs, i.e.
/// f(x, y; u) is real for real u.
bool is_real_valued(const FourierTensorField& f, double tol = 1e-12);

/// k -> sum_j ghat(j,k) e^{2 pi i j x0}: the restriction of g to {x0} x T^n.
std::map<std::vector<int>, HomogeneousPoly> boundary_trace(const FourierTensorField& g, double x0);

/// Sum over k of the L^2(S^n) norm of each trace coefficient.
double trace_norm(const std::map<std::vector<int>, HomogeneousPoly>& trace);

/// Deterministic pseudo-random field on |j| <= J, |k|_inf <= K with
/// independent standard normal real and imaginary coefficient parts.
FourierTensorField random_field(int n, int m, int J, int K, std::uint64_t seed);

/// Same distribution for interval fields, j in [-J, J] \ {0}.
IntervalField random_interval_field(int n, int m, int J, std::uint64_t seed);

/// All integer vectors of length n with |k|_inf <= K, in lexicographic order.
std::vector<std::vector<int>> lattice_box(int n, int K);

}  // namespace slabxrt
