#pragma once

// Kernel of the X-ray transform on [0,1] x T^n.
//
// A band-limited field f has I f = 0 exactly when f = pi^* h + dg with h a
// zero-mean field on [0,1] and g vanishing on the boundary. decompose() builds
// the normalized pair directly from the Fourier coefficients:
//
//   hhat(j)   = fhat(j, 0)                       for j != 0, hhat(0) = 0,
//   ghat(j,k) = fhat(j,k) / (2 pi i (j v + k.w))   for k != 0, ghat(j,0) = 0,
//
// and reports whatever cannot be written this way (the (0,0) mode, modes not
// divisible by their linear form, a nonzero boundary trace of g).

#include <cstdint>
#include <vector>

#include "slabxrt/field.hpp"

namespace slabxrt {

struct Decomposition {
  IntervalField h;
  FourierTensorField g;
  FourierTensorField residual;
  /// Sum over k of the L^2(S^n) norm of the trace of g at x = 0.
  double boundary_defect = 0.0;
  double residual_norm() const { return sobolev_norm(residual, 0.0); }
};

inline constexpr double kDefaultKernelTol = 1e-9;

/// Mode-parallel; `tol` is the per-mode relative divisibility tolerance.
/// Throws std::invalid_argument when f.m() < 0.
Decomposition decompose(const FourierTensorField& f, double tol = kDefaultKernelTol);
Decomposition decompose_serial(const FourierTensorField& f, double tol = kDefaultKernelTol);

/// pi^* h + dg + residual.
FourierTensorField reassemble(const Decomposition& d);

struct KernelVerdict {
  bool in_kernel = false;
  Decomposition certificate;
};

/// In the kernel iff the decomposition leaves ||residual|| <= tol ||f|| and
/// boundary_defect <= tol ||f||.
KernelVerdict is_in_kernel(const FourierTensorField& f, double tol = kDefaultKernelTol);

/// C with ||g||_{H^1} <= C ||f - pi^* h||_{L^2} for the normalized
/// decomposition: sqrt(2) / (2 pi sigma_min(n, m)), and 0 for m = 0.
double stability_constant(int n, int m);

/// (1/N) sum_{l=1}^N e^{2 pi i k.(l b)}.
cplx weyl_sum(const std::vector<int>& k, const std::vector<double>& b, long N);

/// Searches for a nonzero integer relation q0 + q.b = 0 with |q_i| <= bound.
/// Returns false when one is found. This is a finite-precision
/// semi-decision: a true result only rules out relations up to the bound.
bool is_dense_orbit(const std::vector<double>& b, int denominator_bound);

/// h(x; 0, w) == 0: every monomial of every mode contains the first variable.
bool interval_field_is_potential(const IntervalField& h);

/// A kernel element built from a random zero-mean h and a random g with
/// ghat(j,0) = 0 and zero trace on x = 0.
struct KernelSample {
  IntervalField h;
  FourierTensorField g;
  FourierTensorField f;
};
KernelSample random_kernel_element(int n, int m, int J, int K, std::uint64_t seed);

/// Random potential of degree m-1 with ghat(j,0) = 0 and zero trace at x = 0.
FourierTensorField random_boundary_free_potential(int n, int m_minus_one, int J, int K,
                                                  std::uint64_t seed);

}  // namespace slabxrt
