#pragma once

// Geodesic X-ray transform on [0,1] x T^n.
//
// Non-trapped geodesics are t -> (t, a + b t), t in [0,1], with a in T^n and
// b in R^n, traversed with velocity (1, b). For an m-tensor field f
//
//   I f(a, b) = int_0^1 f(t, a + b t; 1, b) dt.
//
// For a fixed b the map a -> I f(a, b) has Fourier coefficients
//
//   sum_j fhat(j, k; 1, b) phi(j + k.b),   phi(t) = (e^{2 pi i t} - 1) / (2 pi i t),
//
// which is what xray_fourier_coeff computes. xray_quadrature integrates along
// the curve directly and is kept as an independent route.
//
// Kernels ending in _serial are single-threaded reference implementations of
// the OpenMP versions with the same name; both produce bitwise-identical
// results.

#include <vector>

#include "slabxrt/field.hpp"

namespace slabxrt {

struct Geodesic {
  std::vector<double> a;  // representative in [0,1)^n
  std::vector<double> b;
};

struct Sinogram {
  std::vector<double> b;
  int a_grid_size = 0;
  /// a_grid_size^n values; grid index (i_1, ..., i_n) has a = i / a_grid_size
  /// and flat index sum i_d * size^(n-d), the first coordinate varying slowest.
  std::vector<cplx> values;

  int n() const { return static_cast<int>(b.size()); }
  std::vector<double> point(std::size_t flat) const;
};

cplx phi(double t);

/// Gauss-Legendre nodes and weights on [0,1]. Cached per node count.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const QuadratureRule& gauss_legendre(int nodes);

/// Node count resolving every frequency j + k.b present in f along b.
int default_quadrature_nodes(const FourierTensorField& f, const std::vector<double>& b);

/// int_0^1 f(t, a + b t; 1, b) dt by Gauss-Legendre with `nodes` points.
/// Throws std::invalid_argument for nodes < 2 or dimension mismatch.
cplx xray_quadrature(const FourierTensorField& f, const Geodesic& geo, int nodes);

/// k-th Fourier coefficient of a -> I f(a, b).
cplx xray_fourier_coeff(const FourierTensorField& f, const std::vector<int>& k,
                        const std::vector<double>& b);

/// I f(., b) sampled on the uniform grid from the Fourier coefficients.
/// Throws std::invalid_argument when a_grid_size <= 2 * f.k_band().
Sinogram xray_sinogram(const FourierTensorField& f, const std::vector<double>& b, int a_grid_size);
Sinogram xray_sinogram_serial(const FourierTensorField& f, const std::vector<double>& b,
                              int a_grid_size);

/// I f(., b) sampled on the uniform grid by direct quadrature at each point.
Sinogram quadrature_sinogram(const FourierTensorField& f, const std::vector<double>& b,
                             int a_grid_size, int nodes);
Sinogram quadrature_sinogram_serial(const FourierTensorField& f, const std::vector<double>& b,
                                    int a_grid_size, int nodes);

/// g(0, a + b; 1, b) - g(0, a; 1, b), which equals I(dg)(a, b).
cplx potential_trace(const FourierTensorField& g, const std::vector<double>& a,
                     const std::vector<double>& b);

/// max |value| over the sinogram.
double max_abs(const Sinogram& s);

}  // namespace slabxrt
