#pragma once

// Homogeneous polynomials on R^{n+1} with complex coefficients.
//
// A polynomial of degree m in d = n+1 variables is stored densely over the
// monomial basis of that degree, ordered graded-lexicographically: for fixed
// degree the exponent vectors run in decreasing lexicographic order, so the
// first basis element is u_0^m and the last is u_{d-1}^m. Degree -1 is the
// zero space and has no coefficients.
//
// Norms and inner products are those of L^2(S^n) with the standard surface
// measure. Sphere moments are evaluated in closed form, so every inner
// product below is exact up to rounding.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace slabxrt {

using cplx = std::complex<double>;
using MultiIndex = std::vector<int>;

/// Monomial exponents of total degree `degree` in `dim` variables, in basis
/// order. Empty for degree < 0. The returned reference stays valid for the
/// lifetime of the program.
const std::vector<MultiIndex>& monomials(int dim, int degree);

/// Number of monomials of the given degree, C(degree + dim - 1, dim - 1).
std::size_t monomial_count(int dim, int degree);

/// Position of `alpha` in monomials(alpha.size(), |alpha|).
std::size_t monomial_rank(const MultiIndex& alpha);

class HomogeneousPoly {
 public:
  HomogeneousPoly() = default;

  /// Zero polynomial of the given shape.
  HomogeneousPoly(int dim, int degree);

  /// Takes coefficients in basis order; size must equal monomial_count.
  HomogeneousPoly(int dim, int degree, std::vector<cplx> coeffs);

  static HomogeneousPoly constant(int dim, cplx value);
  /// The linear form u -> u . xi.
  static HomogeneousPoly linear_form(std::span<const double> xi);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  std::size_t size() const { return coeffs_.size(); }

  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx coeff(const MultiIndex& alpha) const;
  void set_coeff(const MultiIndex& alpha, cplx value);
  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  cplx operator[](std::size_t i) const { return coeffs_[i]; }

  bool is_zero() const;
  /// Largest coefficient magnitude.
  double max_abs() const;

  HomogeneousPoly& operator+=(const HomogeneousPoly& other);
  HomogeneousPoly& operator-=(const HomogeneousPoly& other);
  HomogeneousPoly& operator*=(cplx s);

  friend HomogeneousPoly operator+(HomogeneousPoly a, const HomogeneousPoly& b) { return a += b; }
  friend HomogeneousPoly operator-(HomogeneousPoly a, const HomogeneousPoly& b) { return a -= b; }
  friend HomogeneousPoly operator*(cplx s, HomogeneousPoly a) { return a *= s; }
  friend HomogeneousPoly operator*(HomogeneousPoly a, cplx s) { return a *= s; }
  friend bool operator==(const HomogeneousPoly&, const HomogeneousPoly&) = default;

 private:
  void check_same_shape(const HomogeneousPoly& other) const;

  int dim_ = 1;
  int degree_ = -1;
  std::vector<cplx> coeffs_;
};

/// Sum of coeffs[alpha] * u^alpha. Throws std::invalid_argument when
/// u.size() != p.dim().
cplx poly_eval(const HomogeneousPoly& p, std::span<const double> u);

/// q(u) = (u . xi) p(u).
HomogeneousPoly mul_linear(const HomogeneousPoly& p, std::span<const double> xi);

/// Matrix of mul_linear(., xi) from the degree-1 basis to the degree basis.
Eigen::MatrixXd mul_linear_matrix(int dim, int degree, std::span<const double> xi);

struct Factorization {
  /// L^2(S^n)-best G minimizing ||F - (u.xi) G||; exact quotient when divisible.
  HomogeneousPoly quotient;
  /// ||F - (u.xi) quotient|| in L^2(S^n).
  double residual = 0.0;
  /// residual <= tol * ||F||.
  bool divisible = false;
};

inline constexpr double kDefaultDivisibilityTol = 1e-9;

/// Divides F by the linear form u . xi. Divisibility is judged by the
/// least-squares residual relative to ||F||. A nonzero degree-0 F is never
/// divisible; its quotient is the zero polynomial of degree -1.
/// Throws std::invalid_argument for xi = 0 or a dimension mismatch.
Factorization factor_linear(const HomogeneousPoly& F, std::span<const double> xi,
                            double tol = kDefaultDivisibilityTol);

/// Integral of u^alpha over S^n, n = alpha.size() - 1.
double sphere_moment(const MultiIndex& alpha);

/// Gram matrix of the monomial basis of the given degree in L^2(S^{dim-1}).
Eigen::MatrixXd sphere_gram(int dim, int degree);

/// Integral over S^n of p(u) conj(q(u)). Degrees may differ.
cplx sphere_inner(const HomogeneousPoly& p, const HomogeneousPoly& q);

/// L^2(S^n) norm.
double sphere_norm(const HomogeneousPoly& p);

/// Smallest singular value of u -> u_0 p(u) from degree m-1 to degree m in
/// n+1 variables, both sides normed in L^2(S^n). Throws for m < 1.
double mu_min_singular(int n, int m);

/// Q(u) = P(T u) for the signed permutation (T u)_i = signs[i] * u[perm[i]].
HomogeneousPoly substitute_signed_permutation(const HomogeneousPoly& p,
                                              std::span<const int> perm,
                                              std::span<const int> signs);

}  // namespace slabxrt
