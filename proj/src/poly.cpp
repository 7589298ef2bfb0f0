#include "slabxrt/poly.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

namespace slabxrt {

namespace {

void append_monomials(int dim, int degree, MultiIndex& prefix, std::vector<MultiIndex>& out) {
  const int pos = static_cast<int>(prefix.size());
  if (pos == dim - 1) {
    prefix.push_back(degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = degree; e >= 0; --e) {
    prefix.push_back(e);
    append_monomials(dim, degree - e, prefix, out);
    prefix.pop_back();
  }
}

// Number of exponent vectors of length `parts` summing to `total`.
std::size_t compositions(int total, int parts) {
  if (parts == 0) return total == 0 ? 1 : 0;
  // C(total + parts - 1, parts - 1)
  std::size_t r = 1;
  for (int i = 1; i < parts; ++i) r = r * static_cast<std::size_t>(total + i) / static_cast<std::size_t>(i);
  return r;
}

template <class Value>
class ShapeCache {
 public:
  template <class Make>
  const Value& get(int dim, int degree, Make make) {
    std::lock_guard lock(mutex_);
    auto& slot = entries_[{dim, degree}];
    if (!slot) slot = std::make_unique<Value>(make());
    return *slot;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::unique_ptr<Value>> entries_;
};

void check_dim(int dim, std::size_t got, const char* what) {
  if (static_cast<std::size_t>(dim) != got) {
    throw std::invalid_argument(std::string(what) + ": expected vector of length " +
                                std::to_string(dim) + ", got " + std::to_string(got));
  }
}

}  // namespace

const std::vector<MultiIndex>& monomials(int dim, int degree) {
  static ShapeCache<std::vector<MultiIndex>> cache;
  if (dim < 1) throw std::invalid_argument("monomials: dim must be >= 1");
  return cache.get(dim, std::max(degree, -1), [&] {
    std::vector<MultiIndex> out;
    if (degree >= 0) {
      MultiIndex prefix;
      prefix.reserve(dim);
      append_monomials(dim, degree, prefix, out);
    }
    return out;
  });
}

std::size_t monomial_count(int dim, int degree) {
  return degree < 0 ? 0 : compositions(degree, dim);
}

std::size_t monomial_rank(const MultiIndex& alpha) {
  const int dim = static_cast<int>(alpha.size());
  int remaining = std::accumulate(alpha.begin(), alpha.end(), 0);
  std::size_t rank = 0;
  for (int i = 0; i + 1 < dim; ++i) {
    for (int e = alpha[i] + 1; e <= remaining; ++e) rank += compositions(remaining - e, dim - i - 1);
    remaining -= alpha[i];
  }
  return rank;
}

// ---------------------------------------------------------------------------

HomogeneousPoly::HomogeneousPoly(int dim, int degree)
    : dim_(dim), degree_(std::max(degree, -1)), coeffs_(monomial_count(dim, degree)) {
  if (dim < 1) throw std::invalid_argument("HomogeneousPoly: dim must be >= 1");
}

HomogeneousPoly::HomogeneousPoly(int dim, int degree, std::vector<cplx> coeffs)
    : HomogeneousPoly(dim, degree) {
  if (coeffs.size() != coeffs_.size()) {
    throw std::invalid_argument("HomogeneousPoly: expected " + std::to_string(coeffs_.size()) +
                                " coefficients, got " + std::to_string(coeffs.size()));
  }
  coeffs_ = std::move(coeffs);
}

HomogeneousPoly HomogeneousPoly::constant(int dim, cplx value) {
  return HomogeneousPoly(dim, 0, {value});
}

HomogeneousPoly HomogeneousPoly::linear_form(std::span<const double> xi) {
  HomogeneousPoly p(static_cast<int>(xi.size()), 1);
  // degree-1 basis is e_0, e_1, ... in order
  for (std::size_t i = 0; i < xi.size(); ++i) p.coeffs_[i] = xi[i];
  return p;
}

cplx HomogeneousPoly::coeff(const MultiIndex& alpha) const {
  check_dim(dim_, alpha.size(), "HomogeneousPoly::coeff");
  if (std::accumulate(alpha.begin(), alpha.end(), 0) != degree_) return 0.0;
  return coeffs_[monomial_rank(alpha)];
}

void HomogeneousPoly::set_coeff(const MultiIndex& alpha, cplx value) {
  check_dim(dim_, alpha.size(), "HomogeneousPoly::set_coeff");
  if (std::any_of(alpha.begin(), alpha.end(), [](int e) { return e < 0; }) ||
      std::accumulate(alpha.begin(), alpha.end(), 0) != degree_) {
    throw std::invalid_argument("HomogeneousPoly::set_coeff: multi-index degree mismatch");
  }
  coeffs_[monomial_rank(alpha)] = value;
}

bool HomogeneousPoly::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
}

double HomogeneousPoly::max_abs() const {
  double m = 0.0;
  for (cplx c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

void HomogeneousPoly::check_same_shape(const HomogeneousPoly& other) const {
  if (dim_ != other.dim_ || degree_ != other.degree_) {
    throw std::invalid_argument("HomogeneousPoly: shape mismatch (" + std::to_string(dim_) + "," +
                                std::to_string(degree_) + ") vs (" + std::to_string(other.dim_) +
                                "," + std::to_string(other.degree_) + ")");
  }
}

HomogeneousPoly& HomogeneousPoly::operator+=(const HomogeneousPoly& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

HomogeneousPoly& HomogeneousPoly::operator-=(const HomogeneousPoly& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

HomogeneousPoly& HomogeneousPoly::operator*=(cplx s) {
  for (cplx& c : coeffs_) c *= s;
  return *this;
}

// ---------------------------------------------------------------------------

cplx poly_eval(const HomogeneousPoly& p, std::span<const double> u) {
  check_dim(p.dim(), u.size(), "poly_eval");
  if (p.degree() < 0) return 0.0;
  const int d = p.dim();
  const int m = p.degree();
  // powers[i * (m+1) + e] = u_i^e
  std::vector<double> powers(static_cast<std::size_t>(d) * (m + 1));
  for (int i = 0; i < d; ++i) {
    double acc = 1.0;
    for (int e = 0; e <= m; ++e) {
      powers[i * (m + 1) + e] = acc;
      acc *= u[i];
    }
  }
  const auto& basis = monomials(d, m);
  cplx sum = 0.0;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    double mono = 1.0;
    for (int i = 0; i < d; ++i) mono *= powers[i * (m + 1) + basis[b][i]];
    sum += p[b] * mono;
  }
  return sum;
}

HomogeneousPoly mul_linear(const HomogeneousPoly& p, std::span<const double> xi) {
  check_dim(p.dim(), xi.size(), "mul_linear");
  const int d = p.dim();
  HomogeneousPoly q(d, p.degree() + 1);
  if (p.degree() < 0) return q;
  const auto& basis = monomials(d, p.degree());
  MultiIndex raised;
  for (std::size_t b = 0; b < basis.size(); ++b) {
    if (p[b] == cplx{}) continue;
    for (int i = 0; i < d; ++i) {
      if (xi[i] == 0.0) continue;
      raised = basis[b];
      ++raised[i];
      q[monomial_rank(raised)] += xi[i] * p[b];
    }
  }
  return q;
}

Eigen::MatrixXd mul_linear_matrix(int dim, int degree, std::span<const double> xi) {
  check_dim(dim, xi.size(), "mul_linear_matrix");
  const auto& source = monomials(dim, degree - 1);
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(monomial_count(dim, degree), source.size());
  MultiIndex raised;
  for (std::size_t c = 0; c < source.size(); ++c) {
    for (int i = 0; i < dim; ++i) {
      raised = source[c];
      ++raised[i];
      mat(monomial_rank(raised), c) += xi[i];
    }
  }
  return mat;
}

double sphere_moment(const MultiIndex& alpha) {
  double log_num = 0.0;
  double half_sum = 0.0;
  for (int e : alpha) {
    if (e % 2 != 0) return 0.0;
    const double beta = 0.5 * (e + 1);
    log_num += std::lgamma(beta);
    half_sum += beta;
  }
  // 2 prod Gamma(beta_i) / Gamma(sum beta_i); tgamma is exact enough for the
  // small degrees used here and avoids the exp/log round trip.
  if (half_sum < 150.0) {
    double num = 2.0;
    for (int e : alpha) num *= std::tgamma(0.5 * (e + 1));
    return num / std::tgamma(half_sum);
  }
  return 2.0 * std::exp(log_num - std::lgamma(half_sum));
}

Eigen::MatrixXd sphere_gram(int dim, int degree) {
  static ShapeCache<Eigen::MatrixXd> cache;
  return cache.get(dim, degree, [&] {
    const auto& basis = monomials(dim, degree);
    const auto size = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd gram(size, size);
    MultiIndex sum(dim);
    for (Eigen::Index r = 0; r < size; ++r) {
      for (Eigen::Index c = r; c < size; ++c) {
        for (int i = 0; i < dim; ++i) sum[i] = basis[r][i] + basis[c][i];
        gram(r, c) = gram(c, r) = sphere_moment(sum);
      }
    }
    return gram;
  });
}

cplx sphere_inner(const HomogeneousPoly& p, const HomogeneousPoly& q) {
  if (p.dim() != q.dim()) throw std::invalid_argument("sphere_inner: dimension mismatch");
  const auto& bp = monomials(p.dim(), p.degree());
  const auto& bq = monomials(q.dim(), q.degree());
  MultiIndex sum(p.dim());
  cplx acc = 0.0;
  for (std::size_t r = 0; r < bp.size(); ++r) {
    if (p[r] == cplx{}) continue;
    for (std::size_t c = 0; c < bq.size(); ++c) {
      if (q[c] == cplx{}) continue;
      for (int i = 0; i < p.dim(); ++i) sum[i] = bp[r][i] + bq[c][i];
      acc += p[r] * std::conj(q[c]) * sphere_moment(sum);
    }
  }
  return acc;
}

double sphere_norm(const HomogeneousPoly& p) {
  return std::sqrt(std::max(0.0, sphere_inner(p, p).real()));
}

namespace {

struct FactorSystem {
  Eigen::MatrixXd chol_upper;  // L^T with gram = L L^T
};

const FactorSystem& factor_system(int dim, int degree) {
  static ShapeCache<FactorSystem> cache;
  return cache.get(dim, degree, [&] {
    Eigen::LLT<Eigen::MatrixXd> llt(sphere_gram(dim, degree));
    return FactorSystem{llt.matrixU()};
  });
}

}  // namespace

Factorization factor_linear(const HomogeneousPoly& F, std::span<const double> xi, double tol) {
  check_dim(F.dim(), xi.size(), "factor_linear");
  if (F.degree() < 0) throw std::invalid_argument("factor_linear: degree must be >= 0");
  if (std::all_of(xi.begin(), xi.end(), [](double x) { return x == 0.0; })) {
    throw std::invalid_argument("factor_linear: xi must be nonzero");
  }
  const int d = F.dim();
  const int m = F.degree();
  const double norm_f = sphere_norm(F);

  Factorization out;
  out.quotient = HomogeneousPoly(d, m - 1);
  if (m == 0) {
    out.residual = norm_f;
    out.divisible = norm_f == 0.0;
    return out;
  }

  // Weighted least squares: minimize || U (f - M g) ||_2 with gram = U^T U,
  // which is the L^2(S^n) distance between F and (u.xi) G.
  const Eigen::MatrixXd& upper = factor_system(d, m).chol_upper;
  const Eigen::MatrixXd weighted = upper * mul_linear_matrix(d, m, xi);
  const auto n_rows = static_cast<Eigen::Index>(F.size());
  Eigen::VectorXd re(n_rows), im(n_rows);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    re(i) = F[i].real();
    im(i) = F[i].imag();
  }
  const Eigen::VectorXd rhs_re = upper * re;
  const Eigen::VectorXd rhs_im = upper * im;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(weighted);
  const Eigen::VectorXd g_re = qr.solve(rhs_re);
  const Eigen::VectorXd g_im = qr.solve(rhs_im);
  for (Eigen::Index i = 0; i < g_re.size(); ++i) out.quotient[i] = cplx(g_re(i), g_im(i));

  const double r_re = (rhs_re - weighted * g_re).squaredNorm();
  const double r_im = (rhs_im - weighted * g_im).squaredNorm();
  out.residual = std::sqrt(r_re + r_im);
  out.divisible = out.residual <= tol * norm_f;
  return out;
}

double mu_min_singular(int n, int m) {
  if (m < 1) throw std::invalid_argument("mu_min_singular: m must be >= 1");
  const int d = n + 1;
  std::vector<double> e1(d, 0.0);
  e1[0] = 1.0;
  const Eigen::MatrixXd mat = mul_linear_matrix(d, m, e1);
  const Eigen::MatrixXd lhs = mat.transpose() * sphere_gram(d, m) * mat;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(lhs, sphere_gram(d, m - 1),
                                                                   Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().minCoeff()));
}

HomogeneousPoly substitute_signed_permutation(const HomogeneousPoly& p, std::span<const int> perm,
                                              std::span<const int> signs) {
  check_dim(p.dim(), perm.size(), "substitute_signed_permutation");
  check_dim(p.dim(), signs.size(), "substitute_signed_permutation");
  const int d = p.dim();
  HomogeneousPoly q(d, p.degree());
  const auto& basis = monomials(d, p.degree());
  MultiIndex image(d);
  for (std::size_t b = 0; b < basis.size(); ++b) {
    int sign = 1;
    for (int i = 0; i < d; ++i) {
      image[perm[i]] = basis[b][i];
      if (signs[i] < 0 && basis[b][i] % 2 != 0) sign = -sign;
    }
    q[monomial_rank(image)] += static_cast<double>(sign) * p[b];
  }
  return q;
}

}  // namespace slabxrt
