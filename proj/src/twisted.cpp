#include "slabxrt/twisted.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace slabxrt {

namespace {

double wrap(double t) { return t - std::floor(t); }

bool same_mod_one(double a, double b) {
  const double d = a - b;
  return std::abs(d - std::round(d)) <= 1e-12;
}

bool is_signed_permutation(const std::vector<std::vector<int>>& A, int n) {
  if (static_cast<int>(A.size()) != n) return false;
  std::vector<int> col_hits(n, 0);
  for (const auto& row : A) {
    if (static_cast<int>(row.size()) != n) return false;
    int nonzero = 0;
    for (int c = 0; c < n; ++c) {
      if (row[c] == 0) continue;
      if (std::abs(row[c]) != 1) return false;
      ++nonzero;
      ++col_hits[c];
    }
    if (nonzero != 1) return false;
  }
  return std::all_of(col_hits.begin(), col_hits.end(), [](int h) { return h == 1; });
}

std::string describe(const DeckTransform& t) {
  std::string s = "{flip=" + std::string(t.flip ? "true" : "false") + ", A=[";
  for (std::size_t r = 0; r < t.A.size(); ++r) {
    s += r ? ",[" : "[";
    for (std::size_t c = 0; c < t.A[r].size(); ++c) s += (c ? "," : "") + std::to_string(t.A[r][c]);
    s += "]";
  }
  s += "], c=[";
  for (std::size_t i = 0; i < t.c.size(); ++i) s += (i ? "," : "") + std::to_string(t.c[i]);
  return s + "]}";
}

}  // namespace

DeckTransform DeckTransform::identity(int n) {
  DeckTransform t;
  t.A.assign(n, std::vector<int>(n, 0));
  for (int i = 0; i < n; ++i) t.A[i][i] = 1;
  t.c.assign(n, 0.0);
  return t;
}

bool DeckTransform::is_identity() const { return same_as(identity(n())); }

SlabPoint DeckTransform::apply(const SlabPoint& p) const {
  SlabPoint out{flip ? 1.0 - p.x : p.x, std::vector<double>(n())};
  for (int r = 0; r < n(); ++r) {
    double v = c[r];
    for (int col = 0; col < n(); ++col) v += A[r][col] * p.y[col];
    out.y[r] = wrap(v);
  }
  return out;
}

std::vector<double> DeckTransform::apply_fibre(const std::vector<double>& u) const {
  std::vector<double> out(u.size());
  out[0] = flip ? -u[0] : u[0];
  for (int r = 0; r < n(); ++r) {
    double v = 0.0;
    for (int col = 0; col < n(); ++col) v += A[r][col] * u[col + 1];
    out[r + 1] = v;
  }
  return out;
}

DeckTransform DeckTransform::compose(const DeckTransform& other) const {
  DeckTransform out;
  out.flip = flip != other.flip;
  const int dim = n();
  out.A.assign(dim, std::vector<int>(dim, 0));
  out.c.assign(dim, 0.0);
  for (int r = 0; r < dim; ++r) {
    double shift = c[r];
    for (int s = 0; s < dim; ++s) {
      shift += A[r][s] * other.c[s];
      for (int col = 0; col < dim; ++col) out.A[r][col] += A[r][s] * other.A[s][col];
    }
    out.c[r] = wrap(shift);
  }
  return out;
}

DeckTransform DeckTransform::inverse() const {
  // A^{-1} = A^T for signed permutations; y = A^T (y' - c).
  DeckTransform out;
  out.flip = flip;
  const int dim = n();
  out.A.assign(dim, std::vector<int>(dim, 0));
  out.c.assign(dim, 0.0);
  for (int r = 0; r < dim; ++r) {
    double shift = 0.0;
    for (int s = 0; s < dim; ++s) {
      out.A[r][s] = A[s][r];
      shift -= A[s][r] * c[s];
    }
    out.c[r] = wrap(shift);
  }
  return out;
}

bool DeckTransform::same_as(const DeckTransform& other) const {
  if (flip != other.flip || A != other.A || c.size() != other.c.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!same_mod_one(c[i], other.c[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------

CoveringSpec make_covering(int n, std::vector<DeckTransform> generators, std::size_t max_order) {
  for (auto& g : generators) {
    if (g.n() != n || !is_signed_permutation(g.A, n)) {
      throw std::invalid_argument("make_covering: generator " + describe(g) +
                                  " is not a slab isometry of dimension " + std::to_string(n));
    }
    for (double& ci : g.c) ci = wrap(ci);
  }
  CoveringSpec spec{n, generators, {DeckTransform::identity(n)}};
  auto contains = [&](const DeckTransform& t) {
    return std::any_of(spec.elements.begin(), spec.elements.end(),
                       [&](const DeckTransform& e) { return e.same_as(t); });
  };
  for (std::size_t i = 0; i < spec.elements.size(); ++i) {
    for (const auto& g : generators) {
      DeckTransform next = g.compose(spec.elements[i]);
      if (contains(next)) continue;
      spec.elements.push_back(std::move(next));
      if (spec.elements.size() > max_order) {
        throw std::invalid_argument("make_covering: group generated by the given transforms has more than " +
                                    std::to_string(max_order) + " elements");
      }
    }
  }
  return spec;
}

std::optional<SlabPoint> fixed_point(const DeckTransform& t) {
  const int n = t.n();
  // Solve (A - I) y = -c + z over R^n x Z^n by unimodular integer row
  // reduction of A - I; zero rows demand an integral right-hand side.
  std::vector<std::vector<long long>> mat(n, std::vector<long long>(n));
  std::vector<long double> rhs(n);
  for (int r = 0; r < n; ++r) {
    for (int col = 0; col < n; ++col) mat[r][col] = t.A[r][col] - (r == col ? 1 : 0);
    rhs[r] = -static_cast<long double>(t.c[r]);
  }
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    while (true) {
      int pivot = -1;
      for (int r = row; r < n; ++r)
        if (mat[r][col] != 0 && (pivot < 0 || std::llabs(mat[r][col]) < std::llabs(mat[pivot][col]))) pivot = r;
      if (pivot < 0) break;
      std::swap(mat[pivot], mat[row]);
      std::swap(rhs[pivot], rhs[row]);
      bool cleared = true;
      for (int r = row + 1; r < n; ++r) {
        const long long q = mat[r][col] / mat[row][col];
        if (q != 0) {
          for (int cc = 0; cc < n; ++cc) mat[r][cc] -= q * mat[row][cc];
          rhs[r] -= static_cast<long double>(q) * rhs[row];
        }
        cleared = cleared && mat[r][col] == 0;
      }
      if (cleared) {
        ++row;
        break;
      }
    }
  }
  for (int r = row; r < n; ++r) {
    const long double frac = rhs[r] - std::round(rhs[r]);
    if (std::abs(frac) > 1e-12L) return std::nullopt;
  }

  SlabPoint p{t.flip ? 0.5 : 0.0, std::vector<double>(n, 0.0)};
  if (row > 0) {
    Eigen::MatrixXd top(row, n);
    Eigen::VectorXd b(row);
    for (int r = 0; r < row; ++r) {
      for (int col = 0; col < n; ++col) top(r, col) = static_cast<double>(mat[r][col]);
      b(r) = static_cast<double>(rhs[r]);
    }
    const Eigen::VectorXd y = top.completeOrthogonalDecomposition().solve(b);
    for (int i = 0; i < n; ++i) p.y[i] = wrap(y(i));
  }
  return p;
}

CoveringReport validate_covering(const CoveringSpec& spec) {
  CoveringReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.violations.push_back(std::move(msg));
  };
  const auto& el = spec.elements;
  if (el.empty() || !el.front().is_identity()) fail("identity: first element is not the identity");
  for (const auto& t : el) {
    if (t.n() != spec.n || !is_signed_permutation(t.A, spec.n)) {
      fail("isometry: " + describe(t) + " is not of the form (flip, signed permutation, shift)");
      return report;
    }
  }
  for (std::size_t i = 0; i < el.size(); ++i)
    for (std::size_t j = i + 1; j < el.size(); ++j)
      if (el[i].same_as(el[j])) fail("group: element " + describe(el[i]) + " listed twice");

  auto index_of = [&](const DeckTransform& t) -> long {
    for (std::size_t i = 0; i < el.size(); ++i)
      if (el[i].same_as(t)) return static_cast<long>(i);
    return -1;
  };
  for (const auto& a : el) {
    if (index_of(a.inverse()) < 0) fail("inverse: inverse of " + describe(a) + " missing");
    for (const auto& b : el)
      if (index_of(a.compose(b)) < 0) fail("closure: " + describe(a) + " * " + describe(b) + " missing");
  }
  for (std::size_t i = 1; i < el.size(); ++i) {
    if (auto p = fixed_point(el[i])) {
      std::string where = "x=" + std::to_string(p->x) + ", y=[";
      for (std::size_t d = 0; d < p->y.size(); ++d) where += (d ? "," : "") + std::to_string(p->y[d]);
      fail("free: " + describe(el[i]) + " fixes (" + where + "])");
    }
  }
  return report;
}

int boundary_components(const CoveringSpec& spec) {
  const bool flips = std::any_of(spec.elements.begin(), spec.elements.end(),
                                 [](const DeckTransform& t) { return t.flip; });
  return flips ? 1 : 2;
}

CoveringSpec mobius_spec() {
  DeckTransform sigma;
  sigma.flip = true;
  sigma.A = {{1}};
  sigma.c = {0.5};
  return make_covering(1, {sigma});
}

// ---------------------------------------------------------------------------

FourierTensorField deck_apply(const DeckTransform& t, const FourierTensorField& f) {
  const int n = f.n();
  if (t.n() != n) throw std::invalid_argument("deck_apply: dimension mismatch");
  std::vector<int> perm(n + 1), signs(n + 1);
  perm[0] = 0;
  signs[0] = t.flip ? -1 : 1;
  for (int r = 0; r < n; ++r) {
    for (int col = 0; col < n; ++col) {
      if (t.A[r][col] != 0) {
        perm[r + 1] = col + 1;
        signs[r + 1] = t.A[r][col];
      }
    }
  }
  FourierTensorField out(n, f.m());
  for (const auto& [mode, p] : f.modes()) {
    // e_j(1 - x) = e_{-j}(x) and e_k(A y + c) = e^{2 pi i k.c} e_{A^T k}(y).
    Mode image{t.flip ? -mode.j : mode.j, std::vector<int>(n, 0)};
    double phase = 0.0;
    for (int r = 0; r < n; ++r) {
      phase += mode.k[r] * t.c[r];
      for (int col = 0; col < n; ++col) image.k[col] += t.A[r][col] * mode.k[r];
    }
    out.add(image, expi2pi(phase) * substitute_signed_permutation(p, perm, signs));
  }
  return out;
}

FourierTensorField deck_average(const FourierTensorField& f, const CoveringSpec& spec) {
  FourierTensorField sum(f.n(), f.m());
  for (const auto& t : spec.elements) sum += deck_apply(t, f);
  sum *= 1.0 / static_cast<double>(spec.elements.size());
  return sum;
}

std::vector<std::size_t> non_invariant_generators(const FourierTensorField& f,
                                                  const CoveringSpec& spec, double tol) {
  const double scale = tol * sobolev_norm(f, 0.0);
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    if (sobolev_norm(deck_apply(spec.generators[i], f) - f, 0.0) > scale) bad.push_back(i);
  }
  return bad;
}

bool is_invariant(const FourierTensorField& f, const CoveringSpec& spec, double tol) {
  return non_invariant_generators(f, spec, tol).empty();
}

Decomposition decompose_twisted(const FourierTensorField& f, const CoveringSpec& spec, double tol) {
  if (auto bad = non_invariant_generators(f, spec, tol); !bad.empty()) {
    throw std::invalid_argument("decompose_twisted: field is not invariant under generator " +
                                std::to_string(bad.front()) + " " + describe(spec.generators[bad.front()]));
  }
  Decomposition d = decompose(f, tol);
  FourierTensorField averaged = deck_average(d.g, spec);
  if (f.m() >= 1) {
    d.residual += sym_derivative(d.g);
    d.residual -= sym_derivative(averaged);
  }
  d.g = std::move(averaged);
  d.boundary_defect = trace_norm(boundary_trace(d.g, 0.0));
  return d;
}

TransportedGeodesic transport_geodesic(const DeckTransform& t, const Geodesic& geo, int m) {
  const int n = t.n();
  TransportedGeodesic out;
  out.image.a.assign(n, 0.0);
  out.image.b.assign(n, 0.0);
  for (int r = 0; r < n; ++r) {
    double a = t.c[r];
    double b = 0.0;
    for (int col = 0; col < n; ++col) {
      a += t.A[r][col] * geo.a[col];
      b += t.A[r][col] * geo.b[col];
    }
    if (t.flip) {
      // Run the image backwards: it starts where the original ends.
      a += b;
      b = -b;
    }
    out.image.a[r] = wrap(a);
    out.image.b[r] = b;
  }
  out.sign = (t.flip && m % 2 != 0) ? -1 : 1;
  return out;
}

}  // namespace slabxrt
