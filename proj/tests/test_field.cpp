#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "slabxrt/field.hpp"

using namespace slabxrt;

namespace {

FourierTensorField scalar_mode(int n, int j, std::vector<int> k, cplx c) {
  FourierTensorField f(n, 0);
  f.set(Mode{j, std::move(k)}, HomogeneousPoly::constant(n + 1, c));
  return f;
}

// g(x, y; u) as a function of the base point, for finite differences.
cplx eval_base(const FourierTensorField& g, double x, const std::vector<double>& y, const std::vector<double>& u) {
  return field_eval(g, SlabPoint{x, y}, u);
}

}  // namespace

TEST_CASE("expi2pi is exact at integers") {
  for (int j = -50; j <= 50; ++j) CHECK(expi2pi(j) == cplx(1.0));
  CHECK(std::abs(expi2pi(0.5) + 1.0) < 1e-15);
  CHECK(std::abs(expi2pi(0.25) - cplx(0.0, 1.0)) < 1e-15);
}

TEST_CASE("field_eval examples") {
  const auto one = scalar_mode(1, 0, {0}, 1.0);
  const std::vector<double> u{0.4, 2.0};
  CHECK(field_eval(one, {0.3, {0.9}}, u) == cplx(1.0));

  const auto f = scalar_mode(1, 1, {0}, 1.0);
  CHECK(std::abs(field_eval(f, {0.5, {0.2}}, u) - cplx(-1.0)) < 1e-15);

  CHECK_THROWS_AS(field_eval(f, {0.5, {0.2, 0.1}}, u), std::invalid_argument);
  const std::vector<double> short_u{1.0};
  CHECK_THROWS_AS(field_eval(f, {0.5, {0.2}}, short_u), std::invalid_argument);
}

TEST_CASE("field_eval matches an independent evaluator") {
  std::mt19937_64 rng(7);
  for (int n = 1; n <= 2; ++n) {
    const auto f = random_field(n, 2, 2, 2, 99 + n);
    for (int s = 0; s < 10; ++s) {
      const double x = oracle::uniform_vector(rng, 1, 0.0, 1.0)[0];
      const auto y = oracle::uniform_vector(rng, n, 0.0, 1.0);
      const auto u = oracle::uniform_vector(rng, n + 1, -1.0, 1.0);
      const cplx a = field_eval(f, {x, y}, u);
      const cplx b = oracle::eval_field(f, x, y, u);
      CHECK(std::abs(a - b) < 1e-11 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST_CASE("sym_derivative examples") {
  const auto constant = scalar_mode(1, 0, {0}, 3.0);
  CHECK(sym_derivative(constant).modes().empty());
  CHECK(sym_derivative(constant).m() == 1);

  // g = sin(2 pi x): ghat(1) = 1/(2i), ghat(-1) = -1/(2i); dg = 2 pi cos(2 pi x) v
  FourierTensorField g(1, 0);
  g.set(Mode{1, {0}}, HomogeneousPoly::constant(2, 1.0 / cplx(0.0, 2.0)));
  g.set(Mode{-1, {0}}, HomogeneousPoly::constant(2, -1.0 / cplx(0.0, 2.0)));
  const auto f = sym_derivative(g);
  std::mt19937_64 rng(1);
  for (int s = 0; s < 10; ++s) {
    const auto p = oracle::uniform_vector(rng, 4, 0.0, 1.0);
    const std::vector<double> u{p[2] * 2 - 1, p[3] * 2 - 1};
    const cplx expected = 2.0 * oracle::kPi * std::cos(2.0 * oracle::kPi * p[0]) * u[0];
    CHECK(std::abs(field_eval(f, {p[0], {p[1]}}, u) - expected) < 1e-12);
    // finite difference of (v d_x + w d_y) g
    const double h = 1e-5;
    const cplx fd = u[0] * (eval_base(g, p[0] + h, {p[1]}, u) - eval_base(g, p[0] - h, {p[1]}, u)) / (2 * h) +
                    u[1] * (eval_base(g, p[0], {p[1] + h}, u) - eval_base(g, p[0], {p[1] - h}, u)) / (2 * h);
    CHECK(std::abs(field_eval(f, {p[0], {p[1]}}, u) - fd) < 1e-6);
  }

  // d(pi^* h) only has (j, 0) modes with factor 2 pi i j v
  IntervalField h(1, 0);
  h.set(2, HomogeneousPoly::constant(2, 1.0));
  const auto dh = sym_derivative(pullback_interval(h));
  REQUIRE(dh.modes().size() == 1);
  const auto& [mode, poly] = *dh.modes().begin();
  CHECK(mode == Mode{2, {0}});
  CHECK(std::abs(poly.coeff({1, 0}) - cplx(0.0, 2.0 * oracle::kPi * 2)) < 1e-14);
  CHECK(poly.coeff({0, 1}) == cplx{});
}

TEST_CASE("property: sym_derivative is linear and matches D_b by finite differences") {
  std::mt19937_64 rng(13);
  for (int n = 1; n <= 2; ++n) {
    for (int m = 0; m <= 2; ++m) {
      const auto g1 = random_field(n, m, 2, 2, 10 * n + m);
      const auto g2 = random_field(n, m, 2, 1, 100 + 10 * n + m);
      const cplx a(0.3, -1.1), b(2.0, 0.5);
      const auto lhs = sym_derivative(a * g1 + b * g2);
      const auto rhs = a * sym_derivative(g1) + b * sym_derivative(g2);
      CHECK((lhs - rhs).max_abs() < 1e-12 * lhs.max_abs());

      const auto f = sym_derivative(g1);
      for (int s = 0; s < 20; ++s) {
        const double x = oracle::uniform_vector(rng, 1, 0.0, 1.0)[0];
        const auto y = oracle::uniform_vector(rng, n, 0.0, 1.0);
        const auto bvec = oracle::uniform_vector(rng, n, -1.0, 1.0);
        std::vector<double> u{1.0};
        u.insert(u.end(), bvec.begin(), bvec.end());
        // D_b g = d/dt g(x + t, y + t b; 1, b) at t = 0
        const double h = 1e-5;
        auto shifted = [&](double t) {
          std::vector<double> yy = y;
          for (int i = 0; i < n; ++i) yy[i] += t * bvec[i];
          return eval_base(g1, x + t, yy, u);
        };
        const cplx fd = (shifted(h) - shifted(-h)) / (2 * h);
        const cplx exact = field_eval(f, {x, y}, u);
        CHECK(std::abs(exact - fd) < 1e-6 * std::max(1.0, std::abs(exact)));
      }
    }
  }
}

TEST_CASE("pullback_interval") {
  IntervalField h(1, 0);
  h.set(1, HomogeneousPoly::constant(2, 1.0));
  const auto f = pullback_interval(h);
  REQUIRE(f.modes().size() == 1);
  CHECK(f.modes().begin()->first == Mode{1, {0}});
  CHECK(pullback_interval(IntervalField(1, 0)).modes().empty());

  const auto r = random_interval_field(2, 2, 3, 4);
  const auto back = interval_part(pullback_interval(r));
  CHECK(back.modes() == r.modes());

  CHECK_THROWS_AS(h.set(0, HomogeneousPoly::constant(2, 1.0)), std::invalid_argument);
  h.set(0, HomogeneousPoly(2, 0));  // zero j = 0 mode is allowed and not stored
  CHECK(h.modes().count(0) == 0);
}

TEST_CASE("sobolev_norm") {
  CHECK(sobolev_norm(FourierTensorField(1, 2), 1.0) == 0.0);
  const cplx c(1.5, -2.0);
  for (double s : {-1.0, 0.0, 0.5, 3.0}) {
    CHECK(sobolev_norm(scalar_mode(1, 0, {0}, c), s) == doctest::Approx(std::abs(c) * std::sqrt(2 * oracle::kPi)));
  }
  const auto f = scalar_mode(1, 1, {1}, c);
  const double s0 = sobolev_norm(f, 0.0);
  CHECK(sobolev_norm(f, 1.0) * sobolev_norm(f, 1.0) == doctest::Approx(3.0 * s0 * s0));
}

TEST_CASE("property: Parseval against grid quadrature") {
  for (int n = 1; n <= 2; ++n) {
    const int J = 2, K = 1, m = 1;
    const auto f = random_field(n, m, J, K, 5 + n);
    // grid of twice the band limit, exact for trigonometric polynomials
    const int gx = 2 * (2 * J + 1);
    const int gy = 2 * (2 * K + 1);
    int points = gx;
    for (int i = 0; i < n; ++i) points *= gy;
    double total = 0.0;
    for (int idx = 0; idx < points; ++idx) {
      int rest = idx;
      std::vector<double> y(n);
      for (int i = n - 1; i >= 0; --i) {
        y[i] = static_cast<double>(rest % gy) / gy;
        rest /= gy;
      }
      const double x = static_cast<double>(rest) / gx;
      total += oracle::sphere_integral(n, [&](const std::vector<double>& u) {
                 return oracle::cplx(std::norm(oracle::eval_field(f, x, y, u)));
               }, 12, 16).real();
    }
    total /= points;
    const double norm = sobolev_norm(f, 0.0);
    CHECK(std::abs(total - norm * norm) < 1e-6 * norm * norm);
  }
}

TEST_CASE("boundary_trace") {
  // g = (1 - cos 2 pi x) e_k(y)
  FourierTensorField g(1, 0);
  g.set(Mode{0, {1}}, HomogeneousPoly::constant(2, 1.0));
  g.set(Mode{1, {1}}, HomogeneousPoly::constant(2, -0.5));
  g.set(Mode{-1, {1}}, HomogeneousPoly::constant(2, -0.5));
  const auto t0 = boundary_trace(g, 0.0);
  CHECK(trace_norm(t0) == 0.0);
  const auto t_half = boundary_trace(g, 0.5);
  CHECK(std::abs(t_half.at({1})[0] - cplx(2.0)) < 1e-15);

  const auto single = scalar_mode(1, 3, {2}, 0.7);
  CHECK(trace_norm(boundary_trace(single, 0.0)) > 0.0);

  const auto r = random_field(2, 2, 3, 2, 8);
  const auto a = boundary_trace(r, 0.0);
  const auto b = boundary_trace(r, 1.0);
  CHECK(a == b);
}

TEST_CASE("random_field") {
  CHECK(random_field(2, 1, 2, 1, 42).modes() == random_field(2, 1, 2, 1, 42).modes());
  CHECK(random_field(2, 1, 2, 1, 42).modes() != random_field(2, 1, 2, 1, 43).modes());
  const auto c = random_field(1, 0, 0, 0, 3);
  REQUIRE(c.modes().size() == 1);
  CHECK(c.modes().begin()->first == Mode{0, {0}});

  // |z| with independent N(0,1) parts is Rayleigh(1): mean sqrt(pi/2), variance (4 - pi)/2
  double sum = 0.0;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) sum += std::abs(random_field(1, 0, 0, 0, 1000 + s).modes().begin()->second[0]);
  const double mean = sum / draws;
  const double sigma = std::sqrt((4.0 - oracle::kPi) / 2.0 / draws);
  CHECK(std::abs(mean - std::sqrt(oracle::kPi / 2.0)) < 3.0 * sigma);
}

TEST_CASE("lattice_box") {
  CHECK(lattice_box(0, 3).size() == 1);
  CHECK(lattice_box(2, 1).size() == 9);
  CHECK(lattice_box(1, 2) == std::vector<std::vector<int>>{{-2}, {-1}, {0}, {1}, {2}});
}

TEST_CASE("is_real_valued") {
  IntervalField cos_field(1, 0);
  cos_field.set(1, HomogeneousPoly::constant(2, 0.5));
  cos_field.set(-1, HomogeneousPoly::constant(2, 0.5));
  const auto c = pullback_interval(cos_field);
  CHECK(is_real_valued(c));
  CHECK_FALSE(is_real_valued(scalar_mode(1, 0, {1}, 1.0)));
  CHECK(is_real_valued(FourierTensorField(2, 1)));

  // real part of a random field: (f + conj-mirror f) / 2
  const auto f = random_field(2, 2, 2, 2, 3);
  FourierTensorField mirrored(2, 2);
  for (const auto& [mode, p] : f.modes()) {
    Mode m{-mode.j, mode.k};
    for (int& k : m.k) k = -k;
    HomogeneousPoly q = p;
    for (std::size_t i = 0; i < q.size(); ++i) q[i] = std::conj(q[i]);
    mirrored.add(m, q);
  }
  const auto real = 0.5 * (f + mirrored);
  CHECK(is_real_valued(real));
  CHECK_FALSE(is_real_valued(f));
  CHECK(is_real_valued(sym_derivative(real)));
  std::mt19937_64 rng(4);
  for (int s = 0; s < 10; ++s) {
    const auto p = oracle::uniform_vector(rng, 3, 0.0, 1.0);
    const auto u = oracle::uniform_vector(rng, 3, -1.0, 1.0);
    CHECK(std::abs(field_eval(real, {p[0], {p[1], p[2]}}, u).imag()) < 1e-12);
  }
}
