#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "slabxrt/twisted.hpp"

using namespace slabxrt;

namespace {

DeckTransform make(bool flip, std::vector<std::vector<int>> A, std::vector<double> c) {
  DeckTransform t;
  t.flip = flip;
  t.A = std::move(A);
  t.c = std::move(c);
  return t;
}

// Klein-bottle-like group on n = 2: y2 -> -y2 with a half shift in y1.
CoveringSpec klein_spec() { return make_covering(2, {make(false, {{1, 0}, {0, -1}}, {0.5, 0.0})}); }

// Flip combined with a coordinate swap and half shift: cyclic of order 4, free.
CoveringSpec flip_swap_spec() { return make_covering(2, {make(true, {{0, 1}, {1, 0}}, {0.5, 0.0})}); }

std::vector<DeckTransform> sample_transforms() {
  return {DeckTransform::identity(2),
          make(false, {{0, 1}, {1, 0}}, {0.3, 0.0}),
          make(true, {{-1, 0}, {0, 1}}, {0.1, 0.75}),
          make(true, {{0, -1}, {1, 0}}, {0.5, 0.25}),
          make(false, {{-1, 0}, {0, -1}}, {0.0, 0.5})};
}

}  // namespace

TEST_CASE("validate_covering") {
  CHECK(validate_covering(make_covering(1, {})).ok);
  CHECK(validate_covering(make_covering(3, {})).ok);
  CHECK(validate_covering(mobius_spec()).ok);
  CHECK(validate_covering(klein_spec()).ok);
  CHECK(validate_covering(flip_swap_spec()).ok);
  CHECK(flip_swap_spec().elements.size() == 4);

  CoveringSpec duplicated{1, {}, {DeckTransform::identity(1), DeckTransform::identity(1)}};
  const auto dup = validate_covering(duplicated);
  CHECK_FALSE(dup.ok);
  REQUIRE_FALSE(dup.violations.empty());

  // not closed: translation by 1/3 without its square
  CoveringSpec open{1, {}, {DeckTransform::identity(1), make(false, {{1}}, {1.0 / 3})}};
  const auto r = validate_covering(open);
  CHECK_FALSE(r.ok);
  bool closure = false;
  for (const auto& v : r.violations) closure = closure || v.rfind("closure", 0) == 0;
  CHECK(closure);

  // reflection in x alone fixes {1/2} x T^n
  const auto reflect = validate_covering(make_covering(1, {make(true, {{1}}, {0.0})}));
  CHECK_FALSE(reflect.ok);
  CHECK(reflect.violations.front().rfind("free", 0) == 0);

  // coordinate swap fixes the diagonal, even with a diagonal shift
  CHECK_FALSE(validate_covering(make_covering(2, {make(false, {{0, 1}, {1, 0}}, {0.0, 0.0})})).ok);
  CHECK_FALSE(validate_covering(make_covering(2, {make(false, {{0, 1}, {1, 0}}, {0.5, 0.5})})).ok);

  // y -> -y has fixed points y = 0, 1/2
  CHECK_FALSE(validate_covering(make_covering(1, {make(false, {{-1}}, {0.3})})).ok);

  CHECK_THROWS_AS(make_covering(2, {make(false, {{2, 0}, {0, 1}}, {0.0, 0.0})}), std::invalid_argument);
  CHECK_THROWS_AS(make_covering(2, {make(false, {{1, 0}}, {0.0, 0.0})}), std::invalid_argument);
  CHECK_THROWS_AS(make_covering(1, {make(false, {{1}}, {std::sqrt(2.0) - 1.0})}, 64), std::invalid_argument);
}

TEST_CASE("fixed_point") {
  CHECK_FALSE(fixed_point(make(false, {{1}}, {0.5})).has_value());
  CHECK_FALSE(fixed_point(make(true, {{1}}, {0.5})).has_value());
  const auto p = fixed_point(make(false, {{-1}}, {0.3}));
  REQUIRE(p.has_value());
  const auto t = make(false, {{-1}}, {0.3});
  const auto image = t.apply(*p);
  CHECK(std::abs(image.y[0] - p->y[0]) < 1e-12);

  // swap with shift (0.5, 0.5): fixed point lies off the diagonal
  const auto swap = make(true, {{0, 1}, {1, 0}}, {0.5, 0.5});
  const auto q = fixed_point(swap);
  REQUIRE(q.has_value());
  const auto moved = swap.apply(*q);
  CHECK(moved.x == q->x);
  for (int i = 0; i < 2; ++i) {
    const double d = moved.y[i] - q->y[i];
    CHECK(std::abs(d - std::round(d)) < 1e-12);
  }
}

TEST_CASE("mobius_spec") {
  const auto spec = mobius_spec();
  CHECK(spec.n == 1);
  REQUIRE(spec.elements.size() == 2);
  CHECK(spec.elements[0].is_identity());
  const auto& sigma = spec.elements[1];
  CHECK(sigma.flip);
  const auto p = sigma.apply({0.25, {0.1}});
  CHECK(p.x == doctest::Approx(0.75));
  CHECK(p.y[0] == doctest::Approx(0.6));
  CHECK(sigma.compose(sigma).is_identity());
  CHECK(sigma.inverse().same_as(sigma));
  CHECK(boundary_components(spec) == 1);
  CHECK(boundary_components(make_covering(1, {})) == 2);
  CHECK(boundary_components(klein_spec()) == 2);
}

TEST_CASE("DeckTransform compose and inverse act on points") {
  std::mt19937_64 rng(4);
  const auto ts = sample_transforms();
  for (const auto& t1 : ts) {
    for (const auto& t2 : ts) {
      const auto y = oracle::uniform_vector(rng, 3, 0.0, 1.0);
      const SlabPoint p{y[0], {y[1], y[2]}};
      const auto a = t1.compose(t2).apply(p);
      const auto b = t1.apply(t2.apply(p));
      CHECK(a.x == doctest::Approx(b.x));
      for (int i = 0; i < 2; ++i) {
        const double d = a.y[i] - b.y[i];
        CHECK(std::abs(d - std::round(d)) < 1e-12);
      }
    }
    CHECK(t1.compose(t1.inverse()).is_identity());
    CHECK(t1.inverse().compose(t1).is_identity());
  }
}

TEST_CASE("deck_apply examples") {
  const auto f = random_field(2, 2, 2, 2, 17);
  CHECK(deck_apply(DeckTransform::identity(2), f).modes() == f.modes());

  // Moebius on an interval field: pointwise h(1 - x) with v -> -v
  const auto sigma = mobius_spec().elements[1];
  const auto h = random_interval_field(1, 1, 3, 5);
  const auto pulled = pullback_interval(h);
  const auto moved = deck_apply(sigma, pulled);
  std::mt19937_64 rng(6);
  for (int s = 0; s < 10; ++s) {
    const auto p = oracle::uniform_vector(rng, 2, 0.0, 1.0);
    const auto u = oracle::uniform_vector(rng, 2, -1.0, 1.0);
    const cplx expected = h.eval(1.0 - p[0], std::vector<double>{-u[0], u[1]});
    CHECK(std::abs(field_eval(moved, {p[0], {p[1]}}, u) - expected) < 1e-12);
  }

  // modes move as (j, k) -> (-j, k) with phase (-1)^k under sigma
  FourierTensorField single(1, 0);
  single.set(Mode{2, {3}}, HomogeneousPoly::constant(2, 1.0));
  const auto image = deck_apply(sigma, single);
  REQUIRE(image.modes().size() == 1);
  CHECK(image.modes().begin()->first == Mode{-2, {3}});
  CHECK(image.modes().begin()->second[0] == cplx(-1.0));

  CHECK_THROWS_AS(deck_apply(sigma, f), std::invalid_argument);
}

TEST_CASE("property: deck_apply is the pullback f(t p; dt u)") {
  std::mt19937_64 rng(11);
  for (int m = 0; m <= 3; ++m) {
    const auto f = random_field(2, m, 2, 2, 300 + m);
    for (const auto& t : sample_transforms()) {
      const auto tf = deck_apply(t, f);
      CHECK(tf.j_band() == f.j_band());
      CHECK(tf.k_band() == f.k_band());
      for (int s = 0; s < 5; ++s) {
        const auto q = oracle::uniform_vector(rng, 3, 0.0, 1.0);
        const auto u = oracle::uniform_vector(rng, 3, -1.0, 1.0);
        const SlabPoint p{q[0], {q[1], q[2]}};
        const SlabPoint tp = t.apply(p);
        const cplx expected = oracle::eval_field(f, tp.x, tp.y, t.apply_fibre(u));
        CHECK(std::abs(field_eval(tf, p, u) - expected) < 1e-10 * std::max(1.0, std::abs(expected)));
      }
    }
  }
}

TEST_CASE("property: pullbacks compose contravariantly and invert exactly") {
  const auto ts = sample_transforms();
  for (int m = 0; m <= 2; ++m) {
    const auto f = random_field(2, m, 2, 2, 700 + m);
    for (const auto& t1 : ts) {
      CHECK((deck_apply(t1, deck_apply(t1.inverse(), f)) - f).max_abs() < 1e-14 * f.max_abs());
      for (const auto& t2 : ts) {
        const auto lhs = deck_apply(t1.compose(t2), f);
        const auto rhs = deck_apply(t2, deck_apply(t1, f));
        CHECK((lhs - rhs).max_abs() < 1e-14 * f.max_abs());
      }
    }
  }
  // exact for the Moebius group, whose phases are +-1
  const auto sigma = mobius_spec().elements[1];
  const auto g = random_field(1, 3, 3, 3, 5);
  CHECK(deck_apply(sigma, deck_apply(sigma, g)).modes() == g.modes());
}

TEST_CASE("deck_average") {
  const auto f = random_field(1, 1, 2, 2, 3);
  CHECK(deck_average(f, make_covering(1, {})).modes() == f.modes());

  // Moebius: interval part becomes (h(x) + h(1 - x)) / 2 for scalar h
  const auto h = random_interval_field(1, 0, 3, 12);
  const auto avg = deck_average(pullback_interval(h), mobius_spec());
  std::mt19937_64 rng(2);
  const std::vector<double> u{0.3, -0.8};
  for (int s = 0; s < 10; ++s) {
    const auto p = oracle::uniform_vector(rng, 2, 0.0, 1.0);
    const cplx expected = 0.5 * (h.eval(p[0], u) + h.eval(1.0 - p[0], u));
    CHECK(std::abs(field_eval(avg, {p[0], {p[1]}}, u) - expected) < 1e-12);
  }

  for (const auto& spec : {mobius_spec(), klein_spec(), flip_swap_spec()}) {
    const auto g = random_field(spec.n, 2, 2, 2, 40 + spec.n);
    const auto once = deck_average(g, spec);
    CHECK(is_invariant(once, spec, 1e-12));
    // idempotent, and identity on invariant fields
    CHECK((deck_average(once, spec) - once).max_abs() < 1e-14 * once.max_abs());
  }
  // exact on the Moebius group
  const auto inv = deck_average(random_field(1, 2, 3, 3, 8), mobius_spec());
  CHECK(deck_average(inv, mobius_spec()).modes() == inv.modes());
}

TEST_CASE("is_invariant") {
  const auto spec = mobius_spec();
  CHECK(is_invariant(deck_average(random_field(1, 1, 2, 2, 1), spec), spec, 1e-12));
  FourierTensorField single(1, 0);
  single.set(Mode{0, {1}}, HomogeneousPoly::constant(2, 1.0));
  CHECK_FALSE(is_invariant(single, spec, 1e-6));
  CHECK(non_invariant_generators(single, spec, 1e-6) == std::vector<std::size_t>{0});
  CHECK(is_invariant(FourierTensorField(1, 2), spec, 1e-12));
  CHECK(is_invariant(random_field(1, 2, 2, 2, 9), make_covering(1, {}), 0.0));
}

TEST_CASE("decompose_twisted examples") {
  const auto spec = mobius_spec();

  // symmetric interval field: kernel certificate with g = 0 and h(x) = h(1-x)
  const auto h0 = random_interval_field(1, 0, 3, 21);
  const auto f1 = deck_average(pullback_interval(h0), spec);
  const auto d1 = decompose_twisted(f1, spec);
  CHECK(d1.residual_norm() < 1e-12);
  CHECK(d1.boundary_defect == 0.0);
  CHECK(d1.g.max_abs() == 0.0);
  const std::vector<double> u{1.0, 0.4};
  for (double x : {0.05, 0.2, 0.37, 0.5, 0.81}) {
    CHECK(std::abs(d1.h.eval(x, u) - d1.h.eval(1.0 - x, u)) < 1e-12);
  }

  // invariant potential with zero trace: recovered exactly
  for (int m = 1; m <= 3; ++m) {
    const auto g0 = deck_average(random_boundary_free_potential(1, m - 1, 2, 2, 50 + m), spec);
    REQUIRE(trace_norm(boundary_trace(g0, 0.0)) < 1e-14);
    const auto d = decompose_twisted(sym_derivative(g0), spec);
    CHECK(d.residual_norm() < 1e-9);
    CHECK(d.boundary_defect < 1e-9);
    CHECK((d.g - g0).max_abs() < 1e-9);
    CHECK(is_invariant(d.g, spec, 1e-12));
  }

  FourierTensorField single(1, 1);
  single.set(Mode{1, {1}}, HomogeneousPoly::linear_form(std::vector<double>{1.0, -1.0}));
  CHECK_THROWS_WITH_AS(decompose_twisted(single, spec), doctest::Contains("generator 0"), std::invalid_argument);
}

TEST_CASE("property: Moebius m = 0 kernel elements are symmetric zero-mean interval fields") {
  const auto spec = mobius_spec();
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_kernel_element(1, 0, 3, 2, 400 + trial);
    const auto f = deck_average(s.f, spec);
    const auto d = decompose_twisted(f, spec);
    CHECK(d.residual_norm() < 1e-9);
    CHECK(d.boundary_defect < 1e-9);
    // m = 0 leaves no room for a potential: f = h(x) itself
    CHECK((pullback_interval(d.h) - f).max_abs() < 1e-12);
    // h has no j = 0 mode, so its mean vanishes; symmetric coefficients hhat(j) = hhat(-j)
    CHECK(d.h.modes().count(0) == 0);
    for (const auto& [j, p] : d.h.modes()) {
      const auto it = d.h.modes().find(-j);
      REQUIRE(it != d.h.modes().end());
      CHECK((it->second - p).max_abs() < 1e-12);
    }
  }
}

TEST_CASE("property: kernel membership on M agrees with the twisted certificate") {
  for (const auto& spec : {mobius_spec(), klein_spec(), flip_swap_spec()}) {
    for (int trial = 0; trial < 8; ++trial) {
      const int m = trial % 4;
      auto f = deck_average(random_kernel_element(spec.n, m, 2, 2, 800 + trial).f, spec);
      if (trial % 2) {
        FourierTensorField bump(spec.n, m);
        HomogeneousPoly p(spec.n + 1, m);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = cplx(0.3 + i, -0.2);
        // k = (1, ..., 1) survives every half shift in these groups
        bump.set(Mode{1, std::vector<int>(spec.n, 1)}, 1e-3 * p);
        f += deck_average(bump, spec);
      }
      const bool on_m = is_in_kernel(f, 1e-9).in_kernel;
      const auto d = decompose_twisted(f, spec, 1e-9);
      const double scale = 1e-9 * sobolev_norm(f, 0.0);
      const bool twisted = d.residual_norm() <= scale && d.boundary_defect <= scale;
      CHECK(on_m == twisted);
      INFO("n=", spec.n, " order=", spec.elements.size(), " m=", m, " trial=", trial, " res=", d.residual_norm(), " scale=", scale);
      CHECK(on_m == (trial % 2 == 0));
      if (twisted) CHECK(is_invariant(d.g, spec, 1e-12));
    }
  }
}

TEST_CASE("property: sym_derivative commutes with deck_average") {
  for (const auto& spec : {mobius_spec(), klein_spec(), flip_swap_spec()}) {
    for (int m = 0; m <= 2; ++m) {
      const auto g = random_field(spec.n, m, 2, 2, 900 + 10 * spec.n + m);
      const auto lhs = sym_derivative(deck_average(g, spec));
      const auto rhs = deck_average(sym_derivative(g), spec);
      CHECK((lhs - rhs).max_abs() < 1e-12 * std::max(1.0, lhs.max_abs()));
    }
  }
}

TEST_CASE("property: sinograms are transported by deck transforms") {
  std::mt19937_64 rng(33);
  const auto sigma = mobius_spec().elements[1];
  for (int m = 0; m <= 3; ++m) {
    const auto f = random_field(1, m, 2, 2, 60 + m);
    const auto tf = deck_apply(sigma, f);
    for (int s = 0; s < 5; ++s) {
      const Geodesic geo{oracle::uniform_vector(rng, 1, 0.0, 1.0), oracle::uniform_vector(rng, 1, -2.0, 2.0)};
      const auto moved = transport_geodesic(sigma, geo, m);
      CHECK(moved.sign == (m % 2 ? -1 : 1));
      const cplx lhs = xray_quadrature(tf, geo, default_quadrature_nodes(tf, geo.b));
      const cplx rhs = xray_quadrature(f, moved.image, default_quadrature_nodes(f, moved.image.b));
      CHECK(std::abs(lhs - static_cast<double>(moved.sign) * rhs) < 1e-9);
    }
  }
  for (int m = 0; m <= 2; ++m) {
    const auto f = random_field(2, m, 2, 1, 70 + m);
    for (const auto& t : sample_transforms()) {
      const auto tf = deck_apply(t, f);
      const Geodesic geo{oracle::uniform_vector(rng, 2, 0.0, 1.0), oracle::uniform_vector(rng, 2, -2.0, 2.0)};
      const auto moved = transport_geodesic(t, geo, m);
      const cplx lhs = xray_quadrature(tf, geo, default_quadrature_nodes(tf, geo.b));
      const cplx rhs = xray_quadrature(f, moved.image, default_quadrature_nodes(f, moved.image.b));
      CHECK(std::abs(lhs - static_cast<double>(moved.sign) * rhs) < 1e-9);
    }
  }
}
