#pragma once

// Twisted slabs N = M / G for finite groups G of slab isometries acting freely
// on M = [0,1] x T^n. Fields on N are represented as G-invariant fields on M:
// pullback to M is the identity on that representation and pushforward is the
// deck average.

#include <optional>
#include <string>
#include <vector>

#include "slabxrt/kernel.hpp"
#include "slabxrt/xray.hpp"

namespace slabxrt {

/// (x, y) -> (flip ? 1 - x : x, A y + c mod 1), A a signed permutation matrix.
struct DeckTransform {
  bool flip = false;
  std::vector<std::vector<int>> A;
  std::vector<double> c;

  static DeckTransform identity(int n);
  int n() const { return static_cast<int>(c.size()); }
  bool is_identity() const;

  SlabPoint apply(const SlabPoint& p) const;
  /// Differential on fibre variables: (v, w) -> (+-v, A w).
  std::vector<double> apply_fibre(const std::vector<double>& u) const;

  /// this after other: (this * other)(p) = this(other(p)).
  DeckTransform compose(const DeckTransform& other) const;
  DeckTransform inverse() const;

  /// Equality with translations compared modulo 1 up to 1e-12.
  bool same_as(const DeckTransform& other) const;
};

struct CoveringSpec {
  int n = 0;
  std::vector<DeckTransform> generators;
  /// Every group element, identity first.
  std::vector<DeckTransform> elements;
};

/// Closes `generators` under composition. Throws std::invalid_argument when a
/// generator is malformed or the closure exceeds max_order elements.
CoveringSpec make_covering(int n, std::vector<DeckTransform> generators, std::size_t max_order = 4096);

struct CoveringReport {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks identity, closure, inverses, signed-permutation form and freeness.
CoveringReport validate_covering(const CoveringSpec& spec);

/// Fixed point of a transform on M, if any.
std::optional<SlabPoint> fixed_point(const DeckTransform& t);

/// Number of boundary components of M / G: 1 if some element flips x, else 2.
int boundary_components(const CoveringSpec& spec);

/// Two-fold cover of the Moebius strip: {id, (x,y) -> (1-x, y+1/2)}.
CoveringSpec mobius_spec();

/// Pullback t^* f = f(t(p); dt u), computed mode by mode without band growth.
FourierTensorField deck_apply(const DeckTransform& t, const FourierTensorField& f);

/// (1/|G|) sum_t t^* f.
FourierTensorField deck_average(const FourierTensorField& f, const CoveringSpec& spec);

/// Generators t with ||t^* f - f|| > tol ||f||; empty when f is invariant.
std::vector<std::size_t> non_invariant_generators(const FourierTensorField& f,
                                                  const CoveringSpec& spec, double tol);
bool is_invariant(const FourierTensorField& f, const CoveringSpec& spec, double tol);

/// decompose() on the pullback followed by deck-averaging the potential.
/// Throws std::invalid_argument naming the first non-invariant generator.
Decomposition decompose_twisted(const FourierTensorField& f, const CoveringSpec& spec,
                                double tol = kDefaultKernelTol);

/// Image of a geodesic under t, reparametrized to run from x = 0 to x = 1.
/// Reversal under a flip multiplies m-tensor integrals by (-1)^m; `sign`
/// carries that factor so that I(t^* f)(geo) = sign * I f(image).
struct TransportedGeodesic {
  Geodesic image;
  int sign = 1;
};
TransportedGeodesic transport_geodesic(const DeckTransform& t, const Geodesic& geo, int m);

}  // namespace slabxrt
