#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "parafin/flags.hpp"
#include "parafin/liealg.hpp"

namespace parafin {

/// Seeded generator of random exact objects — scalars, subspaces, flags,
/// basis changes — for property suites and corpus sweeps.  Identical seeds
/// reproduce identical streams on every platform (mt19937_64 plus modular
/// draws only; no distribution objects).
class Corpus {
 public:
  explicit Corpus(std::uint64_t seed) : seed_(seed), rng_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform draw from {0, ..., bound-1}; bound must be positive.
  int pick(int bound);
  bool coin() { return pick(2) == 1; }

  /// Small-height scalar: components are fractions with numerators in
  /// [-3, 3] and denominators in {1, 2, 3}.  May be zero.
  Scalar scalar(Ring r);
  Scalar nonzero_scalar(Ring r);

  MatrixD matrix(Ring r, int rows, int cols);
  /// Column vector with at least one nonzero entry.
  MatrixD nonzero_vector(Ring r, int n);

  /// Random subspace of D^n of the given dimension (random dimension in
  /// [0, n] when omitted).
  Subspace subspace(Ring r, int n);
  Subspace subspace(Ring r, int n, int dim);

  /// Invertible matrix from a unit-triangular big-cell product
  /// lower * diagonal * upper; exact over all three rings.
  MatrixD invertible(Ring r, int n);

  /// Invertible change of basis compatible with the ambient: plain
  /// invertible for gl/sl, a product of exponentials of triangular
  /// form-skew elements (hence form-preserving) for so/sp.
  MatrixD basis_change(const AmbientAlgebra& amb);

  /// Random chain of subspaces: a random invertible image of a random
  /// coordinate flag.
  GeneralizedFlag flag(Ring r, int n);
  /// Flag adapted to the ambient: arbitrary chain for gl/sl, a chain of
  /// isotropic subspaces (a form-preserving image of a coordinate
  /// isotropic flag) for so/sp.
  GeneralizedFlag flag(const AmbientAlgebra& amb);
  /// Isotropic chain with the given member dimensions, each at most the
  /// ambient's witt index.
  GeneralizedFlag isotropic_flag(const AmbientAlgebra& amb, const std::vector<int>& dims);

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

}  // namespace parafin
