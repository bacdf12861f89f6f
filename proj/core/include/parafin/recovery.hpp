#pragma once

#include "parafin/liealg.hpp"

namespace parafin {

/// Image of the vector under the subalgebra: span{xi x : xi in basis}.  The
/// plain image, not the invariant closure; the zero vector gives the zero
/// subspace.
Subspace orbit_span(const MatrixLieSubalgebra& s, const MatrixD& x);

/// Smallest s-invariant subspace containing x: iterate image-and-adjoin
/// until stable.
Subspace invariant_closure(const MatrixLieSubalgebra& s, const MatrixD& x);

/// Chain of invariant subspaces recovered from a subalgebra of a GL, SL, or
/// SP ambient.  Candidates are the images of the unital associative closure
/// A of s on the coordinate spanning set {e_i} ∪ {e_i + e_j}, the descending
/// series (rad A)^k V, the two trivial subspaces, and — when the ambient
/// carries a form — the perps of all of these.  For the full stabilizer of a
/// flag these candidates are exactly the flag members.
struct ChainRecovery {
  bool is_chain = false;
  GeneralizedFlag on_v;
  /// Perp chain of on_v under the ambient pairing.
  GeneralizedFlag on_w;
  std::string obstruction;
  /// Two incomparable candidates, when is_chain is false.
  std::optional<std::pair<Subspace, Subspace>> incomparable_pair;
};
ChainRecovery recover_chain_gl(const MatrixLieSubalgebra& s);

/// Intermediate data of the orthogonal recovery, kept for reporting.
struct SoRecoveryState {
  /// Distinct isotropic invariant subspaces found, sorted by dimension.
  std::vector<Subspace> isotropic_images;
  /// Their sum.  Isotropic itself in the unambiguous case; the perp of the
  /// corank-two core otherwise.
  Subspace isotropic_union;
  std::optional<Subspace> core;
  std::optional<Subspace> max_iso_first;
  std::optional<Subspace> max_iso_second;
};

/// Flags recovered from a subalgebra of an SO ambient.  One flag normally;
/// three when the top isotropic invariant subspace sits at corank two under
/// its perp, in which case the two maximal isotropic subspaces over the core
/// extend the base flag in exactly two ways and all three flags share one
/// stabilizer.
struct SoRecovery {
  bool ok = false;
  bool ambiguous = false;
  std::vector<GeneralizedFlag> flags;
  SoRecoveryState state;
  std::string obstruction;
  std::optional<std::pair<Subspace, Subspace>> incomparable_pair;
};
SoRecovery recover_flags_so(const MatrixLieSubalgebra& s);

}  // namespace parafin
