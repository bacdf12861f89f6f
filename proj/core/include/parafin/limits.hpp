#pragma once

#include <string>
#include <utility>
#include <vector>

#include "parafin/liealg.hpp"

namespace parafin {

/// Chain of ambient algebras of one family linked by the corner embeddings
/// x ↦ diag(x, 0).  gl and sl systems run over every size in range and pair
/// vectors by the standard dot product; so and sp systems run over even
/// sizes with the split form laid out in adjacent coordinate pairs (blocks
/// [[0,1],[1,0]] resp. [[0,1],[-1,0]] down the diagonal), the one layout
/// that makes every corner embedding form-compatible.  Everything is over Q.
///
/// max_level is the horizon: the last level the system answers questions
/// about.  Limit computations prove their stationarity by pattern algebra
/// and use the horizon only as a failsafe; they never sample-and-guess.
class DirectSystem {
 public:
  static constexpr int default_horizon = 12;

  DirectSystem(Family family, int min_level, int max_level = default_horizon);

  Family family() const { return family_; }
  int min_level() const { return min_; }
  int max_level() const { return max_; }
  /// Gap between consecutive levels: 1 for gl/sl, 2 for so/sp.
  int level_step() const;
  bool valid_level(int n) const;
  /// Smallest structurally valid level >= n; may exceed the horizon.
  int level_at_least(int n) const;
  std::vector<int> levels() const;

  AmbientPtr ambient(int n) const;
  /// Form the limit perpendicular is taken against: the invariant form for
  /// so/sp, the dot pairing for gl/sl.
  SesquiStructure pairing(int n) const;
  /// How far G e_t can stray from coordinate t: 0 for the dot pairing, 1
  /// for the paired split forms.
  int band() const;
  /// Coordinate hit by row t of the gram: t itself, or its pair partner.
  int gram_partner(int t) const;

  /// diag(x, 0) at the target size; both sizes must be valid levels.
  MatrixD embed(const MatrixD& x, int to_level) const;
  /// Column vector zero-padded to the target size.
  MatrixD include_vector(const MatrixD& v, int to_level) const;

 private:
  MatrixD gram(int n) const;

  Family family_;
  int min_ = 0, max_ = 0;
};

/// One symbolic generator family: instance i is sum_j coeff_j e(i+offset_j),
/// taken at every index i >= start (0-based), and visible at level n once it
/// fits inside the first n coordinates.  Normal form: offsets strictly
/// increasing from 0, every coefficient a nonzero rational.
struct TailPattern {
  std::vector<std::pair<Scalar, int>> terms;
  int start = 0;

  int max_offset() const;
  /// Largest index with a fully visible instance at the level (start-1 when
  /// none fit).
  int last_instance(int level) const;
  MatrixD instance(int i, int level) const;

  bool operator==(const TailPattern& o) const;
  bool operator!=(const TailPattern& o) const { return !(*this == o); }
};

/// Finitely many concrete generators plus finitely many arithmetic tail
/// patterns — the representable fragment of subspaces of the union space
/// Q^(infinity).  Realizations at successive levels are nested and, once
/// every pattern contributes, grow by a constant dimension per level.
class TailSubspace {
 public:
  TailSubspace() = default;
  TailSubspace(std::vector<MatrixD> exceptional, std::vector<TailPattern> patterns);

  /// Grammar: generators separated by ';'.  A symbolic generator is a sum
  /// of terms [coeff] e(v+t) closed by "for v>=k" (1-based start); a
  /// concrete generator is a sum of terms [coeff] e(j) with fixed 1-based
  /// indices.  "0" denotes the zero subspace.  Examples:
  ///   "e(i)-e(i+1) for i>=1"      every consecutive difference
  ///   "e(k) for k>=3"             the standard tail past the first two
  ///   "e(1)+2 e(3); e(2)"         a concrete plane
  static TailSubspace parse(const std::string& text);
  std::string str() const;

  const std::vector<MatrixD>& exceptional() const { return exceptional_; }
  const std::vector<TailPattern>& patterns() const { return patterns_; }
  bool is_zero() const { return exceptional_.empty() && patterns_.empty(); }
  /// One past the last coordinate the concrete part touches.
  int exceptional_support() const;
  /// Realization on Q^n, with no range policing (see realize for that).
  Subspace at_level(int n) const;

 private:
  std::vector<MatrixD> exceptional_;  // trimmed nonzero columns over Q
  std::vector<TailPattern> patterns_;
};

/// Realization at a level of the system; rejects levels outside the range.
Subspace realize(const TailSubspace& ts, int level, const DirectSystem& sys);

/// Whether two tail descriptions realize identically at every level in
/// range — equality of the limit subspaces as seen through the horizon.
bool same_realizations(const TailSubspace& a, const TailSubspace& b,
                       const DirectSystem& sys);

/// The tail description of every finitary vector pairing to zero with every
/// realization of ts from the vector's own level onward.  Computed by
/// constraint stabilization: an isolating-instance bound proves that the
/// perpendicular has bounded support (or is itself a bounded perturbation
/// of a standard tail), and the bounded part is an exact kernel.  When the
/// pattern algebra cannot close the bound, or the proof needs levels past
/// the horizon, throws UndecidableAtHorizonError rather than guessing.
TailSubspace limit_perp(const TailSubspace& ts, const DirectSystem& sys);

/// Per-level slices of the stabilizer of a flag of tail subspaces: at level
/// n, all s with diag(s, 0, ...) preserving every member at every later
/// level.  Slices nest under the corner embeddings by construction; the
/// returned family has that nesting re-verified, and a member list whose
/// realizations fail to form a chain is rejected.  Both failures throw
/// CoherenceError.
std::vector<MatrixLieSubalgebra> coherent_stabilizer(
    const std::vector<TailSubspace>& flag, const DirectSystem& sys);

/// One functional per level of the system, each a row of coefficients
/// against the canonical basis of its host, with f at level n+1 restricting
/// to f at level n along the corner embedding.  Construction verifies both
/// the host nesting and the restriction identity (CoherenceError).
class CoherentTraceFamily {
 public:
  CoherentTraceFamily(std::vector<MatrixLieSubalgebra> hosts,
                      std::vector<MatrixD> rows, const DirectSystem& sys);

  /// f_n = usual matrix trace on each host.
  static CoherentTraceFamily usual_trace(std::vector<MatrixLieSubalgebra> hosts,
                                         const DirectSystem& sys);
  /// f_n = 0 on each host.
  static CoherentTraceFamily zero(std::vector<MatrixLieSubalgebra> hosts,
                                  const DirectSystem& sys);
  /// f_n(x) = tr(x · diag(y, 0)) — a functional supported on the fixed
  /// corner block where y lives.
  static CoherentTraceFamily trace_against(const MatrixD& y,
                                           std::vector<MatrixLieSubalgebra> hosts,
                                           const DirectSystem& sys);

  int level_count() const { return static_cast<int>(hosts_.size()); }
  const MatrixLieSubalgebra& host(int idx) const { return hosts_[idx]; }
  const MatrixD& row(int idx) const { return rows_[idx]; }
  /// Value at x, which must lie in the host at that position.
  Scalar eval(int idx, const MatrixD& x) const;

 private:
  std::vector<MatrixLieSubalgebra> hosts_;
  std::vector<MatrixD> rows_;
};

/// Whether the family vanishes on every simple ideal of the per-level
/// derived quotients [h,h]/radical whose image persists as an ideal at all
/// later levels in range.  Transient ideals — ones the next corner bracket
/// destroys, like sl(n) inside the gl chain — impose no condition, which is
/// what lets the joint trace kernel be parabolic in the limit while failing
/// at every finite level.  Persistence is decided only when every later
/// level agrees; mixed signals, an inconclusive ideal scan, or a horizon
/// too short to judge all throw UndecidableAtHorizonError.
bool infinite_trace_conditions(const CoherentTraceFamily& fam,
                               const DirectSystem& sys);

}  // namespace parafin
