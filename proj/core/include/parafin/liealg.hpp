#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "parafin/flags.hpp"

namespace parafin {

enum class Family : std::uint8_t { GL, SL, SO, SP };

const char* family_name(Family f);
Family family_from_name(const std::string& name);

/// One of the ambient matrix Lie algebras the library classifies subalgebras
/// of: gl(n), sl(n), so(n) (symmetric form), sp(2m) (alternating form), over
/// one of the three scalar rings.  Carries its defining matrix space, the
/// V x W pairing used for perp chains, and (for SO/SP) the invariant form.
///
/// Instances are shared immutably: every subalgebra keeps a pointer to its
/// ambient, so stabilizers, radicals and recoveries all agree on the scalars,
/// the form, and the coefficient field.
class AmbientAlgebra {
 public:
  /// Full matrix algebra on D^n.
  static std::shared_ptr<const AmbientAlgebra> gl(Ring r, int n);
  /// Trace-zero (real-trace-zero over H(Q)) subalgebra of gl(n).
  static std::shared_ptr<const AmbientAlgebra> sl(Ring r, int n);
  /// Skew algebra of a symmetric bilinear form on D^n.  The default gram is
  /// the antidiagonal of ones, which is split: coordinate flags work out to
  /// isotropic flags.  Commutative rings only.
  static std::shared_ptr<const AmbientAlgebra> so(Ring r, int n,
                                                  std::optional<MatrixD> gram = std::nullopt);
  /// Skew algebra of an alternating form on D^{2m} (rank parameter m).  The
  /// default gram pairs e_t with e_{2m+1-t}, signs +1 above the antidiagonal.
  static std::shared_ptr<const AmbientAlgebra> sp(Ring r, int m,
                                                  std::optional<MatrixD> gram = std::nullopt);
  static std::shared_ptr<const AmbientAlgebra> make(Family f, Ring r, int rank,
                                                    std::optional<MatrixD> gram = std::nullopt);

  Family family() const { return family_; }
  Ring ring() const { return ring_; }
  /// Field the spans are taken over: Q(i) for Q(i) entries, Q otherwise.
  Ring coeff() const { return coeff_; }
  /// Size of the matrices (= dim of the defining space V).
  int n() const { return n_; }
  /// Family rank parameter as given at construction (m for SP, n otherwise).
  int rank_param() const { return rank_; }
  int dim() const { return span_.dim(); }

  const MatSpan& span() const { return span_; }
  /// Invariant form on V; present exactly for SO and SP.
  const std::optional<SesquiStructure>& form() const { return form_; }
  /// V x W pairing used for dual flags and perp chains.
  const SesquiStructure& pairing() const { return pairing_; }

  bool contains(const MatrixD& x) const { return span_.contains(x); }

 private:
  AmbientAlgebra(Family f, Ring r, int n, int rank, MatSpan span,
                 std::optional<SesquiStructure> form, SesquiStructure pairing);

  Family family_;
  Ring ring_, coeff_;
  int n_, rank_;
  MatSpan span_;
  std::optional<SesquiStructure> form_;
  SesquiStructure pairing_;
};

using AmbientPtr = std::shared_ptr<const AmbientAlgebra>;

/// How a subalgebra arose as a stabilizer, when it did.  Kept alongside the
/// span because the nilpotent-part formula and the trace-condition space are
/// only defined relative to the stabilized flag(s).
struct StabilizerShape {
  /// Flag on V.  For SO/SP this is the perp-completed chain.
  GeneralizedFlag on_v;
  /// Dual flag on W (GL/SL only; the perp chain unless a couple was given).
  std::optional<GeneralizedFlag> on_w;
};

/// A subalgebra of one ambient algebra, held as a canonical coefficient-field
/// span of matrices.  Closure under the bracket is the caller's contract;
/// every constructor in this library produces closed spans, and
/// is_bracket_closed() re-checks on demand.
class MatrixLieSubalgebra {
 public:
  MatrixLieSubalgebra() = default;
  MatrixLieSubalgebra(AmbientPtr ambient, MatSpan span,
                      std::optional<StabilizerShape> shape = std::nullopt);

  const AmbientAlgebra& ambient() const { return *ambient_; }
  const AmbientPtr& ambient_ptr() const { return ambient_; }
  const MatSpan& span() const { return span_; }
  int dim() const { return span_.dim(); }
  const std::vector<MatrixD>& basis() const { return span_.basis(); }

  bool contains(const MatrixD& x) const { return span_.contains(x); }
  bool contains(const MatrixLieSubalgebra& o) const { return span_.contains(o.span_); }
  bool operator==(const MatrixLieSubalgebra& o) const { return span_ == o.span_; }
  bool operator!=(const MatrixLieSubalgebra& o) const { return !(*this == o); }

  bool is_bracket_closed() const;

  const std::optional<StabilizerShape>& shape() const { return shape_; }

 private:
  AmbientPtr ambient_;
  MatSpan span_;
  std::optional<StabilizerShape> shape_;
};

/// The ambient algebra as a subalgebra of itself, shaped as the stabilizer
/// of the trivial flag.
MatrixLieSubalgebra full_subalgebra(const AmbientPtr& ambient);

/// Stabilizer of the flag inside the ambient algebra.  For GL/SL the dual
/// flag on W defaults to the perp chain of f (which adds no conditions); for
/// SO/SP the flag is completed with the perps of its members before the
/// stabilizer shape is recorded.  One linear system; closed by construction.
MatrixLieSubalgebra flag_stabilizer(const GeneralizedFlag& f, const AmbientPtr& ambient);
/// GL/SL with an explicit dual flag: cuts by both actions, the W side acting
/// through the pairing-dual of each matrix.
MatrixLieSubalgebra flag_stabilizer(const GeneralizedFlag& on_v, const GeneralizedFlag& on_w,
                                    const AmbientPtr& ambient);

/// Smallest bracket-closed span containing the generators, inside the
/// ambient.  Throws AlgebraError if a generator falls outside the ambient.
MatrixLieSubalgebra bracket_closure(const std::vector<MatrixD>& gens, const AmbientPtr& ambient);

/// Span of all brackets [a, b], a in lhs, b in rhs (same ambient shape).
MatSpan bracket_span(const MatSpan& lhs, const MatSpan& rhs);

/// Condition "the trace pairing of x against y vanishes": the full trace
/// over a Q(i) coefficient field, the real part of the trace over Q.
LinearCondition trace_pairs_to_zero(Ring coeff, const MatrixD& y);

/// Derived length: steps of s ⊇ [s,s] ⊇ ... until zero; nullopt if the
/// series stalls above zero (not solvable).
std::optional<int> derived_length(const MatrixLieSubalgebra& s);
bool is_solvable(const MatrixLieSubalgebra& s);

/// Largest solvable ideal.  Candidate: the trace-form conditions
/// tr(x y) = 0 against every y in [s,s], refined to the largest subspan that
/// is an ideal of s; the result is verified solvable and an ideal.
MatrixLieSubalgebra solvable_radical(const MatrixLieSubalgebra& s);

/// Nilpotent part of a stabilizer-shaped subalgebra: the elements pushing
/// every member of the stabilized flag into its predecessor.  Verified to be
/// an ideal of s consisting of nilpotent matrices.  Throws
/// UnsupportedShapeError when s carries no stabilizer shape.
MatrixLieSubalgebra linear_nilradical(const MatrixLieSubalgebra& s);

/// Basis of the functionals on s that kill both the nilpotent part and all
/// brackets — the linear conditions available for carving out subalgebras
/// between the nilradical and s.  Functionals are rows of coefficients
/// against the canonical basis of s.
class TraceConditionSpace {
 public:
  TraceConditionSpace(MatrixLieSubalgebra host, std::vector<MatrixD> functionals);

  const MatrixLieSubalgebra& host() const { return host_; }
  int dim() const { return static_cast<int>(functionals_.size()); }
  const std::vector<MatrixD>& functionals() const { return functionals_; }

  /// Value of functional idx at x (x must lie in the host).
  Scalar apply(int idx, const MatrixD& x) const;
  /// Subalgebra cut out by the chosen functionals (all of them by default).
  /// The stabilizer shape of the host survives the cut.
  MatrixLieSubalgebra joint_kernel(const std::vector<int>& idx) const;
  MatrixLieSubalgebra joint_kernel() const;

 private:
  MatrixLieSubalgebra host_;
  std::vector<MatrixD> functionals_;
};

TraceConditionSpace trace_condition_space(const MatrixLieSubalgebra& s);

/// Evidence that a flag refines to a complete (for SO/SP: complete isotropic)
/// flag whose stabilizer is solvable of the family's minimal-parabolic
/// dimension.  The witness sits inside every stabilizer of the original flag.
struct BorelCertificate {
  GeneralizedFlag refinement;
  MatrixLieSubalgebra witness;
  int witness_derived_length = 0;
};

/// Dimension of a Borel subalgebra: GL n(n+1)/2, SL n(n+1)/2 - 1, SO(2m) m^2,
/// SO(2m+1) m^2 + m, SP(m) m^2 + m.
int borel_dimension(Family f, int rank);

/// Refine f to a complete flag (through isotropic completion for SO/SP) and
/// certify its stabilizer.  Throws FormError when no isotropic refinement
/// exists over the ring, InternalConsistencyError if the witness fails its
/// dimension or solvability checks.
BorelCertificate certify_borel(const GeneralizedFlag& f, const AmbientPtr& ambient);

enum class ObstructionKind : std::uint8_t { None, NotAChain, StabilizerMismatch };

const char* obstruction_kind_name(ObstructionKind k);

/// Outcome of the parabolic test: either the recovered flag(s) whose
/// stabilizer reproduces s exactly, plus a Borel certificate through the
/// recovered flag — or a concrete obstruction witness.
struct ParabolicReport {
  bool parabolic = false;
  /// Recovered flags with stabilizer s: one entry normally; three for the
  /// SO middle-corank-two ambiguity.
  std::vector<GeneralizedFlag> flags;
  /// Dual flag on W (GL/SL: the perp chain of flags[0]).
  std::optional<GeneralizedFlag> dual_flag;
  /// Absent over H(Q), where no solvable complete-flag stabilizer exists.
  std::optional<BorelCertificate> certificate;

  ObstructionKind obstruction = ObstructionKind::None;
  std::string obstruction_detail;
  /// NotAChain: a pair of incomparable invariant subspaces.
  std::optional<std::pair<Subspace, Subspace>> incomparable_pair;

  /// SO ambiguity data: the corank-two isotropic core and the two maximal
  /// isotropic subspaces over it.
  std::optional<Subspace> core;
  std::optional<Subspace> max_iso_first;
  std::optional<Subspace> max_iso_second;
};

/// Test whether s is the full stabilizer of a (self-taut, for SO/SP) flag in
/// its ambient: recover the candidate flag from s itself, compare stabilizers,
/// and certify a Borel inside on success.
ParabolicReport is_parabolic(const MatrixLieSubalgebra& s);

/// {xi in ambient : [xi, s] ⊆ s}.
MatrixLieSubalgebra normalizer(const MatrixLieSubalgebra& s);

}  // namespace parafin
