#pragma once

#include "parafin/liealg.hpp"

namespace parafin {

/// The ten classical real families.  Complexified ambients: sl/gl over Q(i)
/// at the same size (SlR, GlR, Su, U), at doubled size (SlH, GlH), so over
/// Q(i) (SoPQ, SoStar), sp over Q(i) (SpR, SpPQ).
enum class RealFamily : std::uint8_t { SlR, SlH, Su, SoPQ, SoStar, SpR, SpPQ, GlR, GlH, U };

const char* real_family_name(RealFamily f);

/// Parsed real-form descriptor.  Grammar (round-trips through str()):
///   "sl(3,R)"  "sl(2,H)"  "gl(2,R)"  "gl(1,H)"  "su(1,2)"  "u(1,1)"
///   "so(3,3)"  "so*(6)"   "sp(2,R)"  "sp(1,1)"
/// so*(2n) takes the complex size 2n; sp(n,R) takes the rank n (2n x 2n
/// matrices); signature forms take (p, q).
struct RealFormSpec {
  RealFamily family = RealFamily::SlR;
  int p = 0;  ///< signature part (Su, U, SoPQ, SpPQ)
  int q = 0;
  int n = 0;  ///< rank (SlR, SlH, GlR, GlH, SpR) or half the complex size (SoStar)

  static RealFormSpec parse(const std::string& text);
  std::string str() const;

  /// Ring of the D-flags attached to this form: Rat when the defining space
  /// has real points, Quat for the quaternionic families, Gauss for the
  /// unitary families (their flags stay complex).
  Ring flag_ring() const;
  /// Dimension of the complex defining space.
  int complex_dim() const;

  bool operator==(const RealFormSpec& o) const {
    return family == o.family && p == o.p && q == o.q && n == o.n;
  }
  bool operator!=(const RealFormSpec& o) const { return !(*this == o); }
};

enum class ConjKind : std::uint8_t { Tau, JStruct };

/// Involutive conjugate-linear structure over the Gauss ring.  Two kinds:
/// Tau squares to +Id on the algebra and cuts out the real form; JStruct is
/// a quaternionic structure, squaring to -Id on the defining space.  Action
/// shapes: a space conjugation v -> A conj(v) inducing xi -> A conj(xi)
/// A^{-1} on the algebra (A conj(A) = +-Id), or a star adjoint
/// xi -> -H conj(xi)^T H^{-1} with hermitian H and no space action.
class Conjugation {
 public:
  /// Algebra involution from a space conjugation; requires A conj(A) = +-Id.
  static Conjugation tau_space(MatrixD a);
  /// Algebra involution xi -> -H conj(xi)^T H^{-1}; requires H hermitian.
  static Conjugation tau_star(MatrixD h);
  /// Quaternionic structure v -> A conj(v); requires A conj(A) = -Id.
  static Conjugation j_structure(MatrixD a);

  ConjKind kind() const { return kind_; }
  const MatrixD& matrix() const { return a_; }
  bool has_space_action() const { return !star_; }
  /// True when the space action squares to +Id (fixed vectors exist).
  bool space_square_plus() const { return !star_ && plus_; }

  MatrixD apply_alg(const MatrixD& xi) const;
  /// Space action A conj(v); error for the star shape.
  MatrixD apply_vec(const MatrixD& v) const;
  /// Image of a subspace under the space action.
  Subspace map_subspace(const Subspace& s) const;
  bool stabilizes(const Subspace& s) const;

 private:
  Conjugation(ConjKind k, MatrixD a, bool star, bool plus);

  ConjKind kind_;
  MatrixD a_;
  bool star_;
  bool plus_;
};

/// Real Lie algebra presented as a Q-span of matrices inside a complex
/// ambient: entries over Q(i), coefficients over Q.  dim() is the real
/// dimension.
class RealSubalgebra {
 public:
  RealSubalgebra(AmbientPtr ambient, MatSpan span, RealFormSpec spec);

  const AmbientAlgebra& ambient() const { return *ambient_; }
  const AmbientPtr& ambient_ptr() const { return ambient_; }
  const MatSpan& span() const { return span_; }
  const RealFormSpec& spec() const { return spec_; }
  int dim() const { return span_.dim(); }
  const std::vector<MatrixD>& basis() const { return span_.basis(); }
  bool contains(const MatrixD& x) const { return span_.contains(x); }
  bool is_bracket_closed() const;

  bool operator==(const RealSubalgebra& o) const { return span_ == o.span_; }
  bool operator!=(const RealSubalgebra& o) const { return !(*this == o); }

 private:
  AmbientPtr ambient_;
  MatSpan span_;
  RealFormSpec spec_;
};

/// A built real form: the algebra, its defining conjugation, the
/// quaternionic structure when the family has one, and the defining forms
/// beyond the ambient's own (quaternionic form first when present, then the
/// auxiliary hermitian gram).
struct RealFormData {
  RealSubalgebra algebra;
  Conjugation tau;
  std::optional<Conjugation> jstruct;
  std::vector<SesquiStructure> forms;
};

/// Construct the real form over exact scalars.  Hermitian signatures are
/// diag(1_p, -1_q); split symmetric grams are antidiagonal so isotropic
/// coordinate subspaces exist; the quaternionic families live in interleaved
/// coordinates q = a + j c -> (a, c) per entry.  Verified on build:
/// involutivity, bracket closure, and dim_R = dim_C of the ambient.
RealFormData build_real_form(const RealFormSpec& spec);

/// Q(i)-span of the real basis inside the complex ambient.
MatrixLieSubalgebra complexify(const RealSubalgebra& s);

/// Memberwise descent of a complex flag: for a Tau space conjugation the
/// members' real points (a Rat flag); for a JStruct the members reinterpreted
/// as quaternionic subspaces at half the dimension (a Quat flag).  A member
/// that is not stable under the structure raises StabilityError.
GeneralizedFlag realify_flag(const GeneralizedFlag& f, const Conjugation& c);

/// Left inverse of realify_flag: embed a Rat flag entrywise, or a Quat flag
/// through the interleaved coordinates (doubling dimensions).
GeneralizedFlag complexify_flag(const GeneralizedFlag& f);

/// Stabilizer of the flag inside the real form.  The flag lives over
/// spec.flag_ring(); for the unitary families that is a complex flag.
RealSubalgebra real_stabilizer(const RealFormData& form, const GeneralizedFlag& f);

/// Evidence chain of the real parabolicity test.  Stages, in order:
/// "complex-parabolic" (the complexification passes is_parabolic),
/// "flag-stability" (the recovered flag is stable under the conjugation —
/// for the unitary families: self-taut for the hermitian form),
/// "stabilizer-match" (the input equals the real stabilizer of the
/// realified flag).  At finite rank no further trace conditions exist, so
/// trace_conditions_needed is 0 on success.
struct RealParabolicReport {
  bool parabolic = false;
  std::string failed_stage;
  std::string detail;
  ParabolicReport complex_report;
  std::optional<GeneralizedFlag> real_flag;
  int trace_conditions_needed = -1;
};

RealParabolicReport is_real_parabolic(const RealSubalgebra& p);

/// Number of distinct flags with stabilizer p, for a real parabolic p:
/// 3 exactly when the family is so(p,q) and the complex corank-two
/// trichotomy descends (both maximal isotropics are conjugation-stable);
/// 1 otherwise — in particular for so* forms, where the quaternionic
/// structure swaps the two maximal isotropics.
int real_flag_count(const RealSubalgebra& p);

}  // namespace parafin
