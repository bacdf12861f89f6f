#pragma once

#include <vector>

#include "parafin/liealg.hpp"
#include "parafin/realforms.hpp"

namespace parafin {

/// Tangent picture at the identity coset of the quotient by a normalizer
/// subalgebra: T = ambient / normalizer as a complex space, carried by an
/// explicit section, together with the image of a real form inside T and the
/// action of multiplication by i on the rational realification of T.
///
/// All of it is exact linear algebra: T gets Q(i) coordinates along the
/// section, the real image lives in Q^{2k} (real and imaginary part
/// interleaved per section coordinate), and the complex structure is a
/// rational 2k x 2k matrix squaring to -Id.
class TangentModel {
 public:
  /// Build the quotient model.  Requires a complex ambient, the real form
  /// living in that same ambient, and the real span complexifying onto the
  /// whole ambient; violations raise PreconditionError.
  TangentModel(MatrixLieSubalgebra normalizer, RealSubalgebra realform);

  const MatrixLieSubalgebra& normalizer() const { return normalizer_; }
  const RealSubalgebra& real_form() const { return realform_; }

  /// dim_C T = dim ambient - dim normalizer.
  int complex_dim() const { return static_cast<int>(section_.size()); }
  /// Ambient matrices whose classes form a C-basis of T.
  const std::vector<MatrixD>& section() const { return section_; }

  /// Q(i) coordinates (k x 1) of the class of x against the section.
  /// AlgebraError if x lies outside the ambient algebra.
  MatrixD coordinates(const MatrixD& x) const;
  /// Rational coordinates (2k x 1) of the class of x, re/im interleaved.
  MatrixD real_coordinates(const MatrixD& x) const;

  /// Image of the real form's basis in Q^{2k}.
  const Subspace& real_image() const { return real_image_; }
  /// Multiplication by i on Q^{2k}.
  const MatrixD& complex_action() const { return j_action_; }

  /// dim_Q of (real form) ∩ (normalizer), computed on the matrix spans --
  /// independent of the quotient coordinates.
  int real_intersection_dim() const { return real_intersection_dim_; }

 private:
  MatrixLieSubalgebra normalizer_;
  RealSubalgebra realform_;
  std::vector<MatrixD> section_;
  MatrixD solver_;  // [section | normalizer basis], vectorised column-wise
  Subspace real_image_;
  MatrixD j_action_;
  int real_intersection_dim_ = 0;
};

/// The quotient model at ptilde for the given real form.
TangentModel tangent_model(const MatrixLieSubalgebra& ptilde, const RealSubalgebra& realform);

/// Whether the real image is totally real: J(T_R) ∩ T_R = 0.  Decided twice,
/// by the J-intersection in Q^{2k} and by the equivalent dimension equality
/// dim_Q(realform ∩ normalizer) = dim_C(normalizer); the two computations
/// disagreeing is an InternalConsistencyError, never a return value.
bool is_totally_real(const TangentModel& m);

/// Outcome of the two-condition characterization at a parabolic subalgebra:
/// (i) the quotient at its normalizer is totally real for the given real
/// form, and (ii) the trace conditions carving the subalgebra out of its
/// normalizer are stable under the conjugation.  At finite rank parabolic
/// subalgebras are self-normalizing, so (ii) holds vacuously.
struct CharacterizationReport {
  bool verdict = false;
  bool totally_real = false;
  bool tau_stable_traces = true;

  int ambient_dim = 0;
  int normalizer_dim = 0;
  int tangent_dim = 0;            // dim_C T
  int tangent_real_dim = 0;       // dim_R of the real image
  int real_intersection_dim = 0;  // dim_Q(realform ∩ normalizer)

  /// The stabilizer-side answer for realform ∩ p, computed independently;
  /// its verdict is asserted equal to `verdict` on every call.
  RealParabolicReport real_report;
};

/// Decide whether realform ∩ p is a real parabolic by the tangent-space
/// criterion.  PreconditionError unless p passes is_parabolic.  The verdict
/// is cross-checked against is_real_parabolic(realform ∩ p); disagreement is
/// an InternalConsistencyError.
CharacterizationReport characterize(const MatrixLieSubalgebra& p, const RealSubalgebra& realform);

}  // namespace parafin
