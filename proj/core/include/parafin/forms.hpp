#pragma once

#include <string>

#include "parafin/subspace.hpp"

namespace parafin {

enum class SesquiKind : std::uint8_t { Pairing, SymBilinear, AltBilinear, Hermitian, SkewHermitian };

const char* sesqui_kind_name(SesquiKind k);
SesquiKind sesqui_kind_from_name(const std::string& name);

enum class IsotropyClass : std::uint8_t { Isotropic, Coisotropic, Both, Neither };

const char* isotropy_class_name(IsotropyClass c);

/// Nondegenerate sesquilinear structure <v, w> = sigma(v)^T G w, with sigma
/// either the identity or entrywise conjugation applied to the FIRST slot.
/// Conjugating the first slot keeps every orthogonality condition right-linear
/// in the free vector, so perps over H(Q) stay honest right submodules.
///
/// A Pairing couples two spaces V and W of the same dimension; the other four
/// kinds are forms on a single space.  Kind symmetry is enforced on build:
/// G^T = G / -G for the bilinear kinds, G* = G / -G for the hermitian kinds.
class SesquiStructure {
 public:
  /// V x W pairing.  Defaults: identity gram; conjugation iff ring is H(Q).
  static SesquiStructure pairing(Ring r, int dim);
  static SesquiStructure pairing(const MatrixD& gram, bool conjugated);
  static SesquiStructure sym_bilinear(const MatrixD& gram);
  static SesquiStructure alt_bilinear(const MatrixD& gram);
  static SesquiStructure hermitian(const MatrixD& gram);
  static SesquiStructure skew_hermitian(const MatrixD& gram);
  static SesquiStructure make(SesquiKind kind, const MatrixD& gram, bool conjugated);

  SesquiKind kind() const { return kind_; }
  Ring ring() const { return gram_.ring(); }
  int dim() const { return gram_.rows(); }
  const MatrixD& gram() const { return gram_; }
  bool conjugated() const { return conjugated_; }
  bool couples_two_spaces() const { return kind_ == SesquiKind::Pairing; }

  Scalar eval(const MatrixD& v, const MatrixD& w) const;

  /// For a form on V: the perp within V.  For a pairing: perp of a V-side
  /// subspace, living in W.
  Subspace perp(const Subspace& s) const;
  /// Pairing only: perp of a W-side subspace, living in V.
  Subspace perp_w(const Subspace& t) const;
  /// perp of perp, landing back on the side of s.
  Subspace closure(const Subspace& s) const;
  Subspace closure_w(const Subspace& t) const;

  IsotropyClass isotropy_class(const Subspace& s) const;
  bool is_isotropic(const Subspace& s) const;
  bool is_coisotropic(const Subspace& s) const;

  /// sigma applied entrywise: conj or identity.
  MatrixD sigma(const MatrixD& m) const { return conjugated_ ? m.conj() : m; }

  /// Induced action on the partner space: w-side matrix of the operator dual
  /// to x, i.e. the unique rho(x) with <x v, w> + <v, rho(x) w> = 0.
  MatrixD dual_action(const MatrixD& x) const;

 private:
  SesquiStructure(SesquiKind k, MatrixD gram, bool conjugated);

  SesquiKind kind_;
  MatrixD gram_;
  bool conjugated_;
};

/// A maximal isotropic subspace of the whole space, read off the gram matrix
/// by coordinate pairing.  Supported gram shapes: any alternating form, and
/// monomial (one nonzero entry per row and column) symmetric or hermitian
/// grams.  Diagonal entries that cannot be paired off within the entry ring
/// (definite leftovers) simply do not contribute.  Throws FormError when the
/// gram is not monomial.
Subspace maximal_isotropic(const SesquiStructure& form);

/// Extend an isotropic subspace to a maximal one: iso + (M ∩ perp(iso)) is
/// again maximal isotropic for any maximal isotropic M, and contains iso.
/// Throws FormError if `iso` is not isotropic.
Subspace complete_isotropic(const SesquiStructure& form, const Subspace& iso);

/// The isotropic lines of the restriction of the form to span{u, v}, a binary
/// quadric.  Returns 0, 1, or 2 spanning vectors, one per line.  Lines that
/// only exist over a ring extension are not reported.  Requires u, v
/// independent.
std::vector<MatrixD> isotropic_lines_in_plane(const SesquiStructure& form,
                                              const MatrixD& u,
                                              const MatrixD& v);

}  // namespace parafin
