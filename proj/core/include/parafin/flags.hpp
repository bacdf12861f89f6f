#pragma once

#include <vector>

#include "parafin/forms.hpp"
#include "parafin/matspan.hpp"

namespace parafin {

/// Chain of subspaces of D^n ordered by inclusion, with the sentinels 0 and
/// D^n always stored as first and last member.  Construction sorts by
/// dimension, removes duplicates, and rejects incomparable members.
class GeneralizedFlag {
 public:
  GeneralizedFlag() : ring_(Ring::Rat), ambient_(0) {}

  /// Validating factory; sentinels may be included or omitted in `members`.
  static GeneralizedFlag from_members(Ring r, int ambient, std::vector<Subspace> members);
  static GeneralizedFlag trivial(Ring r, int ambient);

  Ring ring() const { return ring_; }
  int ambient_dim() const { return ambient_; }

  /// All members including the sentinels, dims strictly increasing.
  const std::vector<Subspace>& members() const { return members_; }
  /// Members excluding 0 and the full space.
  std::vector<Subspace> proper_members() const;
  int length() const { return static_cast<int>(members_.size()); }

  /// Consecutive pairs (F', F'') walking the chain bottom-up.
  std::vector<std::pair<Subspace, Subspace>> immediate_pairs() const;

  bool has_member(const Subspace& s) const;
  bool operator==(const GeneralizedFlag& o) const;
  bool operator!=(const GeneralizedFlag& o) const { return !(*this == o); }

  /// Smallest member containing v (always exists: the top sentinel).
  const Subspace& smallest_containing(const MatrixD& v) const;

  GeneralizedFlag promote(Ring target) const;

 private:
  Ring ring_;
  int ambient_;
  std::vector<Subspace> members_;
};

/// Every member's closure under the structure lands back in the flag,
/// sitting immediately above or at the member itself.
bool is_semiclosed(const GeneralizedFlag& f, const SesquiStructure& s);

/// Flags in the two paired spaces together with the pairing itself.
struct TautCouple {
  GeneralizedFlag in_v;
  GeneralizedFlag in_w;
  SesquiStructure pairing;
};

/// Stabilizer of the flag inside the full matrix algebra of its ambient,
/// as a coefficient-field span (Q(i) for Q(i)-flags, Q otherwise).
MatSpan gl_stabilizer(const GeneralizedFlag& f);

/// Couple is taut: the pairing-perp of every member of either flag is
/// carried into itself by the full-matrix-algebra stabilizer of the OTHER
/// flag, acting plainly on its own space.
bool is_taut_couple(const TautCouple& c);
bool is_taut_couple(const GeneralizedFlag& in_v, const GeneralizedFlag& in_w,
                    const SesquiStructure& pairing);

/// One-space analogue for a form on V: the flag's own gl-stabilizer must
/// preserve the form-perp of every member.
bool is_self_taut(const GeneralizedFlag& f, const SesquiStructure& form);

}  // namespace parafin
