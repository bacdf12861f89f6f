#include "parafin/forms.hpp"

#include <optional>

#include "parafin/errors.hpp"

namespace parafin {

const char* sesqui_kind_name(SesquiKind k) {
  switch (k) {
    case SesquiKind::Pairing: return "pairing";
    case SesquiKind::SymBilinear: return "symmetric";
    case SesquiKind::AltBilinear: return "alternating";
    case SesquiKind::Hermitian: return "hermitian";
    case SesquiKind::SkewHermitian: return "skew-hermitian";
  }
  return "?";
}

SesquiKind sesqui_kind_from_name(const std::string& name) {
  for (SesquiKind k : {SesquiKind::Pairing, SesquiKind::SymBilinear, SesquiKind::AltBilinear,
                       SesquiKind::Hermitian, SesquiKind::SkewHermitian})
    if (name == sesqui_kind_name(k)) return k;
  throw ParseError("unknown form kind: " + name);
}

const char* isotropy_class_name(IsotropyClass c) {
  switch (c) {
    case IsotropyClass::Isotropic: return "isotropic";
    case IsotropyClass::Coisotropic: return "coisotropic";
    case IsotropyClass::Both: return "both";
    case IsotropyClass::Neither: return "neither";
  }
  return "?";
}

SesquiStructure::SesquiStructure(SesquiKind k, MatrixD gram, bool conjugated)
    : kind_(k), gram_(std::move(gram)), conjugated_(conjugated) {
  if (gram_.rows() != gram_.cols()) throw FormError("gram matrix must be square");
  if (rank(gram_) != gram_.rows()) throw FormError("degenerate gram matrix");
  switch (kind_) {
    case SesquiKind::Pairing:
      break;
    case SesquiKind::SymBilinear:
      if (conjugated_) throw FormError("bilinear kind with conjugation");
      if (gram_.ring() == Ring::Quat) throw FormError("bilinear kind over H(Q)");
      if (gram_.transpose() != gram_) throw FormError("gram not symmetric");
      break;
    case SesquiKind::AltBilinear:
      if (conjugated_) throw FormError("bilinear kind with conjugation");
      if (gram_.ring() == Ring::Quat) throw FormError("bilinear kind over H(Q)");
      if (gram_.transpose() != -gram_) throw FormError("gram not skew-symmetric");
      break;
    case SesquiKind::Hermitian:
      if (!conjugated_) throw FormError("hermitian kind without conjugation");
      if (gram_.ring() == Ring::Rat) throw FormError("hermitian kind over Q; use symmetric");
      if (gram_.conj_transpose() != gram_) throw FormError("gram not hermitian");
      break;
    case SesquiKind::SkewHermitian:
      if (!conjugated_) throw FormError("skew-hermitian kind without conjugation");
      if (gram_.ring() == Ring::Rat) throw FormError("skew-hermitian kind over Q; use alternating");
      if (gram_.conj_transpose() != -gram_) throw FormError("gram not skew-hermitian");
      break;
  }
}

SesquiStructure SesquiStructure::pairing(Ring r, int dim) {
  return SesquiStructure(SesquiKind::Pairing, MatrixD::identity(r, dim), r == Ring::Quat);
}

SesquiStructure SesquiStructure::pairing(const MatrixD& gram, bool conjugated) {
  return SesquiStructure(SesquiKind::Pairing, gram, conjugated);
}

SesquiStructure SesquiStructure::sym_bilinear(const MatrixD& gram) {
  return SesquiStructure(SesquiKind::SymBilinear, gram, false);
}

SesquiStructure SesquiStructure::alt_bilinear(const MatrixD& gram) {
  return SesquiStructure(SesquiKind::AltBilinear, gram, false);
}

SesquiStructure SesquiStructure::hermitian(const MatrixD& gram) {
  return SesquiStructure(SesquiKind::Hermitian, gram, true);
}

SesquiStructure SesquiStructure::skew_hermitian(const MatrixD& gram) {
  return SesquiStructure(SesquiKind::SkewHermitian, gram, true);
}

SesquiStructure SesquiStructure::make(SesquiKind kind, const MatrixD& gram, bool conjugated) {
  return SesquiStructure(kind, gram, conjugated);
}

Scalar SesquiStructure::eval(const MatrixD& v, const MatrixD& w) const {
  if (v.rows() != dim() || w.rows() != dim() || v.cols() != 1 || w.cols() != 1)
    throw DimensionError("form argument shape mismatch");
  return (sigma(v).transpose() * (gram_ * w)).at(0, 0);
}

Subspace SesquiStructure::perp(const Subspace& s) const {
  if (s.ambient_dim() != dim()) throw DimensionError("perp ambient mismatch");
  if (s.ring() != ring()) throw TagMismatchError("perp ring mismatch");
  // <b, w> = 0 for basis b  <=>  (sigma B)^T G w = 0: one right-kernel.
  return right_kernel(sigma(s.basis()).transpose() * gram_);
}

Subspace SesquiStructure::perp_w(const Subspace& t) const {
  if (kind_ != SesquiKind::Pairing) throw FormError("perp_w needs a two-space pairing");
  if (t.ambient_dim() != dim()) throw DimensionError("perp ambient mismatch");
  if (t.ring() != ring()) throw TagMismatchError("perp ring mismatch");
  // <v, c> = 0 for basis c  <=>  sigma(G c)^T v = 0 after moving sigma across.
  return right_kernel(sigma(gram_ * t.basis()).transpose());
}

Subspace SesquiStructure::closure(const Subspace& s) const {
  return kind_ == SesquiKind::Pairing ? perp_w(perp(s)) : perp(perp(s));
}

Subspace SesquiStructure::closure_w(const Subspace& t) const {
  if (kind_ != SesquiKind::Pairing) throw FormError("closure_w needs a two-space pairing");
  return perp(perp_w(t));
}

IsotropyClass SesquiStructure::isotropy_class(const Subspace& s) const {
  if (kind_ == SesquiKind::Pairing) throw FormError("isotropy needs a form on one space");
  Subspace p = perp(s);
  bool iso = p.contains(s);
  bool coiso = s.contains(p);
  if (iso && coiso) return IsotropyClass::Both;
  if (iso) return IsotropyClass::Isotropic;
  if (coiso) return IsotropyClass::Coisotropic;
  return IsotropyClass::Neither;
}

bool SesquiStructure::is_isotropic(const Subspace& s) const {
  IsotropyClass c = isotropy_class(s);
  return c == IsotropyClass::Isotropic || c == IsotropyClass::Both;
}

bool SesquiStructure::is_coisotropic(const Subspace& s) const {
  IsotropyClass c = isotropy_class(s);
  return c == IsotropyClass::Coisotropic || c == IsotropyClass::Both;
}

MatrixD SesquiStructure::dual_action(const MatrixD& x) const {
  if (x.rows() != dim() || x.cols() != dim()) throw DimensionError("dual_action shape mismatch");
  if (x.ring() != ring()) throw TagMismatchError("dual_action ring mismatch");
  // <x v, w> + <v, rho w> = 0 for all v, w  <=>  rho = -G^{-1} sigma(x)^T G.
  return -solve(gram_, sigma(x).transpose() * gram_);
}

namespace {

/// Square root of a rational, when it is a perfect square in Q.
std::optional<mpq_class> rat_sqrt(const mpq_class& q) {
  if (q < 0) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_num().get_mpz_t())) return std::nullopt;
  if (!mpz_perfect_square_p(q.get_den().get_mpz_t())) return std::nullopt;
  mpz_class num, den;
  mpz_sqrt(num.get_mpz_t(), q.get_num().get_mpz_t());
  mpz_sqrt(den.get_mpz_t(), q.get_den().get_mpz_t());
  return mpq_class{num, den};
}

/// Square root of a scalar inside its own ring (Rat and Gauss only).
std::optional<Scalar> ring_sqrt(const Scalar& s) {
  if (s.ring() == Ring::Rat) {
    if (auto r = rat_sqrt(s.comp(0))) return Scalar::rat(*r);
    return std::nullopt;
  }
  if (s.ring() == Ring::Gauss) {
    const mpq_class x = s.comp(0), y = s.comp(1);
    if (y == 0) {
      if (auto r = rat_sqrt(x)) return Scalar::gauss(*r, 0);
      if (auto r = rat_sqrt(mpq_class(-x))) return Scalar::gauss(0, *r);
      return std::nullopt;
    }
    // (p + q i)^2 = x + y i forces p^2 = (x + N)/2 with N = |x + y i|.
    auto n = rat_sqrt(x * x + y * y);
    if (!n) return std::nullopt;
    auto p = rat_sqrt((x + *n) / 2);
    if (!p || *p == 0) return std::nullopt;
    return Scalar::gauss(*p, y / (2 * *p));
  }
  return std::nullopt;
}

}  // namespace

Subspace maximal_isotropic(const SesquiStructure& form) {
  if (form.couples_two_spaces()) throw FormError("isotropic subspaces need a form on one space");
  const int n = form.dim();
  const Ring r = form.ring();
  const MatrixD& g = form.gram();

  if (form.kind() == SesquiKind::AltBilinear) {
    // Every vector is isotropic; grow greedily inside the running perp.
    Subspace iso = Subspace::zero(r, n);
    for (bool grew = true; grew;) {
      grew = false;
      Subspace p = form.perp(iso);
      for (int j = 0; j < p.dim(); ++j) {
        MatrixD v = p.basis().column(j);
        if (!iso.contains(v)) {
          iso = iso.sum(Subspace::span(v));
          grew = true;
          break;
        }
      }
    }
    return iso;
  }

  // Monomial grams: each coordinate couples exactly one coordinate.
  std::vector<int> partner(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (g.at(i, j).is_zero()) continue;
      if (partner[static_cast<std::size_t>(i)] >= 0)
        throw FormError("isotropic completion implemented for monomial grams only");
      partner[static_cast<std::size_t>(i)] = j;
    }
  }

  std::vector<MatrixD> gens;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::vector<int> fixed;
  for (int i = 0; i < n; ++i) {
    if (used[static_cast<std::size_t>(i)]) continue;
    int j = partner[static_cast<std::size_t>(i)];
    if (j == i) {
      fixed.push_back(i);
    } else {
      // Hyperbolic coordinate pair: keep e_i, retire its partner.
      gens.push_back(MatrixD::basis_vector(r, n, i));
      used[static_cast<std::size_t>(j)] = 1;
    }
    used[static_cast<std::size_t>(i)] = 1;
  }

  // Pair leftover diagonal coordinates a, b via e_a + e_b c, which is
  // isotropic iff sigma(c) g_bb c = -g_aa.
  std::vector<char> taken(fixed.size(), 0);
  for (std::size_t s = 0; s < fixed.size(); ++s) {
    if (taken[s]) continue;
    for (std::size_t t = s + 1; t < fixed.size(); ++t) {
      if (taken[t]) continue;
      const int a = fixed[s], b = fixed[t];
      const Scalar target = -(g.at(a, a) / g.at(b, b));
      std::optional<Scalar> c;
      if (form.conjugated()) {
        // |c|^2 = target: needs a nonnegative rational square.
        if (target.is_rational_value() && target.comp(0) >= 0)
          if (auto rc = rat_sqrt(target.comp(0))) c = Scalar::rat(*rc).promote(r);
      } else {
        c = ring_sqrt(target);
      }
      if (c) {
        gens.push_back(MatrixD::basis_vector(r, n, a) +
                       MatrixD::basis_vector(r, n, b).scale_right(*c));
        taken[s] = taken[t] = 1;
        break;
      }
    }
  }
  return Subspace::span(r, n, gens);
}

Subspace complete_isotropic(const SesquiStructure& form, const Subspace& iso) {
  if (!form.is_isotropic(iso)) throw FormError("completion requires an isotropic subspace");
  Subspace m = maximal_isotropic(form);
  Subspace result = iso.sum(m.intersect(form.perp(iso)));
  if (!form.is_isotropic(result))
    throw InternalConsistencyError("isotropic completion produced a non-isotropic subspace");
  return result;
}

std::vector<MatrixD> isotropic_lines_in_plane(const SesquiStructure& form, const MatrixD& u,
                                              const MatrixD& v) {
  if (form.couples_two_spaces() || form.conjugated())
    throw FormError("isotropic lines are computed for bilinear forms only");
  if (rank(u.hstack(v)) != 2) throw DimensionError("plane spanning vectors are dependent");

  const Scalar a = form.eval(u, u);
  const Scalar b = form.eval(u, v) + form.eval(v, u);
  const Scalar c = form.eval(v, v);
  if (a.is_zero() && b.is_zero() && c.is_zero())
    throw FormError("form vanishes on the plane; every line is isotropic");

  std::vector<MatrixD> lines;
  if (c.is_zero()) {
    lines.push_back(v);
    // Remaining root of a + b t = 0 when b is invertible.
    if (!b.is_zero()) lines.push_back(u + v.scale_right(-(a / b)));
    return lines;
  }
  const Scalar two = Scalar::int_in(form.ring(), 2);
  const Scalar disc = b * b - two * two * (a * c);
  if (auto root = ring_sqrt(disc)) {
    lines.push_back(u + v.scale_right((-b + *root) / (two * c)));
    if (!root->is_zero()) lines.push_back(u + v.scale_right((-b - *root) / (two * c)));
  }
  return lines;
}

}  // namespace parafin
