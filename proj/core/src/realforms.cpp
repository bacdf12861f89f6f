#include "parafin/realforms.hpp"

#include <cctype>
#include <sstream>
#include <utility>

#include "parafin/errors.hpp"

namespace parafin {

namespace {

// ----- quaternionic coordinates -------------------------------------------
//
// A quaternionic column vector is stored interleaved over Q(i): writing each
// entry as q = a + j c with complex a, c, entry l occupies complex
// coordinates (2l, 2l+1) = (a, c).  Right multiplication by a complex scalar
// is then coordinatewise, and right multiplication by j acts as
// (a, c) -> (-conj(c), conj(a)), i.e. v -> A conj(v) with the block matrix
// built by j_block_matrix below.

Scalar quat_from_pair(const Scalar& a, const Scalar& c) {
  return Scalar::quat(a.comp(0), a.comp(1), c.comp(0), -c.comp(1));
}

std::pair<Scalar, Scalar> pair_from_quat(const Scalar& q) {
  return {Scalar::gauss(q.comp(0), q.comp(1)), Scalar::gauss(q.comp(2), -q.comp(3))};
}

MatrixD quat_col_to_complex(const MatrixD& q) {
  MatrixD v = MatrixD::zero(Ring::Gauss, 2 * q.rows(), 1);
  for (int l = 0; l < q.rows(); ++l) {
    auto [a, c] = pair_from_quat(q.at(l, 0));
    v.set(2 * l, 0, a);
    v.set(2 * l + 1, 0, c);
  }
  return v;
}

MatrixD complex_col_to_quat(const MatrixD& v) {
  MatrixD q = MatrixD::zero(Ring::Quat, v.rows() / 2, 1);
  for (int l = 0; l < q.rows(); ++l) q.set(l, 0, quat_from_pair(v.at(2 * l, 0), v.at(2 * l + 1, 0)));
  return q;
}

/// Matrix of right multiplication by j in interleaved coordinates:
/// blockdiag of [[0, -1], [1, 0]], applied after entrywise conjugation.
MatrixD j_block_matrix(int quat_dim) {
  MatrixD a = MatrixD::zero(Ring::Gauss, 2 * quat_dim, 2 * quat_dim);
  for (int l = 0; l < quat_dim; ++l) {
    a.set(2 * l, 2 * l + 1, Scalar::int_in(Ring::Gauss, -1));
    a.set(2 * l + 1, 2 * l, Scalar::one(Ring::Gauss));
  }
  return a;
}

// ----- grams ---------------------------------------------------------------

MatrixD signature_diag(Ring r, int p, int q) {
  MatrixD g = MatrixD::zero(r, p + q, p + q);
  for (int t = 0; t < p + q; ++t) g.set(t, t, Scalar::int_in(r, t < p ? 1 : -1));
  return g;
}

MatrixD antidiag_ones(Ring r, int n) {
  MatrixD g = MatrixD::zero(r, n, n);
  for (int t = 0; t < n; ++t) g.set(t, n - 1 - t, Scalar::one(r));
  return g;
}

/// Hermitian gram of the interleaved signature: each quaternionic coordinate
/// of sign eps contributes a diag(eps, eps) block.
MatrixD interleaved_signature(int p, int q) {
  MatrixD g = MatrixD::zero(Ring::Gauss, 2 * (p + q), 2 * (p + q));
  for (int l = 0; l < p + q; ++l) {
    const Scalar eps = Scalar::int_in(Ring::Gauss, l < p ? 1 : -1);
    g.set(2 * l, 2 * l, eps);
    g.set(2 * l + 1, 2 * l + 1, eps);
  }
  return g;
}

/// Alternating gram of the j-part of a quaternionic hermitian form: each
/// quaternionic coordinate of sign eps contributes eps * [[0, 1], [-1, 0]].
MatrixD interleaved_alternating(int p, int q) {
  MatrixD g = MatrixD::zero(Ring::Gauss, 2 * (p + q), 2 * (p + q));
  for (int l = 0; l < p + q; ++l) {
    const long eps = l < p ? 1 : -1;
    g.set(2 * l, 2 * l + 1, Scalar::int_in(Ring::Gauss, eps));
    g.set(2 * l + 1, 2 * l, Scalar::int_in(Ring::Gauss, -eps));
  }
  return g;
}

/// Symmetric gram of the -ji-part of the skew-hermitian form sum conj(x) i y:
/// each quaternionic coordinate contributes [[0, 1], [1, 0]], which is split.
MatrixD interleaved_split_symmetric(int quat_dim) {
  MatrixD g = MatrixD::zero(Ring::Gauss, 2 * quat_dim, 2 * quat_dim);
  for (int l = 0; l < quat_dim; ++l) {
    g.set(2 * l, 2 * l + 1, Scalar::one(Ring::Gauss));
    g.set(2 * l + 1, 2 * l, Scalar::one(Ring::Gauss));
  }
  return g;
}

/// Alternating hermitian pattern diag(1, -1, 1, -1, ...): the hermitian part
/// of the skew-hermitian form, divided by i.
MatrixD interleaved_alternating_signs(int quat_dim) {
  MatrixD g = MatrixD::zero(Ring::Gauss, 2 * quat_dim, 2 * quat_dim);
  for (int t = 0; t < 2 * quat_dim; ++t)
    g.set(t, t, Scalar::int_in(Ring::Gauss, t % 2 == 0 ? 1 : -1));
  return g;
}

// ----- parsing -------------------------------------------------------------

int parse_count(const std::string& tok, const std::string& text) {
  if (tok.empty()) throw ParseError("missing number in real-form spec '" + text + "'");
  for (char ch : tok)
    if (!std::isdigit(static_cast<unsigned char>(ch)))
      throw ParseError("expected a number in real-form spec '" + text + "'");
  return std::stoi(tok);
}

MatSpan rational_respan(const MatSpan& s) {
  std::vector<MatrixD> gens;
  gens.reserve(2 * s.basis().size());
  for (const MatrixD& b : s.basis()) {
    gens.push_back(b);
    gens.push_back(b.scale_right(Scalar::i(Ring::Gauss)));
  }
  return MatSpan::span(Ring::Gauss, Ring::Rat, s.rows(), s.cols(), gens);
}

bool is_identity(const MatrixD& m) {
  return m.rows() == m.cols() && m == MatrixD::identity(m.ring(), m.rows());
}

}  // namespace

const char* real_family_name(RealFamily f) {
  switch (f) {
    case RealFamily::SlR: return "sl(n,R)";
    case RealFamily::SlH: return "sl(n,H)";
    case RealFamily::Su: return "su(p,q)";
    case RealFamily::SoPQ: return "so(p,q)";
    case RealFamily::SoStar: return "so*(2n)";
    case RealFamily::SpR: return "sp(n,R)";
    case RealFamily::SpPQ: return "sp(p,q)";
    case RealFamily::GlR: return "gl(n,R)";
    case RealFamily::GlH: return "gl(n,H)";
    case RealFamily::U: return "u(p,q)";
  }
  return "?";
}

RealFormSpec RealFormSpec::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);

  const auto open = s.find('(');
  if (open == std::string::npos || s.empty() || s.back() != ')')
    throw ParseError("real-form spec '" + text + "' is not name(args)");
  const std::string name = s.substr(0, open);
  const std::string args = s.substr(open + 1, s.size() - open - 2);

  std::vector<std::string> toks;
  std::string tok;
  std::istringstream in(args);
  while (std::getline(in, tok, ',')) toks.push_back(tok);

  RealFormSpec spec;
  if (name == "so*") {
    if (toks.size() != 1) throw ParseError("so* takes one argument: '" + text + "'");
    const int size = parse_count(toks[0], text);
    if (size < 2 || size % 2 != 0)
      throw ParseError("so* takes a positive even size: '" + text + "'");
    spec.family = RealFamily::SoStar;
    spec.n = size / 2;
    return spec;
  }
  if (name == "sl" || name == "gl" || name == "sp") {
    if (toks.size() != 2) throw ParseError(name + " takes two arguments: '" + text + "'");
    if (toks[1] == "R" || toks[1] == "H") {
      if (name == "sp" && toks[1] == "H") throw ParseError("sp over H is written sp(p,q)");
      spec.family = name == "sl" ? (toks[1] == "R" ? RealFamily::SlR : RealFamily::SlH)
                    : name == "gl" ? (toks[1] == "R" ? RealFamily::GlR : RealFamily::GlH)
                                   : RealFamily::SpR;
      spec.n = parse_count(toks[0], text);
      if (spec.n < 1) throw ParseError("rank must be positive: '" + text + "'");
      return spec;
    }
    if (name != "sp") throw ParseError(name + " takes R or H as its second argument");
    spec.family = RealFamily::SpPQ;
  } else if (name == "su") {
    spec.family = RealFamily::Su;
  } else if (name == "u") {
    spec.family = RealFamily::U;
  } else if (name == "so") {
    spec.family = RealFamily::SoPQ;
  } else {
    throw ParseError("unknown real family '" + name + "'");
  }

  if (toks.size() != 2) throw ParseError(name + " takes a signature (p,q): '" + text + "'");
  spec.p = parse_count(toks[0], text);
  spec.q = parse_count(toks[1], text);
  if (spec.p + spec.q < 1) throw ParseError("signature must be nonzero: '" + text + "'");
  return spec;
}

std::string RealFormSpec::str() const {
  std::ostringstream out;
  switch (family) {
    case RealFamily::SlR: out << "sl(" << n << ",R)"; break;
    case RealFamily::SlH: out << "sl(" << n << ",H)"; break;
    case RealFamily::GlR: out << "gl(" << n << ",R)"; break;
    case RealFamily::GlH: out << "gl(" << n << ",H)"; break;
    case RealFamily::SpR: out << "sp(" << n << ",R)"; break;
    case RealFamily::SoStar: out << "so*(" << 2 * n << ")"; break;
    case RealFamily::Su: out << "su(" << p << "," << q << ")"; break;
    case RealFamily::U: out << "u(" << p << "," << q << ")"; break;
    case RealFamily::SoPQ: out << "so(" << p << "," << q << ")"; break;
    case RealFamily::SpPQ: out << "sp(" << p << "," << q << ")"; break;
  }
  return out.str();
}

Ring RealFormSpec::flag_ring() const {
  switch (family) {
    case RealFamily::Su:
    case RealFamily::U: return Ring::Gauss;
    case RealFamily::SlH:
    case RealFamily::GlH:
    case RealFamily::SpPQ:
    case RealFamily::SoStar: return Ring::Quat;
    default: return Ring::Rat;
  }
}

int RealFormSpec::complex_dim() const {
  switch (family) {
    case RealFamily::SlR:
    case RealFamily::GlR: return n;
    case RealFamily::SlH:
    case RealFamily::GlH:
    case RealFamily::SoStar: return 2 * n;
    case RealFamily::SpR: return 2 * n;
    case RealFamily::Su:
    case RealFamily::U:
    case RealFamily::SoPQ: return p + q;
    case RealFamily::SpPQ: return 2 * (p + q);
  }
  return 0;
}

// ----- Conjugation ----------------------------------------------------------

Conjugation::Conjugation(ConjKind k, MatrixD a, bool star, bool plus)
    : kind_(k), a_(std::move(a)), star_(star), plus_(plus) {}

Conjugation Conjugation::tau_space(MatrixD a) {
  if (a.ring() != Ring::Gauss || a.rows() != a.cols())
    throw FormError("space conjugation needs a square complex matrix");
  const MatrixD prod = a * a.conj();
  const MatrixD id = MatrixD::identity(Ring::Gauss, a.rows());
  bool plus;
  if (prod == id)
    plus = true;
  else if (prod == -id)
    plus = false;
  else
    throw FormError("space conjugation must square to plus or minus the identity");
  return Conjugation(ConjKind::Tau, std::move(a), false, plus);
}

Conjugation Conjugation::tau_star(MatrixD h) {
  if (h.ring() != Ring::Gauss || h.rows() != h.cols())
    throw FormError("star conjugation needs a square complex matrix");
  if (h.conj_transpose() != h) throw FormError("star conjugation needs a hermitian matrix");
  inverse(h);  // nondegeneracy
  return Conjugation(ConjKind::Tau, std::move(h), true, true);
}

Conjugation Conjugation::j_structure(MatrixD a) {
  if (a.ring() != Ring::Gauss || a.rows() != a.cols())
    throw FormError("quaternionic structure needs a square complex matrix");
  if (a * a.conj() != -MatrixD::identity(Ring::Gauss, a.rows()))
    throw FormError("quaternionic structure must square to minus the identity");
  return Conjugation(ConjKind::JStruct, std::move(a), false, false);
}

MatrixD Conjugation::apply_alg(const MatrixD& xi) const {
  if (star_) return -(a_ * xi.conj_transpose() * inverse(a_));
  return a_ * xi.conj() * inverse(a_);
}

MatrixD Conjugation::apply_vec(const MatrixD& v) const {
  if (star_) throw PreconditionError("star conjugations act on the algebra only");
  return a_ * v.conj();
}

Subspace Conjugation::map_subspace(const Subspace& s) const {
  if (star_) throw PreconditionError("star conjugations act on the algebra only");
  if (s.ambient_dim() != a_.rows()) throw DimensionError("subspace does not match the structure");
  if (s.dim() == 0) return s;
  return Subspace::span(a_ * s.basis().conj());
}

bool Conjugation::stabilizes(const Subspace& s) const { return map_subspace(s) == s; }

// ----- RealSubalgebra -------------------------------------------------------

RealSubalgebra::RealSubalgebra(AmbientPtr ambient, MatSpan span, RealFormSpec spec)
    : ambient_(std::move(ambient)), span_(std::move(span)), spec_(spec) {
  if (!ambient_) throw AlgebraError("real subalgebra needs an ambient");
  if (ambient_->ring() != Ring::Gauss)
    throw AlgebraError("real subalgebras live inside complex ambients");
  if (span_.entry_ring() != Ring::Gauss || span_.coeff_field() != Ring::Rat)
    throw AlgebraError("real subalgebras are rational spans of complex matrices");
  if (span_.rows() != ambient_->n() || span_.cols() != ambient_->n())
    throw DimensionError("span shape does not match the ambient");
  for (const MatrixD& b : span_.basis())
    if (!ambient_->contains(b)) throw AlgebraError("real span escapes the ambient algebra");
}

bool RealSubalgebra::is_bracket_closed() const {
  const auto& b = span_.basis();
  for (std::size_t s = 0; s < b.size(); ++s)
    for (std::size_t t = s + 1; t < b.size(); ++t)
      if (!span_.contains(bracket(b[s], b[t]))) return false;
  return true;
}

// ----- construction of the ten families -------------------------------------

RealFormData build_real_form(const RealFormSpec& spec) {
  if (spec.complex_dim() > 8)
    throw UnsupportedShapeError("real form '" + spec.str() +
                                "' exceeds the supported defining-space size");

  AmbientPtr ambient;
  std::optional<Conjugation> tau;
  std::optional<Conjugation> jstruct;
  std::vector<SesquiStructure> forms;

  switch (spec.family) {
    case RealFamily::SlR:
      ambient = AmbientAlgebra::sl(Ring::Gauss, spec.n);
      break;
    case RealFamily::GlR:
      ambient = AmbientAlgebra::gl(Ring::Gauss, spec.n);
      break;
    case RealFamily::SpR:
      ambient = AmbientAlgebra::sp(Ring::Gauss, spec.n);
      break;
    case RealFamily::SoPQ: {
      const MatrixD gram = spec.p == spec.q ? antidiag_ones(Ring::Gauss, 2 * spec.p)
                                            : signature_diag(Ring::Gauss, spec.p, spec.q);
      ambient = AmbientAlgebra::so(Ring::Gauss, spec.p + spec.q, gram);
      break;
    }
    case RealFamily::Su:
    case RealFamily::U: {
      const MatrixD h = signature_diag(Ring::Gauss, spec.p, spec.q);
      ambient = spec.family == RealFamily::Su ? AmbientAlgebra::sl(Ring::Gauss, spec.p + spec.q)
                                              : AmbientAlgebra::gl(Ring::Gauss, spec.p + spec.q);
      tau = Conjugation::tau_star(h);
      forms.push_back(SesquiStructure::hermitian(h));
      break;
    }
    case RealFamily::SlH:
    case RealFamily::GlH: {
      ambient = spec.family == RealFamily::SlH ? AmbientAlgebra::sl(Ring::Gauss, 2 * spec.n)
                                               : AmbientAlgebra::gl(Ring::Gauss, 2 * spec.n);
      jstruct = Conjugation::j_structure(j_block_matrix(spec.n));
      break;
    }
    case RealFamily::SpPQ: {
      const int m = spec.p + spec.q;
      ambient = AmbientAlgebra::sp(Ring::Gauss, m, interleaved_alternating(spec.p, spec.q));
      jstruct = Conjugation::j_structure(j_block_matrix(m));
      forms.push_back(SesquiStructure::hermitian(signature_diag(Ring::Quat, spec.p, spec.q)));
      forms.push_back(SesquiStructure::hermitian(interleaved_signature(spec.p, spec.q)));
      break;
    }
    case RealFamily::SoStar: {
      ambient = AmbientAlgebra::so(Ring::Gauss, 2 * spec.n, interleaved_split_symmetric(spec.n));
      jstruct = Conjugation::j_structure(j_block_matrix(spec.n));
      forms.push_back(SesquiStructure::skew_hermitian(
          MatrixD::identity(Ring::Quat, spec.n).scale_right(Scalar::i(Ring::Quat))));
      forms.push_back(SesquiStructure::hermitian(interleaved_alternating_signs(spec.n)));
      break;
    }
  }

  if (!tau) {
    // Space conjugations: entrywise for the split families, twisted by the
    // quaternionic structure's matrix otherwise (same algebra action).
    tau = jstruct ? Conjugation::tau_space(jstruct->matrix())
                  : Conjugation::tau_space(MatrixD::identity(Ring::Gauss, ambient->n()));
  }

  for (const MatrixD& b : ambient->span().basis())
    if (!ambient->contains(tau->apply_alg(b)))
      throw InternalConsistencyError("conjugation does not preserve the ambient algebra");

  std::vector<LinearCondition> conds;
  const Conjugation t = *tau;
  conds.push_back(
      [t](const MatrixD& x) { return expand_to_field(x - t.apply_alg(x), Ring::Rat); });
  MatSpan fixed = cut(rational_respan(ambient->span()), conds);

  if (fixed.dim() != ambient->dim())
    throw InternalConsistencyError("real points do not match the complex dimension");

  RealSubalgebra algebra(ambient, std::move(fixed), spec);
  if (!algebra.is_bracket_closed())
    throw InternalConsistencyError("real points are not bracket closed");

  // The complex-side hermitian gram (last entry when present) must be
  // annihilated by the real form: sigma(xi)^T G + G xi = 0.
  if (!forms.empty() && forms.back().ring() == Ring::Gauss) {
    const SesquiStructure& aux = forms.back();
    for (const MatrixD& b : algebra.basis())
      if (!(aux.sigma(b).transpose() * aux.gram() + aux.gram() * b).is_zero())
        throw InternalConsistencyError("real form does not annihilate its hermitian gram");
  }

  return RealFormData{std::move(algebra), *tau, jstruct, std::move(forms)};
}

MatrixLieSubalgebra complexify(const RealSubalgebra& s) {
  MatSpan span = MatSpan::span(Ring::Gauss, Ring::Gauss, s.ambient().n(), s.ambient().n(),
                               s.basis());
  return MatrixLieSubalgebra(s.ambient_ptr(), std::move(span));
}

// ----- flags across the structures ------------------------------------------

GeneralizedFlag realify_flag(const GeneralizedFlag& f, const Conjugation& c) {
  if (f.ring() != Ring::Gauss) throw PreconditionError("realification expects a complex flag");
  if (!c.has_space_action()) throw PreconditionError("star conjugations do not act on flags");
  if (c.matrix().rows() != f.ambient_dim())
    throw DimensionError("flag does not match the structure's space");

  std::vector<Subspace> members;
  if (c.kind() == ConjKind::JStruct) {
    const int n = f.ambient_dim() / 2;
    for (const Subspace& m : f.proper_members()) {
      if (!c.stabilizes(m))
        throw StabilityError("flag member is not stable under the quaternionic structure");
      std::vector<MatrixD> cols;
      for (int t = 0; t < m.dim(); ++t) cols.push_back(complex_col_to_quat(m.basis().column(t)));
      Subspace qm = Subspace::span(Ring::Quat, n, cols);
      if (2 * qm.dim() != m.dim())
        throw InternalConsistencyError("quaternionic reinterpretation changed the dimension");
      members.push_back(std::move(qm));
    }
    return GeneralizedFlag::from_members(Ring::Quat, n, std::move(members));
  }

  if (!c.space_square_plus()) throw PreconditionError("the conjugation has no fixed vectors");
  if (!is_identity(c.matrix()))
    throw UnsupportedShapeError("realification is supported for the entrywise conjugation only");
  for (const Subspace& m : f.proper_members()) {
    if (!c.stabilizes(m)) throw StabilityError("flag member is not conjugation-stable");
    // Conjugation-stable spaces have conjugation-stable canonical bases, so
    // the basis entries are already rational.
    MatrixD real = MatrixD::zero(Ring::Rat, m.ambient_dim(), m.dim());
    for (int i = 0; i < m.ambient_dim(); ++i)
      for (int t = 0; t < m.dim(); ++t) {
        const Scalar& e = m.basis().at(i, t);
        if (!e.is_rational_value())
          throw InternalConsistencyError("stable member has a non-real canonical basis");
        real.set(i, t, Scalar::rat(e.comp(0)));
      }
    members.push_back(Subspace::span(real));
  }
  return GeneralizedFlag::from_members(Ring::Rat, f.ambient_dim(), std::move(members));
}

GeneralizedFlag complexify_flag(const GeneralizedFlag& f) {
  if (f.ring() == Ring::Gauss) return f;
  if (f.ring() == Ring::Rat) return f.promote(Ring::Gauss);

  std::vector<Subspace> members;
  for (const Subspace& m : f.proper_members()) {
    std::vector<MatrixD> cols;
    for (int t = 0; t < m.dim(); ++t) {
      const MatrixD q = m.basis().column(t);
      cols.push_back(quat_col_to_complex(q));
      cols.push_back(quat_col_to_complex(q.scale_right(Scalar::j())));
    }
    members.push_back(Subspace::span(Ring::Gauss, 2 * f.ambient_dim(), cols));
    if (members.back().dim() != 2 * m.dim())
      throw InternalConsistencyError("complexified member has the wrong dimension");
  }
  return GeneralizedFlag::from_members(Ring::Gauss, 2 * f.ambient_dim(), std::move(members));
}

RealSubalgebra real_stabilizer(const RealFormData& form, const GeneralizedFlag& f) {
  const RealFormSpec& spec = form.algebra.spec();
  if (f.ring() != spec.flag_ring())
    throw TagMismatchError("flag ring does not match the real family");

  const GeneralizedFlag fc = complexify_flag(f);
  if (fc.ambient_dim() != form.algebra.ambient().n())
    throw DimensionError("flag does not match the defining space");

  std::vector<LinearCondition> conds;
  for (const Subspace& m : fc.proper_members())
    for (int t = 0; t < m.dim(); ++t)
      conds.push_back(maps_into(Ring::Rat, m.basis().column(t), m));
  return RealSubalgebra(form.algebra.ambient_ptr(), cut(form.algebra.span(), conds), spec);
}

// ----- the real parabolicity test -------------------------------------------

namespace {

RealParabolicReport real_parabolic_impl(const RealSubalgebra& p, const RealFormData& data) {
  if (!data.algebra.span().contains(p.span()))
    throw AlgebraError("subalgebra does not lie in the chosen real form");

  RealParabolicReport rep;
  rep.complex_report = is_parabolic(complexify(p));
  if (!rep.complex_report.parabolic) {
    rep.failed_stage = "complex-parabolic";
    rep.detail = rep.complex_report.obstruction_detail;
    return rep;
  }

  const GeneralizedFlag& base = rep.complex_report.flags.front();
  const bool star = !data.tau.has_space_action();
  if (star) {
    if (!is_self_taut(base, data.forms.front())) {
      rep.failed_stage = "flag-stability";
      rep.detail = "recovered flag is not self-taut for the hermitian form";
      return rep;
    }
  } else {
    const Conjugation& c = data.jstruct ? *data.jstruct : data.tau;
    for (const Subspace& m : base.proper_members()) {
      if (!c.stabilizes(m)) {
        rep.failed_stage = "flag-stability";
        rep.detail = data.jstruct
                         ? "a flag member is not stable under the quaternionic structure"
                         : "a flag member is not conjugation-stable";
        return rep;
      }
    }
  }

  rep.real_flag = star ? base
                       : realify_flag(base, data.jstruct ? *data.jstruct : data.tau);
  const RealSubalgebra stab = real_stabilizer(data, *rep.real_flag);
  if (stab.span() != p.span()) {
    std::ostringstream why;
    why << "input has dimension " << p.dim() << " but the flag's real stabilizer has dimension "
        << stab.dim();
    rep.failed_stage = "stabilizer-match";
    rep.detail = why.str();
    return rep;
  }

  rep.parabolic = true;
  rep.trace_conditions_needed = 0;
  return rep;
}

}  // namespace

RealParabolicReport is_real_parabolic(const RealSubalgebra& p) {
  return real_parabolic_impl(p, build_real_form(p.spec()));
}

int real_flag_count(const RealSubalgebra& p) {
  const RealFormData data = build_real_form(p.spec());
  const RealParabolicReport rep = real_parabolic_impl(p, data);
  if (!rep.parabolic) throw PreconditionError("flag counting needs a real parabolic subalgebra");
  if (rep.complex_report.flags.size() != 3) return 1;

  const Subspace& m1 = *rep.complex_report.max_iso_first;
  const Subspace& m2 = *rep.complex_report.max_iso_second;
  if (p.spec().family == RealFamily::SoPQ) {
    const bool s1 = data.tau.stabilizes(m1);
    const bool s2 = data.tau.stabilizes(m2);
    if (s1 != s2)
      throw InternalConsistencyError("conjugation fixes exactly one maximal isotropic");
    if (s1) return 3;
    if (data.tau.map_subspace(m1) != m2)
      throw InternalConsistencyError("conjugation neither fixes nor swaps the maximal isotropics");
    return 1;
  }
  if (p.spec().family == RealFamily::SoStar) {
    if (data.jstruct->map_subspace(m1) != m2)
      throw InternalConsistencyError(
          "quaternionic structure must swap the two maximal isotropics");
    return 1;
  }
  throw InternalConsistencyError("three flags outside the orthogonal families");
}

}  // namespace parafin
