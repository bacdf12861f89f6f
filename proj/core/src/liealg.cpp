#include "parafin/liealg.hpp"

#include <algorithm>
#include <utility>

#include "parafin/errors.hpp"
#include "parafin/recovery.hpp"

namespace parafin {

const char* family_name(Family f) {
  switch (f) {
    case Family::GL: return "gl";
    case Family::SL: return "sl";
    case Family::SO: return "so";
    case Family::SP: return "sp";
  }
  return "?";
}

Family family_from_name(const std::string& name) {
  for (Family f : {Family::GL, Family::SL, Family::SO, Family::SP})
    if (name == family_name(f)) return f;
  throw ParseError("unknown family: " + name);
}

namespace {

Ring coeff_for(Ring r) { return r == Ring::Gauss ? Ring::Gauss : Ring::Rat; }

MatrixD antidiag_ones(Ring r, int n) {
  MatrixD g(r, n, n);
  for (int i = 0; i < n; ++i) g.set(i, n - 1 - i, Scalar::one(r));
  return g;
}

MatrixD split_alt_gram(Ring r, int m) {
  MatrixD g(r, 2 * m, 2 * m);
  for (int i = 0; i < m; ++i) {
    g.set(i, 2 * m - 1 - i, Scalar::one(r));
    g.set(2 * m - 1 - i, i, -Scalar::one(r));
  }
  return g;
}

}  // namespace

LinearCondition trace_pairs_to_zero(Ring coeff, const MatrixD& y) {
  if (coeff == Ring::Gauss)
    return [y](const MatrixD& x) {
      MatrixD r(Ring::Gauss, 1, 1);
      r.set(0, 0, (x * y).trace());
      return r;
    };
  return [y](const MatrixD& x) {
    MatrixD r(Ring::Rat, 1, 1);
    r.set(0, 0, Scalar::rat((x * y).re_trace()));
    return r;
  };
}

AmbientAlgebra::AmbientAlgebra(Family f, Ring r, int n, int rank, MatSpan span,
                               std::optional<SesquiStructure> form, SesquiStructure pairing)
    : family_(f),
      ring_(r),
      coeff_(coeff_for(r)),
      n_(n),
      rank_(rank),
      span_(std::move(span)),
      form_(std::move(form)),
      pairing_(std::move(pairing)) {}

AmbientPtr AmbientAlgebra::gl(Ring r, int n) {
  if (n <= 0) throw DimensionError("ambient size must be positive");
  return AmbientPtr(new AmbientAlgebra(Family::GL, r, n, n, MatSpan::full(r, coeff_for(r), n, n),
                                       std::nullopt, SesquiStructure::pairing(r, n)));
}

AmbientPtr AmbientAlgebra::sl(Ring r, int n) {
  if (n <= 0) throw DimensionError("ambient size must be positive");
  Ring cf = coeff_for(r);
  // Trace zero; over H(Q) the real part of the trace, matching the Q-span.
  LinearCondition cond = trace_pairs_to_zero(cf, MatrixD::identity(r, n));
  MatSpan span = cut(MatSpan::full(r, cf, n, n), {cond});
  return AmbientPtr(new AmbientAlgebra(Family::SL, r, n, n, std::move(span), std::nullopt,
                                       SesquiStructure::pairing(r, n)));
}

AmbientPtr AmbientAlgebra::so(Ring r, int n, std::optional<MatrixD> gram) {
  if (n <= 0) throw DimensionError("ambient size must be positive");
  MatrixD g = gram ? std::move(*gram) : antidiag_ones(r, n);
  SesquiStructure form = SesquiStructure::sym_bilinear(g);
  Ring cf = coeff_for(r);
  LinearCondition skew =
      matrix_condition(cf, [g](const MatrixD& x) { return x.transpose() * g + g * x; });
  MatSpan span = cut(MatSpan::full(r, cf, n, n), {skew});
  return AmbientPtr(new AmbientAlgebra(Family::SO, r, n, n, std::move(span), std::move(form),
                                       SesquiStructure::pairing(r, n)));
}

AmbientPtr AmbientAlgebra::sp(Ring r, int m, std::optional<MatrixD> gram) {
  if (m <= 0) throw DimensionError("ambient rank must be positive");
  const int n = 2 * m;
  MatrixD g = gram ? std::move(*gram) : split_alt_gram(r, m);
  SesquiStructure form = SesquiStructure::alt_bilinear(g);
  Ring cf = coeff_for(r);
  LinearCondition skew =
      matrix_condition(cf, [g](const MatrixD& x) { return x.transpose() * g + g * x; });
  MatSpan span = cut(MatSpan::full(r, cf, n, n), {skew});
  return AmbientPtr(new AmbientAlgebra(Family::SP, r, n, m, std::move(span), std::move(form),
                                       SesquiStructure::pairing(r, n)));
}

AmbientPtr AmbientAlgebra::make(Family f, Ring r, int rank, std::optional<MatrixD> gram) {
  switch (f) {
    case Family::GL:
      if (gram) throw FormError("gl carries no invariant form");
      return gl(r, rank);
    case Family::SL:
      if (gram) throw FormError("sl carries no invariant form");
      return sl(r, rank);
    case Family::SO: return so(r, rank, std::move(gram));
    case Family::SP: return sp(r, rank, std::move(gram));
  }
  throw AlgebraError("unreachable family");
}

MatrixLieSubalgebra::MatrixLieSubalgebra(AmbientPtr ambient, MatSpan span,
                                         std::optional<StabilizerShape> shape)
    : ambient_(std::move(ambient)), span_(std::move(span)), shape_(std::move(shape)) {
  if (!ambient_) throw AlgebraError("subalgebra needs an ambient algebra");
  if (span_.rows() != ambient_->n() || span_.cols() != ambient_->n() ||
      span_.entry_ring() != ambient_->ring() || span_.coeff_field() != ambient_->coeff())
    throw DimensionError("subalgebra span does not match its ambient");
  if (!ambient_->span().contains(span_))
    throw AlgebraError("span is not contained in the ambient algebra");
}

bool MatrixLieSubalgebra::is_bracket_closed() const {
  const auto& b = span_.basis();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      if (!span_.contains(bracket(b[i], b[j]))) return false;
  return true;
}

MatrixLieSubalgebra full_subalgebra(const AmbientPtr& ambient) {
  if (!ambient) throw AlgebraError("subalgebra needs an ambient algebra");
  GeneralizedFlag triv = GeneralizedFlag::trivial(ambient->ring(), ambient->n());
  std::optional<GeneralizedFlag> on_w;
  if (ambient->family() == Family::GL || ambient->family() == Family::SL) on_w = triv;
  return MatrixLieSubalgebra(ambient, ambient->span(), StabilizerShape{triv, std::move(on_w)});
}

namespace {

GeneralizedFlag perp_chain(const GeneralizedFlag& f, const SesquiStructure& pairing) {
  std::vector<Subspace> members;
  members.reserve(f.members().size());
  for (const Subspace& s : f.members()) members.push_back(pairing.perp(s));
  return GeneralizedFlag::from_members(f.ring(), f.ambient_dim(), std::move(members));
}

std::vector<LinearCondition> stabilizer_conditions(const GeneralizedFlag& f, Ring cf) {
  std::vector<LinearCondition> conds;
  for (const Subspace& s : f.proper_members())
    for (int j = 0; j < s.dim(); ++j) conds.push_back(maps_into(cf, s.basis().column(j), s));
  return conds;
}

void check_flag_in_ambient(const GeneralizedFlag& f, const AmbientPtr& ambient) {
  if (!ambient) throw AlgebraError("subalgebra needs an ambient algebra");
  if (f.ring() != ambient->ring() || f.ambient_dim() != ambient->n())
    throw DimensionError("flag does not live in the ambient's defining space");
}

}  // namespace

MatrixLieSubalgebra flag_stabilizer(const GeneralizedFlag& f, const AmbientPtr& ambient) {
  check_flag_in_ambient(f, ambient);
  MatSpan span = cut(ambient->span(), stabilizer_conditions(f, ambient->coeff()));

  std::optional<StabilizerShape> shape;
  if (ambient->form()) {
    // Inside the skew algebra, stabilizing a member stabilizes its perp: the
    // recorded shape is the perp-completed chain whenever it chains at all.
    std::vector<Subspace> all = f.members();
    for (const Subspace& s : f.members()) all.push_back(ambient->form()->perp(s));
    try {
      shape = StabilizerShape{GeneralizedFlag::from_members(f.ring(), f.ambient_dim(), all),
                              std::nullopt};
    } catch (const NotAChainError&) {
      shape = std::nullopt;
    }
  } else {
    shape = StabilizerShape{f, perp_chain(f, ambient->pairing())};
  }
  return MatrixLieSubalgebra(ambient, std::move(span), std::move(shape));
}

MatrixLieSubalgebra flag_stabilizer(const GeneralizedFlag& on_v, const GeneralizedFlag& on_w,
                                    const AmbientPtr& ambient) {
  if (ambient && ambient->form())
    throw UnsupportedShapeError("dual flags apply to the paired families only");
  check_flag_in_ambient(on_v, ambient);
  check_flag_in_ambient(on_w, ambient);

  const Ring cf = ambient->coeff();
  std::vector<LinearCondition> conds = stabilizer_conditions(on_v, cf);
  const SesquiStructure& pairing = ambient->pairing();
  for (const Subspace& t : on_w.proper_members())
    for (int j = 0; j < t.dim(); ++j) {
      MatrixD w = t.basis().column(j);
      conds.push_back([cf, w, t, &pairing](const MatrixD& x) {
        return expand_to_field(t.reduce(pairing.dual_action(x) * w), cf);
      });
    }
  MatSpan span = cut(ambient->span(), conds);

  // The nilpotent-part formula reads the V-side chain alone, which is only
  // the whole story when the W side is the plain perp chain.
  std::optional<StabilizerShape> shape;
  if (on_w == perp_chain(on_v, pairing)) shape = StabilizerShape{on_v, on_w};
  return MatrixLieSubalgebra(ambient, std::move(span), std::move(shape));
}

MatSpan bracket_span(const MatSpan& lhs, const MatSpan& rhs) {
  std::vector<MatrixD> gens;
  gens.reserve(lhs.basis().size() * rhs.basis().size());
  for (const MatrixD& a : lhs.basis())
    for (const MatrixD& b : rhs.basis()) gens.push_back(bracket(a, b));
  return MatSpan::span(lhs.entry_ring(), lhs.coeff_field(), lhs.rows(), lhs.cols(), gens);
}

MatrixLieSubalgebra bracket_closure(const std::vector<MatrixD>& gens, const AmbientPtr& ambient) {
  if (!ambient) throw AlgebraError("subalgebra needs an ambient algebra");
  for (const MatrixD& g : gens)
    if (!ambient->contains(g)) throw AlgebraError("generator outside the ambient algebra");
  MatSpan cur = MatSpan::span(ambient->ring(), ambient->coeff(), ambient->n(), ambient->n(), gens);
  for (;;) {
    MatSpan next = cur.sum(bracket_span(cur, cur));
    if (next.dim() == cur.dim()) break;
    cur = std::move(next);
  }
  return MatrixLieSubalgebra(ambient, std::move(cur));
}

std::optional<int> derived_length(const MatrixLieSubalgebra& s) {
  MatSpan d = s.span();
  int len = 0;
  while (d.dim() > 0) {
    MatSpan next = bracket_span(d, d);
    if (next.dim() >= d.dim()) return std::nullopt;
    d = std::move(next);
    ++len;
  }
  return len;
}

bool is_solvable(const MatrixLieSubalgebra& s) { return derived_length(s).has_value(); }

MatrixLieSubalgebra solvable_radical(const MatrixLieSubalgebra& s) {
  const Ring cf = s.ambient().coeff();

  // Candidate: everything trace-orthogonal to the derived subalgebra.
  MatSpan derived = bracket_span(s.span(), s.span());
  std::vector<LinearCondition> conds;
  conds.reserve(derived.basis().size());
  for (const MatrixD& y : derived.basis()) conds.push_back(trace_pairs_to_zero(cf, y));
  MatSpan rad = cut(s.span(), conds);

  // Largest subspan of the candidate that is an ideal of s.
  for (;;) {
    std::vector<LinearCondition> ideal_conds;
    const Subspace target = rad.expanded();
    for (const MatrixD& b : s.basis())
      ideal_conds.push_back(
          [b, target, cf](const MatrixD& x) { return target.reduce(expand_to_field(bracket(b, x), cf)); });
    MatSpan next = cut(rad, ideal_conds);
    if (next.dim() == rad.dim()) break;
    rad = std::move(next);
  }

  MatrixLieSubalgebra result(s.ambient_ptr(), std::move(rad));
  for (const MatrixD& b : s.basis())
    for (const MatrixD& y : result.basis())
      if (!result.contains(bracket(b, y)))
        throw InternalConsistencyError("radical candidate is not an ideal");
  if (!is_solvable(result)) throw InternalConsistencyError("radical candidate is not solvable");
  return result;
}

MatrixLieSubalgebra linear_nilradical(const MatrixLieSubalgebra& s) {
  if (!s.shape())
    throw UnsupportedShapeError("the nilpotent part needs a stabilizer-shaped subalgebra");
  const GeneralizedFlag& f = s.shape()->on_v;
  const Ring cf = s.ambient().coeff();

  // Elements pushing every member into its predecessor.
  std::vector<LinearCondition> conds;
  for (const auto& [lo, hi] : f.immediate_pairs())
    for (int j = 0; j < hi.dim(); ++j) conds.push_back(maps_into(cf, hi.basis().column(j), lo));
  MatSpan m = cut(s.span(), conds);

  for (const MatrixD& x : m.basis()) {
    MatrixD p = x;
    for (int k = 1; !p.is_zero() && k <= s.ambient().n(); ++k) p = p * x;
    if (!p.is_zero())
      throw InternalConsistencyError("nilpotent part contains a non-nilpotent element");
  }
  MatrixLieSubalgebra result(s.ambient_ptr(), std::move(m));
  for (const MatrixD& b : s.basis())
    for (const MatrixD& y : result.basis())
      if (!result.contains(bracket(b, y)))
        throw InternalConsistencyError("nilpotent part is not an ideal");
  return result;
}

TraceConditionSpace::TraceConditionSpace(MatrixLieSubalgebra host, std::vector<MatrixD> functionals)
    : host_(std::move(host)), functionals_(std::move(functionals)) {}

Scalar TraceConditionSpace::apply(int idx, const MatrixD& x) const {
  auto coords = host_.span().coordinates(x);
  if (!coords) throw AlgebraError("functional argument lies outside the host subalgebra");
  return (functionals_[static_cast<std::size_t>(idx)] * *coords).at(0, 0);
}

MatrixLieSubalgebra TraceConditionSpace::joint_kernel(const std::vector<int>& idx) const {
  std::vector<LinearCondition> conds;
  conds.reserve(idx.size());
  const MatSpan& span = host_.span();
  for (int t : idx) {
    MatrixD row = functionals_[static_cast<std::size_t>(t)];
    conds.push_back([row, &span](const MatrixD& x) {
      auto coords = span.coordinates(x);
      if (!coords) throw AlgebraError("functional argument lies outside the host subalgebra");
      return row * *coords;
    });
  }
  return MatrixLieSubalgebra(host_.ambient_ptr(), cut(span, conds), host_.shape());
}

MatrixLieSubalgebra TraceConditionSpace::joint_kernel() const {
  std::vector<int> all(static_cast<std::size_t>(dim()));
  for (int t = 0; t < dim(); ++t) all[static_cast<std::size_t>(t)] = t;
  return joint_kernel(all);
}

TraceConditionSpace trace_condition_space(const MatrixLieSubalgebra& s) {
  MatrixLieSubalgebra nil = linear_nilradical(s);
  MatSpan reduced = nil.span().sum(bracket_span(s.span(), s.span()));
  const Ring cf = s.ambient().coeff();

  MatrixD coords(cf, s.dim(), reduced.dim());
  for (int j = 0; j < reduced.dim(); ++j) {
    auto c = s.span().coordinates(reduced.basis()[static_cast<std::size_t>(j)]);
    if (!c) throw InternalConsistencyError("reduced span escapes its host");
    coords.set_column(j, *c);
  }
  // Functionals on s vanishing on the reduced span: kernel of the transpose.
  Subspace ann = right_kernel(coords.transpose());
  std::vector<MatrixD> functionals;
  functionals.reserve(static_cast<std::size_t>(ann.dim()));
  for (int t = 0; t < ann.dim(); ++t) functionals.push_back(ann.basis().column(t).transpose());
  return TraceConditionSpace(s, std::move(functionals));
}

int borel_dimension(Family f, int rank) {
  switch (f) {
    case Family::GL: return rank * (rank + 1) / 2;
    case Family::SL: return rank * (rank + 1) / 2 - 1;
    case Family::SO: {
      const int m = rank / 2;
      return rank % 2 == 0 ? m * m : m * m + m;
    }
    case Family::SP: return rank * rank + rank;
  }
  throw AlgebraError("unreachable family");
}

namespace {

/// Refine a chain into a complete chain by adjoining one basis column of the
/// next member at a time.  Input members must be sorted and nested.
std::vector<Subspace> one_column_refinement(const std::vector<Subspace>& chain) {
  std::vector<Subspace> out;
  if (chain.empty()) return out;
  Subspace cur = chain.front();
  out.push_back(cur);
  for (std::size_t k = 1; k < chain.size(); ++k) {
    const Subspace& target = chain[k];
    for (int j = 0; j < target.dim(); ++j) {
      MatrixD v = target.basis().column(j);
      if (cur.contains(v)) continue;
      cur = cur.sum(Subspace::span(v));
      out.push_back(cur);
    }
  }
  return out;
}

}  // namespace

BorelCertificate certify_borel(const GeneralizedFlag& f, const AmbientPtr& ambient) {
  check_flag_in_ambient(f, ambient);
  const Ring r = ambient->ring();
  const int n = ambient->n();
  // Over H(Q) the diagonal torus already contains a non-solvable Lie algebra
  // (the imaginary quaternions), so no complete-flag stabilizer can witness
  // solvability and the certificate does not exist.
  if (r == Ring::Quat)
    throw UnsupportedShapeError("solvable witnesses require a commutative ring");

  GeneralizedFlag complete;
  if (!ambient->form()) {
    complete = GeneralizedFlag::from_members(r, n, one_column_refinement(f.members()));
  } else {
    const SesquiStructure& form = *ambient->form();
    // Isotropic cores of the members: a member enters through itself or, when
    // coisotropic, through its perp.  A member that is neither blocks any
    // refinement by a complete isotropic flag.
    std::vector<Subspace> iso;
    for (const Subspace& s : f.proper_members()) {
      switch (form.isotropy_class(s)) {
        case IsotropyClass::Isotropic:
        case IsotropyClass::Both: iso.push_back(s); break;
        case IsotropyClass::Coisotropic: iso.push_back(form.perp(s)); break;
        case IsotropyClass::Neither:
          throw FormError("flag member admits no isotropic refinement");
      }
    }
    std::sort(iso.begin(), iso.end(),
              [](const Subspace& a, const Subspace& b) { return a.dim() < b.dim(); });
    iso.erase(std::unique(iso.begin(), iso.end()), iso.end());
    for (std::size_t k = 1; k < iso.size(); ++k)
      if (!iso[k].contains(iso[k - 1]))
        throw FormError("isotropic cores of the flag are incomparable");

    Subspace top = iso.empty() ? Subspace::zero(r, n) : iso.back();
    Subspace max = complete_isotropic(form, top);
    const int witt = ambient->family() == Family::SP ? ambient->rank_param() : n / 2;
    if (max.dim() != witt) throw FormError("form is not split over the ring");

    std::vector<Subspace> chain;
    chain.push_back(Subspace::zero(r, n));
    for (Subspace& s : iso) chain.push_back(std::move(s));
    chain.push_back(std::move(max));
    std::vector<Subspace> members = one_column_refinement(chain);
    const std::size_t iso_count = members.size();
    for (std::size_t k = 0; k < iso_count; ++k) members.push_back(form.perp(members[k]));
    complete = GeneralizedFlag::from_members(r, n, std::move(members));
  }

  MatrixLieSubalgebra witness = flag_stabilizer(complete, ambient);
  if (witness.dim() != borel_dimension(ambient->family(), ambient->rank_param()))
    throw InternalConsistencyError("refinement stabilizer misses the family dimension");
  auto len = derived_length(witness);
  if (!len) throw InternalConsistencyError("refinement stabilizer is not solvable");
  return BorelCertificate{std::move(complete), std::move(witness), *len};
}

const char* obstruction_kind_name(ObstructionKind k) {
  switch (k) {
    case ObstructionKind::None: return "none";
    case ObstructionKind::NotAChain: return "not-a-chain";
    case ObstructionKind::StabilizerMismatch: return "stabilizer-mismatch";
  }
  return "?";
}

ParabolicReport is_parabolic(const MatrixLieSubalgebra& s) {
  ParabolicReport rep;
  const AmbientPtr& ambient = s.ambient_ptr();
  const Family fam = s.ambient().family();

  if (fam == Family::SO) {
    SoRecovery rec = recover_flags_so(s);
    rep.core = rec.state.core;
    rep.max_iso_first = rec.state.max_iso_first;
    rep.max_iso_second = rec.state.max_iso_second;
    if (!rec.ok) {
      rep.obstruction = ObstructionKind::NotAChain;
      rep.obstruction_detail = rec.obstruction;
      rep.incomparable_pair = rec.incomparable_pair;
      return rep;
    }
    MatrixLieSubalgebra stab = flag_stabilizer(rec.flags.front(), ambient);
    if (stab.span() != s.span()) {
      rep.obstruction = ObstructionKind::StabilizerMismatch;
      rep.obstruction_detail = "recovered flag has a stabilizer of dimension " +
                               std::to_string(stab.dim()) + ", the input has dimension " +
                               std::to_string(s.dim());
      return rep;
    }
    for (std::size_t k = 1; k < rec.flags.size(); ++k)
      if (flag_stabilizer(rec.flags[k], ambient).span() != s.span())
        throw InternalConsistencyError("recovered flags disagree about their stabilizer");
    rep.parabolic = true;
    rep.flags = std::move(rec.flags);
    rep.certificate = certify_borel(rep.flags.front(), ambient);
    if (!s.span().contains(rep.certificate->witness.span()))
      throw InternalConsistencyError("witness escapes the certified subalgebra");
    return rep;
  }

  ChainRecovery rec = recover_chain_gl(s);
  if (!rec.is_chain) {
    rep.obstruction = ObstructionKind::NotAChain;
    rep.obstruction_detail = rec.obstruction;
    rep.incomparable_pair = rec.incomparable_pair;
    return rep;
  }
  MatrixLieSubalgebra stab = flag_stabilizer(rec.on_v, ambient);
  if (stab.span() != s.span()) {
    rep.obstruction = ObstructionKind::StabilizerMismatch;
    rep.obstruction_detail = "recovered chain has a stabilizer of dimension " +
                             std::to_string(stab.dim()) + ", the input has dimension " +
                             std::to_string(s.dim());
    return rep;
  }
  if (fam == Family::SP && !is_self_taut(rec.on_v, *s.ambient().form()))
    throw InternalConsistencyError("recovered symplectic chain is not self-taut");
  rep.parabolic = true;
  rep.flags = {rec.on_v};
  if (fam != Family::SP) rep.dual_flag = rec.on_w;
  // The stabilizer-equality verdict is ring-uniform; the solvable witness
  // only exists over commutative rings.
  if (s.ambient().ring() != Ring::Quat) {
    rep.certificate = certify_borel(rec.on_v, ambient);
    if (!s.span().contains(rep.certificate->witness.span()))
      throw InternalConsistencyError("witness escapes the certified subalgebra");
  }
  return rep;
}

MatrixLieSubalgebra normalizer(const MatrixLieSubalgebra& s) {
  const Ring cf = s.ambient().coeff();
  const Subspace target = s.span().expanded();
  std::vector<LinearCondition> conds;
  conds.reserve(s.basis().size());
  for (const MatrixD& b : s.basis())
    conds.push_back(
        [b, target, cf](const MatrixD& x) { return target.reduce(expand_to_field(bracket(x, b), cf)); });
  return MatrixLieSubalgebra(s.ambient_ptr(), cut(s.ambient().span(), conds));
}

}  // namespace parafin
