#include "parafin/recovery.hpp"

#include <algorithm>
#include <utility>

#include "parafin/errors.hpp"

namespace parafin {

Subspace orbit_span(const MatrixLieSubalgebra& s, const MatrixD& x) {
  if (x.ring() != s.ambient().ring() || x.rows() != s.ambient().n() || x.cols() != 1)
    throw DimensionError("orbit vector does not live in the defining space");
  std::vector<MatrixD> gens;
  gens.reserve(s.basis().size());
  for (const MatrixD& b : s.basis()) gens.push_back(b * x);
  return Subspace::span(s.ambient().ring(), s.ambient().n(), gens);
}

Subspace invariant_closure(const MatrixLieSubalgebra& s, const MatrixD& x) {
  Subspace cur = Subspace::span(x);
  for (bool grew = true; grew;) {
    grew = false;
    for (int j = 0; j < cur.dim() && !grew; ++j) {
      Subspace img = orbit_span(s, cur.basis().column(j));
      if (!cur.contains(img)) {
        cur = cur.sum(img);
        grew = true;
      }
    }
  }
  return cur;
}

namespace {

/// Smallest unital associative matrix algebra containing the span.
MatSpan unital_closure(const MatSpan& s) {
  std::vector<MatrixD> gens = s.basis();
  gens.push_back(MatrixD::identity(s.entry_ring(), s.rows()));
  MatSpan cur = MatSpan::span(s.entry_ring(), s.coeff_field(), s.rows(), s.cols(), gens);
  for (;;) {
    std::vector<MatrixD> prods;
    prods.reserve(cur.basis().size() * cur.basis().size());
    for (const MatrixD& a : cur.basis())
      for (const MatrixD& b : cur.basis()) prods.push_back(a * b);
    MatSpan next =
        cur.sum(MatSpan::span(s.entry_ring(), s.coeff_field(), s.rows(), s.cols(), prods));
    if (next.dim() == cur.dim()) return cur;
    cur = std::move(next);
  }
}

/// Radical of a unital associative algebra in characteristic zero: everything
/// trace-orthogonal to the whole algebra.
MatSpan associative_radical(const MatSpan& a) {
  std::vector<LinearCondition> conds;
  conds.reserve(a.basis().size());
  for (const MatrixD& y : a.basis()) conds.push_back(trace_pairs_to_zero(a.coeff_field(), y));
  return cut(a, conds);
}

/// Invariant subspaces reachable from a subalgebra with unital closure `a`:
/// the images a·x over the coordinate spanning set {e_i} ∪ {e_i + e_j} (each
/// such image is the smallest invariant subspace containing x), the
/// descending radical series (rad a)^k V, and the trivial pair.
std::vector<Subspace> invariant_candidates(const MatrixLieSubalgebra& s, const MatSpan& a) {
  const Ring r = s.ambient().ring();
  const int n = s.ambient().n();

  std::vector<Subspace> cands{Subspace::zero(r, n), Subspace::full(r, n)};

  std::vector<MatrixD> seeds;
  for (int i = 0; i < n; ++i) seeds.push_back(MatrixD::basis_vector(r, n, i));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      seeds.push_back(MatrixD::basis_vector(r, n, i) + MatrixD::basis_vector(r, n, j));
  for (const MatrixD& x : seeds) {
    std::vector<MatrixD> gens;
    gens.reserve(a.basis().size());
    for (const MatrixD& b : a.basis()) gens.push_back(b * x);
    cands.push_back(Subspace::span(r, n, gens));
  }

  MatSpan rad = associative_radical(a);
  Subspace v = Subspace::full(r, n);
  while (v.dim() > 0) {
    std::vector<MatrixD> gens;
    for (const MatrixD& b : rad.basis())
      for (int t = 0; t < v.dim(); ++t) gens.push_back(b * v.basis().column(t));
    Subspace next = Subspace::span(r, n, gens);
    if (next.dim() >= v.dim()) break;  // the series only descends for a nilpotent radical
    cands.push_back(next);
    v = std::move(next);
  }
  return cands;
}

struct ChainCheck {
  bool ok = false;
  std::vector<Subspace> sorted;
  std::optional<std::pair<Subspace, Subspace>> bad;
};

/// Sort by dimension, drop duplicates, and verify the nesting; on failure the
/// first offending pair is reported.
ChainCheck to_chain(std::vector<Subspace> cands) {
  std::sort(cands.begin(), cands.end(),
            [](const Subspace& a, const Subspace& b) { return a.dim() < b.dim(); });
  ChainCheck out;
  for (Subspace& c : cands) {
    if (!out.sorted.empty()) {
      const Subspace& prev = out.sorted.back();
      if (c == prev) continue;
      if (c.dim() == prev.dim() || !c.contains(prev)) {
        out.bad = std::make_pair(prev, c);
        return out;
      }
    }
    out.sorted.push_back(std::move(c));
  }
  out.ok = true;
  return out;
}

GeneralizedFlag pairing_perp_chain(const GeneralizedFlag& f, const SesquiStructure& pairing) {
  std::vector<Subspace> members;
  members.reserve(f.members().size());
  for (const Subspace& s : f.members()) members.push_back(pairing.perp(s));
  return GeneralizedFlag::from_members(f.ring(), f.ambient_dim(), std::move(members));
}

}  // namespace

ChainRecovery recover_chain_gl(const MatrixLieSubalgebra& s) {
  if (s.ambient().family() == Family::SO)
    throw UnsupportedShapeError("chain recovery applies to the GL, SL, and SP families");
  const Ring r = s.ambient().ring();
  const int n = s.ambient().n();

  MatSpan a = unital_closure(s.span());
  std::vector<Subspace> cands = invariant_candidates(s, a);
  if (s.ambient().form()) {
    const std::size_t count = cands.size();
    for (std::size_t k = 0; k < count; ++k) cands.push_back(s.ambient().form()->perp(cands[k]));
  }

  ChainRecovery rec;
  ChainCheck cc = to_chain(std::move(cands));
  if (!cc.ok) {
    rec.obstruction = "two invariant subspaces are incomparable";
    rec.incomparable_pair = cc.bad;
    return rec;
  }
  rec.is_chain = true;
  rec.on_v = GeneralizedFlag::from_members(r, n, std::move(cc.sorted));
  rec.on_w = pairing_perp_chain(rec.on_v, s.ambient().pairing());
  return rec;
}

SoRecovery recover_flags_so(const MatrixLieSubalgebra& s) {
  if (s.ambient().family() != Family::SO)
    throw UnsupportedShapeError("orthogonal recovery needs an SO ambient");
  const SesquiStructure& form = *s.ambient().form();
  const Ring r = s.ambient().ring();
  const int n = s.ambient().n();
  SoRecovery rec;

  // Work with the normalizer: a parabolic is its own normalizer, and the
  // invariant subspaces of the normalizer are what the flag is made of.
  MatrixLieSubalgebra norm = normalizer(s);
  MatSpan a = unital_closure(norm.span());
  std::vector<Subspace> cands = invariant_candidates(norm, a);
  {
    const std::size_t count = cands.size();
    for (std::size_t k = 0; k < count; ++k) cands.push_back(form.perp(cands[k]));
  }

  std::vector<Subspace> iso;
  for (const Subspace& c : cands)
    if (c.dim() > 0 && form.is_isotropic(c) &&
        std::find(iso.begin(), iso.end(), c) == iso.end())
      iso.push_back(c);
  std::sort(iso.begin(), iso.end(),
            [](const Subspace& x, const Subspace& y) { return x.dim() < y.dim(); });
  Subspace u = Subspace::zero(r, n);
  for (const Subspace& c : iso) u = u.sum(c);
  rec.state.isotropic_images = iso;
  rec.state.isotropic_union = u;

  if (u.dim() == 0 || form.is_isotropic(u)) {
    // The isotropic invariants nest, so the chain itself is forced.  It still
    // splits in two ways when the top isotropic member has corank two and the
    // conic on the complementary plane has two lines over this ring; over a
    // ring where that conic is anisotropic the single chain is the answer.
    ChainCheck cc = to_chain(std::move(cands));
    if (!cc.ok) {
      rec.obstruction = "two invariant subspaces are incomparable";
      rec.incomparable_pair = cc.bad;
      return rec;
    }
    Subspace pt = form.perp(u);
    bool strictly_between = false;
    for (const Subspace& c : cc.sorted)
      if (!u.contains(c) && !c.contains(pt)) strictly_between = true;
    if (pt.dim() - u.dim() == 2 && !strictly_between) {
      Subspace grow = u;
      std::vector<MatrixD> comp;
      for (int j = 0; j < pt.dim() && comp.size() < 2; ++j) {
        MatrixD v = pt.basis().column(j);
        if (grow.contains(v)) continue;
        grow = grow.sum(Subspace::span(v));
        comp.push_back(std::move(v));
      }
      if (comp.size() != 2)
        throw InternalConsistencyError("corank-two middle has no two-column complement");
      std::vector<MatrixD> lines = isotropic_lines_in_plane(form, comp[0], comp[1]);
      if (lines.size() == 2) {
        Subspace m1 = u.sum(Subspace::span(lines[0]));
        Subspace m2 = u.sum(Subspace::span(lines[1]));
        if (!form.is_isotropic(m1) || !form.is_isotropic(m2) ||
            m1.intersect(m2) != u || m1.sum(m2) != pt)
          throw InternalConsistencyError("maximal isotropic pair fails its lattice identities");
        rec.state.core = u;
        rec.state.max_iso_first = m1;
        rec.state.max_iso_second = m2;
        std::vector<Subspace> with_m1 = cc.sorted;
        with_m1.push_back(m1);
        std::vector<Subspace> with_m2 = cc.sorted;
        with_m2.push_back(m2);
        rec.ok = true;
        rec.ambiguous = true;
        rec.flags = {GeneralizedFlag::from_members(r, n, std::move(cc.sorted)),
                     GeneralizedFlag::from_members(r, n, std::move(with_m1)),
                     GeneralizedFlag::from_members(r, n, std::move(with_m2))};
        return rec;
      }
    }
    rec.ok = true;
    rec.flags = {GeneralizedFlag::from_members(r, n, std::move(cc.sorted))};
    return rec;
  }

  // The isotropic invariants spread over a corank-two core: their union must
  // be the perp of an isotropic subspace two dimensions below it.
  Subspace core = form.perp(u);
  if (!u.contains(core) || !form.is_isotropic(core) || form.perp(core) != u ||
      u.dim() - core.dim() != 2) {
    rec.obstruction = "isotropic invariant subspaces do not close over a corank-two core";
    return rec;
  }
  rec.state.core = core;

  MatrixD v1(r, n, 1), v2(r, n, 1);
  {
    Subspace grow = core;
    std::vector<MatrixD> comp;
    for (int j = 0; j < u.dim() && comp.size() < 2; ++j) {
      MatrixD v = u.basis().column(j);
      if (grow.contains(v)) continue;
      grow = grow.sum(Subspace::span(v));
      comp.push_back(std::move(v));
    }
    if (comp.size() != 2)
      throw InternalConsistencyError("corank-two middle has no two-column complement");
    v1 = std::move(comp[0]);
    v2 = std::move(comp[1]);
  }
  std::vector<MatrixD> lines = isotropic_lines_in_plane(form, v1, v2);
  if (lines.size() != 2)
    throw InternalConsistencyError("corank-two middle did not split into two isotropic lines");

  Subspace m1 = core.sum(Subspace::span(lines[0]));
  Subspace m2 = core.sum(Subspace::span(lines[1]));
  if (!form.is_isotropic(m1) || !form.is_isotropic(m2) || m1.intersect(m2) != core ||
      m1.sum(m2) != u)
    throw InternalConsistencyError("maximal isotropic pair fails its lattice identities");
  rec.state.max_iso_first = m1;
  rec.state.max_iso_second = m2;

  // Base flag: every remaining invariant must sit below the core or above
  // its perp; the two maximal isotropics themselves extend the base flag in
  // exactly two incompatible ways.
  std::vector<Subspace> base{core, u};
  for (Subspace& c : cands) {
    if (c == m1 || c == m2) continue;
    if (core.contains(c) || c.contains(u)) {
      base.push_back(std::move(c));
    } else {
      rec.obstruction = "an invariant subspace is incomparable to the maximal isotropics";
      rec.incomparable_pair = std::make_pair(c, m1);
      return rec;
    }
  }
  ChainCheck cc = to_chain(std::move(base));
  if (!cc.ok) {
    rec.obstruction = "two invariant subspaces are incomparable";
    rec.incomparable_pair = cc.bad;
    return rec;
  }

  std::vector<Subspace> with_m1 = cc.sorted;
  with_m1.push_back(m1);
  std::vector<Subspace> with_m2 = cc.sorted;
  with_m2.push_back(m2);
  rec.ok = true;
  rec.ambiguous = true;
  rec.flags = {GeneralizedFlag::from_members(r, n, std::move(cc.sorted)),
               GeneralizedFlag::from_members(r, n, std::move(with_m1)),
               GeneralizedFlag::from_members(r, n, std::move(with_m2))};
  return rec;
}

}  // namespace parafin
