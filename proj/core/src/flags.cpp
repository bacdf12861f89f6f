#include "parafin/flags.hpp"

#include <algorithm>

#include "parafin/errors.hpp"

namespace parafin {

GeneralizedFlag GeneralizedFlag::from_members(Ring r, int ambient, std::vector<Subspace> members) {
  members.push_back(Subspace::zero(r, ambient));
  members.push_back(Subspace::full(r, ambient));
  for (const auto& m : members) {
    if (m.ring() != r) throw TagMismatchError("flag member ring mismatch");
    if (m.ambient_dim() != ambient) throw DimensionError("flag member ambient mismatch");
  }
  std::stable_sort(members.begin(), members.end(),
                   [](const Subspace& a, const Subspace& b) { return a.dim() < b.dim(); });
  std::vector<Subspace> chain;
  for (auto& m : members) {
    if (!chain.empty() && chain.back() == m) continue;
    if (!chain.empty()) {
      if (m.dim() == chain.back().dim())
        throw NotAChainError("two distinct members of equal dimension");
      if (!m.contains(chain.back()))
        throw NotAChainError("member does not contain its predecessor");
    }
    chain.push_back(std::move(m));
  }
  GeneralizedFlag f;
  f.ring_ = r;
  f.ambient_ = ambient;
  f.members_ = std::move(chain);
  return f;
}

GeneralizedFlag GeneralizedFlag::trivial(Ring r, int ambient) {
  return from_members(r, ambient, {});
}

std::vector<Subspace> GeneralizedFlag::proper_members() const {
  std::vector<Subspace> out;
  for (const auto& m : members_)
    if (m.dim() != 0 && m.dim() != ambient_) out.push_back(m);
  return out;
}

std::vector<std::pair<Subspace, Subspace>> GeneralizedFlag::immediate_pairs() const {
  std::vector<std::pair<Subspace, Subspace>> out;
  for (std::size_t t = 0; t + 1 < members_.size(); ++t)
    out.emplace_back(members_[t], members_[t + 1]);
  return out;
}

bool GeneralizedFlag::has_member(const Subspace& s) const {
  for (const auto& m : members_)
    if (m == s) return true;
  return false;
}

bool GeneralizedFlag::operator==(const GeneralizedFlag& o) const {
  return ring_ == o.ring_ && ambient_ == o.ambient_ && members_ == o.members_;
}

const Subspace& GeneralizedFlag::smallest_containing(const MatrixD& v) const {
  for (const auto& m : members_)
    if (m.contains(v)) return m;
  throw DimensionError("vector outside the ambient space");
}

GeneralizedFlag GeneralizedFlag::promote(Ring target) const {
  GeneralizedFlag f;
  f.ring_ = target;
  f.ambient_ = ambient_;
  for (const auto& m : members_) f.members_.push_back(m.promote(target));
  return f;
}

bool is_semiclosed(const GeneralizedFlag& f, const SesquiStructure& s) {
  for (const auto& [lo, hi] : f.immediate_pairs()) {
    Subspace cl = s.closure(lo);
    if (cl != lo && cl != hi) return false;
  }
  return true;
}

MatSpan gl_stabilizer(const GeneralizedFlag& f) {
  Ring r = f.ring();
  Ring coeff = r == Ring::Quat ? Ring::Rat : r;
  int n = f.ambient_dim();
  MatSpan host = MatSpan::full(r, coeff, n, n);
  std::vector<LinearCondition> conds;
  for (const auto& m : f.proper_members())
    for (int j = 0; j < m.dim(); ++j) conds.push_back(maps_into(coeff, m.basis().column(j), m));
  return cut(host, conds);
}

namespace {

bool span_preserves(const MatSpan& algebra, const Subspace& s) {
  for (const auto& x : algebra.basis())
    for (int j = 0; j < s.dim(); ++j)
      if (!s.contains(x * s.basis().column(j))) return false;
  return true;
}

}  // namespace

namespace {

bool is_semiclosed_w(const GeneralizedFlag& f, const SesquiStructure& pairing) {
  for (const auto& [lo, hi] : f.immediate_pairs()) {
    Subspace cl = pairing.closure_w(lo);
    if (cl != lo && cl != hi) return false;
  }
  return true;
}

}  // namespace

bool is_taut_couple(const GeneralizedFlag& in_v, const GeneralizedFlag& in_w,
                    const SesquiStructure& pairing) {
  if (!pairing.couples_two_spaces()) throw FormError("taut couples need a two-space pairing");
  if (in_v.ambient_dim() != pairing.dim() || in_w.ambient_dim() != pairing.dim())
    throw DimensionError("flag/pairing ambient mismatch");
  if (!is_semiclosed(in_v, pairing) || !is_semiclosed_w(in_w, pairing))
    throw PreconditionError("taut couple test requires semiclosed flags");
  MatSpan stab_v = gl_stabilizer(in_v);
  MatSpan stab_w = gl_stabilizer(in_w);
  for (const auto& m : in_v.members())
    if (!span_preserves(stab_w, pairing.perp(m))) return false;
  for (const auto& m : in_w.members())
    if (!span_preserves(stab_v, pairing.perp_w(m))) return false;
  return true;
}

bool is_taut_couple(const TautCouple& c) { return is_taut_couple(c.in_v, c.in_w, c.pairing); }

bool is_self_taut(const GeneralizedFlag& f, const SesquiStructure& form) {
  if (form.couples_two_spaces()) throw FormError("self-tautness needs a form on one space");
  if (f.ambient_dim() != form.dim()) throw DimensionError("flag/form ambient mismatch");
  MatSpan stab = gl_stabilizer(f);
  for (const auto& m : f.members())
    if (!span_preserves(stab, form.perp(m))) return false;
  return true;
}

}  // namespace parafin
