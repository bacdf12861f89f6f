#include <doctest.h>

#include <parafin/errors.hpp>
#include <parafin/recovery.hpp>

using namespace parafin;

namespace {

GeneralizedFlag coord_flag(Ring r, int n, std::initializer_list<std::initializer_list<int>> idx) {
  std::vector<Subspace> members;
  for (auto m : idx) members.push_back(Subspace::coordinate(r, n, m));
  return GeneralizedFlag::from_members(r, n, std::move(members));
}

MatrixD unit(Ring r, int n, int i, int j) {
  MatrixD m(r, n, n);
  m.set(i, j, Scalar::one(r));
  return m;
}

MatrixD ratvec(int n, std::initializer_list<long> entries) {
  MatrixD v(Ring::Rat, n, 1);
  int i = 0;
  for (long e : entries) v.set(i++, 0, Scalar::rat(e));
  return v;
}

}  // namespace

TEST_CASE("orbit span and invariant closure") {
  auto gl2 = AmbientAlgebra::gl(Ring::Rat, 2);
  MatrixLieSubalgebra b2 =
      flag_stabilizer(coord_flag(Ring::Rat, 2, {{0}}), gl2);

  MatrixD e2 = MatrixD::basis_vector(Ring::Rat, 2, 1);
  CHECK(orbit_span(b2, e2) == Subspace::full(Ring::Rat, 2));
  CHECK(orbit_span(b2, MatrixD(Ring::Rat, 2, 1)).dim() == 0);

  // A single strictly-upper generator in gl(3): the plain image of e2 is the
  // line e1, the invariant closure adjoins e2 itself but nothing more.
  auto gl3 = AmbientAlgebra::gl(Ring::Rat, 3);
  MatrixLieSubalgebra strict(
      gl3, MatSpan::span(Ring::Rat, Ring::Rat, 3, 3, {unit(Ring::Rat, 3, 0, 1)}));
  MatrixD f2 = MatrixD::basis_vector(Ring::Rat, 3, 1);
  CHECK(orbit_span(strict, f2) == Subspace::coordinate(Ring::Rat, 3, {0}));
  CHECK(invariant_closure(strict, f2) == Subspace::coordinate(Ring::Rat, 3, {0, 1}));

  CHECK_THROWS_AS(orbit_span(b2, MatrixD::basis_vector(Ring::Rat, 3, 0)), DimensionError);
}

TEST_CASE("chain recovery from general linear stabilizers") {
  auto gl3 = AmbientAlgebra::gl(Ring::Rat, 3);

  // The upper triangulars recover the complete coordinate flag and its perp
  // chain on the dual side.
  GeneralizedFlag full3 = coord_flag(Ring::Rat, 3, {{0}, {0, 1}});
  ChainRecovery rec = recover_chain_gl(flag_stabilizer(full3, gl3));
  REQUIRE(rec.is_chain);
  CHECK(rec.on_v == full3);
  CHECK(rec.on_w.length() == 4);
  CHECK(rec.on_w.has_member(Subspace::coordinate(Ring::Rat, 3, {1, 2})));
  CHECK(rec.on_w.has_member(Subspace::coordinate(Ring::Rat, 3, {2})));

  // A non-coordinate line: the candidate walk must find it.
  Subspace skew_line = Subspace::span(ratvec(3, {1, 2, 3}));
  GeneralizedFlag skew_flag = GeneralizedFlag::from_members(Ring::Rat, 3, {skew_line});
  ChainRecovery rec2 = recover_chain_gl(flag_stabilizer(skew_flag, gl3));
  REQUIRE(rec2.is_chain);
  CHECK(rec2.on_v == skew_flag);

  // The diagonal torus preserves two incomparable lines.
  auto gl2 = AmbientAlgebra::gl(Ring::Rat, 2);
  MatrixLieSubalgebra torus(
      gl2, MatSpan::span(Ring::Rat, Ring::Rat, 2, 2,
                         {unit(Ring::Rat, 2, 0, 0), unit(Ring::Rat, 2, 1, 1)}));
  ChainRecovery bad = recover_chain_gl(torus);
  CHECK(!bad.is_chain);
  CHECK(!bad.obstruction.empty());
  REQUIRE(bad.incomparable_pair.has_value());
  CHECK(bad.incomparable_pair->first.dim() == 1);
  CHECK(bad.incomparable_pair->second.dim() == 1);

  // Symplectic stabilizers recover perp-closed chains.
  auto sp2 = AmbientAlgebra::sp(Ring::Rat, 2);
  GeneralizedFlag line4 = coord_flag(Ring::Rat, 4, {{0}});
  ChainRecovery rsp = recover_chain_gl(flag_stabilizer(line4, sp2));
  REQUIRE(rsp.is_chain);
  CHECK(rsp.on_v.length() == 4);
  CHECK(rsp.on_v.has_member(sp2->form()->perp(Subspace::coordinate(Ring::Rat, 4, {0}))));

  // Orthogonal ambients go through the dedicated recovery.
  auto so4 = AmbientAlgebra::so(Ring::Rat, 4);
  CHECK_THROWS_AS(recover_chain_gl(full_subalgebra(so4)), UnsupportedShapeError);
}

TEST_CASE("orthogonal recovery: unique chain cases") {
  auto so6 = AmbientAlgebra::so(Ring::Rat, 6);

  // An isotropic line sits at corank four: the chain is unique.
  SoRecovery line = recover_flags_so(flag_stabilizer(coord_flag(Ring::Rat, 6, {{0}}), so6));
  REQUIRE(line.ok);
  CHECK(!line.ambiguous);
  REQUIRE(line.flags.size() == 1);
  CHECK(line.flags[0].length() == 4);
  CHECK(line.flags[0].has_member(Subspace::coordinate(Ring::Rat, 6, {0})));
  CHECK(line.flags[0].has_member(so6->form()->perp(Subspace::coordinate(Ring::Rat, 6, {0}))));

  // Odd rank never has the corank-two split.
  auto so5 = AmbientAlgebra::so(Ring::Rat, 5);
  SoRecovery plane5 = recover_flags_so(flag_stabilizer(coord_flag(Ring::Rat, 5, {{0, 1}}), so5));
  REQUIRE(plane5.ok);
  CHECK(!plane5.ambiguous);
  REQUIRE(plane5.flags.size() == 1);
  CHECK(plane5.flags[0].length() == 4);

  // The whole algebra recovers the trivial flag.
  SoRecovery whole = recover_flags_so(full_subalgebra(so6));
  REQUIRE(whole.ok);
  CHECK(whole.flags.size() == 1);
  CHECK(whole.flags[0].length() == 2);
}

TEST_CASE("orthogonal recovery: corank-two trichotomy") {
  auto so6 = AmbientAlgebra::so(Ring::Rat, 6);
  MatrixLieSubalgebra p = flag_stabilizer(coord_flag(Ring::Rat, 6, {{0, 1}}), so6);
  CHECK(p.dim() == 10);

  SoRecovery rec = recover_flags_so(p);
  REQUIRE(rec.ok);
  CHECK(rec.ambiguous);
  REQUIRE(rec.flags.size() == 3);

  Subspace L = Subspace::coordinate(Ring::Rat, 6, {0, 1});
  Subspace Lperp = Subspace::coordinate(Ring::Rat, 6, {0, 1, 2, 3});
  REQUIRE(rec.state.core.has_value());
  CHECK(*rec.state.core == L);
  CHECK(rec.state.isotropic_union == Lperp);

  // The two maximal isotropic extensions over the core.
  Subspace M1 = Subspace::coordinate(Ring::Rat, 6, {0, 1, 2});
  Subspace M2 = Subspace::coordinate(Ring::Rat, 6, {0, 1, 3});
  REQUIRE(rec.state.max_iso_first.has_value());
  REQUIRE(rec.state.max_iso_second.has_value());
  bool forward = *rec.state.max_iso_first == M1 && *rec.state.max_iso_second == M2;
  bool backward = *rec.state.max_iso_first == M2 && *rec.state.max_iso_second == M1;
  CHECK((forward || backward));

  // Base flag plus the two one-member extensions.
  CHECK(rec.flags[0].length() == 4);
  CHECK(rec.flags[1].length() == 5);
  CHECK(rec.flags[2].length() == 5);
  CHECK(rec.flags[0].has_member(L));
  CHECK(rec.flags[0].has_member(Lperp));

  // All three flags cut the same stabilizer.
  for (const GeneralizedFlag& f : rec.flags)
    CHECK(flag_stabilizer(f, so6).span() == p.span());
}

TEST_CASE("orthogonal recovery: obstructions") {
  auto so6 = AmbientAlgebra::so(Ring::Rat, 6);

  // The diagonal torus leaves every coordinate line invariant; their union
  // is the whole space, which no corank-two core explains.
  MatrixD d1 = unit(Ring::Rat, 6, 0, 0) - unit(Ring::Rat, 6, 5, 5);
  MatrixD d2 = unit(Ring::Rat, 6, 1, 1) - unit(Ring::Rat, 6, 4, 4);
  MatrixD d3 = unit(Ring::Rat, 6, 2, 2) - unit(Ring::Rat, 6, 3, 3);
  MatrixLieSubalgebra torus(so6,
                            MatSpan::span(Ring::Rat, Ring::Rat, 6, 6, {d1, d2, d3}));
  SoRecovery bad = recover_flags_so(torus);
  CHECK(!bad.ok);
  CHECK(!bad.obstruction.empty());

  // Stabilizing two incomparable isotropic lines whose sum is still
  // isotropic: a chain obstruction with an explicit witness pair.
  MatrixLieSubalgebra p1 = flag_stabilizer(coord_flag(Ring::Rat, 6, {{0}}), so6);
  MatrixLieSubalgebra p2 = flag_stabilizer(coord_flag(Ring::Rat, 6, {{1}}), so6);
  MatrixLieSubalgebra both(so6, p1.span().intersect(p2.span()));
  CHECK(both.is_bracket_closed());
  SoRecovery pairbad = recover_flags_so(both);
  CHECK(!pairbad.ok);
  REQUIRE(pairbad.incomparable_pair.has_value());
  CHECK(pairbad.incomparable_pair->first != pairbad.incomparable_pair->second);
  CHECK(!pairbad.obstruction.empty());
}

TEST_CASE("parabolic test accepts flag stabilizers in every family") {
  // Blocks (1, 2) in gl(3).
  auto gl3 = AmbientAlgebra::gl(Ring::Rat, 3);
  GeneralizedFlag f = coord_flag(Ring::Rat, 3, {{0}});
  ParabolicReport r = is_parabolic(flag_stabilizer(f, gl3));
  CHECK(r.parabolic);
  CHECK(r.obstruction == ObstructionKind::None);
  REQUIRE(r.flags.size() == 1);
  CHECK(r.flags[0] == f);
  REQUIRE(r.dual_flag.has_value());
  CHECK(r.dual_flag->has_member(Subspace::coordinate(Ring::Rat, 3, {1, 2})));
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->witness.dim() == 6);

  // A conjugated, non-coordinate parabolic.
  Subspace v1 = Subspace::span(ratvec(3, {1, 1, 0}));
  Subspace v2 = Subspace::span(Ring::Rat, 3, {ratvec(3, {1, 1, 0}), ratvec(3, {0, 1, 1})});
  GeneralizedFlag g = GeneralizedFlag::from_members(Ring::Rat, 3, {v1, v2});
  ParabolicReport rg = is_parabolic(flag_stabilizer(g, gl3));
  CHECK(rg.parabolic);
  CHECK(rg.flags[0] == g);

  // The whole algebra is the stabilizer of the trivial flag.
  ParabolicReport rw = is_parabolic(full_subalgebra(gl3));
  CHECK(rw.parabolic);
  CHECK(rw.flags[0].length() == 2);

  // sl(2)'s upper triangulars inside the sl ambient.
  auto sl2 = AmbientAlgebra::sl(Ring::Rat, 2);
  ParabolicReport rs = is_parabolic(flag_stabilizer(coord_flag(Ring::Rat, 2, {{0}}), sl2));
  CHECK(rs.parabolic);
  CHECK(rs.certificate->witness.dim() == 2);

  // Symplectic line stabilizer: the recovered flag is perp-closed.
  auto sp2 = AmbientAlgebra::sp(Ring::Rat, 2);
  ParabolicReport rp = is_parabolic(flag_stabilizer(coord_flag(Ring::Rat, 4, {{0}}), sp2));
  CHECK(rp.parabolic);
  CHECK(rp.flags[0].length() == 4);
  CHECK(rp.certificate->witness.dim() == 6);

  // Quaternionic line stabilizer in gl(2, H): the verdict is ring-uniform,
  // but the diagonal quaternion torus contains the imaginary units, so no
  // solvable witness exists and the certificate is absent.
  auto glh = AmbientAlgebra::gl(Ring::Quat, 2);
  ParabolicReport rq = is_parabolic(flag_stabilizer(coord_flag(Ring::Quat, 2, {{0}}), glh));
  CHECK(rq.parabolic);
  CHECK(rq.flags[0].has_member(Subspace::coordinate(Ring::Quat, 2, {0})));
  CHECK(!rq.certificate.has_value());
}

TEST_CASE("parabolic test rejects non-stabilizers with typed obstructions") {
  auto gl2 = AmbientAlgebra::gl(Ring::Rat, 2);

  // sl(2) preserves no proper subspace: the recovered trivial flag has a
  // larger stabilizer.
  MatrixLieSubalgebra sl2_in_gl(gl2, AmbientAlgebra::sl(Ring::Rat, 2)->span());
  ParabolicReport r1 = is_parabolic(sl2_in_gl);
  CHECK(!r1.parabolic);
  CHECK(r1.obstruction == ObstructionKind::StabilizerMismatch);
  CHECK(!r1.obstruction_detail.empty());

  // The diagonal torus: incomparable invariant lines.
  MatrixLieSubalgebra torus(
      gl2, MatSpan::span(Ring::Rat, Ring::Rat, 2, 2,
                         {unit(Ring::Rat, 2, 0, 0), unit(Ring::Rat, 2, 1, 1)}));
  ParabolicReport r2 = is_parabolic(torus);
  CHECK(!r2.parabolic);
  CHECK(r2.obstruction == ObstructionKind::NotAChain);
  REQUIRE(r2.incomparable_pair.has_value());

  // The strictly-upper line recovers the right chain but is far from the
  // full stabilizer.
  MatrixLieSubalgebra strict(
      gl2, MatSpan::span(Ring::Rat, Ring::Rat, 2, 2, {unit(Ring::Rat, 2, 0, 1)}));
  ParabolicReport r3 = is_parabolic(strict);
  CHECK(!r3.parabolic);
  CHECK(r3.obstruction == ObstructionKind::StabilizerMismatch);
}

TEST_CASE("parabolic test reports the orthogonal trichotomy") {
  auto so6 = AmbientAlgebra::so(Ring::Rat, 6);
  MatrixLieSubalgebra p = flag_stabilizer(coord_flag(Ring::Rat, 6, {{0, 1}}), so6);

  ParabolicReport r = is_parabolic(p);
  CHECK(r.parabolic);
  REQUIRE(r.flags.size() == 3);
  REQUIRE(r.core.has_value());
  CHECK(*r.core == Subspace::coordinate(Ring::Rat, 6, {0, 1}));
  CHECK(r.max_iso_first.has_value());
  CHECK(r.max_iso_second.has_value());
  CHECK(r.max_iso_first->dim() == 3);
  CHECK(r.max_iso_second->dim() == 3);
  REQUIRE(r.certificate.has_value());
  CHECK(r.certificate->witness.dim() == 9);
  CHECK(p.contains(r.certificate->witness));

  // A line stabilizer recovers a single flag.
  ParabolicReport rl = is_parabolic(flag_stabilizer(coord_flag(Ring::Rat, 6, {{0}}), so6));
  CHECK(rl.parabolic);
  CHECK(rl.flags.size() == 1);
  CHECK(!rl.core.has_value());

  // Odd rank: unique flags only.
  auto so5 = AmbientAlgebra::so(Ring::Rat, 5);
  ParabolicReport r5 = is_parabolic(flag_stabilizer(coord_flag(Ring::Rat, 5, {{0, 1}}), so5));
  CHECK(r5.parabolic);
  CHECK(r5.flags.size() == 1);

  // The whole orthogonal algebra.
  ParabolicReport rw = is_parabolic(full_subalgebra(so6));
  CHECK(rw.parabolic);

  // The orthogonal torus fails with a reported obstruction.
  MatrixD d1 = unit(Ring::Rat, 6, 0, 0) - unit(Ring::Rat, 6, 5, 5);
  MatrixD d2 = unit(Ring::Rat, 6, 1, 1) - unit(Ring::Rat, 6, 4, 4);
  MatrixD d3 = unit(Ring::Rat, 6, 2, 2) - unit(Ring::Rat, 6, 3, 3);
  MatrixLieSubalgebra torus(so6,
                            MatSpan::span(Ring::Rat, Ring::Rat, 6, 6, {d1, d2, d3}));
  ParabolicReport rt = is_parabolic(torus);
  CHECK(!rt.parabolic);
  CHECK(rt.obstruction == ObstructionKind::NotAChain);
  CHECK(!rt.obstruction_detail.empty());
}
