#include <doctest.h>

#include <parafin/errors.hpp>
#include <parafin/liealg.hpp>

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

}  // namespace

TEST_CASE("ambient dimensions match the family formulas") {
  CHECK(AmbientAlgebra::gl(Ring::Rat, 3)->dim() == 9);
  CHECK(AmbientAlgebra::sl(Ring::Rat, 3)->dim() == 8);
  CHECK(AmbientAlgebra::so(Ring::Rat, 6)->dim() == 15);
  CHECK(AmbientAlgebra::so(Ring::Rat, 5)->dim() == 10);
  CHECK(AmbientAlgebra::sp(Ring::Rat, 2)->dim() == 10);
  CHECK(AmbientAlgebra::sp(Ring::Rat, 3)->dim() == 21);

  // Quaternionic ambients are Q-spans: four rational dofs per entry.
  CHECK(AmbientAlgebra::gl(Ring::Quat, 2)->dim() == 16);
  CHECK(AmbientAlgebra::sl(Ring::Quat, 2)->dim() == 15);

  // Gaussian ambients count over Q(i).
  CHECK(AmbientAlgebra::gl(Ring::Gauss, 3)->dim() == 9);
  CHECK(AmbientAlgebra::so(Ring::Gauss, 4)->dim() == 6);

  CHECK(AmbientAlgebra::so(Ring::Rat, 6)->form()->kind() == SesquiKind::SymBilinear);
  CHECK(AmbientAlgebra::sp(Ring::Rat, 2)->form()->kind() == SesquiKind::AltBilinear);
  CHECK(AmbientAlgebra::sp(Ring::Rat, 2)->n() == 4);
  CHECK(AmbientAlgebra::sp(Ring::Rat, 2)->rank_param() == 2);

  // Bilinear forms have no quaternionic model.
  CHECK_THROWS_AS(AmbientAlgebra::so(Ring::Quat, 4), FormError);
}

TEST_CASE("ambient spans are bracket closed and form-compatible") {
  for (auto amb : {AmbientAlgebra::so(Ring::Rat, 5), AmbientAlgebra::sp(Ring::Rat, 2),
                   AmbientAlgebra::sl(Ring::Rat, 3)}) {
    MatrixLieSubalgebra whole = full_subalgebra(amb);
    CHECK(whole.is_bracket_closed());
  }
  // Every so element is skew for the form: <x v, w> = -<v, x w>.
  auto so6 = AmbientAlgebra::so(Ring::Rat, 6);
  const SesquiStructure& form = *so6->form();
  MatrixD v = MatrixD::basis_vector(Ring::Rat, 6, 0) + MatrixD::basis_vector(Ring::Rat, 6, 3);
  MatrixD w = MatrixD::basis_vector(Ring::Rat, 6, 2);
  for (const MatrixD& x : so6->span().basis())
    CHECK(form.eval(x * v, w) + form.eval(v, x * w) == Scalar::zero(Ring::Rat));
}

TEST_CASE("flag stabilizer dimensions in each family") {
  // Full coordinate flag in gl(3): upper triangular.
  auto gl3 = AmbientAlgebra::gl(Ring::Rat, 3);
  GeneralizedFlag full3 = coord_flag(Ring::Rat, 3, {{0}, {0, 1}});
  MatrixLieSubalgebra b3 = flag_stabilizer(full3, gl3);
  CHECK(b3.dim() == 6);
  CHECK(b3.is_bracket_closed());
  CHECK(b3.shape().has_value());
  CHECK(b3.shape()->on_v == full3);
  CHECK(b3.shape()->on_w.has_value());

  // A single line in gl(3).
  GeneralizedFlag line3 = coord_flag(Ring::Rat, 3, {{0}});
  CHECK(flag_stabilizer(line3, gl3).dim() == 7);

  // The same line inside sl(3): one trace condition less.
  auto sl3 = AmbientAlgebra::sl(Ring::Rat, 3);
  CHECK(flag_stabilizer(line3, sl3).dim() == 6);

  // so(6), isotropic plane <e1,e2>: Levi gl(2) x so(2) plus a 5-dim
  // nilpotent part.
  auto so6 = AmbientAlgebra::so(Ring::Rat, 6);
  GeneralizedFlag plane6 = coord_flag(Ring::Rat, 6, {{0, 1}});
  MatrixLieSubalgebra p_plane = flag_stabilizer(plane6, so6);
  CHECK(p_plane.dim() == 10);
  CHECK(p_plane.is_bracket_closed());
  // The recorded shape is the perp-completed chain 0 < L < perp L < V.
  REQUIRE(p_plane.shape().has_value());
  CHECK(p_plane.shape()->on_v.length() == 4);
  CHECK(p_plane.shape()->on_v.has_member(so6->form()->perp(Subspace::coordinate(Ring::Rat, 6, {0, 1}))));

  // so(6), isotropic line.
  GeneralizedFlag line6 = coord_flag(Ring::Rat, 6, {{0}});
  CHECK(flag_stabilizer(line6, so6).dim() == 11);

  // sp(2), isotropic line: Levi gl(1) x sp(1) plus a 3-dim nilpotent part.
  auto sp2 = AmbientAlgebra::sp(Ring::Rat, 2);
  GeneralizedFlag line4 = coord_flag(Ring::Rat, 4, {{0}});
  CHECK(flag_stabilizer(line4, sp2).dim() == 7);

  // Trivial flags stabilize to the whole ambient.
  CHECK(flag_stabilizer(GeneralizedFlag::trivial(Ring::Rat, 6), so6).dim() == 15);

  // Quaternionic line in gl(2, H): a 12-dimensional Q-span.
  auto glh = AmbientAlgebra::gl(Ring::Quat, 2);
  CHECK(flag_stabilizer(coord_flag(Ring::Quat, 2, {{0}}), glh).dim() == 12);
}

TEST_CASE("explicit dual flags cut further than the perp chain") {
  auto gl2 = AmbientAlgebra::gl(Ring::Rat, 2);
  GeneralizedFlag on_v = coord_flag(Ring::Rat, 2, {{0}});

  // The perp chain itself adds nothing.
  GeneralizedFlag perp_w = coord_flag(Ring::Rat, 2, {{1}});
  MatrixLieSubalgebra same = flag_stabilizer(on_v, perp_w, gl2);
  CHECK(same.dim() == 3);
  CHECK(same.shape().has_value());

  // A non-perp dual flag genuinely cuts: only the diagonal preserves the
  // line e1 on both sides, and the couple is not stabilizer-shaped.
  GeneralizedFlag skew_w = coord_flag(Ring::Rat, 2, {{0}});
  MatrixLieSubalgebra cutdown = flag_stabilizer(on_v, skew_w, gl2);
  CHECK(cutdown.dim() == 2);
  CHECK(!cutdown.shape().has_value());

  // Dual flags are a paired-family notion.
  auto so4 = AmbientAlgebra::so(Ring::Rat, 4);
  CHECK_THROWS_AS(flag_stabilizer(coord_flag(Ring::Rat, 4, {{0}}),
                                  coord_flag(Ring::Rat, 4, {{1}}), so4),
                  UnsupportedShapeError);
}

TEST_CASE("bracket closure grows generators to the smallest closed span") {
  auto gl2 = AmbientAlgebra::gl(Ring::Rat, 2);
  MatrixLieSubalgebra closed =
      bracket_closure({unit(Ring::Rat, 2, 0, 1), unit(Ring::Rat, 2, 1, 0)}, gl2);
  CHECK(closed.dim() == 3);
  CHECK(closed.span() == AmbientAlgebra::sl(Ring::Rat, 2)->span());

  // A generator with nonzero trace cannot live in the sl ambient.
  auto sl2 = AmbientAlgebra::sl(Ring::Rat, 2);
  CHECK_THROWS_AS(bracket_closure({unit(Ring::Rat, 2, 0, 0)}, sl2), AlgebraError);
}

TEST_CASE("derived length and solvability") {
  auto gl3 = AmbientAlgebra::gl(Ring::Rat, 3);
  MatrixLieSubalgebra b3 = flag_stabilizer(coord_flag(Ring::Rat, 3, {{0}, {0, 1}}), gl3);
  auto len = derived_length(b3);
  REQUIRE(len.has_value());
  CHECK(*len == 3);

  CHECK(!is_solvable(full_subalgebra(gl3)));
  CHECK(!is_solvable(full_subalgebra(AmbientAlgebra::so(Ring::Rat, 6))));

  MatrixLieSubalgebra zero(gl3, MatSpan::zero(Ring::Rat, Ring::Rat, 3, 3));
  CHECK(derived_length(zero) == 0);
}

TEST_CASE("solvable radical of parabolic and reductive hosts") {
  auto gl3 = AmbientAlgebra::gl(Ring::Rat, 3);

  // Block upper triangular with blocks (1, 2): nilpotent part 2, center of
  // the Levi gl(1) x gl(2) another 2.
  MatrixLieSubalgebra p12 = flag_stabilizer(coord_flag(Ring::Rat, 3, {{0}}), gl3);
  MatrixLieSubalgebra rad = solvable_radical(p12);
  CHECK(rad.dim() == 4);
  CHECK(is_solvable(rad));
  MatrixD block_scalar(Ring::Rat, 3, 3);
  block_scalar.set(0, 0, Scalar::one(Ring::Rat));
  CHECK(rad.contains(block_scalar));
  CHECK(rad.contains(unit(Ring::Rat, 3, 0, 1)));
  CHECK(rad.contains(unit(Ring::Rat, 3, 0, 2)));
  CHECK(!rad.contains(unit(Ring::Rat, 3, 1, 2)));

  // A solvable algebra is its own radical.
  auto gl2 = AmbientAlgebra::gl(Ring::Rat, 2);
  MatrixLieSubalgebra b2 = flag_stabilizer(coord_flag(Ring::Rat, 2, {{0}}), gl2);
  CHECK(solvable_radical(b2).span() == b2.span());

  // gl(2) has the scalars as radical; sl(2) and so(6) are semisimple.
  CHECK(solvable_radical(full_subalgebra(gl2)).dim() == 1);
  CHECK(solvable_radical(full_subalgebra(AmbientAlgebra::sl(Ring::Rat, 2))).dim() == 0);
  CHECK(solvable_radical(full_subalgebra(AmbientAlgebra::so(Ring::Rat, 6))).dim() == 0);
}

TEST_CASE("nilpotent part of stabilizer-shaped subalgebras") {
  auto gl2 = AmbientAlgebra::gl(Ring::Rat, 2);
  MatrixLieSubalgebra b2 = flag_stabilizer(coord_flag(Ring::Rat, 2, {{0}}), gl2);
  MatrixLieSubalgebra n2 = linear_nilradical(b2);
  CHECK(n2.dim() == 1);
  CHECK(n2.contains(unit(Ring::Rat, 2, 0, 1)));

  // The whole algebra stabilizes only the trivial flag: nothing is pushed
  // strictly down.
  auto gl3 = AmbientAlgebra::gl(Ring::Rat, 3);
  CHECK(linear_nilradical(full_subalgebra(gl3)).dim() == 0);

  // Blocks (1, 2) in gl(3).
  MatrixLieSubalgebra p12 = flag_stabilizer(coord_flag(Ring::Rat, 3, {{0}}), gl3);
  CHECK(linear_nilradical(p12).dim() == 2);

  // so(6) parabolics, through the perp-completed shape.
  auto so6 = AmbientAlgebra::so(Ring::Rat, 6);
  CHECK(linear_nilradical(flag_stabilizer(coord_flag(Ring::Rat, 6, {{0, 1}}), so6)).dim() == 5);
  CHECK(linear_nilradical(flag_stabilizer(coord_flag(Ring::Rat, 6, {{0}}), so6)).dim() == 4);

  // A bare span carries no stabilizer shape.
  MatrixLieSubalgebra bare(gl2, MatSpan::span(Ring::Rat, Ring::Rat, 2, 2, {unit(Ring::Rat, 2, 0, 1)}));
  CHECK_THROWS_AS(linear_nilradical(bare), UnsupportedShapeError);
}

TEST_CASE("trace condition space and its joint kernels") {
  // Upper triangular in gl(2): two independent diagonal functionals.
  auto gl2 = AmbientAlgebra::gl(Ring::Rat, 2);
  MatrixLieSubalgebra b2 = flag_stabilizer(coord_flag(Ring::Rat, 2, {{0}}), gl2);
  TraceConditionSpace tcs = trace_condition_space(b2);
  CHECK(tcs.dim() == 2);

  // Functionals vanish on brackets and on the nilpotent part.
  MatrixD x = unit(Ring::Rat, 2, 0, 0) + unit(Ring::Rat, 2, 0, 1);
  MatrixD y = unit(Ring::Rat, 2, 1, 1) - unit(Ring::Rat, 2, 0, 1);
  for (int t = 0; t < tcs.dim(); ++t) {
    CHECK(tcs.apply(t, bracket(x, y)).is_zero());
    CHECK(tcs.apply(t, unit(Ring::Rat, 2, 0, 1)).is_zero());
  }

  // Killing every functional leaves exactly the strictly-upper part.
  MatrixLieSubalgebra kernel = tcs.joint_kernel();
  CHECK(kernel.dim() == 1);
  CHECK(kernel.contains(unit(Ring::Rat, 2, 0, 1)));
  // The shape survives, so the nilpotent part is still available.
  CHECK(linear_nilradical(kernel).dim() == 1);

  // gl(n) carries exactly the trace; its kernel is the sl ambient span.
  auto gl3 = AmbientAlgebra::gl(Ring::Rat, 3);
  TraceConditionSpace tgl = trace_condition_space(full_subalgebra(gl3));
  CHECK(tgl.dim() == 1);
  CHECK(tgl.joint_kernel().span() == AmbientAlgebra::sl(Ring::Rat, 3)->span());

  // Perfect hosts have none.
  CHECK(trace_condition_space(full_subalgebra(AmbientAlgebra::sl(Ring::Rat, 3))).dim() == 0);
  CHECK(trace_condition_space(full_subalgebra(AmbientAlgebra::so(Ring::Rat, 6))).dim() == 0);

  // Over H(Q) the single condition is the real trace.
  auto glh = AmbientAlgebra::gl(Ring::Quat, 2);
  TraceConditionSpace th = trace_condition_space(full_subalgebra(glh));
  CHECK(th.dim() == 1);
  CHECK(th.joint_kernel().span() == AmbientAlgebra::sl(Ring::Quat, 2)->span());
}

TEST_CASE("borel dimension table") {
  CHECK(borel_dimension(Family::GL, 3) == 6);
  CHECK(borel_dimension(Family::SL, 3) == 5);
  CHECK(borel_dimension(Family::SO, 6) == 9);
  CHECK(borel_dimension(Family::SO, 5) == 6);
  CHECK(borel_dimension(Family::SO, 7) == 12);
  CHECK(borel_dimension(Family::SP, 2) == 6);
  CHECK(borel_dimension(Family::SP, 3) == 12);
}

TEST_CASE("borel certificates by isotropic refinement") {
  // gl(3): refine the trivial flag to a complete one.
  auto gl3 = AmbientAlgebra::gl(Ring::Rat, 3);
  BorelCertificate c = certify_borel(GeneralizedFlag::trivial(Ring::Rat, 3), gl3);
  CHECK(c.witness.dim() == 6);
  CHECK(c.refinement.length() == 4);
  CHECK(c.witness_derived_length == 3);

  // Refinements pass through the given members, so the witness sits inside
  // the flag's own stabilizer.
  GeneralizedFlag partial = coord_flag(Ring::Rat, 3, {{0, 1}});
  BorelCertificate cp = certify_borel(partial, gl3);
  CHECK(cp.refinement.has_member(Subspace::coordinate(Ring::Rat, 3, {0, 1})));
  CHECK(flag_stabilizer(partial, gl3).contains(cp.witness));

  // sl(3).
  CHECK(certify_borel(GeneralizedFlag::trivial(Ring::Rat, 3), AmbientAlgebra::sl(Ring::Rat, 3))
            .witness.dim() == 5);

  // so(6), so(5), sp(2): complete isotropic flags with their perps.
  auto so6 = AmbientAlgebra::so(Ring::Rat, 6);
  BorelCertificate c6 = certify_borel(GeneralizedFlag::trivial(Ring::Rat, 6), so6);
  CHECK(c6.witness.dim() == 9);
  BorelCertificate c6p = certify_borel(coord_flag(Ring::Rat, 6, {{0, 1}}), so6);
  CHECK(c6p.witness.dim() == 9);
  CHECK(flag_stabilizer(coord_flag(Ring::Rat, 6, {{0, 1}}), so6).contains(c6p.witness));

  CHECK(certify_borel(GeneralizedFlag::trivial(Ring::Rat, 5), AmbientAlgebra::so(Ring::Rat, 5))
            .witness.dim() == 6);
  CHECK(certify_borel(GeneralizedFlag::trivial(Ring::Rat, 4), AmbientAlgebra::sp(Ring::Rat, 2))
            .witness.dim() == 6);

  // A definite form has no isotropic vectors over Q: no refinement exists.
  auto so3def = AmbientAlgebra::so(Ring::Rat, 3, MatrixD::identity(Ring::Rat, 3));
  CHECK_THROWS_AS(certify_borel(GeneralizedFlag::trivial(Ring::Rat, 3), so3def), FormError);

  // A member that is neither isotropic nor coisotropic blocks refinement.
  auto so4 = AmbientAlgebra::so(Ring::Rat, 4);
  std::vector<Subspace> bad{Subspace::span(MatrixD::basis_vector(Ring::Rat, 4, 1) +
                                           MatrixD::basis_vector(Ring::Rat, 4, 2))};
  GeneralizedFlag badf = GeneralizedFlag::from_members(Ring::Rat, 4, bad);
  CHECK_THROWS_AS(certify_borel(badf, so4), FormError);

  // Over Q(i) the definite gram splits and the certificate exists.
  auto so4i = AmbientAlgebra::so(Ring::Gauss, 4, MatrixD::identity(Ring::Gauss, 4));
  CHECK(certify_borel(GeneralizedFlag::trivial(Ring::Gauss, 4), so4i).witness.dim() == 4);

  // No quaternionic complete-flag stabilizer is solvable.
  CHECK_THROWS_AS(certify_borel(GeneralizedFlag::trivial(Ring::Quat, 2),
                                AmbientAlgebra::gl(Ring::Quat, 2)),
                  UnsupportedShapeError);
}

TEST_CASE("normalizers") {
  auto gl2 = AmbientAlgebra::gl(Ring::Rat, 2);
  MatrixLieSubalgebra b2 = flag_stabilizer(coord_flag(Ring::Rat, 2, {{0}}), gl2);

  // Parabolics are self-normalizing.
  CHECK(normalizer(b2).span() == b2.span());

  // The zero subalgebra is normalized by everything.
  MatrixLieSubalgebra zero(gl2, MatSpan::zero(Ring::Rat, Ring::Rat, 2, 2));
  CHECK(normalizer(zero).dim() == 4);

  // The strictly-upper line is normalized exactly by the upper triangulars.
  MatrixLieSubalgebra strict(gl2,
                             MatSpan::span(Ring::Rat, Ring::Rat, 2, 2, {unit(Ring::Rat, 2, 0, 1)}));
  CHECK(normalizer(strict).span() == b2.span());

  // Ideals are normalized by everything: sl(2) inside gl(2).
  MatrixLieSubalgebra sl2_in_gl(gl2, AmbientAlgebra::sl(Ring::Rat, 2)->span());
  CHECK(normalizer(sl2_in_gl).dim() == 4);
}
