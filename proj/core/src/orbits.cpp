#include "parafin/orbits.hpp"

#include <utility>

#include "parafin/errors.hpp"

namespace parafin {

namespace {

// Row-major flattening of an n x n matrix into an n^2 column.
MatrixD vectorize(const MatrixD& m) {
  MatrixD col(m.ring(), m.rows() * m.cols(), 1);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) col.set(i * m.cols() + j, 0, m.at(i, j));
  return col;
}

// Unique solution y of M y = b for a full-column-rank M, by row reduction of
// the augmented matrix.  AlgebraError when b is not in the column span.
MatrixD solve_in_columns(const MatrixD& m, const MatrixD& b) {
  const int rows = m.rows(), cols = m.cols();
  MatrixD aug(m.ring(), rows, cols + 1);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) aug.set(i, j, m.at(i, j));
    aug.set(i, cols, b.at(i, 0));
  }
  Rref rr = rref_left(aug);
  MatrixD y(m.ring(), cols, 1);
  for (std::size_t t = 0; t < rr.pivot_cols.size(); ++t) {
    if (rr.pivot_cols[t] == cols)
      throw AlgebraError("element does not decompose along the section");
    y.set(rr.pivot_cols[t], 0, rr.mat.at(static_cast<int>(t), cols));
  }
  return y;
}

// Q-span of a complex span: the basis together with its i-multiples.
MatSpan rational_respan(const MatSpan& s) {
  std::vector<MatrixD> gens;
  gens.reserve(2 * s.basis().size());
  for (const MatrixD& b : s.basis()) {
    gens.push_back(b);
    gens.push_back(b.scale_right(Scalar::i(Ring::Gauss)));
  }
  return MatSpan::span(Ring::Gauss, Ring::Rat, s.rows(), s.cols(), gens);
}

}  // namespace

TangentModel::TangentModel(MatrixLieSubalgebra normalizer, RealSubalgebra realform)
    : normalizer_(std::move(normalizer)),
      realform_(std::move(realform)),
      solver_(Ring::Gauss, 0, 0),
      j_action_(Ring::Rat, 0, 0) {
  const AmbientAlgebra& amb = normalizer_.ambient();
  if (amb.ring() != Ring::Gauss)
    throw PreconditionError("tangent models require a complex ambient");
  const AmbientAlgebra& ramb = realform_.ambient();
  if (ramb.n() != amb.n() || ramb.span() != amb.span())
    throw PreconditionError("ambient mismatch between the subalgebra and the real form");
  if (complexify(realform_).span() != amb.span())
    throw PreconditionError("the real algebra is not a real form of the ambient");

  const int n = amb.n();
  const int nn = n * n;

  // Section: ambient basis classes that grow the vectorised normalizer span.
  std::vector<MatrixD> pvecs;
  pvecs.reserve(normalizer_.basis().size());
  for (const MatrixD& b : normalizer_.basis()) pvecs.push_back(vectorize(b));
  Subspace grow = Subspace::span(Ring::Gauss, nn, pvecs);
  std::vector<MatrixD> svecs;
  for (const MatrixD& b : amb.span().basis()) {
    MatrixD v = vectorize(b);
    if (grow.contains(v)) continue;
    grow = grow.sum(Subspace::span(v));
    section_.push_back(b);
    svecs.push_back(std::move(v));
  }
  const int k = static_cast<int>(section_.size());
  if (grow.dim() != amb.dim() || k != amb.dim() - normalizer_.dim())
    throw InternalConsistencyError("tangent section does not complement the normalizer");

  solver_ = MatrixD(Ring::Gauss, nn, k + normalizer_.dim());
  for (int j = 0; j < k; ++j) solver_.set_column(j, svecs[static_cast<std::size_t>(j)]);
  for (std::size_t j = 0; j < pvecs.size(); ++j)
    solver_.set_column(k + static_cast<int>(j), pvecs[j]);

  j_action_ = MatrixD(Ring::Rat, 2 * k, 2 * k);
  for (int t = 0; t < k; ++t) {
    j_action_.set(2 * t, 2 * t + 1, Scalar::rat(-1));
    j_action_.set(2 * t + 1, 2 * t, Scalar::rat(1));
  }
  MatrixD jsq = j_action_ * j_action_;
  for (int a = 0; a < 2 * k; ++a)
    for (int b = 0; b < 2 * k; ++b)
      if (jsq.at(a, b) != Scalar::rat(a == b ? -1 : 0))
        throw InternalConsistencyError("complex structure does not square to -Id");

  std::vector<MatrixD> images;
  images.reserve(realform_.basis().size());
  for (const MatrixD& b : realform_.basis()) images.push_back(real_coordinates(b));
  real_image_ = Subspace::span(Ring::Rat, 2 * k, images);

  real_intersection_dim_ =
      rational_respan(normalizer_.span()).intersect(realform_.span()).dim();
}

MatrixD TangentModel::coordinates(const MatrixD& x) const {
  if (!normalizer_.ambient().contains(x))
    throw AlgebraError("element lies outside the ambient algebra");
  const int k = complex_dim();
  MatrixD y = solve_in_columns(solver_, vectorize(x));
  MatrixD out(Ring::Gauss, k, 1);
  for (int t = 0; t < k; ++t) out.set(t, 0, y.at(t, 0));
  return out;
}

MatrixD TangentModel::real_coordinates(const MatrixD& x) const {
  const int k = complex_dim();
  MatrixD c = coordinates(x);
  MatrixD out(Ring::Rat, 2 * k, 1);
  for (int t = 0; t < k; ++t) {
    out.set(2 * t, 0, Scalar::rat(c.at(t, 0).comp(0)));
    out.set(2 * t + 1, 0, Scalar::rat(c.at(t, 0).comp(1)));
  }
  return out;
}

TangentModel tangent_model(const MatrixLieSubalgebra& ptilde, const RealSubalgebra& realform) {
  return TangentModel(ptilde, realform);
}

bool is_totally_real(const TangentModel& m) {
  const Subspace& tr = m.real_image();
  Subspace jtr = Subspace::span(m.complex_action() * tr.basis());
  bool by_structure = jtr.intersect(tr).dim() == 0;
  bool by_dimension = m.real_intersection_dim() == m.normalizer().dim();
  if (by_structure != by_dimension)
    throw InternalConsistencyError("totally-real criteria disagree");
  return by_structure;
}

CharacterizationReport characterize(const MatrixLieSubalgebra& p, const RealSubalgebra& realform) {
  ParabolicReport pr = is_parabolic(p);
  if (!pr.parabolic)
    throw PreconditionError("characterization requires a parabolic subalgebra: " +
                            (pr.obstruction_detail.empty() ? std::string("not parabolic")
                                                           : pr.obstruction_detail));

  MatrixLieSubalgebra nt = normalizer(p);
  if (nt.dim() != p.dim())
    throw InternalConsistencyError("a parabolic subalgebra must be self-normalizing here");

  CharacterizationReport report;
  TangentModel tm = tangent_model(nt, realform);
  report.totally_real = is_totally_real(tm);
  // No conditions carve p out of its normalizer at finite rank, so the
  // conjugation-stability condition holds vacuously.
  report.tau_stable_traces = true;
  report.verdict = report.totally_real && report.tau_stable_traces;

  report.ambient_dim = p.ambient().dim();
  report.normalizer_dim = nt.dim();
  report.tangent_dim = tm.complex_dim();
  report.tangent_real_dim = tm.real_image().dim();
  report.real_intersection_dim = tm.real_intersection_dim();

  MatSpan cutout = rational_respan(p.span()).intersect(realform.span());
  RealSubalgebra real_p(realform.ambient_ptr(), std::move(cutout), realform.spec());
  report.real_report = is_real_parabolic(real_p);
  if (report.real_report.parabolic != report.verdict)
    throw InternalConsistencyError("tangent criterion disagrees with the real stabilizer test");
  return report;
}

}  // namespace parafin
