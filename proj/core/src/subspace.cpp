#include "parafin/subspace.hpp"

#include <algorithm>

#include "parafin/errors.hpp"

namespace parafin {

namespace {

int first_nonzero_row(const MatrixD& v) {
  for (int i = 0; i < v.rows(); ++i)
    if (!v.at(i, 0).is_zero()) return i;
  return -1;
}

// Incremental reduced column-echelon accumulator.  Scalars multiply columns
// on the right throughout, so the span is the right D-module generated by
// the inserted vectors even over H(Q).
struct Echelon {
  std::vector<MatrixD> cols;
  std::vector<int> pivots;  // pivots[t] = pivot row of cols[t], strictly increasing

  void insert(MatrixD v) {
    for (std::size_t t = 0; t < cols.size(); ++t) {
      const Scalar& lam = v.at(pivots[t], 0);
      if (!lam.is_zero()) v = v - cols[t].scale_right(lam);
    }
    int r = first_nonzero_row(v);
    if (r < 0) return;
    v = v.scale_right(v.at(r, 0).inverse());
    for (std::size_t t = 0; t < cols.size(); ++t) {
      const Scalar& lam = cols[t].at(r, 0);
      if (!lam.is_zero()) cols[t] = cols[t] - v.scale_right(lam);
    }
    auto pos = std::upper_bound(pivots.begin(), pivots.end(), r) - pivots.begin();
    pivots.insert(pivots.begin() + pos, r);
    cols.insert(cols.begin() + pos, std::move(v));
  }
};

}  // namespace

Subspace Subspace::zero(Ring r, int ambient) {
  Subspace s;
  s.ring_ = r;
  s.ambient_ = ambient;
  s.basis_ = MatrixD(r, ambient, 0);
  return s;
}

Subspace Subspace::full(Ring r, int ambient) { return span(MatrixD::identity(r, ambient)); }

Subspace Subspace::span(const MatrixD& cols) {
  Echelon e;
  for (int j = 0; j < cols.cols(); ++j) e.insert(cols.column(j));
  Subspace s;
  s.ring_ = cols.ring();
  s.ambient_ = cols.rows();
  s.basis_ = MatrixD(cols.ring(), cols.rows(), static_cast<int>(e.cols.size()));
  for (std::size_t t = 0; t < e.cols.size(); ++t) s.basis_.set_column(static_cast<int>(t), e.cols[t]);
  s.pivots_ = std::move(e.pivots);
  return s;
}

Subspace Subspace::span(Ring r, int ambient, const std::vector<MatrixD>& col_vectors) {
  MatrixD m(r, ambient, static_cast<int>(col_vectors.size()));
  for (std::size_t j = 0; j < col_vectors.size(); ++j) {
    if (col_vectors[j].rows() != ambient || col_vectors[j].cols() != 1)
      throw DimensionError("span generator is not an ambient-length column");
    m.set_column(static_cast<int>(j), col_vectors[j]);
  }
  return span(m);
}

Subspace Subspace::coordinate(Ring r, int ambient, std::initializer_list<int> indices) {
  MatrixD m(r, ambient, static_cast<int>(indices.size()));
  int j = 0;
  for (int idx : indices) m.set_column(j++, MatrixD::basis_vector(r, ambient, idx));
  return span(m);
}

MatrixD Subspace::reduce(const MatrixD& v) const {
  if (v.rows() != ambient_ || v.cols() != 1) throw DimensionError("vector/ambient mismatch");
  if (v.ring() != ring_) throw TagMismatchError("vector ring differs from subspace ring");
  MatrixD w = v;
  for (int t = 0; t < basis_.cols(); ++t) {
    const Scalar& lam = w.at(pivots_[t], 0);
    if (!lam.is_zero()) w = w - basis_.column(t).scale_right(lam);
  }
  return w;
}

bool Subspace::contains(const MatrixD& v) const { return reduce(v).is_zero(); }

bool Subspace::contains(const Subspace& o) const {
  if (o.ring_ != ring_ || o.ambient_ != ambient_)
    throw TagMismatchError("subspace comparison across different ambients");
  for (int j = 0; j < o.basis_.cols(); ++j)
    if (!contains(o.basis_.column(j))) return false;
  return true;
}

bool Subspace::operator==(const Subspace& o) const {
  return ring_ == o.ring_ && ambient_ == o.ambient_ && basis_ == o.basis_;
}

std::optional<MatrixD> Subspace::coordinates(const MatrixD& v) const {
  MatrixD w = v;
  MatrixD c(ring_, dim(), 1);
  for (int t = 0; t < basis_.cols(); ++t) {
    const Scalar& lam = w.at(pivots_[t], 0);
    if (!lam.is_zero()) {
      c.set(t, 0, lam);
      w = w - basis_.column(t).scale_right(lam);
    }
  }
  if (!w.is_zero()) return std::nullopt;
  return c;
}

Subspace Subspace::sum(const Subspace& o) const {
  if (o.ring_ != ring_ || o.ambient_ != ambient_) throw TagMismatchError("subspace sum mismatch");
  return span(basis_.hstack(o.basis_));
}

Subspace Subspace::intersect(const Subspace& o) const {
  if (o.ring_ != ring_ || o.ambient_ != ambient_)
    throw TagMismatchError("subspace intersection mismatch");
  // v in both spans iff v = A a = B b; read a off the kernel of [A | -B].
  Subspace ker = right_kernel(basis_.hstack(-o.basis_));
  MatrixD gens(ring_, ambient_, ker.dim());
  for (int j = 0; j < ker.dim(); ++j) {
    MatrixD a = ker.basis().column(j).submatrix(0, 0, dim(), 1);
    gens.set_column(j, basis_ * a);
  }
  return span(gens);
}

Subspace Subspace::promote(Ring target) const {
  Subspace s;
  s.ring_ = target;
  s.ambient_ = ambient_;
  s.basis_ = basis_.promote(target);  // reduced echelon shape survives re-tagging
  s.pivots_ = pivots_;
  return s;
}

Rref rref_left(const MatrixD& m) {
  Rref out;
  out.mat = m;
  MatrixD& a = out.mat;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < a.rows(); ++i)
      if (!a.at(i, c).is_zero()) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < a.cols(); ++j) {
        Scalar tmp = a.at(r, j);
        a.set(r, j, a.at(piv, j));
        a.set(piv, j, tmp);
      }
    Scalar inv = a.at(r, c).inverse();
    for (int j = 0; j < a.cols(); ++j) a.set(r, j, inv * a.at(r, j));
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r) continue;
      Scalar f = a.at(i, c);
      if (f.is_zero()) continue;
      for (int j = 0; j < a.cols(); ++j) a.set(i, j, a.at(i, j) - f * a.at(r, j));
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  return out;
}

Subspace right_kernel(const MatrixD& m) {
  Rref rr = rref_left(m);
  std::vector<int> free_cols;
  {
    std::size_t t = 0;
    for (int c = 0; c < m.cols(); ++c) {
      if (t < rr.pivot_cols.size() && rr.pivot_cols[t] == c)
        ++t;
      else
        free_cols.push_back(c);
    }
  }
  MatrixD gens(m.ring(), m.cols(), static_cast<int>(free_cols.size()));
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    int f = free_cols[j];
    gens.set(f, static_cast<int>(j), Scalar::one(m.ring()));
    for (std::size_t t = 0; t < rr.pivot_cols.size(); ++t)
      gens.set(rr.pivot_cols[t], static_cast<int>(j), -rr.mat.at(static_cast<int>(t), f));
  }
  return Subspace::span(gens);
}

int rank(const MatrixD& m) { return rref_left(m).rank(); }

MatrixD inverse(const MatrixD& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of non-square matrix");
  Rref rr = rref_left(m.hstack(MatrixD::identity(m.ring(), m.rows())));
  if (rr.rank() != m.rows() || (rr.rank() > 0 && rr.pivot_cols.back() >= m.rows()))
    throw DivisionByZeroError("matrix is singular");
  return rr.mat.submatrix(0, m.cols(), m.rows(), m.cols());
}

MatrixD solve(const MatrixD& m, const MatrixD& b) {
  if (m.rows() != b.rows()) throw DimensionError("solve shape mismatch");
  return inverse(m) * b;
}

}  // namespace parafin
