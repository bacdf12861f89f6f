#include "parafin/matrix.hpp"

#include <ostream>
#include <sstream>

#include "parafin/errors.hpp"

namespace parafin {

namespace {

void check_same_ring(const MatrixD& a, const MatrixD& b) {
  if (a.ring() != b.ring())
    throw TagMismatchError(std::string("matrix ring mismatch: ") + ring_name(a.ring()) + " vs " +
                           ring_name(b.ring()));
}

void check_same_shape(const MatrixD& a, const MatrixD& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix shape mismatch");
}

}  // namespace

MatrixD::MatrixD(Ring r, int rows, int cols) : ring_(r), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionError("negative matrix dimension");
  e_.assign(static_cast<std::size_t>(rows) * cols, Scalar::zero(r));
}

MatrixD MatrixD::identity(Ring r, int n) {
  MatrixD m(r, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, Scalar::one(r));
  return m;
}

MatrixD MatrixD::zero(Ring r, int rows, int cols) { return MatrixD(r, rows, cols); }

MatrixD MatrixD::from_rows(Ring r, std::initializer_list<std::initializer_list<const char*>> rows) {
  int nr = static_cast<int>(rows.size());
  int nc = nr == 0 ? 0 : static_cast<int>(rows.begin()->size());
  MatrixD m(r, nr, nc);
  int i = 0;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != nc) throw DimensionError("ragged matrix literal");
    int j = 0;
    for (const char* text : row) m.set(i, j++, Scalar::parse(text, r));
    ++i;
  }
  return m;
}

MatrixD MatrixD::col_vector(Ring r, std::initializer_list<const char*> entries) {
  MatrixD m(r, static_cast<int>(entries.size()), 1);
  int i = 0;
  for (const char* text : entries) m.set(i++, 0, Scalar::parse(text, r));
  return m;
}

MatrixD MatrixD::basis_vector(Ring r, int n, int idx) {
  if (idx < 0 || idx >= n) throw DimensionError("basis vector index out of range");
  MatrixD m(r, n, 1);
  m.set(idx, 0, Scalar::one(r));
  return m;
}

const Scalar& MatrixD::at(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("matrix index out of range");
  return e_[idx(i, j)];
}

void MatrixD::set(int i, int j, const Scalar& v) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw DimensionError("matrix index out of range");
  if (v.ring() != ring_) throw TagMismatchError("entry ring differs from matrix ring");
  e_[idx(i, j)] = v;
}

bool MatrixD::is_zero() const {
  for (const auto& x : e_)
    if (!x.is_zero()) return false;
  return true;
}

bool MatrixD::operator==(const MatrixD& o) const {
  return ring_ == o.ring_ && rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

MatrixD MatrixD::operator+(const MatrixD& o) const {
  check_same_ring(*this, o);
  check_same_shape(*this, o);
  MatrixD r(ring_, rows_, cols_);
  for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t] + o.e_[t];
  return r;
}

MatrixD MatrixD::operator-(const MatrixD& o) const {
  check_same_ring(*this, o);
  check_same_shape(*this, o);
  MatrixD r(ring_, rows_, cols_);
  for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t] - o.e_[t];
  return r;
}

MatrixD MatrixD::operator-() const {
  MatrixD r(ring_, rows_, cols_);
  for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = -e_[t];
  return r;
}

MatrixD MatrixD::operator*(const MatrixD& o) const {
  check_same_ring(*this, o);
  if (cols_ != o.rows_) throw DimensionError("matrix product shape mismatch");
  MatrixD r(ring_, rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Scalar& a = e_[idx(i, k)];
      if (a.is_zero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const Scalar& b = o.e_[o.idx(k, j)];
        if (b.is_zero()) continue;
        r.e_[r.idx(i, j)] = r.e_[r.idx(i, j)] + a * b;
      }
    }
  return r;
}

MatrixD MatrixD::scale_left(const Scalar& s) const {
  if (s.ring() != ring_) throw TagMismatchError("scalar ring differs from matrix ring");
  MatrixD r(ring_, rows_, cols_);
  for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = s * e_[t];
  return r;
}

MatrixD MatrixD::scale_right(const Scalar& s) const {
  if (s.ring() != ring_) throw TagMismatchError("scalar ring differs from matrix ring");
  MatrixD r(ring_, rows_, cols_);
  for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t] * s;
  return r;
}

MatrixD MatrixD::transpose() const {
  MatrixD r(ring_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.e_[r.idx(j, i)] = e_[idx(i, j)];
  return r;
}

MatrixD MatrixD::conj() const {
  MatrixD r(ring_, rows_, cols_);
  for (std::size_t t = 0; t < e_.size(); ++t) r.e_[t] = e_[t].conj();
  return r;
}

MatrixD MatrixD::conj_transpose() const {
  MatrixD r(ring_, cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.e_[r.idx(j, i)] = e_[idx(i, j)].conj();
  return r;
}

Scalar MatrixD::trace() const {
  if (rows_ != cols_) throw DimensionError("trace of non-square matrix");
  Scalar t = Scalar::zero(ring_);
  for (int i = 0; i < rows_; ++i) t = t + e_[idx(i, i)];
  return t;
}

mpq_class MatrixD::re_trace() const { return trace().real_part(); }

MatrixD MatrixD::column(int j) const {
  if (j < 0 || j >= cols_) throw DimensionError("column index out of range");
  MatrixD r(ring_, rows_, 1);
  for (int i = 0; i < rows_; ++i) r.e_[r.idx(i, 0)] = e_[idx(i, j)];
  return r;
}

void MatrixD::set_column(int j, const MatrixD& col) {
  if (j < 0 || j >= cols_) throw DimensionError("column index out of range");
  if (col.cols() != 1 || col.rows() != rows_) throw DimensionError("column shape mismatch");
  check_same_ring(*this, col);
  for (int i = 0; i < rows_; ++i) e_[idx(i, j)] = col.e_[col.idx(i, 0)];
}

MatrixD MatrixD::hstack(const MatrixD& o) const {
  check_same_ring(*this, o);
  if (rows_ != o.rows_) throw DimensionError("hstack row mismatch");
  MatrixD r(ring_, rows_, cols_ + o.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r.e_[r.idx(i, j)] = e_[idx(i, j)];
    for (int j = 0; j < o.cols_; ++j) r.e_[r.idx(i, cols_ + j)] = o.e_[o.idx(i, j)];
  }
  return r;
}

MatrixD MatrixD::submatrix(int i0, int j0, int rows, int cols) const {
  if (i0 < 0 || j0 < 0 || rows < 0 || cols < 0 || i0 + rows > rows_ || j0 + cols > cols_)
    throw DimensionError("submatrix out of range");
  MatrixD r(ring_, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r.e_[r.idx(i, j)] = e_[idx(i0 + i, j0 + j)];
  return r;
}

MatrixD MatrixD::promote(Ring target) const {
  MatrixD r(target, rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.e_[r.idx(i, j)] = e_[idx(i, j)].promote(target);
  return r;
}

std::string MatrixD::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i == 0 ? "[" : " [");
    for (int j = 0; j < cols_; ++j) {
      if (j) os << ", ";
      os << e_[idx(i, j)].str();
    }
    os << "]";
    if (i + 1 < rows_) os << "\n";
  }
  os << "]";
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const MatrixD& m) { return os << m.str(); }

MatrixD bracket(const MatrixD& a, const MatrixD& b) { return a * b - b * a; }

}  // namespace parafin
