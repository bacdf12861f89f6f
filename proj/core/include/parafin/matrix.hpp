#pragma once

#include <initializer_list>
#include <iosfwd>
#include <vector>

#include "parafin/scalar.hpp"

namespace parafin {

/// Dense matrix over one of the three rings.  Entries are stored row-major.
/// Columns are the carriers of right D-module structure: vectors are n x 1
/// matrices, a matrix acts on the left (A v), scalars act on the right
/// (v * s scales every entry on the right, which matters over H(Q)).
class MatrixD {
 public:
  MatrixD() : ring_(Ring::Rat), rows_(0), cols_(0) {}
  MatrixD(Ring r, int rows, int cols);

  static MatrixD identity(Ring r, int n);
  static MatrixD zero(Ring r, int rows, int cols);
  /// Row-major construction from string literals in the scalar grammar.
  static MatrixD from_rows(Ring r, std::initializer_list<std::initializer_list<const char*>> rows);
  static MatrixD col_vector(Ring r, std::initializer_list<const char*> entries);
  static MatrixD basis_vector(Ring r, int n, int idx);

  Ring ring() const { return ring_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Scalar& at(int i, int j) const;
  void set(int i, int j, const Scalar& v);

  bool is_zero() const;
  bool operator==(const MatrixD& o) const;
  bool operator!=(const MatrixD& o) const { return !(*this == o); }

  MatrixD operator+(const MatrixD& o) const;
  MatrixD operator-(const MatrixD& o) const;
  MatrixD operator-() const;
  MatrixD operator*(const MatrixD& o) const;

  /// s * A with the scalar multiplying every entry from the left.
  MatrixD scale_left(const Scalar& s) const;
  /// A * s with the scalar multiplying every entry from the right.
  MatrixD scale_right(const Scalar& s) const;

  MatrixD transpose() const;
  MatrixD conj() const;
  MatrixD conj_transpose() const;

  Scalar trace() const;
  /// Real part of the trace, as a rational.  Coincides with trace() over Q.
  mpq_class re_trace() const;

  MatrixD column(int j) const;
  void set_column(int j, const MatrixD& col);
  /// Horizontal concatenation [A | B].
  MatrixD hstack(const MatrixD& o) const;
  MatrixD submatrix(int i0, int j0, int rows, int cols) const;

  /// Entrywise re-tagging into a larger ring.
  MatrixD promote(Ring target) const;

  std::string str() const;

 private:
  Ring ring_;
  int rows_, cols_;
  std::vector<Scalar> e_;

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * cols_ + j; }
};

std::ostream& operator<<(std::ostream& os, const MatrixD& m);

/// [A, B] = AB - BA.
MatrixD bracket(const MatrixD& a, const MatrixD& b);

}  // namespace parafin
