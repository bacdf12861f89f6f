#pragma once

#include <optional>
#include <vector>

#include "parafin/matrix.hpp"

namespace parafin {

/// Right D-submodule of D^n, held as its unique reduced column-echelon basis:
/// pivot rows strictly increasing top-down, each pivot entry 1, pivot rows
/// zero in every other basis column.  Because the reduced form is unique over
/// a division ring, equal subspaces compare equal entry-for-entry.
class Subspace {
 public:
  Subspace() : ring_(Ring::Rat), ambient_(0), basis_(Ring::Rat, 0, 0) {}

  static Subspace zero(Ring r, int ambient);
  static Subspace full(Ring r, int ambient);
  /// Canonical span of the columns of `cols` (an ambient x k matrix).
  static Subspace span(const MatrixD& cols);
  static Subspace span(Ring r, int ambient, const std::vector<MatrixD>& col_vectors);
  static Subspace coordinate(Ring r, int ambient, std::initializer_list<int> indices);

  Ring ring() const { return ring_; }
  int ambient_dim() const { return ambient_; }
  int dim() const { return basis_.cols(); }
  /// Canonical ambient x dim basis matrix.
  const MatrixD& basis() const { return basis_; }
  const std::vector<int>& pivot_rows() const { return pivots_; }

  bool contains(const MatrixD& v) const;
  bool contains(const Subspace& o) const;
  bool operator==(const Subspace& o) const;
  bool operator!=(const Subspace& o) const { return !(*this == o); }

  /// Residual of v after eliminating this subspace's pivot rows; zero iff contained.
  MatrixD reduce(const MatrixD& v) const;
  /// Right coordinates c with v = basis * c, if v lies in the subspace.
  std::optional<MatrixD> coordinates(const MatrixD& v) const;

  Subspace sum(const Subspace& o) const;
  Subspace intersect(const Subspace& o) const;

  /// Entrywise re-tagging of the basis into a larger ring (span over the larger ring).
  Subspace promote(Ring target) const;

 private:
  Ring ring_;
  int ambient_;
  MatrixD basis_;
  std::vector<int> pivots_;
};

/// Reduced row-echelon form computed with LEFT row operations (pivots
/// normalized by left multiplication), plus its pivot columns.  Unique over a
/// division ring.  Rows of the result span the same left row module.
struct Rref {
  MatrixD mat;
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};
Rref rref_left(const MatrixD& m);

/// {x : M x = 0} as a canonical subspace of D^cols.
Subspace right_kernel(const MatrixD& m);

/// Column rank (= row rank over a division ring).
int rank(const MatrixD& m);

/// Inverse of a square matrix, via left row reduction of [M | I].
MatrixD inverse(const MatrixD& m);

/// Unique solution columns X of M X = B when M is square invertible.
MatrixD solve(const MatrixD& m, const MatrixD& b);

}  // namespace parafin
