#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "parafin/subspace.hpp"

namespace parafin {

/// dim of `entry` as a vector space over `coeff`.  Accepted pairs:
/// (Q,Q)=1, (Q(i),Q(i))=1, (Q(i),Q)=2, (H(Q),Q)=4.  Anything else throws.
int field_ratio(Ring entry, Ring coeff);

/// coeff-basis of the entry ring: {1}, {1,i} or {1,i,j,k}.
std::vector<Scalar> ring_basis_scalars(Ring entry, Ring coeff);

/// Entrywise coordinates of m over the coefficient field, flattened row-major
/// into a single (rows*cols*ratio) x 1 column.
MatrixD expand_to_field(const MatrixD& m, Ring coeff);
MatrixD contract_from_field(const MatrixD& col, Ring entry, int rows, int cols);

/// Span over a coefficient field of matrices with entries in a possibly
/// larger ring.  Canonicalized through the echelon machinery applied to the
/// coefficient expansions, so equal spans have identical basis lists.
class MatSpan {
 public:
  MatSpan() : entry_(Ring::Rat), coeff_(Ring::Rat), rows_(0), cols_(0) {}

  static MatSpan span(Ring entry, Ring coeff, int rows, int cols,
                      const std::vector<MatrixD>& gens);
  static MatSpan zero(Ring entry, Ring coeff, int rows, int cols);
  /// All rows x cols matrices, as a coeff-space.
  static MatSpan full(Ring entry, Ring coeff, int rows, int cols);

  Ring entry_ring() const { return entry_; }
  Ring coeff_field() const { return coeff_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int dim() const { return vec_.dim(); }

  const std::vector<MatrixD>& basis() const { return basis_; }
  const Subspace& expanded() const { return vec_; }

  bool contains(const MatrixD& m) const;
  bool contains(const MatSpan& o) const;
  /// Coefficient-field coordinates of m with respect to basis(), if contained.
  std::optional<MatrixD> coordinates(const MatrixD& m) const;
  bool operator==(const MatSpan& o) const;
  bool operator!=(const MatSpan& o) const { return !(*this == o); }

  MatSpan sum(const MatSpan& o) const;
  MatSpan intersect(const MatSpan& o) const;

 private:
  Ring entry_, coeff_;
  int rows_, cols_;
  Subspace vec_;
  std::vector<MatrixD> basis_;

  void rebuild_basis();
  void check_compatible(const MatSpan& o) const;
};

/// A coeff-linear condition on matrices: maps a matrix to a residual column
/// over the span's coefficient field; the solution set is its kernel.
using LinearCondition = std::function<MatrixD(const MatrixD&)>;

/// Subspan {x in host : residual(x) = 0 for every condition}.  Conditions are
/// evaluated only on the canonical basis and stitched into one kernel solve.
MatSpan cut(const MatSpan& host, const std::vector<LinearCondition>& conditions);

/// Convenience: condition whose residual is an entry-ring matrix, expanded.
LinearCondition matrix_condition(Ring coeff, std::function<MatrixD(const MatrixD&)> fn);

/// Condition "x maps the given vector into the subspace" (residual of x*v).
LinearCondition maps_into(Ring coeff, const MatrixD& v, const Subspace& target);

}  // namespace parafin
