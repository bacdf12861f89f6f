#include "parafin/corpus.hpp"

#include "parafin/errors.hpp"
#include "parafin/matspan.hpp"

namespace parafin {

namespace {

int components(Ring r) { return r == Ring::Rat ? 1 : r == Ring::Gauss ? 2 : 4; }

// k! as a central scalar of the ring, for exact exponential denominators.
Scalar central_factorial(Ring r, int k) {
  long f = 1;
  for (int t = 2; t <= k; ++t) f *= t;
  return Scalar::int_in(r, f);
}

MatrixD exp_nilpotent(const MatrixD& nil) {
  const int n = nil.rows();
  MatrixD sum = MatrixD::identity(nil.ring(), n);
  MatrixD power = MatrixD::identity(nil.ring(), n);
  for (int k = 1; k < n; ++k) {
    power = power * nil;
    if (power.is_zero()) break;
    sum = sum + power.scale_right(central_factorial(nil.ring(), k).inverse());
  }
  return sum;
}

// The strictly upper (keep_upper) or strictly lower triangular part of the
// ambient, as the kernel of "the other half vanishes".
MatSpan triangular_part(const AmbientAlgebra& amb, bool keep_upper) {
  const int n = amb.n();
  auto residual = [n, keep_upper](const MatrixD& x) {
    MatrixD out(x.ring(), n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (keep_upper ? i >= j : i <= j) out.set(i, j, x.at(i, j));
    return out;
  };
  return cut(amb.span(), {matrix_condition(amb.coeff(), residual)});
}

int witt_index(const AmbientAlgebra& amb) { return amb.n() / 2; }

}  // namespace

int Corpus::pick(int bound) {
  if (bound <= 0) throw PreconditionError("pick needs a positive bound");
  return static_cast<int>(rng_() % static_cast<std::uint64_t>(bound));
}

Scalar Corpus::scalar(Ring r) {
  mpq_class c[4] = {0, 0, 0, 0};
  for (int t = 0; t < components(r); ++t)
    c[t] = mpq_class(pick(7) - 3, pick(3) + 1);
  switch (r) {
    case Ring::Rat:
      return Scalar::rat(c[0]);
    case Ring::Gauss:
      return Scalar::gauss(c[0], c[1]);
    default:
      return Scalar::quat(c[0], c[1], c[2], c[3]);
  }
}

Scalar Corpus::nonzero_scalar(Ring r) {
  for (int tries = 0; tries < 8; ++tries) {
    Scalar s = scalar(r);
    if (!s.is_zero()) return s;
  }
  return Scalar::one(r);
}

MatrixD Corpus::matrix(Ring r, int rows, int cols) {
  MatrixD m(r, rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m.set(i, j, scalar(r));
  return m;
}

MatrixD Corpus::nonzero_vector(Ring r, int n) {
  MatrixD v = matrix(r, n, 1);
  if (v.is_zero()) v.set(pick(n), 0, Scalar::one(r));
  return v;
}

Subspace Corpus::subspace(Ring r, int n) { return subspace(r, n, pick(n + 1)); }

Subspace Corpus::subspace(Ring r, int n, int dim) {
  return Subspace::span(matrix(r, n, dim));
}

MatrixD Corpus::invertible(Ring r, int n) {
  MatrixD lo = MatrixD::identity(r, n);
  MatrixD up = MatrixD::identity(r, n);
  MatrixD di = MatrixD::zero(r, n, n);
  for (int i = 0; i < n; ++i) {
    di.set(i, i, nonzero_scalar(r));
    for (int j = 0; j < i; ++j) {
      lo.set(i, j, scalar(r));
      up.set(j, i, scalar(r));
    }
  }
  return lo * di * up;
}

MatrixD Corpus::basis_change(const AmbientAlgebra& amb) {
  if (!amb.form()) return invertible(amb.ring(), amb.n());
  const MatSpan upper = triangular_part(amb, true);
  const MatSpan lower = triangular_part(amb, false);
  auto sample = [this](const MatSpan& part) {
    MatrixD nil = MatrixD::zero(part.basis().empty() ? Ring::Rat : part.basis()[0].ring(),
                                0, 0);
    bool first = true;
    for (const MatrixD& b : part.basis()) {
      MatrixD term = b.scale_right(scalar(b.ring()));
      nil = first ? term : nil + term;
      first = false;
    }
    return nil;
  };
  MatrixD g = MatrixD::identity(amb.ring(), amb.n());
  if (!upper.basis().empty()) g = g * exp_nilpotent(sample(upper));
  if (!lower.basis().empty()) g = g * exp_nilpotent(sample(lower));
  if (!upper.basis().empty()) g = g * exp_nilpotent(sample(upper));
  return g;
}

GeneralizedFlag Corpus::flag(Ring r, int n) {
  MatrixD g = invertible(r, n);
  std::vector<Subspace> members;
  for (int d = 1; d < n; ++d)
    if (coin()) members.push_back(Subspace::span(g.submatrix(0, 0, n, d)));
  return GeneralizedFlag::from_members(r, n, std::move(members));
}

GeneralizedFlag Corpus::flag(const AmbientAlgebra& amb) {
  if (!amb.form()) return flag(amb.ring(), amb.n());
  std::vector<int> dims;
  for (int d = 1; d <= witt_index(amb); ++d)
    if (coin()) dims.push_back(d);
  return isotropic_flag(amb, dims);
}

GeneralizedFlag Corpus::isotropic_flag(const AmbientAlgebra& amb,
                                       const std::vector<int>& dims) {
  if (!amb.form())
    throw PreconditionError("isotropic flags need an ambient with a form");
  const int n = amb.n();
  const int m = witt_index(amb);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      MatrixD ea = MatrixD::basis_vector(amb.ring(), n, a);
      MatrixD eb = MatrixD::basis_vector(amb.ring(), n, b);
      if (!amb.form()->eval(ea, eb).is_zero())
        throw PreconditionError(
            "the gram does not make the leading coordinates isotropic");
    }
  MatrixD g = basis_change(amb);
  std::vector<Subspace> members;
  for (int d : dims) {
    if (d < 0 || d > m)
      throw PreconditionError("isotropic member dimension exceeds the witt index");
    if (d > 0) members.push_back(Subspace::span(g.submatrix(0, 0, n, d)));
  }
  return GeneralizedFlag::from_members(amb.ring(), n, std::move(members));
}

}  // namespace parafin
