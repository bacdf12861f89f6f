#include "parafin/matspan.hpp"

#include "parafin/errors.hpp"

namespace parafin {

int field_ratio(Ring entry, Ring coeff) {
  if (entry == coeff && entry != Ring::Quat) return 1;
  if (entry == Ring::Gauss && coeff == Ring::Rat) return 2;
  if (entry == Ring::Quat && coeff == Ring::Rat) return 4;
  throw TagMismatchError(std::string("unsupported coefficient pair: entries ") + ring_name(entry) +
                         " over " + ring_name(coeff));
}

std::vector<Scalar> ring_basis_scalars(Ring entry, Ring coeff) {
  switch (field_ratio(entry, coeff)) {
    case 1: return {Scalar::one(entry)};
    case 2: return {Scalar::one(entry), Scalar::i(entry)};
    default:
      return {Scalar::one(entry), Scalar::i(entry), Scalar::j(), Scalar::k()};
  }
}

MatrixD expand_to_field(const MatrixD& m, Ring coeff) {
  int ratio = field_ratio(m.ring(), coeff);
  MatrixD out(coeff, m.rows() * m.cols() * ratio, 1);
  int pos = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const Scalar& s = m.at(i, j);
      if (ratio == 1) {
        out.set(pos++, 0, s);
      } else {
        for (int t = 0; t < ratio; ++t) out.set(pos++, 0, Scalar::rat(s.comp(t)));
      }
    }
  return out;
}

MatrixD contract_from_field(const MatrixD& col, Ring entry, int rows, int cols) {
  int ratio = field_ratio(entry, col.ring());
  if (col.cols() != 1 || col.rows() != rows * cols * ratio)
    throw DimensionError("field expansion length mismatch");
  MatrixD out(entry, rows, cols);
  int pos = 0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      if (ratio == 1) {
        out.set(i, j, col.at(pos++, 0));
      } else if (ratio == 2) {
        mpq_class re = col.at(pos, 0).comp(0), im = col.at(pos + 1, 0).comp(0);
        pos += 2;
        out.set(i, j, Scalar::gauss(re, im));
      } else {
        out.set(i, j, Scalar::quat(col.at(pos, 0).comp(0), col.at(pos + 1, 0).comp(0),
                                   col.at(pos + 2, 0).comp(0), col.at(pos + 3, 0).comp(0)));
        pos += 4;
      }
    }
  return out;
}

MatSpan MatSpan::span(Ring entry, Ring coeff, int rows, int cols,
                      const std::vector<MatrixD>& gens) {
  int ratio = field_ratio(entry, coeff);
  MatrixD stacked(coeff, rows * cols * ratio, static_cast<int>(gens.size()));
  for (std::size_t t = 0; t < gens.size(); ++t) {
    if (gens[t].ring() != entry || gens[t].rows() != rows || gens[t].cols() != cols)
      throw DimensionError("span generator shape/ring mismatch");
    stacked.set_column(static_cast<int>(t), expand_to_field(gens[t], coeff));
  }
  MatSpan s;
  s.entry_ = entry;
  s.coeff_ = coeff;
  s.rows_ = rows;
  s.cols_ = cols;
  s.vec_ = Subspace::span(stacked);
  s.rebuild_basis();
  return s;
}

MatSpan MatSpan::zero(Ring entry, Ring coeff, int rows, int cols) {
  return span(entry, coeff, rows, cols, {});
}

MatSpan MatSpan::full(Ring entry, Ring coeff, int rows, int cols) {
  std::vector<MatrixD> gens;
  const auto units = ring_basis_scalars(entry, coeff);
  gens.reserve(static_cast<std::size_t>(rows) * cols * units.size());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      for (const Scalar& u : units) {
        MatrixD m(entry, rows, cols);
        m.set(i, j, u);
        gens.push_back(std::move(m));
      }
  return span(entry, coeff, rows, cols, gens);
}

void MatSpan::rebuild_basis() {
  basis_.clear();
  basis_.reserve(static_cast<std::size_t>(vec_.dim()));
  for (int t = 0; t < vec_.dim(); ++t)
    basis_.push_back(contract_from_field(vec_.basis().column(t), entry_, rows_, cols_));
}

void MatSpan::check_compatible(const MatSpan& o) const {
  if (entry_ != o.entry_ || coeff_ != o.coeff_ || rows_ != o.rows_ || cols_ != o.cols_)
    throw TagMismatchError("matrix span shape/ring mismatch");
}

bool MatSpan::contains(const MatrixD& m) const {
  if (m.ring() != entry_ || m.rows() != rows_ || m.cols() != cols_) return false;
  return vec_.contains(expand_to_field(m, coeff_));
}

bool MatSpan::contains(const MatSpan& o) const {
  check_compatible(o);
  return vec_.contains(o.vec_);
}

std::optional<MatrixD> MatSpan::coordinates(const MatrixD& m) const {
  if (m.ring() != entry_ || m.rows() != rows_ || m.cols() != cols_) return std::nullopt;
  return vec_.coordinates(expand_to_field(m, coeff_));
}

bool MatSpan::operator==(const MatSpan& o) const {
  return entry_ == o.entry_ && coeff_ == o.coeff_ && rows_ == o.rows_ && cols_ == o.cols_ &&
         vec_ == o.vec_;
}

MatSpan MatSpan::sum(const MatSpan& o) const {
  check_compatible(o);
  MatSpan s = *this;
  s.vec_ = vec_.sum(o.vec_);
  s.rebuild_basis();
  return s;
}

MatSpan MatSpan::intersect(const MatSpan& o) const {
  check_compatible(o);
  MatSpan s = *this;
  s.vec_ = vec_.intersect(o.vec_);
  s.rebuild_basis();
  return s;
}

namespace {

MatrixD vstack_cols(Ring r, const std::vector<MatrixD>& parts) {
  int total = 0;
  for (const auto& p : parts) total += p.rows();
  MatrixD s(r, total, 1);
  int at = 0;
  for (const auto& p : parts)
    for (int i = 0; i < p.rows(); ++i) s.set(at++, 0, p.at(i, 0));
  return s;
}

}  // namespace

MatSpan cut(const MatSpan& host, const std::vector<LinearCondition>& conditions) {
  if (host.dim() == 0 || conditions.empty()) return host;
  // Stack residuals of the basis columnwise; the coefficient kernel is the cut.
  std::vector<MatrixD> res_cols(static_cast<std::size_t>(host.dim()));
  int total = 0;
  for (int t = 0; t < host.dim(); ++t) {
    std::vector<MatrixD> parts;
    for (const auto& cond : conditions) {
      MatrixD r = cond(host.basis()[static_cast<std::size_t>(t)]);
      if (r.cols() != 1 || r.ring() != host.coeff_field())
        throw DimensionError("condition residual must be a coefficient-field column");
      parts.push_back(std::move(r));
    }
    res_cols[static_cast<std::size_t>(t)] = vstack_cols(host.coeff_field(), parts);
    total = res_cols[static_cast<std::size_t>(t)].rows();
  }
  MatrixD cmat(host.coeff_field(), total, host.dim());
  for (int t = 0; t < host.dim(); ++t) {
    if (res_cols[static_cast<std::size_t>(t)].rows() != total)
      throw DimensionError("inconsistent residual lengths across basis");
    cmat.set_column(t, res_cols[static_cast<std::size_t>(t)]);
  }
  Subspace ker = right_kernel(cmat);
  std::vector<MatrixD> gens;
  gens.reserve(static_cast<std::size_t>(ker.dim()));
  for (int j = 0; j < ker.dim(); ++j) {
    MatrixD g(host.entry_ring(), host.rows(), host.cols());
    for (int t = 0; t < host.dim(); ++t) {
      Scalar c = ker.basis().at(t, j);
      if (c.is_zero()) continue;
      g = g + host.basis()[static_cast<std::size_t>(t)].scale_right(c.promote(host.entry_ring()));
    }
    gens.push_back(std::move(g));
  }
  return MatSpan::span(host.entry_ring(), host.coeff_field(), host.rows(), host.cols(), gens);
}

LinearCondition matrix_condition(Ring coeff, std::function<MatrixD(const MatrixD&)> fn) {
  return [coeff, fn = std::move(fn)](const MatrixD& x) { return expand_to_field(fn(x), coeff); };
}

LinearCondition maps_into(Ring coeff, const MatrixD& v, const Subspace& target) {
  return [coeff, v, target](const MatrixD& x) { return expand_to_field(target.reduce(x * v), coeff); };
}

}  // namespace parafin
