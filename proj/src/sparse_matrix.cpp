#include "bannaiito/sparse_matrix.hpp"

#include <string>

namespace bi {

SparseRatMatrix::SparseRatMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionError("matrix: negative dimension");
}

SparseRatMatrix SparseRatMatrix::identity(int n) {
  SparseRatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.entries_.emplace(Index{i, i}, Rational(1));
  return m;
}

SparseRatMatrix SparseRatMatrix::diagonal(const std::vector<Rational>& d) {
  SparseRatMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < static_cast<int>(d.size()); ++i)
    if (!d[i].is_zero()) m.entries_.emplace(Index{i, i}, d[i]);
  return m;
}

void SparseRatMatrix::check_index(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw DimensionError("matrix: index (" + std::to_string(i) + "," + std::to_string(j) +
                         ") out of " + std::to_string(rows_) + "x" + std::to_string(cols_));
}

Rational SparseRatMatrix::at(int i, int j) const {
  check_index(i, j);
  const auto it = entries_.find({i, j});
  return it == entries_.end() ? Rational() : it->second;
}

void SparseRatMatrix::set(int i, int j, const Rational& v) {
  check_index(i, j);
  if (v.is_zero())
    entries_.erase({i, j});
  else
    entries_[{i, j}] = v;
}

void SparseRatMatrix::add_to(int i, int j, const Rational& v) {
  check_index(i, j);
  if (v.is_zero()) return;
  auto [it, inserted] = entries_.emplace(Index{i, j}, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) entries_.erase(it);
  }
}

SparseRatMatrix& SparseRatMatrix::operator+=(const SparseRatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix add: shape mismatch");
  for (const auto& [ij, v] : o.entries_) add_to(ij.first, ij.second, v);
  return *this;
}

SparseRatMatrix& SparseRatMatrix::operator-=(const SparseRatMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sub: shape mismatch");
  for (const auto& [ij, v] : o.entries_) add_to(ij.first, ij.second, -v);
  return *this;
}

SparseRatMatrix operator*(const SparseRatMatrix& a, const SparseRatMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix mul: inner dimensions disagree");
  SparseRatMatrix out(a.rows_, b.cols_);
  for (const auto& [ij, va] : a.entries_) {
    const auto [i, t] = ij;
    auto it = b.entries_.lower_bound({t, 0});
    const auto end = b.entries_.lower_bound({t + 1, 0});
    for (; it != end; ++it) out.add_to(i, it->first.second, va * it->second);
  }
  return out;
}

SparseRatMatrix operator*(const Rational& s, const SparseRatMatrix& m) {
  SparseRatMatrix out(m.rows_, m.cols_);
  if (s.is_zero()) return out;
  for (const auto& [ij, v] : m.entries_) out.entries_.emplace(ij, s * v);
  return out;
}

SparseRatMatrix kron(const SparseRatMatrix& a, const SparseRatMatrix& b) {
  SparseRatMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (const auto& [ij, va] : a.entries())
    for (const auto& [kl, vb] : b.entries())
      out.set(ij.first * b.rows() + kl.first, ij.second * b.cols() + kl.second, va * vb);
  return out;
}

SparseRatMatrix bracket(BracketKind kind, const SparseRatMatrix& a, const SparseRatMatrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw DimensionError("bracket: operands must be square and of equal size");
  SparseRatMatrix ab = a * b;
  const SparseRatMatrix ba = b * a;
  if (kind == BracketKind::Commutator)
    ab -= ba;
  else
    ab += ba;
  return ab;
}

}  // namespace bi
