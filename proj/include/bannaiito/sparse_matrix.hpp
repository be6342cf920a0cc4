#pragma once

#include <map>
#include <utility>
#include <vector>

#include "bannaiito/rational.hpp"

namespace bi {

/// Sparse matrix over Rational in coordinate form. Entries are kept in a
/// row-major ordered map and explicit zeros are never stored, so operator==
/// is exact structural equality and iteration order is deterministic.
class SparseRatMatrix {
public:
  using Index = std::pair<int, int>;
  using EntryMap = std::map<Index, Rational>;

  SparseRatMatrix() : rows_(0), cols_(0) {}
  SparseRatMatrix(int rows, int cols);

  static SparseRatMatrix identity(int n);
  static SparseRatMatrix diagonal(const std::vector<Rational>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const EntryMap& entries() const { return entries_; }

  bool is_zero() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }

  /// Returns the entry, zero when absent.
  Rational at(int i, int j) const;
  /// Assigns the entry; a zero value erases it.
  void set(int i, int j, const Rational& v);
  /// Accumulates into the entry, erasing it when the sum is zero.
  void add_to(int i, int j, const Rational& v);

  SparseRatMatrix& operator+=(const SparseRatMatrix& o);
  SparseRatMatrix& operator-=(const SparseRatMatrix& o);
  friend SparseRatMatrix operator+(SparseRatMatrix a, const SparseRatMatrix& b) { return a += b; }
  friend SparseRatMatrix operator-(SparseRatMatrix a, const SparseRatMatrix& b) { return a -= b; }
  friend SparseRatMatrix operator*(const SparseRatMatrix& a, const SparseRatMatrix& b);
  friend SparseRatMatrix operator*(const Rational& s, const SparseRatMatrix& m);

  friend bool operator==(const SparseRatMatrix& a, const SparseRatMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }
  friend bool operator!=(const SparseRatMatrix& a, const SparseRatMatrix& b) { return !(a == b); }

private:
  int rows_, cols_;
  EntryMap entries_;
  void check_index(int i, int j) const;
};

/// Kronecker product: (A⊗B)[i*rB+k, j*cB+l] = A[i,j]·B[k,l].
SparseRatMatrix kron(const SparseRatMatrix& a, const SparseRatMatrix& b);

enum class BracketKind { Commutator, Anticommutator };

/// AB - BA or AB + BA on square matrices of equal size.
SparseRatMatrix bracket(BracketKind kind, const SparseRatMatrix& a, const SparseRatMatrix& b);

}  // namespace bi
