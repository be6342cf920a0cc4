#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "bannaiito/osp_site.hpp"

namespace bi {

/// Subsets of sites {1..n} as bitmasks: bit (i-1) represents site i.
using SubsetMask = std::uint32_t;

int subset_size(SubsetMask a);
std::vector<int> subset_sites(SubsetMask a);                       ///< increasing, 1-based
SubsetMask subset_from_sites(const std::vector<int>& sites, int n);
std::string subset_name(SubsetMask a);                             ///< "{1,3}"
SubsetMask full_mask(int n);

/// A degree-preserving operator on a TensorSpace, stored as one square block
/// per level. All levels 0..max_level are present (blocks may be empty).
struct LeveledOperator {
  std::map<int, SparseRatMatrix> blocks;

  bool is_zero() const;
  LeveledOperator& operator+=(const LeveledOperator& o);
  LeveledOperator& operator-=(const LeveledOperator& o);
  friend LeveledOperator operator+(LeveledOperator a, const LeveledOperator& b) { return a += b; }
  friend LeveledOperator operator-(LeveledOperator a, const LeveledOperator& b) { return a -= b; }
  friend LeveledOperator operator*(const LeveledOperator& a, const LeveledOperator& b);
  friend LeveledOperator operator*(const Rational& s, const LeveledOperator& m);
  friend bool operator==(const LeveledOperator& a, const LeveledOperator& b) {
    return a.blocks == b.blocks;
  }
};

LeveledOperator bracket(BracketKind kind, const LeveledOperator& a, const LeveledOperator& b);

/// Lowest nonzero coordinate of an operator, in (level, row, col) order.
struct Violation {
  int level, row, col;
  Rational value;
};
std::optional<Violation> first_violation(const LeveledOperator& op);

/// Truncated tensor product of n osp(1|2) modules, restricted to total level
/// <= max_level. Basis states are multi-indices (m_1..m_n) with m_i <= N_i
/// and sum m_i <= max_level, ordered by level and lexicographically within a
/// level. Subset realizations and their Casimir elements are built on demand
/// and cached.
class TensorSpace {
public:
  TensorSpace(std::vector<ModuleSpec> sites, int max_level);

  int sites() const { return static_cast<int>(sites_.size()); }
  int max_level() const { return max_level_; }
  const ModuleSpec& site(int i) const;  ///< 1-based site number

  int dimension() const { return static_cast<int>(basis_.size()); }
  int level_dimension(int level) const;
  int level_offset(int level) const;
  const std::vector<std::vector<int>>& basis() const { return basis_; }
  int index_of(const std::vector<int>& m) const;

  /// Generators J±^A, J0^A, P^A of the subset realization; A must be a
  /// nonempty subset of {1..n}. The raising/lowering operators carry the
  /// grade-involution string over every site strictly between a member of A
  /// and max(A), member or not.
  const GeneratorSet& subset_generators(SubsetMask a) const;

  /// Sandwiched Casimir of the subset realization, split into level blocks.
  /// The empty set yields the scalar -1/2.
  const LeveledOperator& subset_casimir(SubsetMask a) const;

  /// Identity scaled by r, as a LeveledOperator on this space.
  LeveledOperator scalar_operator(const Rational& r) const;

  /// Squared normalization weight of a basis state: prod_i c_1..c_{m_i}
  /// evaluated with the site's own mu. Exact; positive when all mu > -1/2.
  const Rational& norm_weight(int basis_index) const;

private:
  std::vector<ModuleSpec> sites_;
  int max_level_;
  std::vector<std::vector<int>> basis_;
  std::map<std::vector<int>, int> index_;
  std::vector<int> level_offsets_;  // size max_level+2, last = dimension
  std::vector<int> state_level_;
  std::vector<Rational> weights_;

  mutable std::mutex cache_mutex_;
  mutable std::map<SubsetMask, GeneratorSet> generator_cache_;
  mutable std::map<SubsetMask, LeveledOperator> casimir_cache_;

  void check_mask(SubsetMask a) const;
  GeneratorSet build_generators(SubsetMask a) const;
  LeveledOperator build_casimir(SubsetMask a) const;
  LeveledOperator split_levels(const SparseRatMatrix& m) const;
};

/// Coproduct of two explicit realizations on the full product of their
/// carrier spaces: J± -> J±⊗P + 1⊗J±, J0 -> J0⊗1 + 1⊗J0, P -> P⊗P.
GeneratorSet coproduct_pair(const GeneratorSet& a, const GeneratorSet& b);

}  // namespace bi
