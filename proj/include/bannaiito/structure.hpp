#pragma once

#include <cstdint>

#include "bannaiito/tensor_space.hpp"

namespace bi {

/// True when [Γ_A, Γ_B] = 0 for structural reasons: nested or disjoint sets.
bool commutes_trivially(SubsetMask a, SubsetMask b);

/// Exact residual of the quadratic structure relation
///   {Γ_A, Γ_B} = Γ_{AΔB} + 2 Γ_{A∩B} Γ_{A∪B} + 2 Γ_{A\B} Γ_{B\A}.
/// Zero iff the relation holds on every retained level.
LeveledOperator bi_residual(const TensorSpace& space, SubsetMask a, SubsetMask b);

/// All Casimir operators of a space, keyed by subset (the empty set included).
/// Useful to precompute before parallel checks, and as an injection point for
/// deliberately corrupted operators in tests.
using CasimirTable = std::map<SubsetMask, LeveledOperator>;
CasimirTable casimir_table(const TensorSpace& space);

/// Same residual, evaluated on explicit operators instead of the space cache.
LeveledOperator bi_residual_from(const CasimirTable& table, SubsetMask a, SubsetMask b);

struct PairCheck {
  SubsetMask a = 0, b = 0;
  std::optional<Violation> violation;  ///< nullopt when the residual is exactly zero
};

struct StructureReport {
  int n = 0;
  std::vector<PairCheck> pairs;       ///< every ordered pair of nonempty subsets
  std::vector<PairCheck> centrality;  ///< [Γ_c, Γ_A] for c a singleton or the full set
  bool all_zero = true;
  std::int64_t elapsed_ms = 0;
};

/// Evaluates the structure relation on every ordered pair of nonempty subsets
/// and the centrality commutators, exactly. max_threads <= 0 picks a thread
/// count automatically; results are deterministic regardless.
StructureReport verify_all(const TensorSpace& space, int max_threads = 0);

/// verify_all on a caller-supplied operator table (see casimir_table).
StructureReport verify_table(const TensorSpace& space, const CasimirTable& table,
                             int max_threads = 0);

struct EmbeddingInstance {
  SubsetMask k = 0, l = 0, m = 0;
  std::optional<Violation> violation;
};

struct EmbeddingReport {
  std::vector<EmbeddingInstance> instances;
  bool pass = true;
};

/// Checks the rank-3 subalgebra generated by coarse-graining disjoint subsets
/// K, L, M into composite sites: its three cyclic structure relations must
/// hold verbatim with Γ indexed by unions of the groups.
EmbeddingReport b3_embedding_check(const TensorSpace& space, SubsetMask k, SubsetMask l,
                                   SubsetMask m);

}  // namespace bi
