#pragma once

#include <Eigen/Core>

#include "bannaiito/tensor_space.hpp"

namespace bi {

/// Chain of nested subsets π[2] ⊂ π[3] ⊂ … ⊂ π[n-1] induced by a permutation
/// π of the sites, where π[k] = {π(1),…,π(k)}. The generators of distinct
/// chain positions commute exactly (nested subsets).
struct ChainAlgebra {
  std::vector<int> perm;               ///< permutation of 1..n
  std::vector<SubsetMask> generators;  ///< prefix subsets of sizes 2..n-1
};

/// Validates the permutation and builds its chain.
ChainAlgebra make_chain(const std::vector<int>& perm);

/// The operators whose eigenvalues label a joint eigenbasis: the chain
/// generators followed by the Casimir of the full set.
std::vector<SubsetMask> labeled_operators(const ChainAlgebra& chain);

struct SpectralOptions {
  double cluster_tol = 1e-8;  ///< eigenvalue grouping gap, scaled by max(1, block norm)
};

/// Gap-clusters values: entries closer than tol (along the sorted sequence)
/// share a cluster. Returns, per input, the smallest member of its cluster.
std::vector<double> cluster_representatives(const std::vector<double>& values, double tol);

/// Level-E block of Γ_A conjugated into the orthonormal gauge
/// D = diag(√(c_1⋯c_{m_1}) ⋯ √(c_1⋯c_{m_n})), where it is symmetric.
/// Requires every site parameter mu > -1/2.
Eigen::MatrixXd normalized_block(const TensorSpace& space, SubsetMask a, int level);

/// Joint eigenbasis of the labeled operators of a chain on one level block.
/// Columns of `vectors` are orthonormal; labels[k] collects the eigenvalue of
/// each labeled operator on column k. Columns are ordered by ascending label
/// tuple, and the dominant coordinate of every column is made positive.
struct EigenBasis {
  int level = 0;
  std::vector<SubsetMask> ops;
  std::vector<std::vector<double>> labels;  ///< labels[col][op]
  Eigen::MatrixXd vectors;
  double max_eigen_residual = 0.0;  ///< max over ops and columns of ‖Gv-λv‖₂
};

EigenBasis joint_eigenbasis(const TensorSpace& space, const ChainAlgebra& chain, int level,
                            const SpectralOptions& opts = {});

/// Matrix of one Γ_A in a joint eigenbasis, with columns regrouped so the
/// action is block tridiagonal: vectors sharing every label except the
/// designated one are gathered into a group, groups are ordered by their
/// common labels, and within a group columns follow the (|λ|, λ) order of the
/// designated label. Off-band entries are reported relative to the block norm.
struct TridiagonalAction {
  struct Group {
    int offset = 0, size = 0;
    std::vector<double> common_labels;
  };
  int sort_key = 0;                   ///< index into EigenBasis::ops
  std::vector<int> order;             ///< column permutation: position -> basis column
  std::vector<Group> groups;
  std::vector<double> diag, super, sub;
  double offband_residual = 0.0;      ///< max off-band |entry| / max(1, block norm)
};

TridiagonalAction tridiagonal_action(const TensorSpace& space, SubsetMask op,
                                     const EigenBasis& basis, int sort_key);

/// The unique label position not commuting trivially with `op`; fails when no
/// single position qualifies (the action cannot be tridiagonal in one index).
int auto_sort_key(const EigenBasis& basis, SubsetMask op);

/// Diagonal of Γ_A in a joint eigenbasis, for operators that the labels
/// already diagonalize. The off-diagonal remainder is written to `residual`.
std::vector<double> diagonal_labels(const TensorSpace& space, SubsetMask op,
                                    const EigenBasis& basis, double* residual = nullptr);

}  // namespace bi
