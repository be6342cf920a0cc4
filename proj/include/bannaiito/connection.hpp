#pragma once

#include "bannaiito/spectral.hpp"

namespace bi {

/// One adjacent transposition of a chain permutation. Only the prefix subset
/// of size `position` changes; a swap at position 1 leaves every chain subset
/// (and hence the eigenbasis) untouched.
struct SwapStep {
  int position = 0;  ///< 1-based; entries position and position+1 are exchanged
  std::vector<int> before, after;
  bool trivial() const { return position < 2; }
};

/// Deterministic sequence of adjacent swaps carrying `from` into `to`
/// (bubble sort on target ranks; length = inversion count).
std::vector<SwapStep> adjacent_path(const std::vector<int>& from, const std::vector<int>& to);

/// One common-label block of a connection matrix. Rows belong to the target
/// basis, columns to the source basis: m(i,j) = ⟨target_i, source_j⟩, so a
/// target state expands as ψ_i = Σ_j m(i,j) φ_j. When the two chains differ
/// in exactly one labeled operator, rows/columns are ordered by the (|λ|, λ)
/// order of that operator's label, recorded in target_diff/source_diff.
struct CCBlock {
  std::vector<double> common_labels;
  std::vector<int> source_cols, target_rows;   ///< native basis columns, block order
  std::vector<double> source_diff, target_diff;
  Eigen::MatrixXd m;
};

struct ConnectionMatrix {
  std::vector<int> source_perm, target_perm;
  int level = 0;
  Eigen::MatrixXd global;  ///< full overlap in native order: global = V_targetᵀ V_source
  std::vector<CCBlock> blocks;
  double orthogonality_residual = 0.0;  ///< max over blocks of ‖BᵀB − I‖ (max entry)
  double block_residual = 0.0;          ///< largest |global| entry outside the blocks
};

/// Overlap of two joint eigenbases on the same level, blocked by the labels
/// of the operators the chains share. States whose common labels cannot be
/// matched one-to-one raise PairingError.
ConnectionMatrix overlap(const EigenBasis& source, const EigenBasis& target,
                         const std::vector<int>& source_perm,
                         const std::vector<int>& target_perm, double label_tol = 1e-7);

/// Overlap across one adjacent swap; bases must belong to step.before/after.
ConnectionMatrix block_overlap(const EigenBasis& source, const EigenBasis& target,
                               const SwapStep& step, double label_tol = 1e-7);

/// Builds both eigenbases and their overlap.
ConnectionMatrix direct_overlap(const TensorSpace& space, const std::vector<int>& source_perm,
                                const std::vector<int>& target_perm, int level,
                                const SpectralOptions& opts = {}, double label_tol = 1e-7);

/// Chains the per-step overlaps along a swap path starting at `start`
/// (an empty path yields the identity connection).
ConnectionMatrix compose_path(const TensorSpace& space, const std::vector<int>& start,
                              const std::vector<SwapStep>& path, int level,
                              const SpectralOptions& opts = {}, double label_tol = 1e-7);

struct RecurrenceReport {
  double max_residual = 0.0;
  std::vector<double> per_block;  ///< aligned with ConnectionMatrix::blocks
};

/// Verifies that every block of a one-swap connection matrix satisfies the
/// three-term recurrence λ_k B[k,s] = a_{s,s-1}B[k,s-1] + a_{s,s}B[k,s] +
/// a_{s,s+1}B[k,s+1], where a is the tridiagonal action of the swapped-in
/// generator on the source basis and λ_k its target labels. Boundary terms
/// fall outside the block and are dropped. Residuals are relative to
/// max(1, max|λ|).
RecurrenceReport check_three_term(const ConnectionMatrix& cc, const TridiagonalAction& tri);

/// diag(target labels) pulled back to the source basis: globalᵀ Λ global.
Eigen::MatrixXd act_in_basis(const ConnectionMatrix& cc,
                             const std::vector<double>& target_labels);

}  // namespace bi
