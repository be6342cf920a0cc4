#pragma once

#include <string>
#include <vector>

#include "bannaiito/sparse_matrix.hpp"

namespace bi {

/// One lowest-weight osp(1|2) module: parameter mu and truncation degree N.
/// The module is spanned by e_0..e_N.
struct ModuleSpec {
  Rational mu;
  int truncation = 1;
};

/// Matrix realization of the generators J+, J-, J0 and the grade involution P
/// on a graded basis. level_of[c] is the degree of basis vector c, and the
/// defining relations hold exactly on all states of level <= safe_level_max
/// (above that, truncation cuts the raising operator short).
struct GeneratorSet {
  SparseRatMatrix jplus, jminus, j0, parity;
  std::vector<int> level_of;
  int safe_level_max = -1;
};

/// Lowering coefficient c_n: J- e_n = c_n e_{n-1}. Even n gives n, odd n
/// gives n + 2*mu; equivalently n + mu*(1-(-1)^n).
Rational weight_coeff(int n, const Rational& mu);

/// Builds the truncated single-module realization:
///   J+ e_n = e_{n+1} (0 at the top), J- e_n = c_n e_{n-1},
///   J0 e_n = (n + mu + 1/2) e_n, P e_n = (-1)^n e_n.
GeneratorSet build_site(const ModuleSpec& spec);

/// Sandwiched Casimir element J0 P - J+ J- P - P/2 of a realization.
SparseRatMatrix casimir_single(const GeneratorSet& gens);

/// Exact residual check of one defining relation.
struct OspRelationCheck {
  std::string relation;          ///< e.g. "{J+,J-}=2J0"
  int max_violation_level = -1;  ///< highest level whose column is hit, -1 if none
  bool pass_on_safe = true;      ///< no violation at levels <= safe_level_max
};

struct OspRelationReport {
  std::vector<OspRelationCheck> checks;
  bool pass = true;
};

/// Evaluates all defining relations of osp(1|2) extended by the grade
/// involution:  [J0,J±]=±J±, {J+,J-}=2J0, [J0,P]=0, {J±,P}=0, P²=1.
/// Residuals are exact; a relation passes when it has no violating column
/// at any level <= safe_level_max.
OspRelationReport verify_osp_relations(const GeneratorSet& gens);

}  // namespace bi
