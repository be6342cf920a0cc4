#include "bannaiito/osp_site.hpp"

namespace bi {

Rational weight_coeff(int n, const Rational& mu) {
  if (n < 0) throw ArgumentError("weight_coeff: negative level");
  Rational c(n);
  if (n % 2 != 0) c += Rational(2) * mu;
  return c;
}

GeneratorSet build_site(const ModuleSpec& spec) {
  const int n = spec.truncation;
  if (n < 1) throw ArgumentError("module: truncation must be >= 1");
  const int dim = n + 1;
  GeneratorSet g;
  g.jplus = SparseRatMatrix(dim, dim);
  g.jminus = SparseRatMatrix(dim, dim);
  g.j0 = SparseRatMatrix(dim, dim);
  g.parity = SparseRatMatrix(dim, dim);
  g.level_of.resize(dim);
  const Rational half(1, 2);
  for (int k = 0; k < dim; ++k) {
    g.level_of[k] = k;
    if (k + 1 < dim) g.jplus.set(k + 1, k, Rational(1));
    if (k > 0) g.jminus.set(k - 1, k, weight_coeff(k, spec.mu));
    g.j0.set(k, k, Rational(k) + spec.mu + half);
    g.parity.set(k, k, Rational(k % 2 == 0 ? 1 : -1));
  }
  g.safe_level_max = n - 1;
  return g;
}

SparseRatMatrix casimir_single(const GeneratorSet& gens) {
  const Rational half(1, 2);
  SparseRatMatrix out = gens.j0 * gens.parity;
  out -= gens.jplus * (gens.jminus * gens.parity);
  out -= half * gens.parity;
  return out;
}

namespace {

// Highest input level whose image is nonzero; columns index input states.
void scan_residual(OspRelationReport& report, const std::string& name,
                   const SparseRatMatrix& residual, const std::vector<int>& level_of,
                   int safe_level_max) {
  OspRelationCheck check;
  check.relation = name;
  for (const auto& [ij, v] : residual.entries()) {
    (void)v;
    const int level = level_of[static_cast<std::size_t>(ij.second)];
    if (level > check.max_violation_level) check.max_violation_level = level;
    if (level <= safe_level_max) check.pass_on_safe = false;
  }
  report.pass = report.pass && check.pass_on_safe;
  report.checks.push_back(std::move(check));
}

}  // namespace

OspRelationReport verify_osp_relations(const GeneratorSet& g) {
  const int dim = g.j0.rows();
  if (static_cast<int>(g.level_of.size()) != dim)
    throw DimensionError("verify_osp_relations: level table does not match matrix size");
  const Rational two(2);
  OspRelationReport report;
  scan_residual(report, "[J0,J+]=J+",
                bracket(BracketKind::Commutator, g.j0, g.jplus) - g.jplus, g.level_of,
                g.safe_level_max);
  scan_residual(report, "[J0,J-]=-J-",
                bracket(BracketKind::Commutator, g.j0, g.jminus) + g.jminus, g.level_of,
                g.safe_level_max);
  scan_residual(report, "{J+,J-}=2J0",
                bracket(BracketKind::Anticommutator, g.jplus, g.jminus) - two * g.j0, g.level_of,
                g.safe_level_max);
  scan_residual(report, "[J0,P]=0", bracket(BracketKind::Commutator, g.j0, g.parity), g.level_of,
                g.safe_level_max);
  scan_residual(report, "{J+,P}=0", bracket(BracketKind::Anticommutator, g.jplus, g.parity),
                g.level_of, g.safe_level_max);
  scan_residual(report, "{J-,P}=0", bracket(BracketKind::Anticommutator, g.jminus, g.parity),
                g.level_of, g.safe_level_max);
  scan_residual(report, "P^2=I", g.parity * g.parity - SparseRatMatrix::identity(dim), g.level_of,
                g.safe_level_max);
  return report;
}

}  // namespace bi
