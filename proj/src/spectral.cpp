#include "bannaiito/spectral.hpp"

#include "bannaiito/structure.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace bi {

ChainAlgebra make_chain(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  if (n < 1 || n > 16) throw ArgumentError("chain: need a permutation of 1..n, 1 <= n <= 16");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (const int p : perm) {
    if (p < 1 || p > n || seen[static_cast<std::size_t>(p - 1)])
      throw ArgumentError("chain: not a permutation of 1.." + std::to_string(n));
    seen[static_cast<std::size_t>(p - 1)] = true;
  }
  ChainAlgebra chain;
  chain.perm = perm;
  SubsetMask prefix = 0;
  for (int k = 1; k <= n; ++k) {
    prefix |= SubsetMask{1} << (perm[static_cast<std::size_t>(k - 1)] - 1);
    if (k >= 2 && k <= n - 1) chain.generators.push_back(prefix);
  }
  return chain;
}

std::vector<SubsetMask> labeled_operators(const ChainAlgebra& chain) {
  std::vector<SubsetMask> ops = chain.generators;
  ops.push_back(full_mask(static_cast<int>(chain.perm.size())));
  return ops;
}

Eigen::MatrixXd normalized_block(const TensorSpace& space, SubsetMask a, int level) {
  const Rational minus_half(-1, 2);
  for (int i = 1; i <= space.sites(); ++i)
    if (space.site(i).mu <= minus_half)
      throw GaugeError("normalization undefined: site " + std::to_string(i) +
                       " has mu <= -1/2");
  const int d = space.level_dimension(level);
  const int off = space.level_offset(level);
  const SparseRatMatrix& block = space.subset_casimir(a).blocks.at(level);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (const auto& [ij, v] : block.entries()) {
    const Rational ratio = space.norm_weight(off + ij.first) / space.norm_weight(off + ij.second);
    out(ij.first, ij.second) = v.to_double() * std::sqrt(ratio.to_double());
  }
  return out;
}

std::vector<double> cluster_representatives(const std::vector<double>& values, double tol) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
  std::vector<double> reps(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    const double rep = values[static_cast<std::size_t>(order[i])];
    while (j < order.size()) {
      reps[static_cast<std::size_t>(order[j])] = rep;
      if (j + 1 < order.size() &&
          values[static_cast<std::size_t>(order[j + 1])] -
                  values[static_cast<std::size_t>(order[j])] <=
              tol)
        ++j;
      else
        break;
    }
    i = j + 1;
  }
  return reps;
}

EigenBasis joint_eigenbasis(const TensorSpace& space, const ChainAlgebra& chain, int level,
                            const SpectralOptions& opts) {
  if (static_cast<int>(chain.perm.size()) != space.sites())
    throw ArgumentError("eigenbasis: chain is for a different number of sites");
  const int d = space.level_dimension(level);

  EigenBasis out;
  out.level = level;
  out.ops = labeled_operators(chain);
  out.vectors = Eigen::MatrixXd::Identity(d, d);
  out.labels.assign(static_cast<std::size_t>(d), {});

  std::vector<Eigen::MatrixXd> gs;
  gs.reserve(out.ops.size());

  // Sequential refinement: diagonalize each labeled operator inside the
  // clusters the previous ones could not split.
  std::vector<std::pair<int, int>> clusters{{0, d}};
  for (const SubsetMask mask : out.ops) {
    gs.push_back(normalized_block(space, mask, level));
    const Eigen::MatrixXd& g = gs.back();
    const double tol =
        opts.cluster_tol * std::max(1.0, d > 0 ? g.cwiseAbs().maxCoeff() : 0.0);
    std::vector<std::pair<int, int>> next;
    for (const auto& [lo, len] : clusters) {
      Eigen::MatrixXd s =
          out.vectors.middleCols(lo, len).transpose() * g * out.vectors.middleCols(lo, len);
      s = (0.5 * (s + s.transpose())).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
      if (es.info() != Eigen::Success) throw Error("eigensolver did not converge");
      const Eigen::MatrixXd refined = out.vectors.middleCols(lo, len) * es.eigenvectors();
      out.vectors.middleCols(lo, len) = refined;
      int start = 0;
      for (int i = 0; i < len; ++i) {
        out.labels[static_cast<std::size_t>(lo + i)].push_back(es.eigenvalues()(i));
        if (i + 1 == len || es.eigenvalues()(i + 1) - es.eigenvalues()(i) > tol) {
          next.emplace_back(lo + start, i + 1 - start);
          start = i + 1;
        }
      }
    }
    clusters = next;
  }

  for (const auto& [lo, len] : clusters)
    if (len > 1) {
      std::ostringstream msg;
      msg << "labels cannot separate " << len << " states at level " << level << " (tuple";
      for (const double v : out.labels[static_cast<std::size_t>(lo)]) msg << " " << v;
      msg << ")";
      throw DegeneracyError(msg.str());
    }

  // Fix signs: the dominant coordinate of each column points up.
  for (int k = 0; k < d; ++k) {
    int arg = 0;
    for (int i = 1; i < d; ++i)
      if (std::abs(out.vectors(i, k)) > std::abs(out.vectors(arg, k))) arg = i;
    if (out.vectors(arg, k) < 0) out.vectors.col(k) *= -1.0;
  }

  for (std::size_t p = 0; p < out.ops.size(); ++p)
    for (int k = 0; k < d; ++k) {
      const double lambda = out.labels[static_cast<std::size_t>(k)][p];
      const double res = (gs[p] * out.vectors.col(k) - lambda * out.vectors.col(k)).norm();
      out.max_eigen_residual = std::max(out.max_eigen_residual, res);
    }
  return out;
}

int auto_sort_key(const EigenBasis& basis, SubsetMask op) {
  std::vector<int> hits;
  for (std::size_t p = 0; p < basis.ops.size(); ++p)
    if (!commutes_trivially(basis.ops[p], op)) hits.push_back(static_cast<int>(p));
  if (hits.empty()) return 0;  // already diagonal; any ordering label works
  if (hits.size() > 1)
    throw ArgumentError("operator " + subset_name(op) +
                        " is not adjacent to the chain; specify the sort label explicitly");
  return hits.front();
}

namespace {

// Group columns by every label except sort_key (gap-clustered per position),
// then order groups lexicographically and columns inside a group by the
// (|λ|, λ) order of the sort_key label.
struct Grouping {
  std::vector<int> order;
  std::vector<TridiagonalAction::Group> groups;
};

Grouping group_columns(const std::vector<std::vector<double>>& labels, std::size_t n_ops,
                       int sort_key, double label_tol) {
  const int d = static_cast<int>(labels.size());
  std::vector<std::vector<double>> reps(static_cast<std::size_t>(d));
  for (std::size_t p = 0; p < n_ops; ++p) {
    if (static_cast<int>(p) == sort_key) continue;
    std::vector<double> column(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) column[static_cast<std::size_t>(k)] = labels[static_cast<std::size_t>(k)][p];
    const std::vector<double> r = cluster_representatives(column, label_tol);
    for (int k = 0; k < d; ++k) reps[static_cast<std::size_t>(k)].push_back(r[static_cast<std::size_t>(k)]);
  }
  std::map<std::vector<double>, std::vector<int>> buckets;
  for (int k = 0; k < d; ++k) buckets[reps[static_cast<std::size_t>(k)]].push_back(k);

  Grouping out;
  for (auto& [key, cols] : buckets) {
    std::sort(cols.begin(), cols.end(), [&](int a, int b) {
      const double la = labels[static_cast<std::size_t>(a)][static_cast<std::size_t>(sort_key)];
      const double lb = labels[static_cast<std::size_t>(b)][static_cast<std::size_t>(sort_key)];
      if (std::abs(la) != std::abs(lb)) return std::abs(la) < std::abs(lb);
      if (la != lb) return la < lb;
      return a < b;
    });
    TridiagonalAction::Group group;
    group.offset = static_cast<int>(out.order.size());
    group.size = static_cast<int>(cols.size());
    group.common_labels = key;
    out.order.insert(out.order.end(), cols.begin(), cols.end());
    out.groups.push_back(std::move(group));
  }
  return out;
}

}  // namespace

TridiagonalAction tridiagonal_action(const TensorSpace& space, SubsetMask op,
                                     const EigenBasis& basis, int sort_key) {
  const int d = basis.vectors.cols();
  if (sort_key < 0 || sort_key >= static_cast<int>(basis.ops.size()))
    throw ArgumentError("tridiagonal: sort label index out of range");

  TridiagonalAction out;
  out.sort_key = sort_key;
  Grouping grouping = group_columns(basis.labels, basis.ops.size(), sort_key, 1e-7);
  out.order = std::move(grouping.order);
  out.groups = std::move(grouping.groups);

  const Eigen::MatrixXd g = normalized_block(space, op, basis.level);
  Eigen::MatrixXd vp(d, d);
  for (int k = 0; k < d; ++k) vp.col(k) = basis.vectors.col(out.order[static_cast<std::size_t>(k)]);
  const Eigen::MatrixXd m = vp.transpose() * g * vp;

  const double norm = std::max(1.0, d > 0 ? g.cwiseAbs().maxCoeff() : 0.0);
  double worst = 0.0;
  out.diag.resize(static_cast<std::size_t>(d));
  if (d > 1) {
    out.super.resize(static_cast<std::size_t>(d - 1));
    out.sub.resize(static_cast<std::size_t>(d - 1));
  }
  for (int i = 0; i < d; ++i) {
    out.diag[static_cast<std::size_t>(i)] = m(i, i);
    if (i + 1 < d) {
      out.super[static_cast<std::size_t>(i)] = m(i, i + 1);
      out.sub[static_cast<std::size_t>(i)] = m(i + 1, i);
    }
    for (int j = 0; j < d; ++j)
      if (std::abs(i - j) >= 2) worst = std::max(worst, std::abs(m(i, j)));
  }
  out.offband_residual = worst / norm;
  return out;
}

std::vector<double> diagonal_labels(const TensorSpace& space, SubsetMask op,
                                    const EigenBasis& basis, double* residual) {
  const int d = basis.vectors.cols();
  const Eigen::MatrixXd g = normalized_block(space, op, basis.level);
  const Eigen::MatrixXd m = basis.vectors.transpose() * g * basis.vectors;
  const double norm = std::max(1.0, d > 0 ? g.cwiseAbs().maxCoeff() : 0.0);
  double worst = 0.0;
  std::vector<double> out(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    out[static_cast<std::size_t>(i)] = m(i, i);
    for (int j = 0; j < d; ++j)
      if (i != j) worst = std::max(worst, std::abs(m(i, j)));
  }
  if (residual) *residual = worst / norm;
  return out;
}

}  // namespace bi
