#include "bannaiito/connection.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace bi {

std::vector<SwapStep> adjacent_path(const std::vector<int>& from, const std::vector<int>& to) {
  const ChainAlgebra check_from = make_chain(from);
  const ChainAlgebra check_to = make_chain(to);
  (void)check_from;
  (void)check_to;
  const int n = static_cast<int>(from.size());
  if (to.size() != from.size()) throw ArgumentError("path: permutations of different lengths");

  // rank[i]: where from[i] has to end up inside `to`.
  std::vector<int> pos_in_to(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i) pos_in_to[static_cast<std::size_t>(to[static_cast<std::size_t>(i)])] = i;
  std::vector<int> rank(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    rank[static_cast<std::size_t>(i)] = pos_in_to[static_cast<std::size_t>(from[static_cast<std::size_t>(i)])];

  std::vector<SwapStep> path;
  std::vector<int> cur = from;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int i = 0; i + 1 < n; ++i) {
      if (rank[static_cast<std::size_t>(i)] > rank[static_cast<std::size_t>(i + 1)]) {
        SwapStep step;
        step.position = i + 1;
        step.before = cur;
        std::swap(rank[static_cast<std::size_t>(i)], rank[static_cast<std::size_t>(i + 1)]);
        std::swap(cur[static_cast<std::size_t>(i)], cur[static_cast<std::size_t>(i + 1)]);
        step.after = cur;
        path.push_back(std::move(step));
        moved = true;
      }
    }
  }
  return path;
}

namespace {

std::string perm_text(const std::vector<int>& perm) {
  std::string out = "(";
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(perm[i]);
  }
  return out + ")";
}

// Orders block members by the (|λ|, λ) value of the differing label; native
// column order when the chains differ in more than one operator.
void order_block(std::vector<int>& cols, const std::vector<std::vector<double>>& labels,
                 int diff_pos) {
  if (diff_pos < 0) return;
  std::sort(cols.begin(), cols.end(), [&](int a, int b) {
    const double la = labels[static_cast<std::size_t>(a)][static_cast<std::size_t>(diff_pos)];
    const double lb = labels[static_cast<std::size_t>(b)][static_cast<std::size_t>(diff_pos)];
    if (std::abs(la) != std::abs(lb)) return std::abs(la) < std::abs(lb);
    if (la != lb) return la < lb;
    return a < b;
  });
}

ConnectionMatrix assemble_cc(const EigenBasis& source, const EigenBasis& target,
                             const std::vector<int>& source_perm,
                             const std::vector<int>& target_perm, Eigen::MatrixXd global,
                             double label_tol) {
  if (source.level != target.level)
    throw ArgumentError("connection: bases live on different levels");
  if (source.ops.size() != target.ops.size() || source.vectors.cols() != target.vectors.cols())
    throw ArgumentError("connection: bases have incompatible label sets");
  const int d = static_cast<int>(source.vectors.cols());
  const std::size_t n_ops = source.ops.size();

  std::vector<int> common;
  int diff_pos = -1;
  int n_diff = 0;
  for (std::size_t p = 0; p < n_ops; ++p) {
    if (source.ops[p] == target.ops[p]) {
      common.push_back(static_cast<int>(p));
    } else {
      ++n_diff;
      diff_pos = static_cast<int>(p);
    }
  }
  if (n_diff != 1) diff_pos = -1;

  // Cluster each shared label over both bases jointly, so that matching
  // eigenvalues land on one representative.
  std::vector<std::vector<double>> src_key(static_cast<std::size_t>(d));
  std::vector<std::vector<double>> tgt_key(static_cast<std::size_t>(d));
  for (const int p : common) {
    std::vector<double> values;
    values.reserve(2 * static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
      values.push_back(source.labels[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)]);
    for (int k = 0; k < d; ++k)
      values.push_back(target.labels[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)]);
    const std::vector<double> reps = cluster_representatives(values, label_tol);
    for (int k = 0; k < d; ++k) {
      src_key[static_cast<std::size_t>(k)].push_back(reps[static_cast<std::size_t>(k)]);
      tgt_key[static_cast<std::size_t>(k)].push_back(reps[static_cast<std::size_t>(d + k)]);
    }
  }

  std::map<std::vector<double>, std::pair<std::vector<int>, std::vector<int>>> buckets;
  for (int k = 0; k < d; ++k) buckets[src_key[static_cast<std::size_t>(k)]].first.push_back(k);
  for (int k = 0; k < d; ++k) buckets[tgt_key[static_cast<std::size_t>(k)]].second.push_back(k);

  ConnectionMatrix cc;
  cc.source_perm = source_perm;
  cc.target_perm = target_perm;
  cc.level = source.level;
  cc.global = std::move(global);

  std::vector<int> src_block(static_cast<std::size_t>(d), -1);
  std::vector<int> tgt_block(static_cast<std::size_t>(d), -1);
  for (auto& [key, members] : buckets) {
    auto& [src_cols, tgt_rows] = members;
    if (src_cols.size() != tgt_rows.size()) {
      std::ostringstream msg;
      msg << "connection: common labels (";
      for (const double v : key) msg << " " << v;
      msg << " ) hold " << src_cols.size() << " source but " << tgt_rows.size()
          << " target states";
      throw PairingError(msg.str());
    }
    order_block(src_cols, source.labels, diff_pos);
    order_block(tgt_rows, target.labels, diff_pos);

    CCBlock block;
    block.common_labels = key;
    block.source_cols = src_cols;
    block.target_rows = tgt_rows;
    if (diff_pos >= 0) {
      for (const int c : src_cols)
        block.source_diff.push_back(
            source.labels[static_cast<std::size_t>(c)][static_cast<std::size_t>(diff_pos)]);
      for (const int r : tgt_rows)
        block.target_diff.push_back(
            target.labels[static_cast<std::size_t>(r)][static_cast<std::size_t>(diff_pos)]);
    }
    const int bsize = static_cast<int>(src_cols.size());
    block.m.resize(bsize, bsize);
    for (int i = 0; i < bsize; ++i)
      for (int j = 0; j < bsize; ++j)
        block.m(i, j) = cc.global(tgt_rows[static_cast<std::size_t>(i)],
                                  src_cols[static_cast<std::size_t>(j)]);

    const int id = static_cast<int>(cc.blocks.size());
    for (const int c : src_cols) src_block[static_cast<std::size_t>(c)] = id;
    for (const int r : tgt_rows) tgt_block[static_cast<std::size_t>(r)] = id;

    const Eigen::MatrixXd gram =
        block.m.transpose() * block.m - Eigen::MatrixXd::Identity(bsize, bsize);
    cc.orthogonality_residual =
        std::max(cc.orthogonality_residual, bsize > 0 ? gram.cwiseAbs().maxCoeff() : 0.0);
    cc.blocks.push_back(std::move(block));
  }

  for (int t = 0; t < d; ++t)
    for (int s = 0; s < d; ++s)
      if (tgt_block[static_cast<std::size_t>(t)] != src_block[static_cast<std::size_t>(s)])
        cc.block_residual = std::max(cc.block_residual, std::abs(cc.global(t, s)));
  return cc;
}

}  // namespace

ConnectionMatrix overlap(const EigenBasis& source, const EigenBasis& target,
                         const std::vector<int>& source_perm,
                         const std::vector<int>& target_perm, double label_tol) {
  Eigen::MatrixXd global = target.vectors.transpose() * source.vectors;
  return assemble_cc(source, target, source_perm, target_perm, std::move(global), label_tol);
}

ConnectionMatrix block_overlap(const EigenBasis& source, const EigenBasis& target,
                               const SwapStep& step, double label_tol) {
  if (source.ops != labeled_operators(make_chain(step.before)) ||
      target.ops != labeled_operators(make_chain(step.after)))
    throw ArgumentError("connection: bases do not match the swap step " +
                        perm_text(step.before) + " -> " + perm_text(step.after));
  return overlap(source, target, step.before, step.after, label_tol);
}

ConnectionMatrix direct_overlap(const TensorSpace& space, const std::vector<int>& source_perm,
                                const std::vector<int>& target_perm, int level,
                                const SpectralOptions& opts, double label_tol) {
  const EigenBasis source = joint_eigenbasis(space, make_chain(source_perm), level, opts);
  const EigenBasis target = joint_eigenbasis(space, make_chain(target_perm), level, opts);
  return overlap(source, target, source_perm, target_perm, label_tol);
}

ConnectionMatrix compose_path(const TensorSpace& space, const std::vector<int>& start,
                              const std::vector<SwapStep>& path, int level,
                              const SpectralOptions& opts, double label_tol) {
  for (std::size_t i = 0; i < path.size(); ++i) {
    const std::vector<int>& expect = i == 0 ? start : path[i - 1].after;
    if (path[i].before != expect)
      throw ArgumentError("path: step " + std::to_string(i) + " starts at " +
                          perm_text(path[i].before) + " instead of " + perm_text(expect));
  }
  const EigenBasis first = joint_eigenbasis(space, make_chain(start), level, opts);
  const int d = static_cast<int>(first.vectors.cols());
  Eigen::MatrixXd global = Eigen::MatrixXd::Identity(d, d);

  EigenBasis current = first;
  std::vector<int> cur_perm = start;
  for (const SwapStep& step : path) {
    EigenBasis next = joint_eigenbasis(space, make_chain(step.after), level, opts);
    const ConnectionMatrix c = block_overlap(current, next, step, label_tol);
    global = c.global * global;
    current = std::move(next);
    cur_perm = step.after;
  }
  return assemble_cc(first, current, start, cur_perm, std::move(global), label_tol);
}

RecurrenceReport check_three_term(const ConnectionMatrix& cc, const TridiagonalAction& tri) {
  if (cc.blocks.size() != tri.groups.size())
    throw PairingError("recurrence: connection has " + std::to_string(cc.blocks.size()) +
                       " blocks but the tridiagonal action " + std::to_string(tri.groups.size()) +
                       " groups");
  RecurrenceReport report;
  for (std::size_t b = 0; b < cc.blocks.size(); ++b) {
    const CCBlock& block = cc.blocks[b];
    const TridiagonalAction::Group& group = tri.groups[b];
    if (block.common_labels.size() != group.common_labels.size())
      throw PairingError("recurrence: label arity mismatch");
    for (std::size_t p = 0; p < block.common_labels.size(); ++p)
      if (std::abs(block.common_labels[p] - group.common_labels[p]) > 1e-6)
        throw PairingError("recurrence: blocks and groups disagree on common labels");
    const int size = static_cast<int>(block.source_cols.size());
    if (group.size != size) throw PairingError("recurrence: block and group sizes differ");
    if (block.target_diff.empty())
      throw ArgumentError("recurrence: connection step has no differing label");

    double scale = 1.0;
    for (const double v : block.target_diff) scale = std::max(scale, std::abs(v));
    const int o = group.offset;
    double worst = 0.0;
    for (int k = 0; k < size; ++k) {
      const double lambda = block.target_diff[static_cast<std::size_t>(k)];
      for (int t = 0; t < size; ++t) {
        double rhs = tri.diag[static_cast<std::size_t>(o + t)] * block.m(k, t);
        if (t - 1 >= 0)
          rhs += tri.sub[static_cast<std::size_t>(o + t - 1)] * block.m(k, t - 1);
        if (t + 1 < size)
          rhs += tri.super[static_cast<std::size_t>(o + t)] * block.m(k, t + 1);
        worst = std::max(worst, std::abs(lambda * block.m(k, t) - rhs));
      }
    }
    report.per_block.push_back(worst / scale);
    report.max_residual = std::max(report.max_residual, worst / scale);
  }
  return report;
}

Eigen::MatrixXd act_in_basis(const ConnectionMatrix& cc,
                             const std::vector<double>& target_labels) {
  if (static_cast<int>(target_labels.size()) != cc.global.rows())
    throw DimensionError("act_in_basis: label count does not match the basis size");
  const Eigen::VectorXd lambda =
      Eigen::Map<const Eigen::VectorXd>(target_labels.data(), cc.global.rows());
  return cc.global.transpose() * lambda.asDiagonal() * cc.global;
}

}  // namespace bi
