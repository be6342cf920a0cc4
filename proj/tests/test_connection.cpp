#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <random>

#include "bannaiito/connection.hpp"
#include "test_util.hpp"

using bi::ConnectionMatrix;
using bi::EigenBasis;
using bi::Rational;
using bi::SubsetMask;
using bi::SwapStep;
using bi::TensorSpace;

namespace {

TensorSpace three_site_space(int max_level) {
  return TensorSpace(
      {{Rational(1, 2), max_level}, {Rational(1, 3), max_level}, {Rational(1, 4), max_level}},
      max_level);
}

int inversions(const std::vector<int>& from, const std::vector<int>& to) {
  std::vector<int> pos(to.size() + 1);
  for (std::size_t i = 0; i < to.size(); ++i) pos[static_cast<std::size_t>(to[i])] = static_cast<int>(i);
  int count = 0;
  for (std::size_t i = 0; i < from.size(); ++i)
    for (std::size_t j = i + 1; j < from.size(); ++j)
      if (pos[static_cast<std::size_t>(from[i])] > pos[static_cast<std::size_t>(from[j])]) ++count;
  return count;
}

}  // namespace

TEST_CASE("swap paths between permutations") {
  CHECK(bi::adjacent_path({1, 2, 3}, {1, 2, 3}).empty());

  const auto single = bi::adjacent_path({1, 2, 3, 4}, {2, 1, 3, 4});
  REQUIRE(single.size() == 1);
  CHECK(single[0].position == 1);
  CHECK(single[0].trivial());

  const auto two = bi::adjacent_path({1, 2, 3, 4}, {3, 1, 2, 4});
  REQUIRE(two.size() == 2);
  CHECK(two[0].position == 2);
  CHECK(two[0].after == std::vector<int>{1, 3, 2, 4});
  CHECK(two[1].position == 1);
  CHECK(two[1].after == std::vector<int>{3, 1, 2, 4});
  CHECK_FALSE(two[0].trivial());
  CHECK(two[1].trivial());

  // length = inversion count, steps adjacent and contiguous
  std::mt19937 rng(20240817);
  std::vector<int> from{1, 2, 3, 4, 5};
  std::vector<int> to = from;
  for (int round = 0; round < 25; ++round) {
    std::shuffle(from.begin(), from.end(), rng);
    std::shuffle(to.begin(), to.end(), rng);
    const auto path = bi::adjacent_path(from, to);
    CHECK(static_cast<int>(path.size()) == inversions(from, to));
    std::vector<int> cur = from;
    for (const auto& step : path) {
      CHECK(step.before == cur);
      cur = step.before;
      REQUIRE(step.position >= 1);
      REQUIRE(step.position < static_cast<int>(cur.size()));
      std::swap(cur[static_cast<std::size_t>(step.position - 1)],
                cur[static_cast<std::size_t>(step.position)]);
      CHECK(step.after == cur);
    }
    CHECK(cur == to);
  }

  CHECK_THROWS_AS(bi::adjacent_path({1, 2}, {1, 2, 3}), bi::ArgumentError);
  CHECK_THROWS_AS(bi::adjacent_path({1, 1}, {1, 2}), bi::ArgumentError);
}

TEST_CASE("a position-one swap connects a basis to itself") {
  const TensorSpace space = three_site_space(2);
  const ConnectionMatrix cc = bi::direct_overlap(space, {1, 2, 3}, {2, 1, 3}, 2);
  const int d = space.level_dimension(2);
  CHECK((cc.global - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(cc.orthogonality_residual < 1e-12);
  for (const auto& block : cc.blocks) CHECK(block.m.rows() == 1);  // full label tuples shared

  // no differing label, so the recurrence has nothing to check against
  const EigenBasis basis = bi::joint_eigenbasis(space, bi::make_chain({1, 2, 3}), 2);
  const auto tri = bi::tridiagonal_action(space, 0b011, basis, 0);
  CHECK_THROWS_AS(bi::check_three_term(cc, tri), bi::Error);
}

TEST_CASE("one swap on three sites: blocks, orthogonality, recurrence") {
  const TensorSpace space = three_site_space(3);
  for (const int level : {2, 3}) {
    const EigenBasis source = bi::joint_eigenbasis(space, bi::make_chain({1, 2, 3}), level);
    const EigenBasis target = bi::joint_eigenbasis(space, bi::make_chain({1, 3, 2}), level);
    const auto path = bi::adjacent_path({1, 2, 3}, {1, 3, 2});
    REQUIRE(path.size() == 1);
    const ConnectionMatrix cc = bi::block_overlap(source, target, path[0]);

    std::vector<int> sizes;
    for (const auto& block : cc.blocks) sizes.push_back(static_cast<int>(block.m.rows()));
    std::sort(sizes.begin(), sizes.end());
    std::vector<int> want;
    for (int e = 0; e <= level; ++e) want.push_back(e + 1);
    CHECK(sizes == want);

    CHECK(cc.orthogonality_residual < 1e-9);
    CHECK(cc.block_residual < 1e-9);
    const int d = space.level_dimension(level);
    CHECK((cc.global.transpose() * cc.global - Eigen::MatrixXd::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() < 1e-10);

    for (const auto& block : cc.blocks) {
      CHECK(block.common_labels.size() == 1);  // only the full Casimir is shared
      REQUIRE(block.source_diff.size() == static_cast<std::size_t>(block.m.cols()));
      REQUIRE(block.target_diff.size() == static_cast<std::size_t>(block.m.rows()));
      for (std::size_t t = 0; t + 1 < block.target_diff.size(); ++t)
        CHECK(std::abs(block.target_diff[t]) < std::abs(block.target_diff[t + 1]) + 1e-9);
    }

    // the swapped-in generator drives a three-term recurrence across each block
    const auto tri = bi::tridiagonal_action(space, 0b101, source, 0);
    const auto rec = bi::check_three_term(cc, tri);
    CHECK(rec.max_residual < 1e-8);
    CHECK(rec.per_block.size() == cc.blocks.size());
  }
}

TEST_CASE("tampered labels break the pairing") {
  const TensorSpace space = three_site_space(2);
  const EigenBasis source = bi::joint_eigenbasis(space, bi::make_chain({1, 2, 3}), 2);
  const EigenBasis target = bi::joint_eigenbasis(space, bi::make_chain({1, 3, 2}), 2);
  EigenBasis tampered = source;
  tampered.labels[0][1] += 0.37;  // shift one total label off every cluster
  CHECK_THROWS_AS(bi::overlap(tampered, target, {1, 2, 3}, {1, 3, 2}), bi::PairingError);

  // bases must match the step they are used for
  const auto wrong_step = bi::adjacent_path({1, 2, 3}, {2, 1, 3});
  const EigenBasis other = bi::joint_eigenbasis(space, bi::make_chain({3, 2, 1}), 2);
  CHECK_THROWS_AS(bi::block_overlap(other, target, wrong_step[0]), bi::ArgumentError);
}

TEST_CASE("composition along any path matches the direct overlap") {
  const TensorSpace space = three_site_space(3);
  const std::vector<int> start{1, 2, 3};
  const std::vector<int> target{2, 3, 1};
  for (const int level : {2, 3}) {
    const ConnectionMatrix direct = bi::direct_overlap(space, start, target, level);

    const ConnectionMatrix composed =
        bi::compose_path(space, start, bi::adjacent_path(start, target), level);
    CHECK((composed.global - direct.global).cwiseAbs().maxCoeff() < 1e-8);

    // a detour through the full reversal gives the same connection
    std::vector<SwapStep> detour = bi::adjacent_path(start, {3, 2, 1});
    const auto back = bi::adjacent_path({3, 2, 1}, target);
    detour.insert(detour.end(), back.begin(), back.end());
    CHECK(detour.size() > bi::adjacent_path(start, target).size());
    const ConnectionMatrix roundabout = bi::compose_path(space, start, detour, level);
    CHECK((roundabout.global - direct.global).cwiseAbs().maxCoeff() < 1e-8);

    CHECK(composed.source_perm == start);
    CHECK(composed.target_perm == target);
  }

  // a path that does not start where claimed is rejected
  const auto path = bi::adjacent_path({1, 2, 3}, {1, 3, 2});
  CHECK_THROWS_AS(bi::compose_path(space, {3, 2, 1}, path, 2), bi::ArgumentError);
}

TEST_CASE("transport of a diagonal action into another basis") {
  const TensorSpace space = three_site_space(2);
  const int level = 2;
  const EigenBasis source = bi::joint_eigenbasis(space, bi::make_chain({1, 2, 3}), level);
  const EigenBasis target = bi::joint_eigenbasis(space, bi::make_chain({1, 3, 2}), level);
  const ConnectionMatrix cc = bi::overlap(source, target, {1, 2, 3}, {1, 3, 2});

  // {1,3} is diagonal in the target chain; pull it back to the source basis
  double residual = 1.0;
  const auto labels = bi::diagonal_labels(space, 0b101, target, &residual);
  REQUIRE(residual < 1e-10);
  const Eigen::MatrixXd pulled = bi::act_in_basis(cc, labels);
  const Eigen::MatrixXd g = bi::normalized_block(space, 0b101, level);
  const Eigen::MatrixXd direct = source.vectors.transpose() * g * source.vectors;
  CHECK((pulled - direct).cwiseAbs().maxCoeff() < 1e-9);

  CHECK_THROWS_AS(bi::act_in_basis(cc, std::vector<double>{1.0}), bi::DimensionError);
}
