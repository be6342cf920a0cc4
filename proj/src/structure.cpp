#include "bannaiito/structure.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace bi {

bool commutes_trivially(SubsetMask a, SubsetMask b) {
  const SubsetMask common = a & b;
  return common == a || common == b || common == 0;
}

CasimirTable casimir_table(const TensorSpace& space) {
  CasimirTable table;
  for (SubsetMask a = 0; a <= full_mask(space.sites()); ++a)
    table.emplace(a, space.subset_casimir(a));
  return table;
}

namespace {

LeveledOperator residual_impl(const CasimirTable& table, SubsetMask a, SubsetMask b) {
  const Rational two(2);
  const auto& g = [&table](SubsetMask s) -> const LeveledOperator& {
    const auto it = table.find(s);
    if (it == table.end()) throw ArgumentError("structure: operator table misses " + subset_name(s));
    return it->second;
  };
  LeveledOperator out = bracket(BracketKind::Anticommutator, g(a), g(b));
  out -= g(a ^ b);
  out -= two * (g(a & b) * g(a | b));
  out -= two * (g(a & ~b) * g(b & ~a));
  return out;
}

}  // namespace

LeveledOperator bi_residual_from(const CasimirTable& table, SubsetMask a, SubsetMask b) {
  return residual_impl(table, a, b);
}

LeveledOperator bi_residual(const TensorSpace& space, SubsetMask a, SubsetMask b) {
  if (a == 0 || b == 0) throw ArgumentError("structure: relation wants nonempty subsets");
  if ((a | b) > full_mask(space.sites()))
    throw ArgumentError("structure: subset outside 1.." + std::to_string(space.sites()));
  // Materialize only the six operators involved.
  CasimirTable table;
  for (const SubsetMask s : {a, b, a ^ b, a & b, a | b, a & ~b, b & ~a})
    table.emplace(s, space.subset_casimir(s));
  return residual_impl(table, a, b);
}

namespace {

struct Task {
  SubsetMask a, b;
  bool centrality;
};

void run_tasks(const CasimirTable& table, const std::vector<Task>& tasks,
               std::vector<PairCheck>& out, int max_threads) {
  out.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& t = tasks[i];
      LeveledOperator r = t.centrality
                              ? bracket(BracketKind::Commutator, table.at(t.a), table.at(t.b))
                              : bi_residual_from(table, t.a, t.b);
      out[i] = PairCheck{t.a, t.b, first_violation(r)};
    }
  };
  int threads = max_threads > 0 ? max_threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min<int>(threads, static_cast<int>(tasks.size())));
  if (threads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace

StructureReport verify_table(const TensorSpace& space, const CasimirTable& table,
                             int max_threads) {
  const auto start = std::chrono::steady_clock::now();
  const int n = space.sites();
  const SubsetMask full = full_mask(n);

  std::vector<Task> pair_tasks;
  for (SubsetMask a = 1; a <= full; ++a)
    for (SubsetMask b = 1; b <= full; ++b) pair_tasks.push_back({a, b, false});

  std::vector<Task> central_tasks;
  std::vector<SubsetMask> centers;
  for (int i = 0; i < n; ++i) centers.push_back(SubsetMask{1} << i);
  centers.push_back(full);
  for (const SubsetMask c : centers)
    for (SubsetMask a = 1; a <= full; ++a) central_tasks.push_back({c, a, true});

  StructureReport report;
  report.n = n;
  run_tasks(table, pair_tasks, report.pairs, max_threads);
  run_tasks(table, central_tasks, report.centrality, max_threads);
  for (const auto& p : report.pairs) report.all_zero = report.all_zero && !p.violation;
  for (const auto& p : report.centrality) report.all_zero = report.all_zero && !p.violation;
  report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return report;
}

StructureReport verify_all(const TensorSpace& space, int max_threads) {
  return verify_table(space, casimir_table(space), max_threads);
}

EmbeddingReport b3_embedding_check(const TensorSpace& space, SubsetMask k, SubsetMask l,
                                   SubsetMask m) {
  if ((k & l) || (k & m) || (l & m))
    throw ArgumentError("embedding: groups " + subset_name(k) + ", " + subset_name(l) + ", " +
                        subset_name(m) + " must be pairwise disjoint");
  if ((k | l | m) > full_mask(space.sites()))
    throw ArgumentError("embedding: groups reach outside 1.." + std::to_string(space.sites()));
  if (k == 0 || l == 0 || m == 0)
    throw ArgumentError("embedding: groups must be nonempty");

  EmbeddingReport report;
  const SubsetMask groups[3] = {k, l, m};
  for (int i = 0; i < 3; ++i) {
    const SubsetMask gk = groups[i], gl = groups[(i + 1) % 3];
    EmbeddingInstance inst;
    inst.k = gk;
    inst.l = gl;
    inst.m = groups[(i + 2) % 3];
    inst.violation = first_violation(bi_residual(space, gk | gl, gl | inst.m));
    report.pass = report.pass && !inst.violation;
    report.instances.push_back(std::move(inst));
  }
  return report;
}

}  // namespace bi
