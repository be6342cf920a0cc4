// Acceptance runner: one line per criterion, exit code = number of failures.
// Everything here goes through the public library surface; the determinism
// criterion drives the installed CLI binary.

#include <sys/wait.h>

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bannaiito/connection.hpp"
#include "bannaiito/json_io.hpp"
#include "bannaiito/spectral.hpp"
#include "bannaiito/structure.hpp"

using bi::ChainAlgebra;
using bi::EigenBasis;
using bi::Rational;
using bi::SparseRatMatrix;
using bi::SubsetMask;
using bi::SwapStep;
using bi::TensorSpace;

namespace {

int g_failures = 0;

void report(int number, const std::string& title, bool pass, const std::string& detail) {
  std::cout << (pass ? "[PASS] " : "[FAIL] ") << number << ". " << title;
  if (!detail.empty()) std::cout << " — " << detail;
  std::cout << std::endl;
  if (!pass) ++g_failures;
}

template <typename Fn>
void criterion(int number, const std::string& title, Fn&& fn) {
  try {
    std::string detail;
    const bool pass = fn(detail);
    report(number, title, pass, detail);
  } catch (const std::exception& e) {
    report(number, title, false, std::string("exception: ") + e.what());
  }
}

std::vector<bi::ModuleSpec> sites_n3(int truncation) {
  return {{Rational(1, 2), truncation}, {Rational(1, 3), truncation},
          {Rational(1, 4), truncation}};
}

std::vector<bi::ModuleSpec> sites_n4(int truncation) {
  return {{Rational(1, 2), truncation}, {Rational(1, 3), truncation},
          {Rational(1, 4), truncation}, {Rational(1, 5), truncation}};
}

std::string d(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

// ---- criterion 8/9 helpers --------------------------------------------------

struct WalkResult {
  bi::ConnectionMatrix direct;
  Eigen::MatrixXd composed;
  double orthogonality = 0.0;
  double block_res = 0.0;
  double recurrence = 0.0;
  double eig_residual = 0.0;
};

// Mirrors the full connection pipeline: composes the adjacent-swap path,
// checking the three-term recurrence across every chain-changing swap.
WalkResult walk_path(const TensorSpace& space, const std::vector<int>& from,
                     const std::vector<SwapStep>& path, const std::vector<int>& to, int level,
                     std::map<std::vector<int>, EigenBasis>& cache) {
  const auto basis_of = [&](const std::vector<int>& perm) -> const EigenBasis& {
    auto it = cache.find(perm);
    if (it == cache.end())
      it = cache.emplace(perm, bi::joint_eigenbasis(space, bi::make_chain(perm), level)).first;
    return it->second;
  };

  WalkResult r;
  const EigenBasis& first = basis_of(from);
  r.eig_residual = first.max_eigen_residual;
  r.composed = Eigen::MatrixXd::Identity(first.vectors.cols(), first.vectors.cols());
  const EigenBasis* current = &first;
  for (const bi::SwapStep& step : path) {
    const EigenBasis& next = basis_of(step.after);
    r.eig_residual = std::max(r.eig_residual, next.max_eigen_residual);
    const bi::ConnectionMatrix c = bi::block_overlap(*current, next, step);
    r.orthogonality = std::max(r.orthogonality, c.orthogonality_residual);
    r.block_res = std::max(r.block_res, c.block_residual);
    if (!step.trivial()) {
      const ChainAlgebra after_chain = bi::make_chain(step.after);
      const SubsetMask incoming =
          after_chain.generators[static_cast<std::size_t>(step.position - 2)];
      const auto tri = bi::tridiagonal_action(space, incoming, *current, step.position - 2);
      r.recurrence = std::max(r.recurrence, bi::check_three_term(c, tri).max_residual);
    }
    r.composed = c.global * r.composed;
    current = &next;
  }
  r.direct = bi::overlap(first, basis_of(to), from, to);
  r.orthogonality = std::max(r.orthogonality, r.direct.orthogonality_residual);
  r.block_res = std::max(r.block_res, r.direct.block_residual);
  return r;
}

std::vector<SwapStep> concat_via(const std::vector<int>& from, const std::vector<int>& mid,
                                 const std::vector<int>& to) {
  std::vector<SwapStep> path = bi::adjacent_path(from, mid);
  const auto tail = bi::adjacent_path(mid, to);
  path.insert(path.end(), tail.begin(), tail.end());
  return path;
}

// ---- criterion 10 helpers ---------------------------------------------------

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + BI_CLI_PATH + "\" " + args;
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  std::cout.setf(std::ios::unitbuf);  // line-by-line progress under ctest

  criterion(1, "structure relations vanish exactly over all subset pairs (n=3,4)",
            [](std::string& detail) {
              const auto t0 = std::chrono::steady_clock::now();
              const TensorSpace s3(sites_n3(4), 4);
              const auto r3 = bi::verify_all(s3);
              bool ok = r3.all_zero && r3.pairs.size() == 49;

              const TensorSpace s4(sites_n4(6), 6);
              ok = ok && s4.level_dimension(6) == 84;
              const auto r4 = bi::verify_all(s4);
              ok = ok && r4.all_zero && r4.pairs.size() == 225;
              const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                  std::chrono::steady_clock::now() - t0)
                                  .count();
              detail = "49+225 ordered pairs, level-6 block dim " +
                       std::to_string(s4.level_dimension(6)) + ", exact zeros, " +
                       std::to_string(ms) + " ms";
              return ok;
            });

  criterion(2, "subset Casimirs of singletons and the empty set are the exact scalars",
            [](std::string& detail) {
              const std::vector<std::vector<Rational>> mus = {
                  {Rational(1, 2), Rational(1, 3), Rational(1, 4)},
                  {Rational(2, 3), Rational(1, 5), Rational(3, 7)},
                  {Rational(-1, 4), Rational(7, 2), Rational(1)}};
              bool ok = true;
              for (const auto& mu : mus) {
                std::vector<bi::ModuleSpec> sites;
                for (const auto& m : mu) sites.push_back({m, 2});
                const TensorSpace space(sites, 2);
                for (int i = 0; i < 3; ++i)
                  ok = ok && space.subset_casimir(SubsetMask{1} << i) ==
                                 space.scalar_operator(mu[static_cast<std::size_t>(i)]);
                ok = ok && space.subset_casimir(0) == space.scalar_operator(Rational(-1, 2));
              }
              detail = "3 parameter vectors, identities exact on all retained levels";
              return ok;
            });

  criterion(
      3, "defining relations hold exactly below the truncation edge for all realizations",
      [](std::string& detail) {
        bool ok = true;
        for (const auto& mu : {Rational(1, 2), Rational(1, 3), Rational(-1, 4)}) {
          const auto rep = bi::verify_osp_relations(bi::build_site({mu, 6}));
          ok = ok && rep.pass;
        }
        const TensorSpace space(sites_n4(3), 3);
        int checked = 0;
        for (SubsetMask a = 1; a <= bi::full_mask(4); ++a) {
          const auto rep = bi::verify_osp_relations(space.subset_generators(a));
          ok = ok && rep.pass;
          ++checked;
        }
        detail = "3 single modules at degree 6 and " + std::to_string(checked) +
                 " subset realizations incl. {1,3}";
        return ok;
      });

  criterion(4, "the two iteration orders of the coproduct agree exactly",
            [](std::string& detail) {
              const auto a = bi::build_site({Rational(1, 2), 2});
              const auto b = bi::build_site({Rational(1, 3), 2});
              const auto c = bi::build_site({Rational(1, 4), 2});
              const auto left = bi::coproduct_pair(bi::coproduct_pair(a, b), c);
              const auto right = bi::coproduct_pair(a, bi::coproduct_pair(b, c));
              detail = "27-dimensional product, entrywise rational equality";
              return left.jplus == right.jplus && left.jminus == right.jminus &&
                     left.j0 == right.j0 && left.parity == right.parity;
            });

  criterion(5, "two equal modules: frozen level-1 block and its eigenvalues",
            [](std::string& detail) {
              const TensorSpace space({{Rational(1, 2), 1}, {Rational(1, 2), 1}}, 1);
              SparseRatMatrix want(2, 2);
              want.set(0, 0, Rational(-1, 2));
              want.set(0, 1, Rational(2));
              want.set(1, 0, Rational(2));
              want.set(1, 1, Rational(-1, 2));
              bool ok = space.subset_casimir(0b11).blocks.at(1) == want;

              Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
                  bi::normalized_block(space, 0b11, 1));
              ok = ok && std::abs(es.eigenvalues()(0) + 2.5) < 1e-10 &&
                   std::abs(es.eigenvalues()(1) - 1.5) < 1e-10;
              detail = "block [[-1/2,2],[2,-1/2]] exact; eigenvalues -5/2, 3/2 within 1e-10";
              return ok;
            });

  criterion(6, "nested-chain families commute exactly and are maximal", [](std::string& detail) {
    const TensorSpace space(sites_n4(3), 3);
    const SubsetMask full = bi::full_mask(4);

    std::vector<std::vector<int>> perms{{1, 2, 3, 4}};
    std::set<std::vector<SubsetMask>> seen{bi::make_chain(perms[0]).generators};
    std::mt19937 rng(424242);
    std::vector<int> p{1, 2, 3, 4};
    while (perms.size() < 6) {
      std::shuffle(p.begin(), p.end(), rng);
      if (seen.insert(bi::make_chain(p).generators).second) perms.push_back(p);
    }

    bool ok = true;
    int witnesses = 0;
    for (const auto& perm : perms) {
      const ChainAlgebra chain = bi::make_chain(perm);
      std::vector<SubsetMask> family = bi::labeled_operators(chain);
      for (int i = 0; i < 4; ++i) family.push_back(SubsetMask{1} << i);
      for (const SubsetMask a : family)
        for (const SubsetMask b : family)
          ok = ok && bracket(bi::BracketKind::Commutator, space.subset_casimir(a),
                             space.subset_casimir(b))
                         .is_zero();

      // maximality: every generator outside the family breaks commutativity
      for (SubsetMask b = 1; b <= full; ++b) {
        if (bi::subset_size(b) <= 1 || b == full) continue;
        if (std::find(chain.generators.begin(), chain.generators.end(), b) !=
            chain.generators.end())
          continue;
        bool breaks = false;
        for (const SubsetMask g : chain.generators)
          if (!bracket(bi::BracketKind::Commutator, space.subset_casimir(g),
                       space.subset_casimir(b))
                   .is_zero()) {
            breaks = true;
            break;
          }
        ok = ok && breaks;
        if (breaks) ++witnesses;
      }
    }
    detail = "6 distinct chains (identity + 5 seeded draws), " + std::to_string(witnesses) +
             " non-members rejected";
    return ok;
  });

  criterion(7, "swapped-in Casimirs are tridiagonal in the nested-chain eigenbasis",
            [](std::string& detail) {
              const TensorSpace space(sites_n3(4), 4);
              const ChainAlgebra chain = bi::make_chain({1, 2, 3});
              double worst = 0.0;
              bool ok = true;
              for (const int level : {2, 3, 4}) {
                const EigenBasis basis = bi::joint_eigenbasis(space, chain, level);
                ok = ok && basis.max_eigen_residual < 1e-10;
                for (const SubsetMask op : {SubsetMask{0b101}, SubsetMask{0b110}}) {
                  const auto tri =
                      bi::tridiagonal_action(space, op, basis, bi::auto_sort_key(basis, op));
                  worst = std::max(worst, tri.offband_residual);
                }
              }
              ok = ok && worst < 1e-9;
              detail = "levels 2..4, ops {1,3} and {2,3}, max off-band " + d(worst);
              return ok;
            });

  criterion(8, "connection blocks are orthogonal; paths and recurrences agree",
            [](std::string& detail) {
              double worst_orth = 0.0, worst_block = 0.0, worst_rec = 0.0, worst_path = 0.0;
              bool ok = true;

              const auto exercise = [&](const TensorSpace& space, const std::vector<int>& from,
                                        const std::vector<int>& to, const std::vector<int>& mid,
                                        int level) {
                std::map<std::vector<int>, EigenBasis> cache;
                const auto direct_path = bi::adjacent_path(from, to);
                const WalkResult a = walk_path(space, from, direct_path, to, level, cache);
                const auto detour = concat_via(from, mid, to);
                const WalkResult b = walk_path(space, from, detour, to, level, cache);
                ok = ok && detour.size() != direct_path.size();  // genuinely distinct paths

                worst_orth = std::max({worst_orth, a.orthogonality, b.orthogonality});
                worst_block = std::max({worst_block, a.block_res, b.block_res});
                worst_rec = std::max({worst_rec, a.recurrence, b.recurrence});
                worst_path = std::max(
                    {worst_path, (a.composed - a.direct.global).cwiseAbs().maxCoeff(),
                     (b.composed - b.direct.global).cwiseAbs().maxCoeff()});
              };

              const TensorSpace s3(sites_n3(3), 3);
              exercise(s3, {1, 2, 3}, {1, 3, 2}, {3, 2, 1}, 3);
              exercise(s3, {1, 2, 3}, {2, 3, 1}, {3, 2, 1}, 3);
              const TensorSpace s4(sites_n4(2), 2);
              exercise(s4, {1, 2, 3, 4}, {2, 3, 4, 1}, {1, 3, 2, 4}, 2);

              ok = ok && worst_orth < 1e-9 && worst_block < 1e-9 && worst_rec < 1e-8 &&
                   worst_path < 1e-8;
              detail = "orth " + d(worst_orth) + ", block " + d(worst_block) + ", recurrence " +
                       d(worst_rec) + ", path-vs-direct " + d(worst_path);
              return ok;
            });

  criterion(9, "transport reproduces every generator in the nested-chain basis",
            [](std::string& detail) {
              const TensorSpace space(sites_n4(3), 3);
              const std::vector<int> id_perm{1, 2, 3, 4};
              double worst = 0.0;
              bool ok = true;
              std::map<std::vector<int>, EigenBasis> cache;
              const auto basis_of = [&](const std::vector<int>& perm,
                                        int level) -> const EigenBasis& {
                auto key = perm;
                key.push_back(level);
                auto it = cache.find(key);
                if (it == cache.end())
                  it = cache
                           .emplace(key,
                                    bi::joint_eigenbasis(space, bi::make_chain(perm), level))
                           .first;
                return it->second;
              };

              for (const int level : {2, 3}) {
                const EigenBasis& home = basis_of(id_perm, level);
                for (SubsetMask a = 1; a <= bi::full_mask(4); ++a) {
                  // a chain whose prefix is exactly this subset
                  std::vector<int> perm = bi::subset_sites(a);
                  for (int s = 1; s <= 4; ++s)
                    if (!(a & (SubsetMask{1} << (s - 1)))) perm.push_back(s);
                  const EigenBasis& diag_basis = basis_of(perm, level);

                  double diag_res = 0.0;
                  const auto labels = bi::diagonal_labels(space, a, diag_basis, &diag_res);
                  ok = ok && diag_res < 1e-10;

                  const auto cc = bi::overlap(home, diag_basis, id_perm, perm);
                  const Eigen::MatrixXd via_cc = bi::act_in_basis(cc, labels);
                  const Eigen::MatrixXd direct = home.vectors.transpose() *
                                                 bi::normalized_block(space, a, level) *
                                                 home.vectors;
                  worst = std::max(worst, (via_cc - direct).cwiseAbs().maxCoeff());
                }
              }
              ok = ok && worst < 1e-9;
              detail = "15 generators, levels 2 and 3, max deviation " + d(worst);
              return ok;
            });

  criterion(10, "repeated CLI runs produce byte-identical reports", [](std::string& detail) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path("acceptance_cli_tmp");
    fs::create_directories(dir);
    const fs::path cfg = dir / "space.json";
    {
      std::ofstream f(cfg);
      f << R"({"n":3,"sites":[{"mu":"1/2"},{"mu":"1/3"},{"mu":"1/4"}],"max_level":2})";
    }

    struct Run {
      std::string name, args;
    };
    const std::vector<Run> runs = {
        {"verify", "verify --config " + cfg.string()},
        {"spectrum", "spectrum --config " + cfg.string() + " --chain 1,2,3 --level 2"},
        {"tridiag", "tridiag --config " + cfg.string() + " --chain 1,2,3 --op 2,3 --level 2"},
        {"cc", "cc --config " + cfg.string() + " --from 1,2,3 --to 2,3,1 --level 2"},
        {"verify_csv", "verify --csv --config " + cfg.string()},
    };
    bool ok = true;
    for (const auto& run : runs) {
      const fs::path out1 = dir / (run.name + "_1.out");
      const fs::path out2 = dir / (run.name + "_2.out");
      const int c1 = run_cli(run.args + " --out " + out1.string());
      // the second run goes through a different thread budget on purpose
      const int c2 = std::system(("BI_THREADS=2 \"" BI_CLI_PATH "\" " + run.args + " --out " +
                                  out2.string())
                                     .c_str());
      const int code2 = (c2 != -1 && WIFEXITED(c2)) ? WEXITSTATUS(c2) : -1;
      const std::string b1 = slurp(out1);
      const std::string b2 = slurp(out2);
      const bool same = c1 == 0 && code2 == 0 && !b1.empty() && b1 == b2;
      if (!same) detail += (detail.empty() ? "" : "; ") + run.name + " differs or failed";
      ok = ok && same;
    }
    if (ok) detail = std::to_string(runs.size()) + " commands, two runs each, byte-identical";
    return ok;
  });

  if (g_failures == 0)
    std::cout << "all criteria satisfied" << std::endl;
  else
    std::cout << g_failures << " criteria failed" << std::endl;
  return g_failures;
}
