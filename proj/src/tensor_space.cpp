#include "bannaiito/tensor_space.hpp"

#include <algorithm>
#include <functional>

namespace bi {

int subset_size(SubsetMask a) {
  int k = 0;
  for (; a != 0; a &= a - 1) ++k;
  return k;
}

std::vector<int> subset_sites(SubsetMask a) {
  std::vector<int> sites;
  for (int i = 0; a != 0; ++i, a >>= 1)
    if (a & 1u) sites.push_back(i + 1);
  return sites;
}

SubsetMask subset_from_sites(const std::vector<int>& sites, int n) {
  SubsetMask a = 0;
  for (const int s : sites) {
    if (s < 1 || s > n) throw ArgumentError("subset: site " + std::to_string(s) + " outside 1.." +
                                            std::to_string(n));
    const SubsetMask bit = SubsetMask{1} << (s - 1);
    if (a & bit) throw ArgumentError("subset: duplicate site " + std::to_string(s));
    a |= bit;
  }
  return a;
}

std::string subset_name(SubsetMask a) {
  std::string out = "{";
  bool first = true;
  for (const int s : subset_sites(a)) {
    if (!first) out += ",";
    out += std::to_string(s);
    first = false;
  }
  return out + "}";
}

SubsetMask full_mask(int n) { return (SubsetMask{1} << n) - 1; }

namespace {

void check_same_shape(const LeveledOperator& a, const LeveledOperator& b, const char* what) {
  if (a.blocks.size() != b.blocks.size())
    throw DimensionError(std::string(what) + ": operators live on different spaces");
  auto ib = b.blocks.begin();
  for (const auto& [level, block] : a.blocks) {
    if (ib->first != level || block.rows() != ib->second.rows() ||
        block.cols() != ib->second.cols())
      throw DimensionError(std::string(what) + ": operators live on different spaces");
    ++ib;
  }
}

}  // namespace

bool LeveledOperator::is_zero() const {
  return std::all_of(blocks.begin(), blocks.end(),
                     [](const auto& kv) { return kv.second.is_zero(); });
}

LeveledOperator& LeveledOperator::operator+=(const LeveledOperator& o) {
  check_same_shape(*this, o, "leveled add");
  auto io = o.blocks.begin();
  for (auto& [level, block] : blocks) {
    (void)level;
    block += (io++)->second;
  }
  return *this;
}

LeveledOperator& LeveledOperator::operator-=(const LeveledOperator& o) {
  check_same_shape(*this, o, "leveled sub");
  auto io = o.blocks.begin();
  for (auto& [level, block] : blocks) {
    (void)level;
    block -= (io++)->second;
  }
  return *this;
}

LeveledOperator operator*(const LeveledOperator& a, const LeveledOperator& b) {
  check_same_shape(a, b, "leveled mul");
  LeveledOperator out;
  auto ib = b.blocks.begin();
  for (const auto& [level, block] : a.blocks) out.blocks.emplace(level, block * (ib++)->second);
  return out;
}

LeveledOperator operator*(const Rational& s, const LeveledOperator& m) {
  LeveledOperator out;
  for (const auto& [level, block] : m.blocks) out.blocks.emplace(level, s * block);
  return out;
}

LeveledOperator bracket(BracketKind kind, const LeveledOperator& a, const LeveledOperator& b) {
  check_same_shape(a, b, "leveled bracket");
  LeveledOperator out;
  auto ib = b.blocks.begin();
  for (const auto& [level, block] : a.blocks)
    out.blocks.emplace(level, bracket(kind, block, (ib++)->second));
  return out;
}

std::optional<Violation> first_violation(const LeveledOperator& op) {
  for (const auto& [level, block] : op.blocks)
    if (!block.is_zero()) {
      const auto& [ij, v] = *block.entries().begin();
      return Violation{level, ij.first, ij.second, v};
    }
  return std::nullopt;
}

TensorSpace::TensorSpace(std::vector<ModuleSpec> sites, int max_level)
    : sites_(std::move(sites)), max_level_(max_level) {
  const int n = static_cast<int>(sites_.size());
  if (n < 1 || n > 16) throw ArgumentError("space: need between 1 and 16 sites");
  if (max_level_ < 0) throw ArgumentError("space: negative max_level");
  long total = 0;
  for (const auto& s : sites_) {
    if (s.truncation < 1) throw ArgumentError("space: site truncation must be >= 1");
    total += s.truncation;
  }
  if (max_level_ > total)
    throw ArgumentError("space: max_level exceeds the total degree " + std::to_string(total));

  // States of level E, in lexicographic order (first site most significant).
  std::vector<int> m(static_cast<std::size_t>(n), 0);
  level_offsets_.assign(static_cast<std::size_t>(max_level_) + 2, 0);
  for (int level = 0; level <= max_level_; ++level) {
    level_offsets_[static_cast<std::size_t>(level)] = static_cast<int>(basis_.size());
    const std::function<void(int, int)> enumerate = [&](int pos, int remaining) {
      if (pos == n - 1) {
        if (remaining <= sites_[static_cast<std::size_t>(pos)].truncation) {
          m[static_cast<std::size_t>(pos)] = remaining;
          index_.emplace(m, static_cast<int>(basis_.size()));
          basis_.push_back(m);
          state_level_.push_back(level);
        }
        return;
      }
      const int top = std::min(sites_[static_cast<std::size_t>(pos)].truncation, remaining);
      for (int v = 0; v <= top; ++v) {
        m[static_cast<std::size_t>(pos)] = v;
        enumerate(pos + 1, remaining - v);
      }
    };
    enumerate(0, level);
  }
  level_offsets_.back() = static_cast<int>(basis_.size());

  // Squared norm weights via per-site prefix products of lowering coefficients.
  std::vector<std::vector<Rational>> prefix(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& p = prefix[static_cast<std::size_t>(i)];
    p.resize(static_cast<std::size_t>(sites_[static_cast<std::size_t>(i)].truncation) + 1,
             Rational(1));
    for (int t = 1; t <= sites_[static_cast<std::size_t>(i)].truncation; ++t)
      p[static_cast<std::size_t>(t)] =
          p[static_cast<std::size_t>(t - 1)] * weight_coeff(t, sites_[static_cast<std::size_t>(i)].mu);
  }
  weights_.reserve(basis_.size());
  for (const auto& state : basis_) {
    Rational w(1);
    for (int i = 0; i < n; ++i)
      w *= prefix[static_cast<std::size_t>(i)][static_cast<std::size_t>(state[static_cast<std::size_t>(i)])];
    weights_.push_back(w);
  }
}

const ModuleSpec& TensorSpace::site(int i) const {
  if (i < 1 || i > sites()) throw ArgumentError("space: site index out of range");
  return sites_[static_cast<std::size_t>(i - 1)];
}

int TensorSpace::level_dimension(int level) const {
  if (level < 0 || level > max_level_) throw ArgumentError("space: level out of range");
  return level_offset(level + 1) - level_offset(level);
}

int TensorSpace::level_offset(int level) const {
  if (level < 0 || level > max_level_ + 1) throw ArgumentError("space: level out of range");
  return level_offsets_[static_cast<std::size_t>(level)];
}

int TensorSpace::index_of(const std::vector<int>& m) const {
  const auto it = index_.find(m);
  if (it == index_.end()) throw ArgumentError("space: state not in the retained basis");
  return it->second;
}

const Rational& TensorSpace::norm_weight(int basis_index) const {
  if (basis_index < 0 || basis_index >= dimension())
    throw ArgumentError("space: basis index out of range");
  return weights_[static_cast<std::size_t>(basis_index)];
}

void TensorSpace::check_mask(SubsetMask a) const {
  if (a >= (SubsetMask{1} << sites()))
    throw ArgumentError("subset " + subset_name(a) + " not contained in 1.." +
                        std::to_string(sites()));
}

const GeneratorSet& TensorSpace::subset_generators(SubsetMask a) const {
  check_mask(a);
  if (a == 0) throw ArgumentError("subset realization needs a nonempty subset");
  std::scoped_lock lock(cache_mutex_);
  auto it = generator_cache_.find(a);
  if (it == generator_cache_.end()) it = generator_cache_.emplace(a, build_generators(a)).first;
  return it->second;
}

const LeveledOperator& TensorSpace::subset_casimir(SubsetMask a) const {
  check_mask(a);
  {
    std::scoped_lock lock(cache_mutex_);
    const auto it = casimir_cache_.find(a);
    if (it != casimir_cache_.end()) return it->second;
  }
  LeveledOperator built = build_casimir(a);
  std::scoped_lock lock(cache_mutex_);
  return casimir_cache_.emplace(a, std::move(built)).first->second;
}

GeneratorSet TensorSpace::build_generators(SubsetMask a) const {
  const int n = sites();
  const int dim = dimension();
  const std::vector<int> members = subset_sites(a);
  const int amax = members.back();

  GeneratorSet g;
  g.jplus = SparseRatMatrix(dim, dim);
  g.jminus = SparseRatMatrix(dim, dim);
  g.j0 = SparseRatMatrix(dim, dim);
  g.parity = SparseRatMatrix(dim, dim);
  g.level_of = state_level_;
  int min_trunc = sites_[static_cast<std::size_t>(members.front() - 1)].truncation;
  for (const int s : members)
    min_trunc = std::min(min_trunc, sites_[static_cast<std::size_t>(s - 1)].truncation);
  g.safe_level_max = std::min(max_level_, min_trunc) - 1;

  const Rational half(1, 2);
  std::vector<int> scratch;
  for (int c = 0; c < dim; ++c) {
    const std::vector<int>& state = basis_[static_cast<std::size_t>(c)];
    int parity_sum = 0;
    Rational j0_val(0);
    for (const int s : members) {
      parity_sum += state[static_cast<std::size_t>(s - 1)];
      j0_val += Rational(state[static_cast<std::size_t>(s - 1)]) +
                sites_[static_cast<std::size_t>(s - 1)].mu + half;
    }
    g.parity.set(c, c, Rational(parity_sum % 2 == 0 ? 1 : -1));
    g.j0.set(c, c, j0_val);

    for (const int s : members) {
      // Involution string over every site between s and max(A), member or not.
      int string_sum = 0;
      for (int j = s + 1; j <= amax; ++j) string_sum += state[static_cast<std::size_t>(j - 1)];
      const Rational sign(string_sum % 2 == 0 ? 1 : -1);

      const int ms = state[static_cast<std::size_t>(s - 1)];
      if (ms + 1 <= sites_[static_cast<std::size_t>(s - 1)].truncation &&
          state_level_[static_cast<std::size_t>(c)] + 1 <= max_level_) {
        scratch = state;
        ++scratch[static_cast<std::size_t>(s - 1)];
        g.jplus.add_to(index_of(scratch), c, sign);
      }
      if (ms >= 1) {
        scratch = state;
        --scratch[static_cast<std::size_t>(s - 1)];
        g.jminus.add_to(index_of(scratch), c,
                        sign * weight_coeff(ms, sites_[static_cast<std::size_t>(s - 1)].mu));
      }
    }
  }
  (void)n;
  return g;
}

LeveledOperator TensorSpace::build_casimir(SubsetMask a) const {
  if (a == 0) return scalar_operator(Rational(-1, 2));
  const GeneratorSet& g = subset_generators(a);
  SparseRatMatrix full = g.j0 * g.parity;
  full -= g.jplus * (g.jminus * g.parity);
  full -= Rational(1, 2) * g.parity;
  return split_levels(full);
}

LeveledOperator TensorSpace::split_levels(const SparseRatMatrix& m) const {
  LeveledOperator out;
  for (int level = 0; level <= max_level_; ++level)
    out.blocks.emplace(level, SparseRatMatrix(level_dimension(level), level_dimension(level)));
  for (const auto& [ij, v] : m.entries()) {
    const int lr = state_level_[static_cast<std::size_t>(ij.first)];
    const int lc = state_level_[static_cast<std::size_t>(ij.second)];
    if (lr != lc)
      throw Error("internal: operator expected to preserve levels mixes " + std::to_string(lc) +
                  " into " + std::to_string(lr));
    out.blocks[lr].set(ij.first - level_offset(lr), ij.second - level_offset(lc), v);
  }
  return out;
}

LeveledOperator TensorSpace::scalar_operator(const Rational& r) const {
  LeveledOperator out;
  for (int level = 0; level <= max_level_; ++level) {
    const int d = level_dimension(level);
    out.blocks.emplace(level, r * SparseRatMatrix::identity(d));
  }
  return out;
}

GeneratorSet coproduct_pair(const GeneratorSet& a, const GeneratorSet& b) {
  const SparseRatMatrix ia = SparseRatMatrix::identity(a.j0.rows());
  const SparseRatMatrix ib = SparseRatMatrix::identity(b.j0.rows());
  GeneratorSet g;
  g.jplus = kron(a.jplus, b.parity) + kron(ia, b.jplus);
  g.jminus = kron(a.jminus, b.parity) + kron(ia, b.jminus);
  g.j0 = kron(a.j0, ib) + kron(ia, b.j0);
  g.parity = kron(a.parity, b.parity);
  g.level_of.reserve(a.level_of.size() * b.level_of.size());
  for (const int la : a.level_of)
    for (const int lb : b.level_of) g.level_of.push_back(la + lb);
  g.safe_level_max = std::min(a.safe_level_max, b.safe_level_max);
  return g;
}

}  // namespace bi
