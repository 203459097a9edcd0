#include "deligne_kit/koszul.hpp"

#include <map>
#include <string>

namespace dk {

SequenceSpec::SequenceSpec(std::vector<Poly> elements) : xs_(std::move(elements)) {
  if (xs_.empty()) throw StructuralError("sequence: at least one element required");
  for (const auto& x : xs_) {
    if (x.is_zero()) throw StructuralError("sequence: elements must be nonzero");
    if (x.ring() != xs_.front().ring()) throw StructuralError("sequence: elements from different rings");
  }
}

std::vector<Poly> SequenceSpec::powers(std::uint32_t n) const {
  std::vector<Poly> out;
  for (const auto& x : xs_) out.push_back(x.pow(n));
  return out;
}

std::vector<std::vector<std::size_t>> exterior_basis(std::size_t k, std::size_t i) {
  std::vector<std::vector<std::size_t>> out;
  if (i > k) return out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (cur.size() == i) {
      out.push_back(cur);
      return;
    }
    for (std::size_t j = start; j < k; ++j) {
      cur.push_back(j);
      self(self, j + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

namespace {

bool in_range(int i, std::size_t k) { return i >= 0 && static_cast<std::size_t>(i) <= k; }

const std::vector<Vector>& empty_list() {
  static const std::vector<Vector> e;
  return e;
}

}  // namespace

KoszulStage::KoszulStage(SequenceSpec x, std::uint32_t n, FpModule m)
    : x_(std::move(x)), n_(n), m_(std::move(m)) {
  if (n_ == 0) throw StructuralError("Koszul stage exponent must be >= 1");
  if (m_.ring() != x_.ring()) throw StructuralError("Koszul stage: module and sequence over different rings");
  const auto& ring = m_.ring();
  const std::size_t k = x_.length(), r = m_.rank();
  auto pw = x_.powers(n_);

  for (std::size_t i = 0; i <= k; ++i) {
    auto basis = exterior_basis(k, i);
    std::vector<Vector> rels;
    for (std::size_t s = 0; s < basis.size(); ++s)
      for (const auto& rel : m_.relations().generators()) {
        Vector v = zero_vector(ring, basis.size() * r);
        for (std::size_t a = 0; a < r; ++a) v[s * r + a] = rel[a];
        rels.push_back(std::move(v));
      }
    rels_.push_back(std::move(rels));

    std::map<std::vector<std::size_t>, std::size_t> lower;
    if (i > 0) {
      auto lb = exterior_basis(k, i - 1);
      for (std::size_t t = 0; t < lb.size(); ++t) lower[lb[t]] = t;
    }
    const std::size_t lower_rank = i > 0 ? lower.size() * r : 0;
    std::vector<Vector> cols;
    for (const auto& S : basis)
      for (std::size_t a = 0; a < r; ++a) {
        Vector col = zero_vector(ring, lower_rank);
        for (std::size_t p = 0; p < S.size(); ++p) {
          auto T = S;
          T.erase(T.begin() + static_cast<std::ptrdiff_t>(p));
          Poly term = p % 2 == 0 ? pw[S[p]] : -pw[S[p]];
          col[lower.at(T) * r + a] += term;
        }
        cols.push_back(std::move(col));
      }
    diffs_.push_back(std::move(cols));
  }
  for (std::size_t i = 0; i <= k; ++i) {
    std::vector<Vector> gens = i < k ? diffs_[i + 1] : std::vector<Vector>{};
    gens.insert(gens.end(), rels_[i].begin(), rels_[i].end());
    bounds_.emplace_back(ring, chain_rank(static_cast<int>(i)), std::move(gens));
  }
}

std::size_t KoszulStage::chain_rank(int i) const {
  if (!in_range(i, length())) return 0;
  return exterior_basis(length(), static_cast<std::size_t>(i)).size() * m_.rank();
}

const std::vector<Vector>& KoszulStage::chain_relations(int i) const {
  return in_range(i, length()) ? rels_[static_cast<std::size_t>(i)] : empty_list();
}

FpModule KoszulStage::chain_module(int i) const {
  return FpModule(FreeSubmodule(m_.ring(), chain_rank(i), chain_relations(i)));
}

const std::vector<Vector>& KoszulStage::differential(int i) const {
  return in_range(i, length()) ? diffs_[static_cast<std::size_t>(i)] : empty_list();
}

Vector KoszulStage::apply_differential(int i, const Vector& chain) const {
  if (chain.size() != chain_rank(i)) throw StructuralError("chain has the wrong rank");
  return combine(m_.ring(), chain_rank(i - 1), chain, differential(i));
}

const FreeSubmodule& KoszulStage::boundaries(int i) const {
  if (!in_range(i, length())) throw StructuralError("boundaries: degree out of range");
  return bounds_[static_cast<std::size_t>(i)];
}

namespace {

std::vector<Vector> cycle_generators(const KoszulStage& st, int i) {
  const auto& ring = st.module().ring();
  FreeSubmodule chains(ring, st.chain_rank(i), st.chain_relations(i));
  std::vector<Vector> raw;
  if (i == 0) {
    for (std::size_t a = 0; a < st.chain_rank(0); ++a) raw.push_back(unit_vector(ring, st.chain_rank(0), a));
  } else {
    FreeSubmodule lower(ring, st.chain_rank(i - 1), st.chain_relations(i - 1));
    raw = preimage_generators(st.differential(i), lower, st.chain_rank(i));
  }
  std::vector<Vector> out;
  for (auto& v : raw) {
    Vector nf = chains.normal_form(v);
    if (!is_zero(nf)) out.push_back(std::move(nf));
  }
  return out;
}

void check_degree(int i, std::size_t k) {
  if (!in_range(i, k))
    throw StructuralError("Koszul degree " + std::to_string(i) + " outside [0, " + std::to_string(k) + "]");
}

}  // namespace

HomologyModule koszul_homology(const KoszulStage& stage, int i) {
  check_degree(i, stage.length());
  auto cycles = cycle_generators(stage, i);
  auto sq = subquotient(stage.module().ring(), stage.chain_rank(i), cycles, stage.boundaries(i).generators());
  return {i, stage.exponent(), std::move(sq.module), std::move(sq.generators)};
}

Vector transport_chain(const SequenceSpec& x, const FpModule& m, int i, std::uint32_t from, std::uint32_t to,
                       const Vector& chain) {
  if (from < to) throw StructuralError("transport: source stage below target stage");
  check_degree(i, x.length());
  auto basis = exterior_basis(x.length(), static_cast<std::size_t>(i));
  const std::size_t r = m.rank();
  if (chain.size() != basis.size() * r) throw StructuralError("transport: chain has the wrong rank");
  auto pw = x.powers(from - to);
  Vector out = chain;
  for (std::size_t s = 0; s < basis.size(); ++s) {
    Poly f = Poly::constant(m.ring(), 1);
    for (auto j : basis[s]) f *= pw[j];
    for (std::size_t a = 0; a < r; ++a) out[s * r + a] = f * chain[s * r + a];
  }
  return out;
}

bool HomologyTransition::is_zero() const {
  for (const auto& col : map.columns())
    if (!target.presentation.relations().contains(col)) return false;
  return true;
}

HomologyTransition homology_transition(const SequenceSpec& x, int i, std::uint32_t m, std::uint32_t n,
                                       const FpModule& module) {
  if (m < n) throw StructuralError("transition: m must be >= n");
  KoszulStage sm(x, m, module), sn(x, n, module);
  auto src = koszul_homology(sm, i);
  auto tgt = koszul_homology(sn, i);
  std::vector<Vector> gens = tgt.cycles;
  const auto& b = sn.boundaries(i).generators();
  gens.insert(gens.end(), b.begin(), b.end());
  FreeSubmodule span(module.ring(), sn.chain_rank(i), std::move(gens));
  std::vector<Vector> cols;
  for (const auto& z : src.cycles) {
    auto l = span.lift(transport_chain(x, module, i, m, n, z));
    if (!l.member()) throw StructuralError("transition: transported cycle is not a cycle");
    cols.emplace_back(l.coefficients.begin(), l.coefficients.begin() + static_cast<std::ptrdiff_t>(tgt.cycles.size()));
  }
  ModuleHom map(src.presentation, tgt.presentation, std::move(cols));
  return {m, n, std::move(src), std::move(tgt), std::move(map)};
}

void ProZeroCertificate::replay(const SequenceSpec& x, const FpModule& m) const {
  check_degree(degree, x.length());
  if (witness < base) throw StructuralError("certificate: witness stage below base stage");
  const std::size_t g = cycles.size();
  if (cycle_relations.size() != g || preimages.size() != g || relation_coefficients.size() != g)
    throw StructuralError("certificate: inconsistent list lengths");
  KoszulStage sm(x, witness, m), sn(x, base, m);
  const auto& ring = m.ring();
  for (std::size_t k = 0; k < g; ++k) {
    const auto& rm = sm.chain_relations(degree - 1);
    if (cycle_relations[k].size() != rm.size()) throw StructuralError("certificate: cycle relation count");
    Vector lhs = sm.apply_differential(degree, cycles[k]);
    if (!(lhs == combine(ring, lhs.size(), cycle_relations[k], rm)))
      throw StructuralError("certificate: generator " + std::to_string(k) + " is not a cycle");
    const auto& rn = sn.chain_relations(degree);
    if (relation_coefficients[k].size() != rn.size()) throw StructuralError("certificate: relation count");
    Vector t = transport_chain(x, m, degree, witness, base, cycles[k]);
    Vector rhs = add(sn.apply_differential(degree + 1, preimages[k]),
                     combine(ring, t.size(), relation_coefficients[k], rn));
    if (!(t == rhs)) throw StructuralError("certificate: boundary identity fails for generator " + std::to_string(k));
  }
}

ProZeroOutcome pro_zero_search(const SequenceSpec& x, int i, std::uint32_t n, const FpModule& m,
                               std::uint32_t m_max) {
  check_degree(i, x.length());
  if (m_max < n) throw StructuralError("pro_zero_search: cap below base stage");
  KoszulStage sn(x, n, m);
  const auto& target = sn.boundaries(i);
  const std::size_t upper = sn.chain_rank(i + 1);
  for (std::uint32_t w = n; w <= m_max; ++w) {
    KoszulStage sw(x, w, m);
    auto cycles = cycle_generators(sw, i);
    ProZeroCertificate cert{i, n, w, {}, {}, {}, {}};
    bool zero = true;
    for (const auto& z : cycles) {
      auto l = target.lift(transport_chain(x, m, i, w, n, z));
      if (!l.member()) {
        zero = false;
        break;
      }
      cert.preimages.emplace_back(l.coefficients.begin(), l.coefficients.begin() + static_cast<std::ptrdiff_t>(upper));
      cert.relation_coefficients.emplace_back(l.coefficients.begin() + static_cast<std::ptrdiff_t>(upper),
                                              l.coefficients.end());
    }
    if (!zero) continue;
    FreeSubmodule lower(m.ring(), sw.chain_rank(i - 1), sw.chain_relations(i - 1));
    for (const auto& z : cycles) {
      auto l = lower.lift(sw.apply_differential(i, z));
      cert.cycle_relations.push_back(std::move(l.coefficients));
    }
    cert.cycles = std::move(cycles);
    return cert;
  }
  return Exhausted{i, n, m_max};
}

}  // namespace dk
