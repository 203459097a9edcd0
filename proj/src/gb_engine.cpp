#include "gb_engine.hpp"

#include <algorithm>

namespace dk::detail {

SVec Engine::from_vector(const Vector& v, std::uint32_t offset) const {
  SVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    for (const auto& t : v[i].terms())
      s.push_back({static_cast<std::uint32_t>(i) + offset, t.monomial, t.coeff});
  // components are already grouped in increasing index, terms decreasing
  return s;
}

Vector Engine::to_vector(const SVec& s, const RingPtr& ring, std::uint32_t first, std::size_t rank) const {
  std::vector<std::vector<Term>> parts(rank);
  for (const auto& t : s)
    if (t.comp >= first && t.comp < first + rank) parts[t.comp - first].push_back({t.mon, t.coeff});
  Vector v;
  v.reserve(rank);
  for (auto& p : parts) v.emplace_back(ring, std::move(p));
  return v;
}

SVec Engine::sub_mul(std::span<const VTerm> f, const Coeff& c, const Monomial& m, const SVec& g) const {
  SVec r;
  r.reserve(f.size() + g.size());
  std::size_t i = 0, j = 0;
  VTerm gt;
  while (i < f.size() || j < g.size()) {
    if (j < g.size()) {
      gt.comp = g[j].comp;
      gt.mon = g[j].mon * m;
    }
    if (j >= g.size()) {
      r.push_back(f[i++]);
      continue;
    }
    std::strong_ordering ord = i < f.size() ? compare(f[i], gt) : std::strong_ordering::less;
    if (ord == std::strong_ordering::greater) {
      r.push_back(f[i++]);
    } else if (ord == std::strong_ordering::less) {
      gt.coeff = field_.neg(field_.mul(c, g[j].coeff));
      r.push_back(std::move(gt));
      ++j;
    } else {
      Coeff v = field_.sub(f[i].coeff, field_.mul(c, g[j].coeff));
      if (v != 0) r.push_back({f[i].comp, f[i].mon, std::move(v)});
      ++i;
      ++j;
    }
  }
  return r;
}

void Engine::make_monic(SVec& f) const {
  if (f.empty() || f.front().coeff == 1) return;
  Coeff inv = field_.inv(f.front().coeff);
  for (auto& t : f) t.coeff = field_.mul(t.coeff, inv);
}

const SVec* Engine::find_reducer(const VTerm& t, const std::vector<SVec>& basis) const {
  for (const auto& g : basis)
    if (!g.empty() && g.front().comp == t.comp && g.front().mon.divides(t.mon)) return &g;
  return nullptr;
}

SVec Engine::reduce(SVec f, const std::vector<SVec>& basis) const {
  SVec result;
  std::size_t pos = 0;
  while (pos < f.size()) {
    const VTerm& t = f[pos];
    const SVec* g = find_reducer(t, basis);
    if (!g) {
      result.push_back(t);
      ++pos;
      continue;
    }
    Monomial q = t.mon.quotient(g->front().mon);
    Coeff c = field_.div(t.coeff, g->front().coeff);
    f = sub_mul(std::span<const VTerm>(f).subspan(pos), c, q, *g);
    pos = 0;
  }
  return result;
}

namespace {

struct Pair {
  std::size_t i, j;
  std::uint32_t comp;
  Monomial lcm;
};

}  // namespace

std::vector<SVec> Engine::groebner(std::vector<SVec> gens) const {
  std::vector<SVec> G;
  std::vector<Pair> pairs;

  auto insert = [&](SVec h) {
    make_monic(h);
    const std::size_t t = G.size();
    const VTerm& lt = h.front();

    std::vector<Pair> fresh;
    for (std::size_t i = 0; i < t; ++i)
      if (G[i].front().comp == lt.comp) fresh.push_back({i, t, lt.comp, G[i].front().mon.lcm(lt.mon)});
    std::vector<Pair> kept;
    for (std::size_t a = 0; a < fresh.size(); ++a) {
      bool redundant = false;
      for (std::size_t b = a + 1; b < fresh.size() && !redundant; ++b)
        redundant = fresh[b].lcm.divides(fresh[a].lcm);
      for (std::size_t b = 0; b < kept.size() && !redundant; ++b)
        redundant = kept[b].lcm.divides(fresh[a].lcm);
      if (!redundant) kept.push_back(fresh[a]);
    }
    std::erase_if(pairs, [&](const Pair& p) {
      if (p.comp != lt.comp || !lt.mon.divides(p.lcm)) return false;
      Monomial li = G[p.i].front().mon.lcm(lt.mon);
      Monomial lj = G[p.j].front().mon.lcm(lt.mon);
      return !(li == p.lcm) && !(lj == p.lcm);
    });
    for (auto& p : kept) pairs.push_back(std::move(p));
    G.push_back(std::move(h));
  };

  for (auto& g : gens) {
    SVec r = reduce(std::move(g), G);
    if (!r.empty()) insert(std::move(r));
  }

  while (!pairs.empty()) {
    auto best = pairs.begin();
    for (auto it = pairs.begin() + 1; it != pairs.end(); ++it) {
      if (it->lcm.degree() != best->lcm.degree()) {
        if (it->lcm.degree() < best->lcm.degree()) best = it;
        continue;
      }
      auto c = ring_.compare(it->lcm, best->lcm);
      if (c == std::strong_ordering::less || (c == std::strong_ordering::equal && it->comp > best->comp))
        best = it;
    }
    Pair p = std::move(*best);
    pairs.erase(best);

    const SVec& a = G[p.i];
    const SVec& b = G[p.j];
    // both monic: S = (lcm/la) a - (lcm/lb) b
    SVec s = sub_mul(SVec{}, field_.from_int(-1), p.lcm.quotient(a.front().mon), a);
    s = sub_mul(s, Coeff(1), p.lcm.quotient(b.front().mon), b);
    SVec r = reduce(std::move(s), G);
    if (!r.empty()) insert(std::move(r));
  }

  // minimise
  std::vector<SVec> minimal;
  for (std::size_t i = 0; i < G.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
      if (i == j || G[j].front().comp != G[i].front().comp) continue;
      if (!G[j].front().mon.divides(G[i].front().mon)) continue;
      redundant = !(G[j].front().mon == G[i].front().mon) || j < i;
    }
    if (!redundant) minimal.push_back(G[i]);
  }
  // interreduce
  std::vector<SVec> reduced;
  for (std::size_t i = 0; i < minimal.size(); ++i) {
    std::vector<SVec> others;
    for (std::size_t j = 0; j < minimal.size(); ++j)
      if (j != i) others.push_back(minimal[j]);
    SVec tail(minimal[i].begin() + 1, minimal[i].end());
    SVec r{minimal[i].front()};
    for (auto& t : reduce(std::move(tail), others)) r.push_back(std::move(t));
    make_monic(r);
    reduced.push_back(std::move(r));
  }
  std::sort(reduced.begin(), reduced.end(), [&](const SVec& x, const SVec& y) {
    return compare(x.front(), y.front()) == std::strong_ordering::greater;
  });
  return reduced;
}

}  // namespace dk::detail
