#include "deligne_kit/groebner.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <sstream>

#include "gb_engine.hpp"

namespace dk {

using detail::Engine;
using detail::SVec;

// ---------------------------------------------------------------- vectors

Vector zero_vector(const RingPtr& ring, std::size_t rank) { return Vector(rank, Poly(ring)); }

Vector unit_vector(const RingPtr& ring, std::size_t rank, std::size_t index) {
  Vector v = zero_vector(ring, rank);
  v.at(index) = Poly::constant(ring, 1);
  return v;
}

Vector add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw StructuralError("vector rank mismatch");
  Vector r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
  return r;
}

Vector sub(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw StructuralError("vector rank mismatch");
  Vector r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

Vector scale(const Poly& c, const Vector& v) {
  Vector r;
  r.reserve(v.size());
  for (const auto& p : v) r.push_back(c * p);
  return r;
}

bool is_zero(const Vector& v) {
  for (const auto& p : v)
    if (!p.is_zero()) return false;
  return true;
}

Vector combine(const RingPtr& ring, std::size_t rank, const std::vector<Poly>& coeffs,
               const std::vector<Vector>& vectors) {
  if (coeffs.size() != vectors.size()) throw StructuralError("combine: length mismatch");
  Vector r = zero_vector(ring, rank);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k].is_zero()) continue;
    if (vectors[k].size() != rank) throw StructuralError("combine: vector rank mismatch");
    for (std::size_t i = 0; i < rank; ++i)
      if (!vectors[k][i].is_zero()) r[i] += coeffs[k] * vectors[k][i];
  }
  return r;
}

std::string to_string(const Vector& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].to_string();
  return s + "]";
}

// ---------------------------------------------------------------- FreeSubmodule

struct FreeSubmodule::Cache {
  std::once_flag plain_once, aug_once;
  std::vector<SVec> basis;
  std::vector<Vector> basis_vectors;
  std::vector<SVec> aug_basis;
  std::vector<Vector> syzygies;
};

FreeSubmodule::FreeSubmodule(RingPtr ring, std::size_t rank, std::vector<Vector> generators) {
  for (const auto& g : generators)
    if (g.size() != rank) throw StructuralError("generator length differs from the ambient rank");
  auto d = std::make_shared<Data>();
  d->ring = std::move(ring);
  d->rank = rank;
  d->generators = std::move(generators);
  d->cache = std::make_shared<Cache>();
  data_ = std::move(d);
}

const FreeSubmodule::Cache& FreeSubmodule::plain() const {
  Cache& c = *data_->cache;
  std::call_once(c.plain_once, [&] {
    Engine eng(*data_->ring);
    std::vector<SVec> gens;
    for (const auto& g : data_->generators) gens.push_back(eng.from_vector(g));
    c.basis = eng.groebner(std::move(gens));
    for (const auto& b : c.basis) c.basis_vectors.push_back(eng.to_vector(b, data_->ring, 0, data_->rank));
  });
  return c;
}

const FreeSubmodule::Cache& FreeSubmodule::augmented() const {
  Cache& c = *data_->cache;
  std::call_once(c.aug_once, [&] {
    Engine eng(*data_->ring);
    const auto r = static_cast<std::uint32_t>(data_->rank);
    std::vector<SVec> gens;
    for (std::size_t j = 0; j < data_->generators.size(); ++j) {
      SVec s = eng.from_vector(data_->generators[j]);
      s.push_back({r + static_cast<std::uint32_t>(j), Monomial(data_->ring->nvars()), Coeff(1)});
      gens.push_back(std::move(s));
    }
    c.aug_basis = eng.groebner(std::move(gens));
    for (const auto& b : c.aug_basis)
      if (b.front().comp >= r) c.syzygies.push_back(eng.to_vector(b, data_->ring, r, data_->generators.size()));
  });
  return c;
}

const std::vector<Vector>& FreeSubmodule::basis() const { return plain().basis_vectors; }

Vector FreeSubmodule::normal_form(const Vector& v) const {
  if (v.size() != rank()) throw StructuralError("normal_form: vector rank mismatch");
  Engine eng(*ring());
  return eng.to_vector(eng.reduce(eng.from_vector(v), plain().basis), ring(), 0, rank());
}

bool FreeSubmodule::contains(const FreeSubmodule& other) const {
  for (const auto& g : other.generators())
    if (!contains(g)) return false;
  return true;
}

Lift FreeSubmodule::lift(const Vector& v) const {
  if (v.size() != rank()) throw StructuralError("lift: vector rank mismatch");
  Engine eng(*ring());
  SVec r = eng.reduce(eng.from_vector(v), augmented().aug_basis);
  Lift l;
  l.remainder = eng.to_vector(r, ring(), 0, rank());
  Vector neg = eng.to_vector(r, ring(), static_cast<std::uint32_t>(rank()), size());
  for (auto& p : neg) l.coefficients.push_back(-p);
  return l;
}

const std::vector<Vector>& FreeSubmodule::syzygy_generators() const { return augmented().syzygies; }

FreeSubmodule buchberger(const FreeSubmodule& s) {
  return FreeSubmodule(s.ring(), s.rank(), s.basis());
}

Lift normal_form_lift(const Vector& v, const FreeSubmodule& s) { return s.lift(v); }

FreeSubmodule syzygies(const FreeSubmodule& s) {
  return FreeSubmodule(s.ring(), s.size(), s.syzygy_generators());
}

// ---------------------------------------------------------------- FpModule

FpModule FpModule::free(const RingPtr& ring, std::size_t rank) {
  return FpModule(FreeSubmodule(ring, rank, {}));
}

FpModule FpModule::coker(const RingPtr& ring, std::size_t rank, std::vector<Vector> relation_columns) {
  return FpModule(FreeSubmodule(ring, rank, std::move(relation_columns)));
}

bool FpModule::is_zero_module() const {
  for (std::size_t i = 0; i < rank(); ++i)
    if (!rel_.contains(unit_vector(ring(), rank(), i))) return false;
  return true;
}

ModuleElement FpModule::element(Vector v) const { return ModuleElement(*this, rel_.normal_form(v)); }
ModuleElement FpModule::zero() const { return ModuleElement(*this, zero_vector(ring(), rank())); }
ModuleElement FpModule::generator(std::size_t i) const { return element(unit_vector(ring(), rank(), i)); }

ModuleElement ModuleElement::operator+(const ModuleElement& o) const { return module_.element(add(v_, o.v_)); }
ModuleElement ModuleElement::operator-(const ModuleElement& o) const { return module_.element(sub(v_, o.v_)); }
ModuleElement ModuleElement::operator-() const {
  Vector r;
  for (const auto& p : v_) r.push_back(-p);
  return ModuleElement(module_, std::move(r));
}
ModuleElement ModuleElement::operator*(const Poly& c) const { return module_.element(scale(c, v_)); }
bool ModuleElement::operator==(const ModuleElement& o) const { return v_ == o.v_; }

// ---------------------------------------------------------------- ModuleHom

ModuleHom::ModuleHom(FpModule source, FpModule target, std::vector<Vector> columns)
    : src_(std::move(source)), tgt_(std::move(target)), cols_(std::move(columns)) {
  if (cols_.size() != src_.rank()) throw StructuralError("ModuleHom: one column per source generator required");
  for (const auto& c : cols_)
    if (c.size() != tgt_.rank()) throw StructuralError("ModuleHom: column rank differs from target rank");
  for (const auto& rel : src_.relations().generators())
    if (!tgt_.relations().contains(apply(rel)))
      throw StructuralError("ModuleHom: a source relation does not map into the target relations");
}

Vector ModuleHom::apply(const Vector& v) const {
  if (v.size() != src_.rank()) throw StructuralError("ModuleHom::apply: rank mismatch");
  return combine(tgt_.ring(), tgt_.rank(), v, cols_);
}

std::vector<std::vector<Poly>> ModuleHom::certificate() const {
  std::vector<std::vector<Poly>> out;
  for (const auto& rel : src_.relations().generators()) out.push_back(tgt_.relations().lift(apply(rel)).coefficients);
  return out;
}

// ---------------------------------------------------------------- kernels

std::vector<Vector> preimage_generators(const std::vector<Vector>& columns, const FreeSubmodule& target,
                                        std::size_t source_rank) {
  if (columns.size() != source_rank) throw StructuralError("preimage: one column per source coordinate");
  std::vector<Vector> gens = columns;
  for (const auto& g : target.generators()) gens.push_back(g);
  FreeSubmodule all(target.ring(), target.rank(), std::move(gens));
  std::vector<Vector> out;
  for (const auto& s : all.syzygy_generators()) {
    Vector head(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(source_rank));
    if (!is_zero(head)) out.push_back(std::move(head));
  }
  return out;
}

Subquotient subquotient(const RingPtr& ring, std::size_t rank, std::vector<Vector> gens,
                        const std::vector<Vector>& rels) {
  FreeSubmodule target(ring, rank, rels);
  auto relations = preimage_generators(gens, target, gens.size());
  return {FpModule(FreeSubmodule(ring, gens.size(), std::move(relations))), std::move(gens)};
}

KernelResult module_kernel(const ModuleHom& h) {
  const auto& src = h.source();
  auto raw = preimage_generators(h.columns(), h.target().relations(), src.rank());
  std::vector<Vector> gens;
  for (auto& v : raw) {
    Vector nf = src.normal_form(v);
    if (!is_zero(nf)) gens.push_back(std::move(nf));
  }
  auto sq = subquotient(src.ring(), src.rank(), std::move(gens), src.relations().generators());
  return {std::move(sq.module), std::move(sq.generators)};
}

// ---------------------------------------------------------------- Hom

HomModule::HomModule(FpModule source, FpModule target)
    : src_(std::move(source)), tgt_(std::move(target)), hom_(FpModule::free(src_.ring(), 0)) {
  const auto& ring = src_.ring();
  const std::size_t ra = src_.rank(), rb = tgt_.rank();
  const auto& pres = src_.relations().generators();
  const std::size_t s = pres.size();

  std::vector<Vector> block_rels;
  for (std::size_t j = 0; j < ra; ++j)
    for (const auto& rel : tgt_.relations().generators()) {
      Vector v = zero_vector(ring, ra * rb);
      for (std::size_t b = 0; b < rb; ++b) v[j * rb + b] = rel[b];
      block_rels.push_back(std::move(v));
    }
  FpModule hom_free(FreeSubmodule(ring, ra * rb, block_rels));

  std::vector<Vector> rels_s;
  for (std::size_t l = 0; l < s; ++l)
    for (const auto& rel : tgt_.relations().generators()) {
      Vector v = zero_vector(ring, s * rb);
      for (std::size_t b = 0; b < rb; ++b) v[l * rb + b] = rel[b];
      rels_s.push_back(std::move(v));
    }
  FpModule hom_rel(FreeSubmodule(ring, s * rb, rels_s));

  std::vector<Vector> columns;
  for (std::size_t j = 0; j < ra; ++j)
    for (std::size_t b = 0; b < rb; ++b) {
      Vector col = zero_vector(ring, s * rb);
      for (std::size_t l = 0; l < s; ++l) col[l * rb + b] = pres[l][j];
      columns.push_back(std::move(col));
    }
  auto ker = module_kernel(ModuleHom(hom_free, hom_rel, std::move(columns)));
  hom_ = std::move(ker.kernel);
  for (const auto& g : ker.inclusion) {
    std::vector<Vector> vals;
    for (std::size_t j = 0; j < ra; ++j) vals.emplace_back(g.begin() + j * rb, g.begin() + (j + 1) * rb);
    values_.push_back(std::move(vals));
  }
}

std::vector<Vector> HomModule::images(const Vector& h) const {
  if (h.size() != values_.size()) throw StructuralError("Hom element has the wrong rank");
  std::vector<Vector> out;
  for (std::size_t j = 0; j < src_.rank(); ++j) {
    std::vector<Vector> col;
    for (const auto& v : values_) col.push_back(v[j]);
    out.push_back(combine(tgt_.ring(), tgt_.rank(), h, col));
  }
  return out;
}

ModuleElement HomModule::evaluate(const Vector& h, const Vector& a) const {
  return tgt_.element(combine(tgt_.ring(), tgt_.rank(), a, images(h)));
}

// ---------------------------------------------------------------- saturation

Saturation::Saturation(FpModule m, std::vector<Poly> ideal) : m_(std::move(m)), ideal_(std::move(ideal)) {
  const auto& ring = m_.ring();
  const std::size_t r = m_.rank(), s = ideal_.size();
  const auto& rels = m_.relations().generators();

  std::vector<Vector> columns;
  for (std::size_t j = 0; j < r; ++j) {
    Vector col = zero_vector(ring, s * r);
    for (std::size_t i = 0; i < s; ++i) col[i * r + j] = ideal_[i];
    columns.push_back(std::move(col));
  }

  FreeSubmodule prev = m_.relations();
  for (int t = 1;; ++t) {
    std::vector<Vector> target;
    for (std::size_t i = 0; i < s; ++i)
      for (const auto& g : prev.generators()) {
        Vector v = zero_vector(ring, s * r);
        for (std::size_t j = 0; j < r; ++j) v[i * r + j] = g[j];
        target.push_back(std::move(v));
      }
    auto pre = preimage_generators(columns, FreeSubmodule(ring, s * r, std::move(target)), r);
    std::vector<Vector> gens = rels;
    for (auto& v : pre) {
      Vector nf = m_.normal_form(v);
      if (!is_zero(nf)) gens.push_back(std::move(nf));
    }
    FreeSubmodule next(ring, r, std::move(gens));
    if (t >= 2 && prev.contains(next)) {
      t_star_ = t - 1;
      break;
    }
    chain_.push_back(next);
    prev = std::move(next);
  }
  for (std::size_t k = rels.size(); k < chain_.back().generators().size(); ++k)
    gens_.push_back(chain_.back().generators()[k]);
}

FpModule Saturation::torsion_module() const {
  return subquotient(m_.ring(), m_.rank(), gens_, m_.relations().generators()).module;
}

std::optional<int> Saturation::kill_exponent(const Vector& v) const {
  if (m_.relations().contains(v)) return 0;
  for (std::size_t c = 0; c < chain_.size(); ++c)
    if (chain_[c].contains(v)) return static_cast<int>(c + 1);
  return std::nullopt;
}

Saturation saturate(const FpModule& m, const std::vector<Poly>& ideal) { return Saturation(m, ideal); }

// ---------------------------------------------------------------- ideal powers

std::vector<Poly> ideal_power(const std::vector<Poly>& gens, std::uint32_t n) {
  if (gens.empty()) throw StructuralError("ideal_power: empty generator list");
  const auto& ring = gens.front().ring();
  if (n == 0) return {Poly::constant(ring, 1)};
  std::vector<Poly> out;
  std::vector<std::size_t> idx(n, 0);
  std::function<void(std::size_t, std::size_t, Poly)> rec = [&](std::size_t depth, std::size_t start, Poly acc) {
    if (depth == n) {
      for (const auto& p : out)
        if (p == acc) return;
      out.push_back(std::move(acc));
      return;
    }
    for (std::size_t i = start; i < gens.size(); ++i) rec(depth + 1, i, acc * gens[i]);
  };
  rec(0, 0, Poly::constant(ring, 1));
  return out;
}

// ---------------------------------------------------------------- quotient rings

namespace {

std::vector<Vector> as_columns(const std::vector<Poly>& ps) {
  std::vector<Vector> v;
  for (const auto& p : ps) v.push_back(Vector{p});
  return v;
}

}  // namespace

struct QuotientRing::LiftRegistry {
  std::mutex mu;
  std::map<std::string, FreeSubmodule> entries;
};

QuotientRing::QuotientRing(RingPtr ring, std::vector<Poly> defining)
    : ring_(ring), defining_(), ideal_(ring, 1, {}), lifts_(std::make_shared<LiftRegistry>()) {
  for (auto& f : defining)
    if (!f.is_zero()) defining_.push_back(std::move(f));
  ideal_ = FreeSubmodule(ring_, 1, as_columns(defining_));
}

Poly QuotientRing::reduce(const Poly& f) const {
  if (defining_.empty()) return f;
  return ideal_.normal_form(Vector{f})[0];
}

FpModule QuotientRing::free_module(std::size_t rank) const { return coker(rank, {}); }

FpModule QuotientRing::coker(std::size_t rank, std::vector<Vector> relation_columns) const {
  for (const auto& c : relation_columns)
    if (c.size() != rank) throw StructuralError("relation column has the wrong length");
  for (std::size_t j = 0; j < rank; ++j)
    for (const auto& f : defining_) {
      Vector v = zero_vector(ring_, rank);
      v[j] = f;
      relation_columns.push_back(std::move(v));
    }
  return FpModule::coker(ring_, rank, std::move(relation_columns));
}

FpModule QuotientRing::ideal_module(const std::vector<Poly>& gens) const {
  auto rels = preimage_generators(as_columns(gens), ideal_, gens.size());
  return FpModule(FreeSubmodule(ring_, gens.size(), std::move(rels)));
}

std::optional<std::vector<Poly>> QuotientRing::ideal_lift(const Poly& f, const std::vector<Poly>& gens,
                                                          std::vector<Poly>* ring_coefficients) const {
  std::string key;
  for (const auto& g : gens) key += g.to_string() + ",";

  std::optional<FreeSubmodule> sub;
  {
    std::lock_guard lock(lifts_->mu);
    auto it = lifts_->entries.find(key);
    if (it != lifts_->entries.end()) sub = it->second;
  }
  if (!sub) {
    std::vector<Poly> all = gens;
    all.insert(all.end(), defining_.begin(), defining_.end());
    sub = FreeSubmodule(ring_, 1, as_columns(all));
    std::lock_guard lock(lifts_->mu);
    lifts_->entries.emplace(key, *sub);
  }
  Lift l = sub->lift(Vector{f});
  if (!l.member()) return std::nullopt;
  std::vector<Poly> head(l.coefficients.begin(), l.coefficients.begin() + static_cast<std::ptrdiff_t>(gens.size()));
  if (ring_coefficients)
    ring_coefficients->assign(l.coefficients.begin() + static_cast<std::ptrdiff_t>(gens.size()), l.coefficients.end());
  return head;
}

RadicalLift radical_lift(const QuotientRing& ring, const Poly& y, const std::vector<Poly>& base, std::uint32_t e,
                         std::optional<std::uint32_t> max_d) {
  if (base.empty() || e == 0) throw StructuralError("radical_lift: need k >= 1 and e >= 1");
  std::vector<Poly> gens;
  for (const auto& x : base) gens.push_back(x.pow(e));
  const std::uint32_t bound = max_d.value_or(static_cast<std::uint32_t>(base.size()) * (e - 1) + 1);
  Poly power = y;
  for (std::uint32_t d = 1; d <= bound; ++d) {
    std::vector<Poly> ring_coeffs;
    if (auto c = ring.ideal_lift(power, gens, &ring_coeffs)) return {d, std::move(*c), std::move(ring_coeffs)};
    power *= y;
  }
  throw StructuralError("radical_lift: " + y.to_string() + " is not in the radical within d <= " +
                        std::to_string(bound));
}

}  // namespace dk
