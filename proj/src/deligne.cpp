#include "deligne_kit/deligne.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>

namespace dk {

struct DeligneContext::Caches {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<const Saturation>> sat;
  std::shared_ptr<const Saturation> gamma;
  std::map<std::uint32_t, std::shared_ptr<const HomModule>> homs;
  std::map<std::uint32_t, std::shared_ptr<const FpModule>> domains;
};

DeligneContext::DeligneContext(QuotientRing ring, FpModule module, std::vector<Poly> cover)
    : ring_(std::move(ring)), m_(std::move(module)), xs_(std::move(cover)), caches_(std::make_shared<Caches>()) {
  if (xs_.empty()) throw StructuralError("cover needs at least one element");
  if (m_.ring() != ring_.poly_ring()) throw StructuralError("module and ring differ");
  for (const auto& x : xs_)
    if (x.ring() != ring_.poly_ring()) throw StructuralError("cover element from another ring");
  for (std::size_t j = 0; j < m_.rank(); ++j)
    for (const auto& f : ring_.defining_ideal())
      if (!m_.relations().contains(scale(f, unit_vector(ring_.poly_ring(), m_.rank(), j))))
        throw StructuralError("module is not annihilated by the defining ideal");
}

const Saturation& DeligneContext::saturation(const Poly& base) const {
  const std::string key = base.to_string();
  {
    std::lock_guard lock(caches_->mu);
    auto it = caches_->sat.find(key);
    if (it != caches_->sat.end()) return *it->second;
  }
  auto s = std::make_shared<const Saturation>(m_, std::vector<Poly>{base});
  std::lock_guard lock(caches_->mu);
  return *caches_->sat.emplace(key, std::move(s)).first->second;
}

const Saturation& DeligneContext::gamma() const {
  {
    std::lock_guard lock(caches_->mu);
    if (caches_->gamma) return *caches_->gamma;
  }
  auto s = std::make_shared<const Saturation>(m_, xs_);
  std::lock_guard lock(caches_->mu);
  if (!caches_->gamma) caches_->gamma = std::move(s);
  return *caches_->gamma;
}

// ---------------------------------------------------------------- localisation

std::optional<std::uint32_t> DeligneContext::loc_kill_exponent(const Fraction& f, const Fraction& g) const {
  if (!(f.base == g.base)) throw StructuralError("loc_equal: different bases " + f.base.to_string() + " and " +
                                                 g.base.to_string());
  Vector diff = sub(scale(f.base.pow(g.exponent), f.numerator), scale(f.base.pow(f.exponent), g.numerator));
  auto c = saturation(f.base).kill_exponent(m_.normal_form(diff));
  if (!c) return std::nullopt;
  return static_cast<std::uint32_t>(*c);
}

bool DeligneContext::loc_equal(const Fraction& f, const Fraction& g) const {
  return loc_kill_exponent(f, g).has_value();
}

bool DeligneContext::loc_is_zero(const Fraction& f) const {
  return loc_equal(f, {zero_vector(ring_.poly_ring(), m_.rank()), f.base, 0});
}

bool DeligneContext::agree_on_overlap(const Fraction& f, const Fraction& g) const {
  Poly z = f.base * g.base;
  Fraction a{scale(g.base.pow(f.exponent), f.numerator), z, f.exponent};
  Fraction b{scale(f.base.pow(g.exponent), g.numerator), z, g.exponent};
  return loc_equal(a, b);
}

std::optional<AlphaWitness> DeligneContext::find_alpha_witness(const Poly& x, const Poly& y,
                                                               std::uint32_t max_k) const {
  Poly p = x;
  for (std::uint32_t k = 1; k <= max_k; ++k, p *= x)
    if (auto r = ring_.ideal_lift(p, {y})) return AlphaWitness{k, (*r)[0]};
  return std::nullopt;
}

Fraction DeligneContext::alpha_map(const Fraction& f, const Poly& x, const AlphaWitness& w) const {
  if (!ring_.is_zero(x.pow(w.k) - f.base * w.r))
    throw StructuralError("alpha_map: witness identity x^k = y r fails");
  return {m_.normal_form(scale(w.r.pow(f.exponent), f.numerator)), x, w.k * f.exponent};
}

// ---------------------------------------------------------------- ideal transform

const HomModule& DeligneContext::stage_hom(std::uint32_t n) const {
  {
    std::lock_guard lock(caches_->mu);
    auto it = caches_->homs.find(n);
    if (it != caches_->homs.end()) return *it->second;
  }
  auto h = std::make_shared<const HomModule>(ring_.ideal_module(ideal_power(xs_, n)), m_);
  std::lock_guard lock(caches_->mu);
  return *caches_->homs.emplace(n, std::move(h)).first->second;
}

IdealTransformElement DeligneContext::make_transform(std::uint32_t n, std::vector<Vector> values) const {
  auto domain = ideal_power(xs_, n);
  if (values.size() != domain.size()) throw StructuralError("transform: one value per generator of J^n");
  for (auto& v : values) {
    if (v.size() != m_.rank()) throw StructuralError("transform: value has the wrong rank");
    v = m_.normal_form(v);
  }
  std::shared_ptr<const FpModule> dm;
  {
    std::lock_guard lock(caches_->mu);
    auto it = caches_->domains.find(n);
    if (it != caches_->domains.end()) dm = it->second;
  }
  if (!dm) {
    dm = std::make_shared<const FpModule>(ring_.ideal_module(domain));
    std::lock_guard lock(caches_->mu);
    caches_->domains.emplace(n, dm);
  }
  for (const auto& rel : dm->relations().generators())
    if (!m_.relations().contains(combine(ring_.poly_ring(), m_.rank(), rel, values)))
      throw StructuralError("transform: values violate a syzygy of J^" + std::to_string(n));
  return {n, std::move(domain), std::move(values)};
}

Vector DeligneContext::evaluate(const IdealTransformElement& phi, const Poly& a) const {
  auto c = ring_.ideal_lift(a, phi.domain);
  if (!c) throw StructuralError("evaluate: " + a.to_string() + " is not in J^" + std::to_string(phi.stage));
  return m_.normal_form(combine(ring_.poly_ring(), m_.rank(), *c, phi.values));
}

IdealTransformElement DeligneContext::restrict_to(const IdealTransformElement& phi, std::uint32_t n) const {
  if (n < phi.stage) throw StructuralError("restriction to a larger ideal");
  std::vector<Vector> values;
  for (const auto& g : ideal_power(xs_, n)) values.push_back(evaluate(phi, g));
  return make_transform(n, std::move(values));
}

IdealTransformElement DeligneContext::tau(const Vector& m, std::uint32_t n) const {
  std::vector<Vector> values;
  for (const auto& g : ideal_power(xs_, n)) values.push_back(mul(g, m));
  return make_transform(n, std::move(values));
}

bool DeligneContext::transform_equal(const IdealTransformElement& a, const IdealTransformElement& b) const {
  return cocycle_equal(rho_eval(a), rho_eval(b));
}

// ---------------------------------------------------------------- rho, theta, sigma

CechCocycle DeligneContext::make_cocycle(std::uint32_t n, std::vector<Vector> components) const {
  if (components.size() != xs_.size()) throw StructuralError("cocycle: one component per cover element");
  for (auto& v : components) {
    if (v.size() != m_.rank()) throw StructuralError("cocycle: component has the wrong rank");
    v = m_.normal_form(v);
  }
  CechCocycle c{xs_, n, std::move(components)};
  compatibility_exponent(c);
  return c;
}

std::uint32_t DeligneContext::compatibility_exponent(const CechCocycle& c) const {
  std::uint32_t best = 0;
  const std::uint32_t n = c.exponent;
  for (std::size_t i = 0; i < c.cover.size(); ++i)
    for (std::size_t j = i + 1; j < c.cover.size(); ++j) {
      Vector v = sub(scale(c.cover[j].pow(n), c.components[i]), scale(c.cover[i].pow(n), c.components[j]));
      auto k = saturation(c.cover[i] * c.cover[j]).kill_exponent(m_.normal_form(v));
      if (!k)
        throw StructuralError("cocycle: components " + std::to_string(i) + " and " + std::to_string(j) +
                              " disagree on the overlap");
      best = std::max(best, static_cast<std::uint32_t>(*k));
    }
  return best;
}

CechCocycle DeligneContext::rho_eval(const IdealTransformElement& phi) const {
  std::vector<Vector> comps;
  for (const auto& x : xs_) comps.push_back(evaluate(phi, x.pow(phi.stage)));
  return make_cocycle(phi.stage, std::move(comps));
}

Fraction DeligneContext::theta_probe(const IdealTransformElement& phi, const Poly& y) const {
  return {evaluate(phi, y.pow(phi.stage)), y, phi.stage};
}

namespace {

std::vector<Vector> primed(const CechCocycle& c, std::uint32_t shift, const FpModule& m) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < c.cover.size(); ++i)
    out.push_back(m.normal_form(scale(c.cover[i].pow(shift), c.components[i])));
  return out;
}

}  // namespace

SigmaTrace DeligneContext::sigma_inverse(const CechCocycle& c, const Poly& y) const {
  const std::uint32_t cexp = compatibility_exponent(c);
  const std::uint32_t e = std::max<std::uint32_t>(cexp + c.exponent, 1);
  auto mp = primed(c, e - c.exponent, m_);
  auto rl = radical_lift(ring_, y, c.cover, e);
  Vector my = m_.normal_form(combine(ring_.poly_ring(), m_.rank(), rl.coefficients, mp));
  return {{std::move(my), y, rl.d}, cexp, e, rl.d, std::move(rl.coefficients), std::move(rl.ring_coefficients)};
}

PreimageOutcome DeligneContext::rho_preimage(const CechCocycle& c, std::uint32_t escalation_cap,
                                             bool use_pro_zero) const {
  const std::uint32_t cexp = compatibility_exponent(c);
  std::uint32_t e = std::max<std::uint32_t>(cexp + c.exponent, 1);
  auto mp = primed(c, e - c.exponent, m_);
  std::uint32_t steps = 0;
  std::optional<std::uint32_t> jumped;
  const auto& P = ring_.poly_ring();

  for (;;) {
    std::vector<Poly> q;
    for (const auto& x : xs_) q.push_back(x.pow(e));
    std::optional<Obstruction> failure;
    const FpModule qm = ring_.ideal_module(q);
    for (const auto& s : qm.relations().generators()) {
      Vector res = m_.normal_form(combine(P, m_.rank(), s, mp));
      if (!is_zero(res)) {
        failure = Obstruction{e, s, std::move(res)};
        break;
      }
    }
    if (!failure) {
      const auto N = static_cast<std::uint32_t>(xs_.size()) * (e - 1) + 1;
      std::vector<Vector> values;
      for (const auto& g : ideal_power(xs_, N)) {
        auto a = ring_.ideal_lift(g, q);
        if (!a) throw StructuralError("rho_preimage: J^N is not inside (x^e)");
        values.push_back(combine(P, m_.rank(), *a, mp));
      }
      return PreimageTrace{make_transform(N, std::move(values)), cexp, e, steps, jumped};
    }
    if (jumped && *jumped == e)
      throw StructuralError("rho_preimage: obstruction survives the pro-zero witness stage " + std::to_string(e));

    std::uint32_t next = e + 1;
    if (use_pro_zero && e < escalation_cap) {
      auto out = pro_zero_search(SequenceSpec(xs_), 1, e, ring_.as_module(), escalation_cap);
      if (auto* cert = std::get_if<ProZeroCertificate>(&out)) {
        next = cert->witness;
        jumped = next;
      } else {
        return *failure;
      }
    }
    if (next > escalation_cap) return *failure;
    for (std::size_t i = 0; i < xs_.size(); ++i) mp[i] = mul(xs_[i].pow(next - e), mp[i]);
    e = next;
    ++steps;
  }
}

bool DeligneContext::cocycle_equal(const CechCocycle& a, const CechCocycle& b) const {
  if (a.components.size() != b.components.size()) return false;
  for (std::size_t i = 0; i < a.components.size(); ++i)
    if (!loc_equal({a.components[i], a.cover[i], a.exponent}, {b.components[i], b.cover[i], b.exponent}))
      return false;
  return true;
}

// ---------------------------------------------------------------- checks

DiagramReport DeligneContext::diagram_check(const Vector& m) const {
  Vector v = m_.normal_form(m);
  auto rt = rho_eval(tau(v));
  bool commutes = true, zero = true;
  for (std::size_t i = 0; i < xs_.size(); ++i) {
    Fraction natural{v, xs_[i], 0};
    commutes = commutes && loc_equal(natural, {rt.components[i], xs_[i], rt.exponent});
    zero = zero && loc_is_zero(natural);
  }
  return {commutes, gamma().contains(v), zero};
}

bool DeligneContext::vanishes_on(const IdealTransformElement& phi, std::uint32_t n) const {
  for (const auto& g : ideal_power(xs_, n))
    if (!is_zero(evaluate(phi, g))) return false;
  return true;
}

InjectivityReport DeligneContext::injectivity_check(const IdealTransformElement& phi) const {
  std::uint32_t m = 0;
  for (const auto& x : xs_) {
    Fraction f{evaluate(phi, x.pow(phi.stage)), x, phi.stage};
    auto c = loc_kill_exponent(f, {zero_vector(ring_.poly_ring(), m_.rank()), x, 0});
    if (!c) throw StructuralError("injectivity_check: rho(phi) is not zero");
    m = std::max(m, *c);
  }
  const auto n = phi.stage, k = static_cast<std::uint32_t>(xs_.size());
  InjectivityReport r{n, m, k, n + m + k, k * (n + m - 1) + 1, false, false};
  r.literal_vanishes = vanishes_on(phi, r.literal_exponent);
  r.sound_vanishes = vanishes_on(phi, r.sound_exponent);
  return r;
}

SheafOutcome DeligneContext::sheaf_check(const std::vector<Fraction>& sections, const std::vector<Poly>& probes) const {
  const std::size_t k = xs_.size();
  if (sections.size() != k) throw StructuralError("sheaf_check: one section per cover element");
  std::uint32_t n = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (!(sections[i].base == xs_[i])) throw StructuralError("sheaf_check: section " + std::to_string(i) +
                                                             " is not over D(" + xs_[i].to_string() + ")");
    n = std::max(n, sections[i].exponent);
  }
  std::vector<Vector> comps;
  for (std::size_t i = 0; i < k; ++i) comps.push_back(mul(xs_[i].pow(n - sections[i].exponent), sections[i].numerator));

  std::uint32_t c = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      Vector v = m_.normal_form(sub(scale(xs_[j].pow(n), comps[i]), scale(xs_[i].pow(n), comps[j])));
      const auto& sat = saturation(xs_[i] * xs_[j]);
      auto kill = sat.kill_exponent(v);
      if (!kill) {
        auto t = static_cast<std::uint32_t>(sat.stabilization_index());
        return IncompatibleWitness{i, j, t, mul((xs_[i] * xs_[j]).pow(t), v)};
      }
      c = std::max(c, static_cast<std::uint32_t>(*kill));
    }

  const std::uint32_t e = std::max<std::uint32_t>(c + n, 1);
  CechCocycle cocycle{xs_, n, comps};
  auto mp = primed(cocycle, e - n, m_);
  Poly y(ring_.poly_ring());
  Vector m0 = zero_vector(ring_.poly_ring(), m_.rank());
  for (std::size_t i = 0; i < k; ++i) {
    y += xs_[i].pow(e);
    m0 = add(m0, mp[i]);
  }
  m0 = m_.normal_form(m0);
  for (std::size_t i = 0; i < k; ++i)
    if (!(mul(xs_[i].pow(e), m0) == mul(y, mp[i])))
      throw StructuralError("sheaf_check: restriction identity fails on D(" + xs_[i].to_string() + ")");

  Glued g{c, e, y, m0, mp, {}};
  Fraction glued{m0, y, 1};
  std::vector<Poly> all = probes;
  if (!y.is_zero()) all.insert(all.begin(), y);
  for (const auto& p : all) {
    auto s = sigma_inverse(cocycle, p);
    bool ok = agree_on_overlap(glued, s.value);
    if (!ok) {
      // m0/y - m_p/p^d over the base y p
      const std::uint32_t d = s.value.exponent;
      Vector diff = sub(scale((y * p).pow(d) * p, m0), scale((y * p) * y.pow(d), s.value.numerator));
      return LocalityWitness{p, m_.normal_form(diff)};
    }
    g.probes.push_back({p, ok});
  }
  return g;
}

}  // namespace dk
