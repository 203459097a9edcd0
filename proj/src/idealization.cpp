#include "deligne_kit/idealization.hpp"

namespace dk {

EElement EElement::basis(std::uint32_t i, const Coeff& c) {
  EElement e;
  e.put(i, c);
  return e;
}

void EElement::put(std::uint32_t i, Coeff c) {
  if (c == 0) {
    c_.erase(i);
  } else {
    c_[i] = std::move(c);
  }
}

std::optional<std::uint32_t> EElement::max_index() const {
  if (c_.empty()) return std::nullopt;
  return c_.rbegin()->first;
}

Coeff EElement::coeff(std::uint32_t i) const {
  auto it = c_.find(i);
  return it == c_.end() ? Coeff(0) : it->second;
}

EElement EElement::operator+(const EElement& o) const {
  EElement r = *this;
  for (const auto& [i, c] : o.c_) r.put(i, r.coeff(i) + c);
  return r;
}

EElement EElement::operator-(const EElement& o) const { return *this + o.scale(-1); }

EElement EElement::scale(const Coeff& c) const {
  EElement r;
  if (c == 0) return r;
  for (const auto& [i, a] : c_) r.put(i, a * c);
  return r;
}

EElement EElement::shift(std::uint32_t j) const {
  EElement r;
  for (const auto& [i, a] : c_)
    if (i >= j) r.put(i - j, a);
  return r;
}

std::string EElement::to_string() const {
  if (c_.empty()) return "0";
  std::string s;
  for (const auto& [i, a] : c_) {
    if (!s.empty()) s += " + ";
    s += a.get_str() + "*e" + std::to_string(i);
  }
  return s;
}

EElement act(const Poly& r, const EElement& e) {
  if (r.ring()->nvars() != 1) throw StructuralError("E is a module over a one-variable ring");
  EElement out;
  for (const auto& t : r.terms()) out = out + e.shift(t.monomial[0]).scale(t.coeff);
  return out;
}

std::string SElement::to_string() const { return "(" + r.to_string() + ", " + e.to_string() + ")"; }

Idealization::Idealization(Field field) : ring_(PolyRing::make(std::move(field), {"x"})) {}

SElement Idealization::mul(const SElement& a, const SElement& b) const {
  return {a.r * b.r, act(a.r, b.e) + act(b.r, a.e)};
}

std::vector<SElement> Idealization::annihilator(std::uint32_t t) const {
  if (t == 0) throw StructuralError("annihilator: t must be >= 1");
  std::vector<SElement> out;
  for (std::uint32_t i = 0; i < t; ++i) out.push_back({Poly(ring_), EElement::basis(i)});
  return out;
}

bool H1Witness::verify(const Idealization& s) const {
  return m > n && s.mul(s.x_power(m), cycle).is_zero() && s.mul(s.x_power(m - n), cycle) == image &&
         !image.is_zero();
}

H1Witness h1_transition_witness(const Idealization& s, std::uint32_t m, std::uint32_t n) {
  if (n == 0 || m <= n) throw StructuralError("h1_transition_witness needs m > n >= 1");
  SElement cycle{Poly(s.ring()), EElement::basis(m - 1)};
  H1Witness w{m, n, cycle, s.mul(s.x_power(m - n), cycle)};
  if (!w.verify(s)) throw StructuralError("h1_transition_witness: verification failed");
  return w;
}

bool TransformStage::admissible(const SElement& v) const {
  return v.r.is_zero() || v.r.valuation(0) >= n;
}

SElement TransformStage::transition(const Idealization& s, const SElement& v) const {
  if (!admissible(v)) throw StructuralError("transition: value is not in x^n R x E");
  return s.mul(s.x_power(1), v);
}

Poly TransformStage::colimit_class(const SElement& v) const {
  if (!admissible(v)) throw StructuralError("colimit_class: value is not in x^n R x E");
  auto q = poly_divmod(v.r, {Poly::variable(v.r.ring(), 0).pow(n)});
  return q.quotients[0];
}

TransformStage ideal_transform_stage(std::uint32_t n) {
  if (n == 0) throw StructuralError("ideal_transform_stage: n must be >= 1");
  return {n};
}

SElement tau_value(const Idealization& s, const Poly& a, std::uint32_t n) { return {a * s.x().pow(n), {}}; }

bool PoleWitness::verify(const Idealization& s) const {
  if (kind == Kind::Valuation) return required_valuation < 0;
  return required_valuation < static_cast<int>(stage) && s.mul(s.x_power(stage), annihilator).is_zero() &&
         s.mul(annihilator, required) == pairing && !pairing.is_zero();
}

PoleObstruction rho_obstruction(const Idealization& s, const Poly& u, int p, std::uint32_t cap) {
  if (u.is_zero()) throw StructuralError("rho_obstruction: target is zero");
  const auto v = static_cast<int>(u.valuation(0));
  const int pole = p - v;
  if (pole <= 0) throw StructuralError("rho_obstruction: target has no pole, it lies in R");
  Poly u0 = poly_divmod(u, {s.x().pow(static_cast<std::uint32_t>(v))}).quotients[0];

  PoleObstruction out{u0, static_cast<std::uint32_t>(pole), {}};
  for (std::uint32_t n = 1; n <= cap; ++n) {
    PoleWitness w{n, PoleWitness::Kind::Valuation, static_cast<int>(n) - pole, {}, {}, {}};
    if (w.required_valuation >= 0) {
      w.kind = PoleWitness::Kind::Annihilator;
      w.annihilator = {Poly(s.ring()), EElement::basis(n - 1)};
      w.required = {u0 * s.x().pow(static_cast<std::uint32_t>(w.required_valuation)), {}};
      w.pairing = s.mul(w.annihilator, w.required);
    }
    if (!w.verify(s)) throw StructuralError("rho_obstruction: witness failed at stage " + std::to_string(n));
    out.stages.push_back(std::move(w));
  }
  return out;
}

}  // namespace dk
