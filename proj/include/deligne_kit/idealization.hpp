#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deligne_kit/arith.hpp"

namespace dk {

/// Element of E = k[x^-1]: finite combination of e_0, e_1, ... with
/// x e_i = e_{i-1} and x e_0 = 0.
class EElement {
 public:
  EElement() = default;
  static EElement basis(std::uint32_t i, const Coeff& c = 1);

  const std::map<std::uint32_t, Coeff>& support() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  std::optional<std::uint32_t> max_index() const;
  Coeff coeff(std::uint32_t i) const;

  EElement operator+(const EElement& o) const;
  EElement operator-(const EElement& o) const;
  EElement scale(const Coeff& c) const;
  EElement shift(std::uint32_t j) const;  // x^j * this
  bool operator==(const EElement& o) const { return c_ == o.c_; }
  std::string to_string() const;

 private:
  std::map<std::uint32_t, Coeff> c_;
  void put(std::uint32_t i, Coeff c);
};

// r * e for r in k[x] (one variable).
EElement act(const Poly& r, const EElement& e);

/// (r, e) in S = R x E with R = k[x].
struct SElement {
  Poly r;
  EElement e;

  bool is_zero() const { return r.is_zero() && e.is_zero(); }
  bool operator==(const SElement& o) const { return r == o.r && e == o.e; }
  std::string to_string() const;
};

class Idealization {
 public:
  explicit Idealization(Field field = Field::rationals());

  const RingPtr& ring() const { return ring_; }
  Poly x() const { return Poly::variable(ring_, 0); }
  SElement element(Poly r, EElement e = {}) const { return {std::move(r), std::move(e)}; }
  SElement x_power(std::uint32_t n) const { return {x().pow(n), {}}; }

  SElement add(const SElement& a, const SElement& b) const { return {a.r + b.r, a.e + b.e}; }
  // (r, e)(r', e') = (r r', r e' + r' e)
  SElement mul(const SElement& a, const SElement& b) const;

  // Basis of 0 :_S (x, 0)^t.
  std::vector<SElement> annihilator(std::uint32_t t) const;

 private:
  RingPtr ring_;
};

/// A class of H_1((x,0)^m; S) = 0 :_S (x,0)^m whose image in stage n is nonzero.
struct H1Witness {
  std::uint32_t m, n;
  SElement cycle, image;
  bool verify(const Idealization& s) const;
};

H1Witness h1_transition_witness(const Idealization& s, std::uint32_t m, std::uint32_t n);

/// Hom_S(J^n, S) with J = (x, 0)S, identified with x^n R x E through
/// phi -> phi((x^n, 0)).
struct TransformStage {
  std::uint32_t n;

  bool admissible(const SElement& v) const;                 // first component in x^n R
  SElement transition(const Idealization& s, const SElement& v) const;  // to stage n + 1
  // The class in D_J(S) = R: phi((x^n,0)) = (x^n a, e) gives a.
  Poly colimit_class(const SElement& v) const;
};

TransformStage ideal_transform_stage(std::uint32_t n);

// Stage-n representative of the tau-image of a in R.
SElement tau_value(const Idealization& s, const Poly& a, std::uint32_t n);

struct PoleWitness {
  enum class Kind { Valuation, Annihilator };
  std::uint32_t stage;
  Kind kind;
  int required_valuation;  // valuation of the first component phi((x^n,0)) would need
  SElement annihilator;    // kills (x^n, 0)
  SElement required;       // (x^(n-p) u, 0) when that is a polynomial
  SElement pairing;        // annihilator * required, nonzero
  bool verify(const Idealization& s) const;
};

struct PoleObstruction {
  Poly unit;           // u with u(0) != 0
  std::uint32_t pole;  // the target is u / x^pole
  std::vector<PoleWitness> stages;
};

// Target u / x^p; x-factors of u are cancelled first. Throws StructuralError
// when no pole is left (the target lies in R).
PoleObstruction rho_obstruction(const Idealization& s, const Poly& u, int p, std::uint32_t cap);

}  // namespace dk
