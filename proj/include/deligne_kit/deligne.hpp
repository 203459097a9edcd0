#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "deligne_kit/groebner.hpp"
#include "deligne_kit/koszul.hpp"

namespace dk {

/// numerator / base^exponent in M_base. Numerators are in M's ambient
/// coordinates; equality is decided by loc_equal, not syntactically.
struct Fraction {
  Vector numerator;
  Poly base;
  std::uint32_t exponent = 0;
};

/// (m_i / x_i^n)_i with a shared exponent.
struct CechCocycle {
  std::vector<Poly> cover;
  std::uint32_t exponent = 0;
  std::vector<Vector> components;
};

/// phi in Hom(J^n, M) given by its values on ideal_power(J, n).
struct IdealTransformElement {
  std::uint32_t stage = 0;
  std::vector<Poly> domain;  // generators of J^stage
  std::vector<Vector> values;
};

/// x^k = y * r, so x in Rad(yR).
struct AlphaWitness {
  std::uint32_t k;
  Poly r;
};

struct SigmaTrace {
  Fraction value;            // m_y / y^d
  std::uint32_t c, e, d;     // e = max(c + n, 1) and y^d = sum r_i x_i^e
  std::vector<Poly> r;
  std::vector<Poly> ring_r;  // coefficients on the defining ideal
};

struct Obstruction {
  std::uint32_t exponent;  // e at which the cap was reached
  Vector syzygy;           // s with sum s_i x_i^e = 0 in R
  Vector residual;         // sum s_i m_i' != 0 in M
};

struct PreimageTrace {
  IdealTransformElement phi;  // stage k(e-1)+1
  std::uint32_t c, e, escalations;
  std::optional<std::uint32_t> certificate_stage;  // set when a pro-zero jump was used
};

using PreimageOutcome = std::variant<PreimageTrace, Obstruction>;

struct DiagramReport {
  bool commutes;          // natural map equals rho(tau(m)) componentwise
  bool in_torsion;        // m in Gamma_J(M)
  bool cocycle_is_zero;   // every component loc_equal 0
  bool exact() const { return in_torsion == cocycle_is_zero; }
};

struct InjectivityReport {
  std::uint32_t n, m, k;
  std::uint32_t literal_exponent;  // n + m + k
  std::uint32_t sound_exponent;    // k(n + m - 1) + 1
  bool literal_vanishes, sound_vanishes;
};

struct ProbeAgreement {
  Poly probe;
  bool agrees;
};

struct Glued {
  std::uint32_t c, e;
  Poly y;            // sum x_i^e
  Vector m;          // sum m_j'
  std::vector<Vector> primed;  // m_i' = x_i^c m_i
  std::vector<ProbeAgreement> probes;
};

struct LocalityWitness {
  Poly probe;
  Vector difference;
};

struct IncompatibleWitness {
  std::size_t i, j;
  std::uint32_t c;   // stabilisation index for x_i x_j
  Vector witness;    // (x_i x_j)^c (x_j^n m_i - x_i^n m_j), nonzero in M
};

using SheafOutcome = std::variant<Glued, LocalityWitness, IncompatibleWitness>;

/// M over R = P/I together with J = (x_1..x_k). Saturations with respect to
/// single elements are computed once per base and shared between threads.
class DeligneContext {
 public:
  DeligneContext(QuotientRing ring, FpModule module, std::vector<Poly> cover);

  const QuotientRing& ring() const { return ring_; }
  const FpModule& module() const { return m_; }
  const std::vector<Poly>& cover() const { return xs_; }
  std::size_t length() const { return xs_.size(); }

  const Saturation& saturation(const Poly& base) const;
  const Saturation& gamma() const;

  // --- localisations
  bool loc_equal(const Fraction& f, const Fraction& g) const;
  bool loc_is_zero(const Fraction& f) const;
  // Smallest c with x^c (x^b m - x^a m') = 0, if any.
  std::optional<std::uint32_t> loc_kill_exponent(const Fraction& f, const Fraction& g) const;
  // Both fractions over the base f.base * g.base, then loc_equal.
  bool agree_on_overlap(const Fraction& f, const Fraction& g) const;
  std::optional<AlphaWitness> find_alpha_witness(const Poly& x, const Poly& y, std::uint32_t max_k = 8) const;
  Fraction alpha_map(const Fraction& f, const Poly& x, const AlphaWitness& w) const;

  // --- ideal transform
  const HomModule& stage_hom(std::uint32_t n) const;
  IdealTransformElement make_transform(std::uint32_t n, std::vector<Vector> values) const;
  Vector evaluate(const IdealTransformElement& phi, const Poly& a) const;
  IdealTransformElement restrict_to(const IdealTransformElement& phi, std::uint32_t n) const;
  IdealTransformElement tau(const Vector& m, std::uint32_t n = 1) const;
  // Equal colimit classes iff equal rho images.
  bool transform_equal(const IdealTransformElement& a, const IdealTransformElement& b) const;

  // --- the three maps
  CechCocycle make_cocycle(std::uint32_t n, std::vector<Vector> components) const;
  CechCocycle rho_eval(const IdealTransformElement& phi) const;
  Fraction theta_probe(const IdealTransformElement& phi, const Poly& y) const;
  // Smallest c with (x_i x_j)^c (x_j^n m_i - x_i^n m_j) = 0 for all pairs.
  std::uint32_t compatibility_exponent(const CechCocycle& c) const;
  SigmaTrace sigma_inverse(const CechCocycle& c, const Poly& y) const;
  // Escalates e up to escalation_cap. With use_pro_zero, a failure at e
  // jumps to the witness stage of a pro-zero certificate for H_1(x^(e); R).
  PreimageOutcome rho_preimage(const CechCocycle& c, std::uint32_t escalation_cap, bool use_pro_zero = false) const;
  bool cocycle_equal(const CechCocycle& a, const CechCocycle& b) const;

  // --- checks
  DiagramReport diagram_check(const Vector& m) const;
  InjectivityReport injectivity_check(const IdealTransformElement& phi) const;
  SheafOutcome sheaf_check(const std::vector<Fraction>& sections, const std::vector<Poly>& probes) const;

 private:
  QuotientRing ring_;
  FpModule m_;
  std::vector<Poly> xs_;

  struct Caches;
  std::shared_ptr<Caches> caches_;

  Poly one() const { return Poly::constant(ring_.poly_ring(), 1); }
  Vector mul(const Poly& f, const Vector& v) const { return m_.normal_form(scale(f, v)); }
  bool vanishes_on(const IdealTransformElement& phi, std::uint32_t n) const;
};

}  // namespace dk
