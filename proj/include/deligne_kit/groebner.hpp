#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "deligne_kit/arith.hpp"

namespace dk {

// A column vector over the polynomial ring.
using Vector = std::vector<Poly>;

Vector zero_vector(const RingPtr& ring, std::size_t rank);
Vector unit_vector(const RingPtr& ring, std::size_t rank, std::size_t index);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
Vector scale(const Poly& c, const Vector& v);
bool is_zero(const Vector& v);
// Sum of coeffs[i] * vectors[i]; rank must be given for empty input.
Vector combine(const RingPtr& ring, std::size_t rank, const std::vector<Poly>& coeffs,
               const std::vector<Vector>& vectors);
std::string to_string(const Vector& v);

struct Lift {
  Vector remainder;
  // v = remainder + sum coefficients[j] * generators[j]
  std::vector<Poly> coefficients;
  bool member() const { return is_zero(remainder); }
};

/// Submodule of the free module R^rank given by generators. Reduced
/// Gröbner bases (position-over-term) are computed lazily and shared
/// between copies; the object is otherwise immutable.
class FreeSubmodule {
 public:
  FreeSubmodule(RingPtr ring, std::size_t rank, std::vector<Vector> generators);

  const RingPtr& ring() const { return data_->ring; }
  std::size_t rank() const { return data_->rank; }
  const std::vector<Vector>& generators() const { return data_->generators; }
  std::size_t size() const { return data_->generators.size(); }

  const std::vector<Vector>& basis() const;
  Vector normal_form(const Vector& v) const;
  bool contains(const Vector& v) const { return is_zero(normal_form(v)); }
  bool contains(const FreeSubmodule& other) const;
  bool same_as(const FreeSubmodule& other) const { return contains(other) && other.contains(*this); }
  Lift lift(const Vector& v) const;
  // Generators of all relations sum s_j g_j = 0 among generators().
  const std::vector<Vector>& syzygy_generators() const;

 private:
  struct Cache;
  struct Data {
    RingPtr ring;
    std::size_t rank;
    std::vector<Vector> generators;
    std::shared_ptr<Cache> cache;
  };
  std::shared_ptr<const Data> data_;

  const Cache& plain() const;
  const Cache& augmented() const;
};

// Returns the submodule with its reduced Gröbner basis as generators.
FreeSubmodule buchberger(const FreeSubmodule& s);
Lift normal_form_lift(const Vector& v, const FreeSubmodule& s);
FreeSubmodule syzygies(const FreeSubmodule& s);

class ModuleElement;

/// Finitely presented module coker(relations) over the polynomial ring.
class FpModule {
 public:
  explicit FpModule(FreeSubmodule relations) : rel_(std::move(relations)) {}
  static FpModule free(const RingPtr& ring, std::size_t rank);
  static FpModule coker(const RingPtr& ring, std::size_t rank, std::vector<Vector> relation_columns);

  const RingPtr& ring() const { return rel_.ring(); }
  std::size_t rank() const { return rel_.rank(); }
  const FreeSubmodule& relations() const { return rel_; }
  bool is_zero_module() const;

  ModuleElement element(Vector v) const;
  ModuleElement zero() const;
  ModuleElement generator(std::size_t i) const;
  Vector normal_form(const Vector& v) const { return rel_.normal_form(v); }

 private:
  FreeSubmodule rel_;
};

class ModuleElement {
 public:
  ModuleElement(FpModule module, Vector normal_form) : module_(std::move(module)), v_(std::move(normal_form)) {}

  const FpModule& module() const { return module_; }
  const Vector& vector() const { return v_; }
  bool is_zero() const { return dk::is_zero(v_); }

  ModuleElement operator+(const ModuleElement& o) const;
  ModuleElement operator-(const ModuleElement& o) const;
  ModuleElement operator-() const;
  ModuleElement operator*(const Poly& c) const;
  bool operator==(const ModuleElement& o) const;

 private:
  FpModule module_;
  Vector v_;
};

/// Homomorphism given by images of the source generators (columns).
class ModuleHom {
 public:
  // Throws StructuralError unless every source relation maps into the
  // target relations.
  ModuleHom(FpModule source, FpModule target, std::vector<Vector> columns);

  const FpModule& source() const { return src_; }
  const FpModule& target() const { return tgt_; }
  const std::vector<Vector>& columns() const { return cols_; }

  Vector apply(const Vector& v) const;
  ModuleElement apply(const ModuleElement& a) const { return tgt_.element(apply(a.vector())); }
  // For each source relation, its image written over the target relations.
  std::vector<std::vector<Poly>> certificate() const;

 private:
  FpModule src_, tgt_;
  std::vector<Vector> cols_;
};

/// A module presented as (K + N) / N inside a free module, with the
/// chosen generators K_i.
struct Subquotient {
  FpModule module;
  std::vector<Vector> generators;
};

Subquotient subquotient(const RingPtr& ring, std::size_t rank, std::vector<Vector> gens,
                        const std::vector<Vector>& rels);

// {v in R^n : sum v_j columns[j] in target}; columns live in R^target.rank().
std::vector<Vector> preimage_generators(const std::vector<Vector>& columns, const FreeSubmodule& target,
                                        std::size_t source_rank);

struct KernelResult {
  FpModule kernel;
  std::vector<Vector> inclusion;  // kernel generators in source coordinates
};

KernelResult module_kernel(const ModuleHom& h);

/// Hom_R(A, B) with an evaluator.
class HomModule {
 public:
  HomModule(FpModule source, FpModule target);

  const FpModule& module() const { return hom_; }
  const FpModule& source() const { return src_; }
  const FpModule& target() const { return tgt_; }
  // Images phi_k(e_j) of the source generators for Hom generator k.
  const std::vector<std::vector<Vector>>& generator_values() const { return values_; }

  // phi(e_j) for every source generator j, given phi as an element of H.
  std::vector<Vector> images(const Vector& h) const;
  ModuleElement evaluate(const Vector& h, const Vector& a) const;

 private:
  FpModule src_, tgt_, hom_;
  std::vector<std::vector<Vector>> values_;
};

/// 0 :_M J^infinity together with the colon chain used to find it.
class Saturation {
 public:
  Saturation(FpModule m, std::vector<Poly> ideal);

  const FpModule& module() const { return m_; }
  // Generators of the torsion submodule in M's ambient coordinates.
  const std::vector<Vector>& generators() const { return gens_; }
  FpModule torsion_module() const;
  // Number of colon steps until 0 :_M J^t = 0 :_M J^{t+1}.
  int stabilization_index() const { return t_star_; }
  // Dimension-free description of the chain: chain()[t-1] = 0 :_M J^t (+ relations).
  const std::vector<FreeSubmodule>& chain() const { return chain_; }

  bool contains(const Vector& v) const { return chain_.back().contains(v); }
  // Smallest c with J^c v = 0 in M; nullopt when v is not torsion.
  std::optional<int> kill_exponent(const Vector& v) const;

 private:
  FpModule m_;
  std::vector<Poly> ideal_;
  std::vector<Vector> gens_;
  std::vector<FreeSubmodule> chain_;
  int t_star_ = 1;
};

Saturation saturate(const FpModule& m, const std::vector<Poly>& ideal);

// All degree-n products of the generators, duplicates removed; n = 0 gives (1).
std::vector<Poly> ideal_power(const std::vector<Poly>& gens, std::uint32_t n);

/// R = P / I for the polynomial ring P. Every R-module is presented over P
/// with the I e_j relations included.
class QuotientRing {
 public:
  explicit QuotientRing(RingPtr ring, std::vector<Poly> defining = {});

  const RingPtr& poly_ring() const { return ring_; }
  const std::vector<Poly>& defining_ideal() const { return defining_; }
  bool is_polynomial_ring() const { return defining_.empty(); }

  Poly reduce(const Poly& f) const;
  bool is_zero(const Poly& f) const { return reduce(f).is_zero(); }

  FpModule as_module() const { return free_module(1); }
  FpModule free_module(std::size_t rank) const;
  FpModule coker(std::size_t rank, std::vector<Vector> relation_columns) const;
  // The ideal (gens)R as a module whose i-th generator maps to gens[i].
  FpModule ideal_module(const std::vector<Poly>& gens) const;

  // Writes f = sum c_i gens[i] in R; nullopt if f is not in (gens)R.
  // ring_coefficients (if requested) receives the coefficients on the
  // defining ideal so that the identity holds exactly in P.
  std::optional<std::vector<Poly>> ideal_lift(const Poly& f, const std::vector<Poly>& gens,
                                              std::vector<Poly>* ring_coefficients = nullptr) const;

 private:
  struct LiftRegistry;
  RingPtr ring_;
  std::vector<Poly> defining_;
  FreeSubmodule ideal_;
  std::shared_ptr<LiftRegistry> lifts_;  // lift bases keyed by generator list
};

struct RadicalLift {
  std::uint32_t d;
  std::vector<Poly> coefficients;       // y^d = sum r_i x_i^e  (in R)
  std::vector<Poly> ring_coefficients;  // over the defining ideal
};

// Finds the least d with y^d in (x_1^e, ..., x_k^e)R, searching up to
// k(e-1)+1 (or max_d when given).
RadicalLift radical_lift(const QuotientRing& ring, const Poly& y, const std::vector<Poly>& base,
                         std::uint32_t e, std::optional<std::uint32_t> max_d = std::nullopt);

}  // namespace dk
