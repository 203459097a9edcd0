#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "deligne_kit/groebner.hpp"

namespace dk {

/// The sequence x_1, ..., x_k; stage n uses x_1^n, ..., x_k^n.
class SequenceSpec {
 public:
  explicit SequenceSpec(std::vector<Poly> elements);

  const std::vector<Poly>& elements() const { return xs_; }
  std::size_t length() const { return xs_.size(); }
  const RingPtr& ring() const { return xs_.front().ring(); }
  std::vector<Poly> powers(std::uint32_t n) const;

 private:
  std::vector<Poly> xs_;
};

// Sorted subsets of {0..k-1} of size i, in lexicographic order.
std::vector<std::vector<std::size_t>> exterior_basis(std::size_t k, std::size_t i);

/// K(x^(n); M). Chains of degree i live in the free module of rank
/// C(k,i) * rank(M): block s holds the coefficient of e_S for the s-th subset.
class KoszulStage {
 public:
  KoszulStage(SequenceSpec x, std::uint32_t n, FpModule m);

  const SequenceSpec& sequence() const { return x_; }
  std::uint32_t exponent() const { return n_; }
  const FpModule& module() const { return m_; }
  std::size_t length() const { return x_.length(); }

  // 0 outside [0, k].
  std::size_t chain_rank(int i) const;
  // Relations of the degree-i chain module (copies of M's relations per block).
  const std::vector<Vector>& chain_relations(int i) const;
  FpModule chain_module(int i) const;
  // Columns of d_i : K_i -> K_{i-1}, one per ambient basis vector of K_i.
  const std::vector<Vector>& differential(int i) const;
  Vector apply_differential(int i, const Vector& chain) const;
  // Membership in d_{i+1}(K_{i+1}) + relations.
  const FreeSubmodule& boundaries(int i) const;

 private:
  SequenceSpec x_;
  std::uint32_t n_;
  FpModule m_;
  std::vector<std::vector<Vector>> rels_, diffs_;
  std::vector<FreeSubmodule> bounds_;
};

/// H_i as a presented module; generator g corresponds to cycles()[g].
struct HomologyModule {
  int degree;
  std::uint32_t stage;
  FpModule presentation;
  std::vector<Vector> cycles;
};

HomologyModule koszul_homology(const KoszulStage& stage, int i);

// Multiplies the e_S block by prod_{j in S} x_j^(m-n).
Vector transport_chain(const SequenceSpec& x, const FpModule& m, int i, std::uint32_t from, std::uint32_t to,
                       const Vector& chain);

/// Induced map H_i(x^(m); M) -> H_i(x^(n); M) on the chosen presentations.
struct HomologyTransition {
  std::uint32_t from, to;
  HomologyModule source, target;
  ModuleHom map;

  bool is_zero() const;
};

HomologyTransition homology_transition(const SequenceSpec& x, int i, std::uint32_t m, std::uint32_t n,
                                       const FpModule& module);

/// For every cycle z at stage m (generators of the cycle module at m):
///   d_i(z) = sum cycle_relation[g] * rel_i^(m)
///   T(z) - d_{i+1}(preimage[g]) = sum relation_coefficients[g] * rel_i^(n)
/// Replaying these identities needs no Gröbner computation.
struct ProZeroCertificate {
  int degree;
  std::uint32_t base, witness;
  std::vector<Vector> cycles;
  std::vector<std::vector<Poly>> cycle_relations;
  std::vector<Vector> preimages;
  std::vector<std::vector<Poly>> relation_coefficients;

  // Throws StructuralError naming the first identity that fails.
  void replay(const SequenceSpec& x, const FpModule& m) const;
};

struct Exhausted {
  int degree;
  std::uint32_t base, cap;
};

using ProZeroOutcome = std::variant<ProZeroCertificate, Exhausted>;

// Smallest m in [n, m_max] whose transition to stage n is zero.
ProZeroOutcome pro_zero_search(const SequenceSpec& x, int i, std::uint32_t n, const FpModule& m,
                               std::uint32_t m_max);

}  // namespace dk
