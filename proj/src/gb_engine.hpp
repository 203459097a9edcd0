#pragma once

// Term-list representation of module vectors used by the Gröbner core.
// Components are ordered position-over-term: a smaller component index is
// larger, ties are broken by the ring's monomial order.

#include <cstdint>
#include <span>
#include <vector>

#include "deligne_kit/arith.hpp"
#include "deligne_kit/groebner.hpp"

namespace dk::detail {

struct VTerm {
  std::uint32_t comp;
  Monomial mon;
  Coeff coeff;
};

using SVec = std::vector<VTerm>;

class Engine {
 public:
  explicit Engine(const PolyRing& ring) : ring_(ring), field_(ring.field()) {}

  std::strong_ordering compare(const VTerm& a, const VTerm& b) const {
    if (a.comp != b.comp) return b.comp <=> a.comp;
    return ring_.compare(a.mon, b.mon);
  }

  SVec from_vector(const Vector& v, std::uint32_t offset = 0) const;
  // Components [first, first + rank) of s as a Vector.
  Vector to_vector(const SVec& s, const RingPtr& ring, std::uint32_t first, std::size_t rank) const;

  // f - c * m * g
  SVec sub_mul(std::span<const VTerm> f, const Coeff& c, const Monomial& m, const SVec& g) const;
  void make_monic(SVec& f) const;
  // Full reduction: no term of the result is divisible by a leading term of G.
  SVec reduce(SVec f, const std::vector<SVec>& basis) const;
  // Reduced Gröbner basis, sorted by decreasing leading term.
  std::vector<SVec> groebner(std::vector<SVec> gens) const;

 private:
  const PolyRing& ring_;
  const Field& field_;

  const SVec* find_reducer(const VTerm& t, const std::vector<SVec>& basis) const;
};

}  // namespace dk::detail
