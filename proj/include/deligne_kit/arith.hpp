#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace dk {

// Raised when an operation is called outside its contract (mismatched
// lengths, broken witnesses, invalid cocycles, ...).
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

using Coeff = mpq_class;

/// Coefficient field: the rationals or a prime field F_p with p < 2^32.
class Field {
 public:
  static Field rationals() { return Field(0); }
  static Field prime(std::uint64_t p);

  bool is_prime() const { return p_ != 0; }
  std::uint64_t characteristic() const { return p_; }

  // All arithmetic returns canonical values: lowest terms for Q,
  // integers in [0, p) for F_p.
  Coeff normalize(Coeff a) const;
  Coeff from_int(long v) const { return normalize(Coeff(v)); }
  Coeff add(const Coeff& a, const Coeff& b) const;
  Coeff sub(const Coeff& a, const Coeff& b) const;
  Coeff mul(const Coeff& a, const Coeff& b) const;
  Coeff neg(const Coeff& a) const;
  Coeff inv(const Coeff& a) const;
  Coeff div(const Coeff& a, const Coeff& b) const { return mul(a, inv(b)); }

  std::string name() const;
  bool operator==(const Field&) const = default;

 private:
  explicit Field(std::uint64_t p) : p_(p) {}
  std::uint64_t p_;
};

enum class MonomialOrder { Grevlex, Lex };

std::string_view to_string(MonomialOrder order);

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(std::size_t nvars) : exps_(nvars, 0) {}
  explicit Monomial(std::vector<std::uint32_t> exps);

  std::size_t size() const { return exps_.size(); }
  std::uint32_t operator[](std::size_t i) const { return exps_[i]; }
  const std::vector<std::uint32_t>& exponents() const { return exps_; }
  std::uint32_t degree() const { return degree_; }
  bool is_one() const { return degree_ == 0; }

  bool divides(const Monomial& other) const;
  // this / other; requires other | this.
  Monomial quotient(const Monomial& other) const;
  Monomial lcm(const Monomial& other) const;
  bool coprime(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  Monomial pow(std::uint32_t e) const;

  bool operator==(const Monomial& other) const { return exps_ == other.exps_; }

 private:
  std::vector<std::uint32_t> exps_;
  std::uint32_t degree_ = 0;
};

std::strong_ordering monomial_compare(const Monomial& a, const Monomial& b, MonomialOrder order);

class PolyRing;
using RingPtr = std::shared_ptr<const PolyRing>;

class PolyRing {
 public:
  PolyRing(Field field, std::vector<std::string> variables, MonomialOrder order = MonomialOrder::Grevlex);

  static RingPtr make(Field field, std::vector<std::string> variables,
                      MonomialOrder order = MonomialOrder::Grevlex) {
    return std::make_shared<const PolyRing>(std::move(field), std::move(variables), order);
  }

  const Field& field() const { return field_; }
  MonomialOrder order() const { return order_; }
  std::size_t nvars() const { return vars_.size(); }
  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t variable_index(std::string_view name) const;  // nvars() if absent

  std::strong_ordering compare(const Monomial& a, const Monomial& b) const {
    return monomial_compare(a, b, order_);
  }

  std::string description() const;

 private:
  Field field_;
  std::vector<std::string> vars_;
  MonomialOrder order_;
};

struct Term {
  Monomial monomial;
  Coeff coeff;
};

// Sparse polynomial, terms strictly decreasing in the ring's order.
class Poly {
 public:
  Poly() = default;
  explicit Poly(RingPtr ring) : ring_(std::move(ring)) {}
  // Takes arbitrary terms; sorts, merges and drops zeros.
  Poly(RingPtr ring, std::vector<Term> terms);

  static Poly constant(RingPtr ring, const Coeff& c);
  static Poly constant(RingPtr ring, long c) { return constant(ring, ring->field().from_int(c)); }
  static Poly variable(RingPtr ring, std::size_t index);
  static Poly monomial(RingPtr ring, Monomial m, const Coeff& c);

  const RingPtr& ring() const { return ring_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one()); }
  std::size_t size() const { return terms_.size(); }

  const Term& leading_term() const;
  const Monomial& lead_monomial() const { return leading_term().monomial; }
  const Coeff& lead_coeff() const { return leading_term().coeff; }
  std::uint32_t total_degree() const;
  bool is_homogeneous() const;
  // Largest e with x_var^e dividing every term.
  std::uint32_t valuation(std::size_t var) const;
  // Coefficient of the monomial 1.
  Coeff constant_coeff() const;

  Poly operator-() const;
  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly scale(const Coeff& c) const;
  Poly mul_term(const Monomial& m, const Coeff& c) const;
  Poly pow(std::uint32_t e) const;
  Poly monic() const;

  bool operator==(const Poly& o) const;

  std::string to_string() const;

 private:
  RingPtr ring_;
  std::vector<Term> terms_;

  void check_same_ring(const Poly& o) const;
};

std::ostream& operator<<(std::ostream& os, const Poly& p);

struct DivisionResult {
  std::vector<Poly> quotients;
  Poly remainder;
};

// Multivariate division: the first divisor (in list order) whose leading
// monomial divides the current leading term is used.
DivisionResult poly_divmod(const Poly& f, const std::vector<Poly>& divisors);

class PolyParseError : public std::invalid_argument {
 public:
  PolyParseError(const std::string& what, std::size_t offset)
      : std::invalid_argument(what), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Parses expressions like "3/2*x^2*y - (y + 1)^2".
Poly parse_poly(const RingPtr& ring, std::string_view text);

}  // namespace dk
