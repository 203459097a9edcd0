#include "deligne_kit/arith.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dk {

namespace {

bool is_prime_number(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

Field Field::prime(std::uint64_t p) {
  if (!is_prime_number(p) || p >= (1ULL << 32))
    throw StructuralError("F_p requires a prime p < 2^32, got " + std::to_string(p));
  return Field(p);
}

Coeff Field::normalize(Coeff a) const {
  a.canonicalize();
  if (p_ == 0) return a;
  mpz_class pz(static_cast<unsigned long>(p_));
  mpz_class num = a.get_num() % pz;
  mpz_class den = a.get_den() % pz;
  if (den == 0) throw StructuralError("denominator divisible by the characteristic");
  if (num < 0) num += pz;
  if (den < 0) den += pz;
  if (den != 1) {
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t());
    num = (num * inv) % pz;
  }
  return Coeff(num);
}

Coeff Field::add(const Coeff& a, const Coeff& b) const {
  if (p_ == 0) return a + b;
  mpz_class s = a.get_num() + b.get_num();
  if (s >= static_cast<unsigned long>(p_)) s -= static_cast<unsigned long>(p_);
  return Coeff(s);
}

Coeff Field::sub(const Coeff& a, const Coeff& b) const {
  if (p_ == 0) return a - b;
  mpz_class s = a.get_num() - b.get_num();
  if (s < 0) s += static_cast<unsigned long>(p_);
  return Coeff(s);
}

Coeff Field::mul(const Coeff& a, const Coeff& b) const {
  if (p_ == 0) return a * b;
  mpz_class s = (a.get_num() * b.get_num()) % static_cast<unsigned long>(p_);
  return Coeff(s);
}

Coeff Field::neg(const Coeff& a) const {
  if (p_ == 0) return -a;
  if (a == 0) return a;
  return Coeff(mpz_class(static_cast<unsigned long>(p_)) - a.get_num());
}

Coeff Field::inv(const Coeff& a) const {
  if (a == 0) throw StructuralError("division by zero coefficient");
  if (p_ == 0) return 1 / a;
  mpz_class r;
  mpz_class pz(static_cast<unsigned long>(p_));
  mpz_class n = a.get_num();
  mpz_invert(r.get_mpz_t(), n.get_mpz_t(), pz.get_mpz_t());
  return Coeff(r);
}

std::string Field::name() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

std::string_view to_string(MonomialOrder order) {
  return order == MonomialOrder::Grevlex ? "grevlex" : "lex";
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<std::uint32_t> exps) : exps_(std::move(exps)) {
  for (auto e : exps_) degree_ += e;
}

bool Monomial::divides(const Monomial& other) const {
  if (degree_ > other.degree_) return false;
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] > other.exps_[i]) return false;
  return true;
}

Monomial Monomial::quotient(const Monomial& other) const {
  std::vector<std::uint32_t> e(exps_.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (other.exps_[i] > exps_[i]) throw StructuralError("monomial quotient: not divisible");
    e[i] = exps_[i] - other.exps_[i];
  }
  return Monomial(std::move(e));
}

Monomial Monomial::lcm(const Monomial& other) const {
  std::vector<std::uint32_t> e(exps_.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::max(exps_[i], other.exps_[i]);
  return Monomial(std::move(e));
}

bool Monomial::coprime(const Monomial& other) const {
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] != 0 && other.exps_[i] != 0) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  if (other.exps_.size() != exps_.size()) throw StructuralError("monomial length mismatch");
  std::vector<std::uint32_t> e(exps_);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] += other.exps_[i];
  return Monomial(std::move(e));
}

Monomial Monomial::pow(std::uint32_t k) const {
  std::vector<std::uint32_t> e(exps_);
  for (auto& v : e) v *= k;
  return Monomial(std::move(e));
}

std::strong_ordering monomial_compare(const Monomial& a, const Monomial& b, MonomialOrder order) {
  if (a.size() != b.size())
    throw StructuralError("monomial_compare: length mismatch");
  if (order == MonomialOrder::Lex) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] <=> b[i];
    return std::strong_ordering::equal;
  }
  if (a.degree() != b.degree()) return a.degree() <=> b.degree();
  for (std::size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return b[i] <=> a[i];
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- PolyRing

PolyRing::PolyRing(Field field, std::vector<std::string> variables, MonomialOrder order)
    : field_(std::move(field)), vars_(std::move(variables)), order_(order) {
  if (vars_.empty()) throw StructuralError("a polynomial ring needs at least one variable");
  for (std::size_t i = 0; i < vars_.size(); ++i)
    for (std::size_t j = i + 1; j < vars_.size(); ++j)
      if (vars_[i] == vars_[j]) throw StructuralError("duplicate variable name '" + vars_[i] + "'");
}

std::size_t PolyRing::variable_index(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i] == name) return i;
  return vars_.size();
}

std::string PolyRing::description() const {
  std::string s = field_.name() + "[";
  for (std::size_t i = 0; i < vars_.size(); ++i) s += (i ? "," : "") + vars_[i];
  return s + "]";
}

// ---------------------------------------------------------------- Poly

Poly::Poly(RingPtr ring, std::vector<Term> terms) : ring_(std::move(ring)) {
  const auto& F = ring_->field();
  for (auto& t : terms) {
    if (t.monomial.size() != ring_->nvars()) throw StructuralError("monomial has wrong variable count");
    t.coeff = F.normalize(t.coeff);
  }
  std::sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) {
    return ring_->compare(a.monomial, b.monomial) == std::strong_ordering::greater;
  });
  for (auto& t : terms) {
    if (!terms_.empty() && terms_.back().monomial == t.monomial)
      terms_.back().coeff = F.add(terms_.back().coeff, t.coeff);
    else
      terms_.push_back(std::move(t));
    if (terms_.back().coeff == 0) terms_.pop_back();
  }
}

Poly Poly::constant(RingPtr ring, const Coeff& c) {
  Poly p(ring);
  Coeff v = ring->field().normalize(c);
  if (v != 0) p.terms_.push_back({Monomial(ring->nvars()), v});
  return p;
}

Poly Poly::variable(RingPtr ring, std::size_t index) {
  if (index >= ring->nvars()) throw StructuralError("variable index out of range");
  std::vector<std::uint32_t> e(ring->nvars(), 0);
  e[index] = 1;
  return monomial(ring, Monomial(std::move(e)), Coeff(1));
}

Poly Poly::monomial(RingPtr ring, Monomial m, const Coeff& c) {
  if (m.size() != ring->nvars()) throw StructuralError("monomial has wrong variable count");
  Poly p(ring);
  Coeff v = ring->field().normalize(c);
  if (v != 0) p.terms_.push_back({std::move(m), v});
  return p;
}

const Term& Poly::leading_term() const {
  if (terms_.empty()) throw StructuralError("leading term of the zero polynomial");
  return terms_.front();
}

std::uint32_t Poly::total_degree() const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
  return d;
}

bool Poly::is_homogeneous() const {
  for (const auto& t : terms_)
    if (t.monomial.degree() != terms_.front().monomial.degree()) return false;
  return true;
}

std::uint32_t Poly::valuation(std::size_t var) const {
  if (terms_.empty()) return 0;
  std::uint32_t v = UINT32_MAX;
  for (const auto& t : terms_) v = std::min(v, t.monomial[var]);
  return v;
}

Coeff Poly::constant_coeff() const {
  if (!terms_.empty() && terms_.back().monomial.is_one()) return terms_.back().coeff;
  return Coeff(0);
}

void Poly::check_same_ring(const Poly& o) const {
  if (ring_ && o.ring_ && ring_ != o.ring_ && !(ring_->variables() == o.ring_->variables() &&
                                                ring_->field() == o.ring_->field() &&
                                                ring_->order() == o.ring_->order()))
    throw StructuralError("polynomials from different rings");
}

Poly Poly::operator-() const {
  Poly r(*this);
  for (auto& t : r.terms_) t.coeff = ring_->field().neg(t.coeff);
  return r;
}

Poly Poly::operator+(const Poly& o) const {
  check_same_ring(o);
  if (o.is_zero()) return ring_ ? *this : o;
  if (is_zero()) return o;
  const auto& F = ring_->field();
  Poly r(ring_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    auto c = ring_->compare(terms_[i].monomial, o.terms_[j].monomial);
    if (c == std::strong_ordering::greater) {
      r.terms_.push_back(terms_[i++]);
    } else if (c == std::strong_ordering::less) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      Coeff s = F.add(terms_[i].coeff, o.terms_[j].coeff);
      if (s != 0) r.terms_.push_back({terms_[i].monomial, s});
      ++i;
      ++j;
    }
  }
  for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
  for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  check_same_ring(o);
  if (is_zero()) return ring_ ? *this : Poly(o.ring_);
  if (o.is_zero()) return o.ring_ ? o : Poly(ring_);
  Poly r(ring_);
  for (const auto& t : o.terms_) r = r + mul_term(t.monomial, t.coeff);
  return r;
}

Poly Poly::scale(const Coeff& c) const {
  Coeff v = ring_ ? ring_->field().normalize(c) : c;
  if (v == 0 || is_zero()) return Poly(ring_);
  Poly r(*this);
  for (auto& t : r.terms_) t.coeff = ring_->field().mul(t.coeff, v);
  return r;
}

// Multiplying by a monomial preserves the order of terms.
Poly Poly::mul_term(const Monomial& m, const Coeff& c) const {
  if (is_zero() || c == 0) return Poly(ring_);
  Poly r(ring_);
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) r.terms_.push_back({t.monomial * m, ring_->field().mul(t.coeff, c)});
  return r;
}

Poly Poly::pow(std::uint32_t e) const {
  Poly result = constant(ring_, 1);
  Poly base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scale(ring_->field().inv(lead_coeff()));
}

bool Poly::operator==(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].monomial == o.terms_[i].monomial) || terms_[i].coeff != o.terms_[i].coeff) return false;
  return true;
}

std::string Poly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Coeff c = t.coeff;
    bool negative = !ring_->field().is_prime() && c < 0;
    if (negative) c = -c;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    bool unit = c == 1;
    if (!unit || t.monomial.is_one()) os << c.get_str();
    bool need_star = !unit;
    for (std::size_t v = 0; v < t.monomial.size(); ++v) {
      if (t.monomial[v] == 0) continue;
      if (need_star) os << '*';
      os << ring_->variables()[v];
      if (t.monomial[v] > 1) os << '^' << t.monomial[v];
      need_star = true;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

DivisionResult poly_divmod(const Poly& f, const std::vector<Poly>& divisors) {
  for (const auto& d : divisors)
    if (d.is_zero()) throw StructuralError("poly_divmod: zero divisor");
  const auto& ring = f.ring();
  const auto& F = ring->field();
  DivisionResult res;
  res.quotients.assign(divisors.size(), Poly(ring));
  res.remainder = Poly(ring);
  Poly p = f;
  std::vector<Term> rem;
  while (!p.is_zero()) {
    const Term& lt = p.leading_term();
    bool divided = false;
    for (std::size_t i = 0; i < divisors.size(); ++i) {
      const Term& dt = divisors[i].leading_term();
      if (!dt.monomial.divides(lt.monomial)) continue;
      Monomial q = lt.monomial.quotient(dt.monomial);
      Coeff c = F.div(lt.coeff, dt.coeff);
      res.quotients[i] += Poly::monomial(ring, q, c);
      p -= divisors[i].mul_term(q, c);
      divided = true;
      break;
    }
    if (!divided) {
      rem.push_back(lt);
      p -= Poly::monomial(ring, lt.monomial, lt.coeff);
    }
  }
  res.remainder = Poly(ring, std::move(rem));
  return res;
}

// ---------------------------------------------------------------- parsing

namespace {

class PolyParser {
 public:
  PolyParser(const RingPtr& ring, std::string_view text) : ring_(ring), s_(text) {}

  Poly parse() {
    Poly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  const RingPtr& ring_;
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw PolyParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Poly expr() {
    skip();
    Poly acc(ring_);
    bool negate = false;
    if (accept('-'))
      negate = true;
    else
      accept('+');
    Poly t = term();
    acc = negate ? -t : t;
    for (;;) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        return acc;
    }
  }

  Poly term() {
    Poly acc = power();
    while (accept('*')) acc *= power();
    return acc;
  }

  Poly power() {
    Poly base = atom();
    if (accept('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(static_cast<std::uint32_t>(std::stoul(std::string(s_.substr(start, pos_ - start)))));
    }
    return base;
  }

  Poly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of polynomial");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Poly p = expr();
      if (!accept(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      mpz_class num(std::string(s_.substr(start, pos_ - start)));
      mpz_class den = 1;
      if (pos_ < s_.size() && s_[pos_] == '/') {
        std::size_t save = pos_;
        ++pos_;
        std::size_t ds = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (ds == pos_) {
          pos_ = save;
          fail("expected denominator");
        }
        den = mpz_class(std::string(s_.substr(ds, pos_ - ds)));
        if (den == 0) fail("zero denominator");
      }
      Coeff q(num, den);
      return Poly::constant(ring_, q);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      std::size_t idx = ring_->variable_index(name);
      if (idx == ring_->nvars()) {
        pos_ = start;
        fail("unknown variable '" + std::string(name) + "'");
      }
      return Poly::variable(ring_, idx);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }
};

}  // namespace

Poly parse_poly(const RingPtr& ring, std::string_view text) { return PolyParser(ring, text).parse(); }

}  // namespace dk
