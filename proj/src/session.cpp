#include "deligne_kit/session.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <set>
#include <sstream>

namespace dk {

SessionError::SessionError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

std::vector<Vector> ModuleDecl::relation_columns() const {
  std::vector<Vector> cols;
  if (free || rows.empty()) return cols;
  for (std::size_t c = 0; c < rows.front().size(); ++c) {
    Vector v;
    for (const auto& row : rows) v.push_back(row[c]);
    cols.push_back(std::move(v));
  }
  return cols;
}

std::string task_kind(const Task& t) {
  struct V {
    std::string operator()(const ProZeroTask&) const { return "prozero"; }
    std::string operator()(const RoundtripTask&) const { return "deligne-roundtrip"; }
    std::string operator()(const SheafTask&) const { return "sheaf-glue"; }
    std::string operator()(const DiagramTask&) const { return "diagram"; }
    std::string operator()(const IdealizationTask&) const { return "idealization"; }
  };
  return std::visit(V{}, t);
}

FpModule Session::module(const std::string& name) const {
  auto R = quotient_ring();
  if (name == "R") return R.as_module();
  for (const auto& m : modules_)
    if (m.name == name) return m.free ? R.free_module(m.rank) : R.coker(m.rank, m.relation_columns());
  throw NameError("unknown module '" + name + "'", 0, 0);
}

const IdealDecl& Session::ideal(const std::string& name) const {
  for (const auto& i : ideals_)
    if (i.name == name) return i;
  throw NameError("unknown ideal or sequence '" + name + "'", 0, 0);
}

namespace {

std::string join(const std::vector<Poly>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? ", " : "") + ps[i].to_string();
  return s;
}

struct TaskPrinter {
  std::string operator()(const ProZeroTask& t) const {
    std::string s = "task prozero " + t.sequence;
    if (t.module != "R") s += " on " + t.module;
    s += " degree " + std::to_string(t.degree) + " from " + std::to_string(t.from) + " cap " + std::to_string(t.cap);
    if (t.allow_exhausted) s += " allow-exhausted";
    return s + ";";
  }
  std::string operator()(const RoundtripTask& t) const {
    return "task deligne-roundtrip " + t.ideal + " " + t.module + " samples " + std::to_string(t.samples) +
           " seed " + std::to_string(t.seed) + " stage " + std::to_string(t.stage) + " probes " +
           std::to_string(t.probes) + ";";
  }
  std::string operator()(const SheafTask& t) const {
    return "task sheaf-glue " + t.ideal + " " + t.module + " samples " + std::to_string(t.samples) + " seed " +
           std::to_string(t.seed) + ";";
  }
  std::string operator()(const DiagramTask& t) const {
    return "task diagram " + t.ideal + " " + t.module + " samples " + std::to_string(t.samples) + " seed " +
           std::to_string(t.seed) + ";";
  }
  std::string operator()(const IdealizationTask& t) const {
    std::string s = "task idealization poles (";
    for (std::size_t i = 0; i < t.poles.size(); ++i) s += (i ? ", " : "") + std::to_string(t.poles[i]);
    return s + ") cap " + std::to_string(t.cap) + ";";
  }
};

}  // namespace

std::string Session::print_task(std::size_t index) const { return std::visit(TaskPrinter{}, tasks_.at(index)); }

std::string Session::print() const {
  std::ostringstream os;
  const auto& P = *ring_.ring;
  os << "ring " << P.field().name() << "[";
  for (std::size_t i = 0; i < P.nvars(); ++i) os << (i ? "," : "") << P.variables()[i];
  os << "]";
  if (!ring_.defining.empty()) os << " / (" << join(ring_.defining) << ")";
  os << " order " << to_string(P.order()) << ";\n";
  for (const auto& m : modules_) {
    os << "module " << m.name << " = ";
    if (m.free) {
      os << "free " << m.rank;
    } else {
      os << "coker [";
      for (std::size_t r = 0; r < m.rows.size(); ++r) os << (r ? ", [" : "[") << join(m.rows[r]) << "]";
      os << "]";
    }
    os << ";\n";
  }
  for (const auto& i : ideals_) os << (i.sequence ? "sequence " : "ideal ") << i.name << " = (" << join(i.gens) << ");\n";
  for (std::size_t t = 0; t < tasks_.size(); ++t) os << print_task(t) << "\n";
  return os.str();
}

bool Session::operator==(const Session& o) const {
  auto same_ring = [](const RingPtr& a, const RingPtr& b) {
    return a->field() == b->field() && a->variables() == b->variables() && a->order() == b->order();
  };
  if (!same_ring(ring_.ring, o.ring_.ring) || ring_.defining != o.ring_.defining) return false;
  if (modules_.size() != o.modules_.size() || ideals_.size() != o.ideals_.size() || tasks_ != o.tasks_) return false;
  for (std::size_t i = 0; i < modules_.size(); ++i) {
    const auto &a = modules_[i], &b = o.modules_[i];
    if (a.name != b.name || a.rank != b.rank || a.free != b.free || a.rows != b.rows) return false;
  }
  for (std::size_t i = 0; i < ideals_.size(); ++i) {
    const auto &a = ideals_[i], &b = o.ideals_[i];
    if (a.name != b.name || a.sequence != b.sequence || a.gens != b.gens) return false;
  }
  return true;
}

// ---------------------------------------------------------------- parser

class SessionParser {
 public:
  explicit SessionParser(std::string_view text) : s_(text) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < s_.size(); ++i)
      if (s_[i] == '\n') line_starts_.push_back(i + 1);
  }

  Session run() {
    Session out;
    bool have_ring = false;
    std::set<std::string> names{"R"};
    for (;;) {
      skip();
      if (pos_ >= s_.size()) break;
      const std::size_t start = pos_;
      std::string kw = word();
      if (kw == "ring") {
        if (have_ring) fail<ParseError>("ring already declared", start);
        out.ring_ = ring_decl();
        have_ring = true;
        continue;
      }
      if (!have_ring) fail<ParseError>("the ring must be declared first", start);
      if (kw == "module") {
        auto m = module_decl(names);
        out.modules_.push_back(std::move(m));
      } else if (kw == "ideal" || kw == "sequence") {
        IdealDecl d;
        d.sequence = kw == "sequence";
        d.name = declare(names);
        expect('=');
        expect('(');
        d.gens = polys(')');
        expect(')');
        expect(';');
        out.ideals_.push_back(std::move(d));
      } else if (kw == "task") {
        out.tasks_.push_back(task(out));
      } else {
        fail<ParseError>(kw.empty() ? "expected a statement" : "unknown statement '" + kw + "'", start);
      }
    }
    if (!have_ring) fail<ParseError>("no ring declared", pos_);
    return out;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  std::vector<std::size_t> line_starts_;
  RingPtr ring_;

  template <class E>
  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), at);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    throw E(what, line, at - line_starts_[line - 1] + 1);
  }

  void skip() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) {
      std::string got = pos_ >= s_.size() ? "end of input" : "'" + std::string(1, s_[pos_]) + "'";
      fail<ParseError>(std::string("expected '") + c + "', found " + got, pos_);
    }
    ++pos_;
  }

  std::string word(bool dashes = true) {
    skip();
    std::size_t b = pos_;
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
                                  (dashes && s_[pos_] == '-')))
        ++pos_;
    }
    return std::string(s_.substr(b, pos_ - b));
  }

  std::string name() {
    skip();
    std::size_t at = pos_;
    std::string n = word(false);
    if (n.empty()) fail<ParseError>("expected a name", at);
    return n;
  }

  void keyword(const std::string& kw) {
    skip();
    std::size_t at = pos_;
    if (word() != kw) fail<ParseError>("expected '" + kw + "'", at);
  }

  bool optional_keyword(const std::string& kw) {
    skip();
    std::size_t save = pos_;
    if (word() == kw) return true;
    pos_ = save;
    return false;
  }

  long long integer(bool allow_sign = false) {
    skip();
    std::size_t at = pos_;
    if (allow_sign && pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    long long v = 0;
    auto [p, ec] = std::from_chars(s_.data() + at, s_.data() + pos_, v);
    if (ec != std::errc() || p != s_.data() + pos_) fail<ParseError>("expected an integer", at);
    return v;
  }

  std::uint32_t positive(const char* what) {
    skip();
    std::size_t at = pos_;
    long long v = integer();
    if (v < 1 || v > 1000000) fail<DimensionError>(std::string(what) + " must be between 1 and 10^6", at);
    return static_cast<std::uint32_t>(v);
  }

  std::string declare(std::set<std::string>& names) {
    skip();
    std::size_t at = pos_;
    std::string n = name();
    if (!names.insert(n).second) fail<NameError>("name '" + n + "' is already declared", at);
    return n;
  }

  Poly poly() {
    skip();
    const std::size_t b = pos_;
    int depth = 0;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == '(') ++depth;
      if ((c == ')' || c == ']') && depth == 0) break;
      if (c == ')') --depth;
      if ((c == ',' && depth == 0) || c == ';' || c == '#' || c == '[') break;
      ++pos_;
    }
    std::string_view text = s_.substr(b, pos_ - b);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) fail<ParseError>("expected a polynomial", b);
    try {
      return parse_poly(ring_, text);
    } catch (const PolyParseError& e) {
      fail<ParseError>(e.what(), b + std::min(e.offset(), text.size()));
    }
  }

  std::vector<Poly> polys(char close) {
    std::vector<Poly> out;
    out.push_back(poly());
    while (!peek(close)) {
      expect(',');
      out.push_back(poly());
    }
    return out;
  }

  RingDecl ring_decl() {
    skip();
    std::size_t at = pos_;
    std::string f = word(false);
    Field field = Field::rationals();
    if (f == "Q") {
    } else if (f.size() > 1 && f[0] == 'F' && std::all_of(f.begin() + 1, f.end(), ::isdigit)) {
      try {
        field = Field::prime(std::stoull(f.substr(1)));
      } catch (const std::exception& e) {
        fail<ParseError>(std::string("invalid field: ") + e.what(), at);
      }
    } else {
      fail<ParseError>("expected a field Q or F<p>", at);
    }
    expect('[');
    std::vector<std::string> vars;
    std::vector<std::size_t> var_at;
    do {
      skip();
      var_at.push_back(pos_);
      vars.push_back(name());
    } while (peek(',') && (expect(','), true));
    expect(']');
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (vars[i] == vars[j]) fail<NameError>("variable '" + vars[i] + "' is repeated", var_at[i]);
    MonomialOrder order = MonomialOrder::Grevlex;
    ring_ = PolyRing::make(field, vars, order);
    std::vector<Poly> defining;
    std::optional<std::size_t> defining_at;
    if (peek('/')) {
      expect('/');
      expect('(');
      defining_at = pos_;
      defining = polys(')');
      expect(')');
    }
    if (optional_keyword("order")) {
      skip();
      std::size_t oat = pos_;
      std::string o = word();
      if (o == "lex") {
        order = MonomialOrder::Lex;
      } else if (o != "grevlex") {
        fail<ParseError>("expected 'grevlex' or 'lex'", oat);
      }
    }
    expect(';');
    if (order != MonomialOrder::Grevlex) {
      ring_ = PolyRing::make(field, vars, order);
      if (defining_at) {
        const std::size_t end = pos_;
        pos_ = *defining_at;
        defining = polys(')');
        pos_ = end;
      }
    }
    return {ring_, std::move(defining)};
  }

  ModuleDecl module_decl(std::set<std::string>& names) {
    ModuleDecl m;
    m.name = declare(names);
    expect('=');
    skip();
    std::size_t at = pos_;
    std::string kind = word();
    if (kind == "free") {
      m.free = true;
      m.rank = positive("free rank");
    } else if (kind == "coker") {
      expect('[');
      do {
        skip();
        std::size_t row_at = pos_;
        expect('[');
        m.rows.push_back(polys(']'));
        expect(']');
        if (m.rows.back().size() != m.rows.front().size())
          fail<DimensionError>("row " + std::to_string(m.rows.size()) + " has " +
                                   std::to_string(m.rows.back().size()) + " entries, expected " +
                                   std::to_string(m.rows.front().size()),
                               row_at);
      } while (peek(',') && (expect(','), true));
      expect(']');
      m.rank = m.rows.size();
    } else {
      fail<ParseError>("expected 'coker' or 'free'", at);
    }
    expect(';');
    return m;
  }

  std::string resolve_ideal(const Session& s) {
    skip();
    std::size_t at = pos_;
    std::string n = name();
    for (const auto& i : s.ideals_)
      if (i.name == n) return n;
    fail<NameError>("unknown ideal or sequence '" + n + "'", at);
  }

  std::string resolve_module(const Session& s) {
    skip();
    std::size_t at = pos_;
    std::string n = name();
    if (n == "R") return n;
    for (const auto& m : s.modules_)
      if (m.name == n) return n;
    fail<NameError>("unknown module '" + n + "'", at);
  }

  void samples_seed(std::uint32_t& samples, std::uint64_t& seed) {
    keyword("samples");
    samples = positive("samples");
    keyword("seed");
    skip();
    std::size_t at = pos_;
    long long v = integer();
    if (v < 0) fail<DimensionError>("seed must be non-negative", at);
    seed = static_cast<std::uint64_t>(v);
  }

  Task task(const Session& s) {
    skip();
    std::size_t at = pos_;
    std::string kind = word();
    if (kind == "prozero") {
      ProZeroTask t;
      t.sequence = resolve_ideal(s);
      if (optional_keyword("on")) t.module = resolve_module(s);
      keyword("degree");
      skip();
      std::size_t deg_at = pos_;
      long long d = integer(true);
      const auto k = static_cast<long long>(s.ideal(t.sequence).gens.size());
      if (d < 0 || d > k)
        fail<DimensionError>("degree " + std::to_string(d) + " outside [0, " + std::to_string(k) + "]", deg_at);
      t.degree = static_cast<int>(d);
      keyword("from");
      t.from = positive("from");
      keyword("cap");
      skip();
      std::size_t cap_at = pos_;
      t.cap = positive("cap");
      if (t.cap < t.from) fail<DimensionError>("cap is below the base stage", cap_at);
      t.allow_exhausted = optional_keyword("allow-exhausted");
      expect(';');
      return t;
    }
    if (kind == "deligne-roundtrip" || kind == "sheaf-glue" || kind == "diagram") {
      std::string ideal = resolve_ideal(s);
      std::string module = resolve_module(s);
      std::uint32_t samples;
      std::uint64_t seed;
      samples_seed(samples, seed);
      if (kind == "deligne-roundtrip") {
        RoundtripTask t{ideal, module, samples, seed, 1, 5};
        for (;;) {
          if (optional_keyword("stage")) {
            t.stage = positive("stage");
          } else if (optional_keyword("probes")) {
            t.probes = positive("probes");
          } else {
            break;
          }
        }
        expect(';');
        return t;
      }
      expect(';');
      if (kind == "sheaf-glue") return SheafTask{ideal, module, samples, seed};
      return DiagramTask{ideal, module, samples, seed};
    }
    if (kind == "idealization") {
      IdealizationTask t;
      keyword("poles");
      expect('(');
      do {
        skip();
        std::size_t p_at = pos_;
        long long p = integer(true);
        if (p <= 0) fail<DimensionError>("pole order must be positive; the target lies in R", p_at);
        t.poles.push_back(static_cast<int>(p));
      } while (peek(',') && (expect(','), true));
      expect(')');
      keyword("cap");
      t.cap = positive("cap");
      expect(';');
      return t;
    }
    fail<ParseError>(kind.empty() ? "expected a task kind" : "unknown task kind '" + kind + "'", at);
  }
};

Session parse_session(std::string_view text) { return SessionParser(text).run(); }

}  // namespace dk
