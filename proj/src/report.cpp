#include "deligne_kit/report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <random>
#include <thread>

#include "deligne_kit/deligne.hpp"
#include "deligne_kit/idealization.hpp"
#include "deligne_kit/koszul.hpp"

namespace dk {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Exhausted: return "exhausted";
    case Outcome::Obstruction: return "obstruction";
  }
  return "fail";
}

Outcome outcome_from_string(std::string_view s) {
  for (auto o : {Outcome::Pass, Outcome::Fail, Outcome::Exhausted, Outcome::Obstruction})
    if (to_string(o) == s) return o;
  throw ReportError("unknown outcome '" + std::string(s) + "'");
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string session_digest(const Session& s) { return sha256_hex(s.print()); }

// ---------------------------------------------------------------- records

json TaskRecord::content() const {
  json j = {{"index", index},       {"task", task},     {"kind", kind},
            {"outcome", to_string(outcome)}, {"bounds", bounds}, {"certificate", certificate}};
  if (!error.empty()) j["error"] = error;
  return j;
}

json TaskRecord::to_json() const {
  json j = content();
  j["digest"] = digest;
  j["elapsed_ms"] = elapsed_ms;
  return j;
}

TaskRecord TaskRecord::from_json(const json& j) {
  try {
    TaskRecord r;
    r.index = j.at("index").get<std::size_t>();
    r.task = j.at("task").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
    r.bounds = j.at("bounds");
    r.certificate = j.at("certificate");
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    r.digest = j.at("digest").get<std::string>();
    r.elapsed_ms = j.value("elapsed_ms", 0.0);
    return r;
  } catch (const json::exception& e) {
    throw ReportError(std::string("malformed record: ") + e.what());
  }
}

json Report::to_json() const {
  json recs = json::array();
  for (const auto& r : records) recs.push_back(r.to_json());
  return {{"schema", kReportSchema}, {"session_digest", session_digest}, {"records", recs}};
}

Report Report::from_json(const json& j) {
  try {
    if (j.at("schema").get<std::string>() != kReportSchema)
      throw ReportError("unsupported schema '" + j.at("schema").get<std::string>() + "'");
    Report r;
    r.session_digest = j.at("session_digest").get<std::string>();
    for (const auto& rec : j.at("records")) r.records.push_back(TaskRecord::from_json(rec));
    return r;
  } catch (const json::exception& e) {
    throw ReportError(std::string("malformed report: ") + e.what());
  }
}

// ---------------------------------------------------------------- serialization helpers

namespace {

json pj(const Poly& p) { return p.to_string(); }

json vj(const Vector& v) {
  json a = json::array();
  for (const auto& p : v) a.push_back(pj(p));
  return a;
}

json plj(const std::vector<Poly>& ps) { return vj(ps); }

json vvj(const std::vector<Vector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vj(v));
  return a;
}

Poly jp(const RingPtr& R, const json& j) { return parse_poly(R, j.get<std::string>()); }

Vector jv(const RingPtr& R, const json& j) {
  Vector v;
  for (const auto& p : j) v.push_back(jp(R, p));
  return v;
}

std::vector<Vector> jvv(const RingPtr& R, const json& j) {
  std::vector<Vector> out;
  for (const auto& v : j) out.push_back(jv(R, v));
  return out;
}

json ej(const EElement& e) {
  json a = json::array();
  for (const auto& [i, c] : e.support()) a.push_back({i, c.get_str()});
  return a;
}

EElement je(const json& j) {
  EElement e;
  for (const auto& t : j) e = e + EElement::basis(t.at(0).get<std::uint32_t>(), Coeff(t.at(1).get<std::string>()));
  return e;
}

json sj(const SElement& s) { return {{"r", pj(s.r)}, {"e", ej(s.e)}}; }

SElement js(const RingPtr& R, const json& j) { return {jp(R, j.at("r")), je(j.at("e"))}; }

// Seeded sampling; raw modulo keeps streams identical across standard libraries.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return rng_() % n; }
  long small() { return static_cast<long>(below(5)) - 2; }

  Poly poly(const RingPtr& R, std::uint32_t max_deg) {
    std::vector<Term> terms;
    std::vector<std::uint32_t> e(R->nvars(), 0);
    std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t v, std::uint32_t left) {
      if (v == R->nvars()) {
        terms.push_back({Monomial(e), R->field().from_int(small())});
        return;
      }
      for (std::uint32_t d = 0; d <= left; ++d) {
        e[v] = d;
        rec(v + 1, left - d);
      }
      e[v] = 0;
    };
    rec(0, max_deg);
    return Poly(R, std::move(terms));
  }

  Poly in_ideal(const std::vector<Poly>& gens) {
    const auto& R = gens.front().ring();
    for (int attempt = 0; attempt < 8; ++attempt) {
      Poly y(R);
      for (const auto& g : gens) y += poly(R, 1) * g;
      if (!y.is_zero()) return y;
    }
    return gens.front();
  }

  IdealTransformElement transform(const DeligneContext& ctx, std::uint32_t n) {
    const auto& H = ctx.stage_hom(n);
    Vector h;
    for (std::size_t k = 0; k < H.module().rank(); ++k) h.push_back(poly(ctx.ring().poly_ring(), 1));
    return ctx.make_transform(n, H.images(h));
  }

 private:
  std::mt19937_64 rng_;
};

struct Env {
  QuotientRing ring;
  FpModule module;
  std::vector<Poly> cover;

  const RingPtr& P() const { return ring.poly_ring(); }
  std::size_t rank() const { return module.rank(); }
  Vector nf(const Vector& v) const { return module.normal_form(v); }
  bool zero(const Vector& v) const { return is_zero(nf(v)); }
};

Env env_for(const Session& s, const std::string& ideal, const std::string& module) {
  return {s.quotient_ring(), s.module(module), s.ideal(ideal).gens};
}

// ---------------------------------------------------------------- sigma trace pieces

json sigma_json(const SigmaTrace& st) {
  return {{"c", st.c}, {"e", st.e}, {"d", st.d}, {"r", plj(st.r)}, {"ring_r", plj(st.ring_r)},
          {"sigma", vj(st.value.numerator)}};
}

// ---------------------------------------------------------------- task runners

void run_prozero(const Session& s, const ProZeroTask& t, TaskRecord& rec) {
  SequenceSpec x(s.ideal(t.sequence).gens);
  auto M = s.module(t.module);
  rec.bounds = {{"degree", t.degree}, {"from", t.from}, {"cap", t.cap}};
  auto out = pro_zero_search(x, t.degree, t.from, M, t.cap);
  if (auto* ex = std::get_if<Exhausted>(&out)) {
    rec.outcome = Outcome::Exhausted;
    rec.bounds["searched_to"] = ex->cap;
    return;
  }
  const auto& c = std::get<ProZeroCertificate>(out);
  rec.outcome = Outcome::Pass;
  rec.bounds["witness"] = c.witness;
  json rels = json::array(), coeffs = json::array();
  for (const auto& r : c.cycle_relations) rels.push_back(plj(r));
  for (const auto& r : c.relation_coefficients) coeffs.push_back(plj(r));
  rec.certificate = {{"degree", c.degree},  {"base", c.base},           {"witness", c.witness},
                     {"cycles", vvj(c.cycles)}, {"cycle_relations", rels}, {"preimages", vvj(c.preimages)},
                     {"relation_coefficients", coeffs}};
}

void run_roundtrip(const Session& s, const RoundtripTask& t, TaskRecord& rec) {
  Env env = env_for(s, t.ideal, t.module);
  DeligneContext ctx(env.ring, env.module, env.cover);
  Sampler smp(t.seed);
  std::uint32_t max_c = 0, max_d = 0, max_e = 0, max_kill = 0;
  json samples = json::array();
  rec.outcome = Outcome::Pass;

  for (std::uint32_t k = 0; k < t.samples && rec.outcome == Outcome::Pass; ++k) {
    auto phi = smp.transform(ctx, t.stage);
    auto cocycle = ctx.rho_eval(phi);
    json probes = json::array();
    for (std::uint32_t p = 0; p < t.probes; ++p) {
      Poly y = smp.in_ideal(env.cover);
      auto st = ctx.sigma_inverse(cocycle, y);
      auto theta = ctx.theta_probe(phi, y);
      auto kill = ctx.loc_kill_exponent(st.value, theta);
      std::vector<Poly> theta_ring;
      auto lift = env.ring.ideal_lift(y.pow(t.stage), phi.domain, &theta_ring);
      json pr = sigma_json(st);
      pr["y"] = pj(y);
      pr["theta"] = vj(theta.numerator);
      pr["theta_lift"] = plj(*lift);
      pr["theta_ring"] = plj(theta_ring);
      if (!kill) {
        rec.outcome = Outcome::Fail;
        pr["kill"] = nullptr;
        probes.push_back(std::move(pr));
        break;
      }
      pr["kill"] = *kill;
      max_c = std::max(max_c, st.c);
      max_d = std::max(max_d, st.d);
      max_e = std::max(max_e, st.e);
      max_kill = std::max(max_kill, *kill);
      probes.push_back(std::move(pr));
    }
    samples.push_back({{"phi", vvj(phi.values)}, {"cocycle", vvj(cocycle.components)}, {"probes", probes}});
  }
  rec.bounds = {{"stage", t.stage}, {"samples", t.samples}, {"probes", t.probes}, {"c", max_c},
                {"d", max_d},       {"e", max_e},           {"kill", max_kill}};
  rec.certificate = {{"samples", samples}};
}

void run_sheaf(const Session& s, const SheafTask& t, TaskRecord& rec) {
  Env env = env_for(s, t.ideal, t.module);
  DeligneContext ctx(env.ring, env.module, env.cover);
  Sampler smp(t.seed);
  std::uint32_t max_c = 0, max_d = 0, max_e = 0;
  json samples = json::array();
  rec.outcome = Outcome::Pass;

  for (std::uint32_t k = 0; k < t.samples && rec.outcome == Outcome::Pass; ++k) {
    const auto n = static_cast<std::uint32_t>(1 + smp.below(2));
    auto phi = smp.transform(ctx, n);
    auto cocycle = ctx.rho_eval(phi);
    std::vector<Fraction> sections;
    for (std::size_t i = 0; i < env.cover.size(); ++i) sections.push_back({cocycle.components[i], env.cover[i], n});
    std::vector<Poly> probes;
    for (int p = 0; p < 3; ++p) probes.push_back(smp.in_ideal(env.cover));

    json sample = {{"n", n}, {"sections", vvj(cocycle.components)}};
    auto out = ctx.sheaf_check(sections, probes);
    if (auto* w = std::get_if<IncompatibleWitness>(&out)) {
      rec.outcome = Outcome::Fail;
      sample["incompatible"] = {{"i", w->i}, {"j", w->j}, {"t", w->c}, {"witness", vj(w->witness)}};
    } else if (auto* w = std::get_if<LocalityWitness>(&out)) {
      rec.outcome = Outcome::Fail;
      sample["locality"] = {{"probe", pj(w->probe)}, {"difference", vj(w->difference)}};
    } else {
      const auto& g = std::get<Glued>(out);
      sample["c"] = g.c;
      sample["e"] = g.e;
      sample["y"] = pj(g.y);
      sample["m"] = vj(g.m);
      sample["primed"] = vvj(g.primed);
      json pr = json::array();
      const Fraction glued{g.m, g.y, 1};
      for (const auto& a : g.probes) {
        auto st = ctx.sigma_inverse(cocycle, a.probe);
        const Poly z = g.y * a.probe;
        auto kill = ctx.loc_kill_exponent({scale(a.probe, g.m), z, 1},
                                          {scale(g.y.pow(st.d), st.value.numerator), z, st.d});
        json e = sigma_json(st);
        e["p"] = pj(a.probe);
        e["kill"] = kill ? json(*kill) : json(nullptr);
        pr.push_back(std::move(e));
        max_d = std::max(max_d, st.d);
      }
      sample["probes"] = pr;
      max_c = std::max(max_c, g.c);
      max_e = std::max(max_e, g.e);
    }
    samples.push_back(std::move(sample));
  }
  rec.bounds = {{"samples", t.samples}, {"c", max_c}, {"d", max_d}, {"e", max_e}};
  rec.certificate = {{"samples", samples}};
}

void run_diagram(const Session& s, const DiagramTask& t, TaskRecord& rec) {
  Env env = env_for(s, t.ideal, t.module);
  DeligneContext ctx(env.ring, env.module, env.cover);
  Sampler smp(t.seed);
  const auto& gamma = ctx.gamma();
  const auto tstar = static_cast<std::uint32_t>(gamma.stabilization_index());
  json samples = json::array();
  rec.outcome = Outcome::Pass;

  for (std::uint32_t k = 0; k < t.samples; ++k) {
    Vector m = zero_vector(env.P(), env.rank());
    if (!gamma.generators().empty() && smp.below(2) == 0) {
      for (const auto& g : gamma.generators()) m = add(m, scale(smp.poly(env.P(), 1), g));
    } else {
      for (auto& c : m) c = smp.poly(env.P(), 2);
    }
    m = env.nf(m);
    auto rep = ctx.diagram_check(m);
    json sample = {{"m", vj(m)}, {"commutes", rep.commutes}, {"in_torsion", rep.in_torsion},
                   {"cocycle_zero", rep.cocycle_is_zero}};
    json rt = json::array(), ck = json::array(), zk = json::array();
    std::optional<std::size_t> nonzero;
    for (std::size_t i = 0; i < env.cover.size(); ++i) {
      const Poly& x = env.cover[i];
      Vector r = env.nf(scale(x, m));
      rt.push_back(vj(r));
      auto c = ctx.loc_kill_exponent({m, x, 0}, {r, x, 1});
      ck.push_back(c ? json(*c) : json(nullptr));
      auto z = ctx.loc_kill_exponent({m, x, 0}, {zero_vector(env.P(), env.rank()), x, 0});
      zk.push_back(z ? json(*z) : json(nullptr));
      if (!z && !nonzero) nonzero = i;
    }
    sample["rho_tau"] = rt;
    sample["commute_kill"] = ck;
    sample["zero_kill"] = zk;
    if (rep.in_torsion) {
      for (std::uint32_t e = 0; e <= tstar; ++e) {
        bool killed = true;
        for (const auto& g : ideal_power(env.cover, e)) killed = killed && env.zero(scale(g, m));
        if (killed) {
          sample["torsion_power"] = e;
          break;
        }
      }
    } else if (nonzero) {
      const Poly& x = env.cover[*nonzero];
      const auto ti = static_cast<std::uint32_t>(ctx.saturation(x).stabilization_index());
      sample["survivor"] = {{"i", *nonzero}, {"t", ti}, {"value", vj(env.nf(scale(x.pow(ti), m)))}};
    }
    if (!rep.commutes || !rep.exact()) rec.outcome = Outcome::Fail;
    samples.push_back(std::move(sample));
  }
  rec.bounds = {{"samples", t.samples}, {"t_star", tstar}};
  rec.certificate = {{"samples", samples}};
}

void run_idealization(const Session& s, const IdealizationTask& t, TaskRecord& rec) {
  Idealization S(s.ring().ring->field());
  json poles = json::array();
  for (int p : t.poles) {
    auto ob = rho_obstruction(S, Poly::constant(S.ring(), 1), p, t.cap);
    json stages = json::array();
    for (const auto& w : ob.stages) {
      json st = {{"stage", w.stage},
                 {"kind", w.kind == PoleWitness::Kind::Valuation ? "valuation" : "annihilator"},
                 {"required_valuation", w.required_valuation}};
      if (w.kind == PoleWitness::Kind::Annihilator) {
        st["annihilator"] = sj(w.annihilator);
        st["required"] = sj(w.required);
        st["pairing"] = sj(w.pairing);
      }
      stages.push_back(std::move(st));
    }
    poles.push_back({{"unit", pj(ob.unit)}, {"pole", ob.pole}, {"stages", stages}});
  }
  rec.outcome = Outcome::Obstruction;
  rec.bounds = {{"cap", t.cap}};
  rec.certificate = {{"poles", poles}};
}

}  // namespace

TaskRecord run_task(const Session& s, std::size_t index) {
  const auto& task = s.tasks().at(index);
  TaskRecord rec;
  rec.index = index;
  rec.task = s.print_task(index);
  rec.kind = task_kind(task);
  const auto start = std::chrono::steady_clock::now();
  try {
    std::visit(
        [&](const auto& t) {
          using T = std::decay_t<decltype(t)>;
          if constexpr (std::is_same_v<T, ProZeroTask>) run_prozero(s, t, rec);
          if constexpr (std::is_same_v<T, RoundtripTask>) run_roundtrip(s, t, rec);
          if constexpr (std::is_same_v<T, SheafTask>) run_sheaf(s, t, rec);
          if constexpr (std::is_same_v<T, DiagramTask>) run_diagram(s, t, rec);
          if constexpr (std::is_same_v<T, IdealizationTask>) run_idealization(s, t, rec);
        },
        task);
  } catch (const StructuralError& e) {
    rec.outcome = Outcome::Fail;
    rec.certificate = json::object();
    rec.error = e.what();
  }
  rec.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  rec.digest = sha256_hex(rec.content().dump());
  return rec;
}

Report run_session(const Session& s, unsigned jobs) {
  const std::size_t n = s.tasks().size();
  Report r{session_digest(s), std::vector<TaskRecord>(n)};
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) r.records[i] = run_task(s, i);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return r;
}

int exit_code(const Session& s, const Report& r) {
  int code = 0;
  for (const auto& rec : r.records) {
    if (!rec.error.empty()) return 2;
    switch (rec.outcome) {
      case Outcome::Pass: break;
      case Outcome::Obstruction:
        if (rec.kind != "idealization") code = 1;
        break;
      case Outcome::Exhausted: {
        const auto* t = rec.index < s.tasks().size() ? std::get_if<ProZeroTask>(&s.tasks()[rec.index]) : nullptr;
        if (!t || !t->allow_exhausted) code = 1;
        break;
      }
      case Outcome::Fail: code = 1; break;
    }
  }
  return code;
}

// ---------------------------------------------------------------- replay

namespace {

struct ReplayFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw ReplayFailure(what);
}

// sum a_j g_j + sum b_j f_j over the defining ideal f
Poly expand(const Env& env, const std::vector<Poly>& a, const std::vector<Poly>& g, const std::vector<Poly>& b) {
  require(a.size() == g.size(), "coefficient count does not match the generators");
  require(b.size() == env.ring.defining_ideal().size(), "ring coefficient count does not match the defining ideal");
  Poly out(env.P());
  for (std::size_t i = 0; i < a.size(); ++i) out += a[i] * g[i];
  for (std::size_t i = 0; i < b.size(); ++i) out += b[i] * env.ring.defining_ideal()[i];
  return out;
}

Vector apply(const Env& env, const std::vector<Poly>& a, const std::vector<Vector>& v) {
  require(a.size() == v.size(), "coefficient count does not match the values");
  return combine(env.P(), env.rank(), a, v);
}

std::vector<Poly> jpl(const RingPtr& R, const json& j) { return jv(R, j); }

void check_compatible(const Env& env, const std::vector<Vector>& m, std::uint32_t n, std::uint32_t c) {
  const auto& x = env.cover;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      require(env.zero(scale((x[i] * x[j]).pow(c), sub(scale(x[j].pow(n), m[i]), scale(x[i].pow(n), m[j])))),
              "components " + std::to_string(i) + " and " + std::to_string(j) + " are not compatible at c = " +
                  std::to_string(c));
}

// y^d = sum r_i x_i^e in R, and sigma = sum r_i m_i' in M.
void check_sigma(const Env& env, const json& pr, const Poly& y, const std::vector<Vector>& primed) {
  const auto e = pr.at("e").get<std::uint32_t>(), d = pr.at("d").get<std::uint32_t>();
  auto r = jpl(env.P(), pr.at("r"));
  std::vector<Poly> xe;
  for (const auto& x : env.cover) xe.push_back(x.pow(e));
  require(y.pow(d) == expand(env, r, xe, jpl(env.P(), pr.at("ring_r"))), "radical identity y^d = sum r_i x_i^e fails");
  require(env.zero(sub(jv(env.P(), pr.at("sigma")), apply(env, r, primed))), "sigma value is not sum r_i m_i'");
}

std::vector<Vector> primed_components(const Env& env, const std::vector<Vector>& m, std::uint32_t shift) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < m.size(); ++i) out.push_back(env.nf(scale(env.cover[i].pow(shift), m[i])));
  return out;
}

void replay_prozero(const Session& s, const ProZeroTask& t, const TaskRecord& rec) {
  if (rec.outcome == Outcome::Exhausted) {
    require(rec.bounds.at("searched_to").get<std::uint32_t>() == t.cap, "exhausted below the declared cap");
    return;
  }
  require(rec.outcome == Outcome::Pass, "unexpected outcome");
  const auto& R = s.ring().ring;
  const auto& j = rec.certificate;
  ProZeroCertificate c;
  c.degree = j.at("degree").get<int>();
  c.base = j.at("base").get<std::uint32_t>();
  c.witness = j.at("witness").get<std::uint32_t>();
  c.cycles = jvv(R, j.at("cycles"));
  for (const auto& r : j.at("cycle_relations")) c.cycle_relations.push_back(jpl(R, r));
  c.preimages = jvv(R, j.at("preimages"));
  for (const auto& r : j.at("relation_coefficients")) c.relation_coefficients.push_back(jpl(R, r));
  require(c.degree == t.degree && c.base == t.from, "certificate does not match the task");
  require(c.witness <= t.cap, "witness stage above the cap");
  try {
    c.replay(SequenceSpec(s.ideal(t.sequence).gens), s.module(t.module));
  } catch (const StructuralError& e) {
    throw ReplayFailure(e.what());
  }
}

void replay_roundtrip(const Session& s, const RoundtripTask& t, const TaskRecord& rec) {
  Env env = env_for(s, t.ideal, t.module);
  const auto n = t.stage;
  const auto domain = ideal_power(env.cover, n);
  const auto& samples = rec.certificate.at("samples");
  require(rec.outcome == Outcome::Fail || samples.size() == t.samples, "sample count differs from the task");
  for (const auto& sm : samples) {
    auto phi = jvv(env.P(), sm.at("phi"));
    auto m = jvv(env.P(), sm.at("cocycle"));
    require(phi.size() == domain.size() && m.size() == env.cover.size(), "shape mismatch");
    for (std::size_t i = 0; i < m.size(); ++i) {
      auto it = std::find(domain.begin(), domain.end(), env.cover[i].pow(n));
      require(it != domain.end(), "x_i^n is not a generator of J^n");
      require(env.zero(sub(m[i], phi[static_cast<std::size_t>(it - domain.begin())])), "cocycle is not rho(phi)");
    }
    for (const auto& pr : sm.at("probes")) {
      const Poly y = jp(env.P(), pr.at("y"));
      const auto c = pr.at("c").get<std::uint32_t>(), e = pr.at("e").get<std::uint32_t>();
      const auto d = pr.at("d").get<std::uint32_t>();
      require(e == std::max(c + n, 1u), "e is not max(c + n, 1)");
      check_compatible(env, m, n, c);
      check_sigma(env, pr, y, primed_components(env, m, e - n));
      const Vector theta = jv(env.P(), pr.at("theta"));
      require(y.pow(n) == expand(env, jpl(env.P(), pr.at("theta_lift")), domain, jpl(env.P(), pr.at("theta_ring"))),
              "y^n is not the recorded combination of J^n");
      require(env.zero(sub(theta, apply(env, jpl(env.P(), pr.at("theta_lift")), phi))), "theta value is not phi(y^n)");
      if (pr.at("kill").is_null()) {
        require(rec.outcome == Outcome::Fail, "pass record with a disagreeing probe");
        continue;
      }
      const auto kill = pr.at("kill").get<std::uint32_t>();
      const Vector sigma = jv(env.P(), pr.at("sigma"));
      require(env.zero(scale(y.pow(kill), sub(scale(y.pow(n), sigma), scale(y.pow(d), theta)))),
              "sigma and theta do not agree after y^" + std::to_string(kill));
    }
  }
}

void replay_sheaf(const Session& s, const SheafTask& t, const TaskRecord& rec) {
  Env env = env_for(s, t.ideal, t.module);
  const auto& samples = rec.certificate.at("samples");
  require(rec.outcome == Outcome::Fail || samples.size() == t.samples, "sample count differs from the task");
  for (const auto& sm : samples) {
    const auto n = sm.at("n").get<std::uint32_t>();
    auto m = jvv(env.P(), sm.at("sections"));
    require(m.size() == env.cover.size(), "one section per cover element");
    if (sm.contains("incompatible")) {
      const auto& w = sm.at("incompatible");
      const auto i = w.at("i").get<std::size_t>(), j = w.at("j").get<std::size_t>();
      require(i < j && j < m.size(), "bad pair");
      const Vector v = sub(scale(env.cover[j].pow(n), m[i]), scale(env.cover[i].pow(n), m[j]));
      const Vector wit = jv(env.P(), w.at("witness"));
      require(env.zero(sub(wit, scale((env.cover[i] * env.cover[j]).pow(w.at("t").get<std::uint32_t>()), v))),
              "incompatibility witness is not (x_i x_j)^t applied to the overlap difference");
      require(!env.zero(wit), "incompatibility witness vanishes");
      continue;
    }
    if (sm.contains("locality")) {
      require(!env.zero(jv(env.P(), sm.at("locality").at("difference"))), "locality witness vanishes");
      continue;
    }
    const auto c = sm.at("c").get<std::uint32_t>(), e = sm.at("e").get<std::uint32_t>();
    require(e == std::max(c + n, 1u), "e is not max(c + n, 1)");
    check_compatible(env, m, n, c);
    auto primed = jvv(env.P(), sm.at("primed"));
    auto expected = primed_components(env, m, e - n);
    require(primed.size() == expected.size(), "primed count");
    Poly y(env.P());
    Vector m0 = zero_vector(env.P(), env.rank());
    for (std::size_t i = 0; i < primed.size(); ++i) {
      require(env.zero(sub(primed[i], expected[i])), "m_i' is not x_i^(e-n) m_i");
      y += env.cover[i].pow(e);
      m0 = add(m0, primed[i]);
    }
    require(y == jp(env.P(), sm.at("y")), "y is not sum x_i^e");
    const Vector glued = jv(env.P(), sm.at("m"));
    require(env.zero(sub(glued, m0)), "glued element is not sum m_i'");
    for (std::size_t i = 0; i < primed.size(); ++i)
      require(env.zero(sub(scale(env.cover[i].pow(e), glued), scale(y, primed[i]))),
              "restriction to D(x_" + std::to_string(i) + ") fails");
    for (const auto& pr : sm.at("probes")) {
      const Poly p = jp(env.P(), pr.at("p"));
      require(pr.at("c").get<std::uint32_t>() == c && pr.at("e").get<std::uint32_t>() == e, "probe bounds differ");
      check_sigma(env, pr, p, primed);
      require(!pr.at("kill").is_null(), "probe does not agree with the glued section");
      const auto kill = pr.at("kill").get<std::uint32_t>(), d = pr.at("d").get<std::uint32_t>();
      const Poly z = y * p;
      const Vector sigma = jv(env.P(), pr.at("sigma"));
      require(env.zero(scale(z.pow(kill), sub(scale(z.pow(d) * p, glued), scale(z * y.pow(d), sigma)))),
              "glued section and sigma disagree at probe " + p.to_string());
    }
  }
}

void replay_diagram(const Session& s, const DiagramTask& t, const TaskRecord& rec) {
  Env env = env_for(s, t.ideal, t.module);
  const auto& samples = rec.certificate.at("samples");
  require(samples.size() == t.samples, "sample count differs from the task");
  for (const auto& sm : samples) {
    const Vector m = jv(env.P(), sm.at("m"));
    const bool torsion = sm.at("in_torsion").get<bool>(), zero = sm.at("cocycle_zero").get<bool>();
    require(rec.outcome == Outcome::Fail || (sm.at("commutes").get<bool>() && torsion == zero),
            "pass record with a failing sample");
    for (std::size_t i = 0; i < env.cover.size(); ++i) {
      const Poly& x = env.cover[i];
      const Vector r = jv(env.P(), sm.at("rho_tau").at(i));
      require(env.zero(sub(r, scale(x, m))), "rho(tau(m)) component is not x_i m");
      const auto& ck = sm.at("commute_kill").at(i);
      if (!ck.is_null())
        require(env.zero(scale(x.pow(ck.get<std::uint32_t>()), sub(scale(x, m), r))),
                "natural map and rho(tau(m)) differ at component " + std::to_string(i));
      const auto& zk = sm.at("zero_kill").at(i);
      if (!zk.is_null()) require(env.zero(scale(x.pow(zk.get<std::uint32_t>()), m)), "zero kill exponent is wrong");
    }
    if (torsion) {
      const auto e = sm.at("torsion_power").get<std::uint32_t>();
      for (const auto& g : ideal_power(env.cover, e)) require(env.zero(scale(g, m)), "J^t does not kill m");
    } else if (sm.contains("survivor")) {
      const auto& sv = sm.at("survivor");
      const Poly& x = env.cover.at(sv.at("i").get<std::size_t>());
      const Vector v = jv(env.P(), sv.at("value"));
      require(env.zero(sub(v, scale(x.pow(sv.at("t").get<std::uint32_t>()), m))), "survivor value is wrong");
      require(!env.zero(v), "survivor vanishes");
    }
  }
}

void replay_idealization(const Session& s, const IdealizationTask& t, const TaskRecord& rec) {
  require(rec.outcome == Outcome::Obstruction, "idealization tasks end in an obstruction");
  Idealization S(s.ring().ring->field());
  const auto& poles = rec.certificate.at("poles");
  require(poles.size() == t.poles.size(), "pole count differs from the task");
  for (std::size_t k = 0; k < poles.size(); ++k) {
    const auto& pj_ = poles[k];
    const int pole = pj_.at("pole").get<int>();
    require(pole == t.poles[k], "pole order differs from the task");
    const auto& stages = pj_.at("stages");
    require(stages.size() == t.cap, "stage count differs from the cap");
    for (std::size_t n = 1; n <= stages.size(); ++n) {
      const auto& st = stages[n - 1];
      PoleWitness w{st.at("stage").get<std::uint32_t>(), PoleWitness::Kind::Valuation,
                    st.at("required_valuation").get<int>(), {}, {}, {}};
      require(w.stage == n && w.required_valuation == static_cast<int>(n) - pole, "stage bounds are wrong");
      if (st.at("kind").get<std::string>() == "annihilator") {
        w.kind = PoleWitness::Kind::Annihilator;
        w.annihilator = js(S.ring(), st.at("annihilator"));
        w.required = js(S.ring(), st.at("required"));
        w.pairing = js(S.ring(), st.at("pairing"));
        require(w.required.r == jp(S.ring(), pj_.at("unit")) * S.x().pow(static_cast<std::uint32_t>(w.required_valuation)),
                "required value is not x^(n-p) u");
      }
      require(w.verify(S), "pole witness fails at stage " + std::to_string(n));
    }
  }
}

}  // namespace

std::vector<ReplayResult> replay_report(const Session& s, const Report& r) {
  if (r.session_digest != session_digest(s)) throw ReportError("report was produced from a different session");
  if (r.records.size() != s.tasks().size()) throw ReportError("report and session have different task counts");
  std::vector<ReplayResult> out;
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const auto& rec = r.records[i];
    ReplayResult res{i, false, ""};
    try {
      require(rec.index == i, "record index out of order");
      require(rec.task == s.print_task(i), "record does not match task " + std::to_string(i));
      require(rec.digest == sha256_hex(rec.content().dump()), "digest mismatch");
      require(rec.kind == task_kind(s.tasks()[i]), "kind mismatch");
      if (!rec.error.empty()) throw ReplayFailure("task raised an error: " + rec.error);
      std::visit(
          [&](const auto& t) {
            using T = std::decay_t<decltype(t)>;
            if constexpr (std::is_same_v<T, ProZeroTask>) replay_prozero(s, t, rec);
            if constexpr (std::is_same_v<T, RoundtripTask>) replay_roundtrip(s, t, rec);
            if constexpr (std::is_same_v<T, SheafTask>) replay_sheaf(s, t, rec);
            if constexpr (std::is_same_v<T, DiagramTask>) replay_diagram(s, t, rec);
            if constexpr (std::is_same_v<T, IdealizationTask>) replay_idealization(s, t, rec);
          },
          s.tasks()[i]);
      res.verified = true;
      res.message = to_string(rec.outcome) + " verified";
    } catch (const ReplayFailure& e) {
      res.message = e.what();
    } catch (const json::exception& e) {
      res.message = std::string("malformed certificate: ") + e.what();
    } catch (const PolyParseError& e) {
      res.message = std::string("malformed polynomial: ") + e.what();
    } catch (const StructuralError& e) {
      res.message = e.what();
    }
    out.push_back(std::move(res));
  }
  return out;
}

}  // namespace dk
