// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "categories.hpp"
#include "cli.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "toposkit/classifier.hpp"
#include "toposkit/corpus.hpp"
#include "toposkit/etcs.hpp"
#include "toposkit/geom.hpp"
#include "toposkit/internal.hpp"
#include "toposkit/sites.hpp"
#include "toposkit/spaces.hpp"

using namespace toposkit;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      note = what;
    }
  }
};

// ---- shared helpers

std::pair<PresheafPtr, PresheafMap> relabel(const PresheafPtr& p) {
  const auto& c = p->base();
  std::vector<std::vector<int>> actions(c->morphism_count());
  for (int m = 0; m < c->morphism_count(); ++m) {
    const int from = p->size(c->cod(m)), to = p->size(c->dom(m));
    actions[m].resize(from);
    for (int x = 0; x < from; ++x) actions[m][from - 1 - x] = to - 1 - p->act(m, x);
  }
  auto q = share(Presheaf(c, p->sizes(), actions));
  Components comp(c->object_count());
  for (int a = 0; a < c->object_count(); ++a) {
    for (int x = 0; x < p->size(a); ++x) comp[a].push_back(p->size(a) - 1 - x);
  }
  return {q, PresheafMap(p, q, comp)};
}

std::vector<GrothendieckTopology> fixture_sites() {
  std::vector<GrothendieckTopology> out;
  for (const auto& c : fixture_categories()) {
    for (auto& t : enumerate_topologies(shared_omega(c))) out.push_back(std::move(t));
  }
  auto w = load("bad.fp");
  out.push_back(w.topology("canonical(sierpinski)"));
  auto v = load("arrow.fj");
  out.push_back(v.topology("dense"));
  return out;
}

std::vector<FinSpace> spaces_up_to(int n) {
  std::vector<FinSpace> out;
  for (int k = 1; k <= n; ++k) {
    for (auto& s : enumerate_spaces(k)) out.push_back(std::move(s));
  }
  return out;
}

template <class F>
void odometer(int length, int radix, F visit) {
  if (radix == 0 && length > 0) return;
  std::vector<int> v(length, 0);
  while (true) {
    visit(v);
    int i = 0;
    for (; i < length; ++i) {
      if (++v[i] < radix) break;
      v[i] = 0;
    }
    if (i == length) return;
  }
}

// ---- criteria

Outcome classifier_suite() {
  Outcome o;
  for (const auto& c : fixture_categories()) {
    auto cert = verify_classifier(c, standard_corpus(c, 4));
    o.require(cert.ok, c->name() + ": " + cert.failure);
    o.require(cert.truth_domain_terminal, c->name() + ": dom(t) not terminal");
    for (const auto& [sub, hom] : cert.counts) o.require(sub == hom, c->name() + ": |Sub| != |Hom(-, Omega)|");
    o.require(cert.monos > 0, c->name() + ": no monos checked");
  }
  return o;
}

Outcome omega_values() {
  Outcome o;
  auto t = omega(catalog::terminal_category());
  o.require(t.object->sizes() == std::vector<int>{2}, "one-object base");
  for (int n : {2, 3}) {
    auto c = catalog::cyclic_group(n);
    auto om = omega(c);
    o.require(om.object->sizes() == std::vector<int>{2}, "group base size");
    for (int m = 0; m < c->morphism_count(); ++m) o.require(om.object->action(m) == std::vector<int>{0, 1}, "group action");
  }
  for (int n = 1; n <= 4; ++n) {
    auto om = omega(catalog::discrete(n));
    o.require(om.object->sizes() == std::vector<int>(n, 2), "discrete base");
  }
  return o;
}

Outcome lemma_suite() {
  Outcome o;
  std::mt19937_64 rng(1);
  const auto bases = small_categories();
  int squares = 0;
  for (int attempt = 0; squares < 200 && attempt < 20000; ++attempt) {
    const auto& c = bases[rng() % bases.size()];
    auto a = random_presheaf(c, rng, 4, 1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 2));
    auto z = random_presheaf(c, rng, 4, 1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 2));
    auto y = random_presheaf(c, rng, 4, 1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 2));
    if (!a || !z || !y) continue;
    auto monos = enumerate_maps(*a, *z, {.injective = true, .limit = 32});
    auto others = enumerate_maps(*y, *z, {.limit = 32});
    if (monos.empty() || others.empty()) continue;
    auto pb = pullback(monos[rng() % monos.size()], others[rng() % others.size()]);
    o.require(is_mono(pb.legs[1]), "pullback of a mono is not mono");
    ++squares;
  }
  o.require(squares == 200, "only " + std::to_string(squares) + " squares");
  for (const auto& c : fixture_categories()) {
    const auto corpus = standard_corpus(c, 3);
    auto one = share(terminal_presheaf(c));
    for (const auto& x : corpus) {
      for (const auto& h : enumerate_maps(one, x)) o.require(is_mono(h), "map out of 1 not mono");
    }
    const std::size_t n = std::min<std::size_t>(corpus.size(), 6);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (const auto& h : enumerate_maps(corpus[i], corpus[j], {.limit = 4})) {
          auto f = factor_epi_mono(h);
          o.require(is_epi(f.epi) && is_mono(f.mono) && compose(f.mono, f.epi) == h, "bad factorization");
          auto [other, sigma] = relabel(f.epi.target_ptr());
          auto e2 = compose(sigma, f.epi);
          auto m2 = compose(f.mono, inverse(sigma));
          int commuting = 0;
          for (const auto& phi : oracle::natural_maps(f.epi.target(), *other)) {
            PresheafMap p(f.epi.target_ptr(), other, phi);
            commuting += is_iso(p) && compose(p, f.epi) == e2 && compose(m2, p) == f.mono;
          }
          o.require(commuting == 1, "image iso not unique");
        }
      }
    }
  }
  return o;
}

Outcome topology_bijection() {
  Outcome o;
  for (const auto& c : {catalog::terminal_category(), catalog::walking_arrow(), catalog::cyclic_group(2)}) {
    auto om = shared_omega(c);
    const auto tops = enumerate_topologies(om);
    const auto ops = enumerate_lt_operators(om);
    o.require(tops.size() == ops.size(), c->name() + ": counts differ");
    o.require(tops.size() == oracle::topologies(*c).size(), c->name() + ": topology oracle");
    o.require(ops.size() == oracle::lt_operator_count(*c), c->name() + ": LT oracle");
    for (const auto& t : tops) o.require(j_to_topology(om, topology_to_j(t)) == t, c->name() + ": J -> j -> J");
    for (const auto& j : ops) o.require(topology_to_j(j_to_topology(om, j)).j == j.j, c->name() + ": j -> J -> j");
    if (c->object_count() == 1 && c->morphism_count() == 1) o.require(tops.size() == 2, "terminal count");
  }
  return o;
}

Outcome sheafification() {
  Outcome o;
  for (const auto& t : fixture_sites()) {
    const auto& c = t.base();
    auto one = share(terminal_presheaf(c));
    o.require(oracle::isomorphic(*sheafify(one, t).sheaf, *one), "terminal probe");
    auto corpus = standard_corpus(c, 2, 2);
    corpus.resize(std::min<std::size_t>(corpus.size(), 5));
    for (const auto& p : corpus) {
      auto s = sheafify(p, t);
      o.require(is_sheaf(*s.sheaf, t), "result not a sheaf");
      if (is_sheaf(*p, t)) o.require(is_iso(s.unit), "unit not iso on a sheaf");
      o.require(is_iso(sheafify(s.sheaf, t).unit), "not idempotent");
    }
    for (const auto& x : corpus) {
      for (const auto& y : corpus) {
        auto prod = product(x, y);
        auto sx = sheafify(x, t), sy = sheafify(y, t), sp = sheafify(prod.apex, t);
        auto target = product(sx.sheaf, sy.sheaf);
        o.require(is_iso(pairing(target, sheafify_map(sp, sx, prod.legs[0], t), sheafify_map(sp, sy, prod.legs[1], t))),
                  "product probe");
        for (const auto& f : enumerate_maps(x, y, {.limit = 2})) {
          for (const auto& g : enumerate_maps(x, y, {.limit = 2})) {
            auto eq = equalizer(f, g);
            auto se = sheafify(eq.apex, t);
            auto fs = sheafify_map(sx, sy, f, t);
            auto eq2 = equalizer(fs, sheafify_map(sx, sy, g, t));
            auto leg = sheafify_map(se, sx, eq.legs[0], t);
            o.require(is_iso(eq2.mediate(se.sheaf, {leg, compose(fs, leg)})), "equalizer probe");
          }
        }
      }
    }
  }
  return o;
}

Outcome sheaf_etale() {
  Outcome o;
  const auto spaces = spaces_up_to(3);
  for (const auto& x : spaces) {
    auto frame = open_frame(x);
    auto t = canonical_topology(x, frame.category);
    for (const auto& p : standard_corpus(frame.category, 2, 2)) {
      auto f = sheafify(p, t).sheaf;
      auto e = etale_space(x, *f);
      o.require(is_etale(e.bundle), "etale output not etale over " + std::to_string(x.point_count()) + " points");
      o.require(oracle::isomorphic(sections_sheaf(e.bundle, frame.category), *f), "sheaf round trip");
    }
    for (const auto& total : spaces) {
      odometer(total.point_count(), x.point_count(), [&](const std::vector<int>& proj) {
        if (!is_continuous(total, x, proj)) return;
        Bundle b(total, x, proj);
        if (!is_etale(b)) return;
        auto back = etale_space(x, sections_sheaf(b, frame.category));
        o.require(is_etale(back.bundle), "etale output not etale");
        o.require(find_bundle_iso(back.bundle, b).has_value(), "bundle round trip");
      });
    }
  }
  return o;
}

Outcome locale_recovery() {
  Outcome o;
  auto maps = load("maps.fs");
  std::vector<FinSpace> spaces = {maps.space("sierpinski"), maps.space("point"), maps.space("double"),
                                  indiscrete_space(2), discrete_space(2), discrete_space(3)};
  for (const auto& x : spaces) {
    auto r = recover_locale(x);
    auto f = open_frame(x).frame;
    std::set<int> hit(r.iso.begin(), r.iso.end());
    o.require(static_cast<int>(hit.size()) == r.frame.size() && r.frame.size() == f.size(), "iso not bijective");
    o.require(!frame_map_failure(f, r.frame, r.iso).has_value(), "iso not a frame map");
  }
  auto ind = recover_locale(indiscrete_space(2));
  auto pt = recover_locale(point_space());
  o.require(find_frame_iso(ind.frame, pt.frame).has_value(), "indiscrete and point differ");
  return o;
}

Outcome sobriety() {
  Outcome o;
  for (int n = 1; n <= 4; ++n) {
    for (const auto& x : enumerate_spaces(n)) {
      o.require(is_sober(x) == oracle::t0(x), "sober != T0");
      o.require(is_sober(x) == oracle::sober(x), "sober oracle");
    }
  }
  o.require(is_sober(sierpinski_space()), "Sierpinski");
  o.require(!is_sober(indiscrete_space(2)), "indiscrete");
  return o;
}

Outcome geometric() {
  Outcome o;
  auto geom = load("geom.fw");
  auto maps = load("maps.fs");
  std::vector<FinFunctor> functors = {geom.functor("collapse"), geom.functor("pick_b"), maps.functor("extend"),
                                      maps.functor("restrict")};
  for (const auto& c : fixture_categories()) functors.push_back(identity_functor(c));
  for (const auto& f : functors) {
    auto triple = adjoint_triple(f);
    const auto cc = standard_corpus(f.source(), 3, 3);
    const auto dc = standard_corpus(f.target(), 3, 3);
    auto left = verify_adjunction(triple.left, cc, dc);
    auto right = verify_adjunction(triple.right, dc, cc);
    o.require(left.ok, f.name() + ": " + left.failure);
    o.require(right.ok, f.name() + ": " + right.failure);
    auto lex = check_lex(triple.restrict, dc);
    o.require(lex.ok, f.name() + ": " + lex.failure);
    auto cert = verify_geometric(essential_morphism(f, cc, dc));
    o.require(cert.ok, f.name() + ": " + cert.failure);
  }
  const auto& extend = maps.functor("extend");
  const auto& restrict = maps.functor("restrict");
  auto triple = adjoint_triple(extend);
  for (const auto& f : standard_corpus(extend.source(), 3, 4)) {
    auto direct = triple.upper(f);
    for (int v = 0; v < extend.target()->object_count(); ++v) {
      o.require(direct->size(v) == f->size(restrict.object(v)), "(f_* F)(V) != F(f^-1 V)");
    }
    o.require(oracle::isomorphic(*direct, restrict_along(restrict, *f)), "direct image not restriction");
  }
  return o;
}

Outcome points_criterion() {
  Outcome o;
  auto z2 = points(catalog::cyclic_group(2), 4);
  o.require(z2.size() == 1 && z2[0].functor.sizes() == std::vector<int>{2}, "Z/2 points");
  for (const auto& c : fixture_categories()) {
    if (!has_finite_limits(*c)) continue;
    auto pts = points(c, 3);
    auto lex = lex_set_functors(c, 3);
    o.require(pts.size() == lex.size(), c->name() + ": counts differ");
    for (const auto& p : pts) {
      o.require(std::ranges::any_of(lex, [&](const Presheaf& q) { return oracle::isomorphic(p.functor, q); }),
                c->name() + ": flat functor not lex");
      o.require(oracle::flat(*c, p.functor), c->name() + ": flatness oracle");
    }
  }
  return o;
}

Outcome classifying() {
  Outcome o;
  auto geom = load("geom.fw");
  std::vector<PresheafValuedFunctor> models = {geom.model("yoneda_square"), geom.model("along_pick")};
  for (const auto& c : fixture_categories()) {
    if (has_finite_limits(*c)) models.push_back(yoneda_functor(c));
  }
  auto square = catalog::commutative_square();
  auto one = catalog::terminal_category();
  for (const auto& f : lex_set_functors(square, 2)) {
    PresheafValuedFunctor m{square, one, {}, {}};
    for (int a = 0; a < square->object_count(); ++a) m.objects.push_back(share(constant_presheaf(one, f.size(a))));
    for (int u = 0; u < square->morphism_count(); ++u) {
      m.arrows.emplace_back(m.objects[square->dom(u)], m.objects[square->cod(u)], Components{f.action(u)});
    }
    models.push_back(m);
  }
  for (const auto& m : models) {
    auto r = classify_lex(m, standard_corpus(m.source, 2, 2), standard_corpus(m.target_base, 2, 2));
    o.require(r.round_trip.ok, r.round_trip.failure);
    for (const auto& k : r.round_trip.comparison) o.require(is_iso(k), "comparison not iso");
    o.require(verify_geometric(r.morphism).ok, "classified morphism not geometric");
  }
  return o;
}

Outcome internal_language() {
  Outcome o;
  auto s3 = constant_group(catalog::terminal_category(), catalog::s3_table(), "s3");
  auto z3 = constant_group(catalog::walking_arrow(), cyclic_table(3), "z3");
  const auto eq7 = parse_statement("(* (inv y) (inv x)) = (inv (* x y))");
  const auto eq6 = parse_statement("(* x a) = (* y a) => x = y");
  for (const auto* g : {&s3, &z3}) {
    o.require(check_identity(eq7, *g).holds, g->name + ": inverse of product");
    o.require(check_identity(eq6, *g).holds, g->name + ": cancellation");
  }
  o.require(check_identity(eq7, s3).assignments == 36, "S3 assignments");
  const std::vector<std::string> identities = {
      "(* (inv y) (inv x)) = (inv (* x y))", "(* x a) = (* y a) => x = y", "(* x y) = (* y x)",
      "(* (* x y) z) = (* x (* y z))",       "(* x x) = e",                "(inv (inv x)) = x",
      "(* x y) = e => (* y x) = e",          "(* x x) = x => x = e"};
  auto w = load("groups.fa");
  std::vector<InternalGroup> groups = {s3, z3, w.group("s3"), w.group("z3_arrow"), w.group("z2"),
                                       constant_group(catalog::chain(3), catalog::s3_table(), "s3_chain")};
  for (const auto& g : groups) {
    for (const auto& text : identities) {
      const auto s = parse_statement(text);
      o.require(check_identity(s, g).holds == check_identity_pointwise(s, g).holds, g.name + ": " + text);
    }
  }
  return o;
}

Outcome fields() {
  Outcome o;
  auto t = catalog::terminal_category();
  for (int n = 2; n <= 12; ++n) {
    auto r = zmod_ring(t, n);
    o.require(check_field(r, FieldVariant::Standard).field == oracle::prime(n), "standard Z/" + std::to_string(n));
    o.require(check_field(r, FieldVariant::NonUnitZero).field == oracle::prime(n), "non-unit Z/" + std::to_string(n));
  }
  return o;
}

Outcome etcs_audits() {
  Outcome o;
  auto sets = full_corpus(catalog::terminal_category(), 4);
  o.require(check_well_pointed(sets).verdict == Verdict::Pass, "sets not well-pointed");
  o.require(check_choice(sets).verdict == Verdict::Pass, "sets fail choice");
  auto z2 = catalog::cyclic_group(2);
  auto regular = share(representable(z2, 0).named("regular"));
  auto t = presheaf_corpus(z2, {regular});
  auto wp = check_well_pointed(t);
  o.require(wp.verdict == Verdict::Fail && recheck(wp, t), "Z/2 well-pointed");
  o.require(wp.objects.size() == 2 && *t.objects[wp.objects[0]] == *regular, "Z/2 separator witness");
  auto ch = check_choice(t);
  o.require(ch.verdict == Verdict::Fail && recheck(ch, t), "Z/2 choice");
  o.require(!ch.objects.empty() && *t.objects[ch.objects[0]] == *regular, "Z/2 choice witness");
  for (const auto& base : {catalog::terminal_category(), catalog::walking_arrow(), catalog::cyclic_group(2),
                           catalog::chain(3)}) {
    auto corpus = presheaf_corpus(base, {});
    corpus.triples = recursion_triples(base, 5);
    const auto one = share(terminal_presheaf(base));
    const int k = base->object_count();
    for (int size = 1; size <= 4; ++size) {
      auto n = share(constant_presheaf(base, size));
      odometer(size, size, [&](const std::vector<int>& succ) {
        for (int z = 0; z < size; ++z) {
          NnoCandidate cand{"N", n, PresheafMap(one, n, Components(k, std::vector<int>{z})),
                            PresheafMap(n, n, Components(k, succ))};
          auto c = check_nno_candidate(corpus, cand);
          o.require(c.verdict == Verdict::Refuted && recheck(c, corpus, cand), "candidate survived");
        }
      });
    }
  }
  auto w = load("audit.fw");
  for (const auto& cand : w.corpus("sets").candidates) {
    o.require(check_nno_candidate(w.corpus("sets"), cand).verdict == Verdict::Refuted, "fixture candidate survived");
  }
  return o;
}

Outcome cli_determinism() {
  Outcome o;
  struct Case {
    std::vector<std::string> args;
    int code;
  };
  const std::vector<Case> cases = {
      {{"omega", "arrow.fc"}, 0},
      {{"verify-classifier", "z2.fc"}, 0},
      {{"is-sheaf", "bad.fp", "canonical(sierpinski)"}, 1},
      {{"topologies", "arrow.fc"}, 0},
      {{"lt-ops", "z2.fc"}, 0},
      {{"sheafify", "bad.fp", "canonical(sierpinski)"}, 0},
      {{"recover-locale", "sierpinski.fs"}, 0},
      {{"sober", "sierpinski.fs"}, 0},
      {{"points", "z2.fc", "--max-size", "4"}, 0},
      {{"verify-gm", "broken"}, 1},
      {{"classify-lex", "geom.fw", "along_pick"}, 0},
      {{"check-id", "groups.fa", "s3", "(* (inv y) (inv x)) = (inv (* x y))"}, 0},
      {{"check-field", "rings.fa", "z4"}, 1},
      {{"etcs", "audit", "--corpus", "audit.fw", "z2sets"}, 1},
      {{"omega", "missing.fc"}, 2},
      {{"--max-enum", "5", "verify-classifier", "square.fc"}, 2},
  };
  auto strip = [](const std::string& s) {
    std::istringstream in(s);
    std::string line, out;
    while (std::getline(in, line)) {
      if (!line.starts_with("timing:") && line.find("\"timing_ms\"") == std::string::npos) out += line + "\n";
    }
    return out;
  };
  for (const auto& c : cases) {
    for (bool json : {false, true}) {
      auto args = c.args;
      for (auto& a : args) {
        if (a.find('.') != std::string::npos && a[0] != '(' && a.find('(') == std::string::npos) a = fixture(a);
      }
      if (json) args.insert(args.begin(), "--json");
      std::string first;
      for (int run = 0; run < 3; ++run) {
        std::ostringstream out, err;
        const int code = cli::run(args, out, err);
        o.require(code == c.code, c.args[0] + ": exit " + std::to_string(code));
        if (run == 0) first = strip(out.str());
        else o.require(strip(out.str()) == first, c.args[0] + ": output differs");
      }
    }
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"classifier suite", classifier_suite},
      {"omega values", omega_values},
      {"mono and factorization lemmas", lemma_suite},
      {"topology / LT bijection", topology_bijection},
      {"sheafification", sheafification},
      {"sheaf / etale equivalence", sheaf_etale},
      {"locale recovery", locale_recovery},
      {"sobriety", sobriety},
      {"geometric morphisms", geometric},
      {"points", points_criterion},
      {"classifying lex functors", classifying},
      {"internal language", internal_language},
      {"fields", fields},
      {"ETCS audits", etcs_audits},
      {"CLI determinism", cli_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.ok;
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2fs", secs);
    std::cout << (o.ok ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << " (" << timing << ")";
    if (!o.ok) std::cout << ": " << o.note;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
