#include <gtest/gtest.h>

#include <cmath>

#include "categories.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "toposkit/corpus.hpp"
#include "toposkit/sites.hpp"
#include "toposkit/spaces.hpp"

using namespace toposkit;

namespace {

oracle::Covers as_covers(const GrothendieckTopology& t) {
  oracle::Covers out(t.base()->object_count());
  for (int a = 0; a < t.base()->object_count(); ++a) {
    for (int k : t.covers(a)) {
      const auto& m = t.omega()->sieve(a, k).members;
      out[a].insert({m.begin(), m.end()});
    }
  }
  return out;
}

// Sheaf condition as: restriction P(a) -> Nat(S, P) is bijective for each cover S,
// with Nat(S, P) enumerated independently.
bool sheaf_oracle(const Presheaf& p, const GrothendieckTopology& t) {
  const auto& c = t.base();
  for (int a = 0; a < c->object_count(); ++a) {
    const auto y = share(representable(c, a));
    for (int k : t.covers(a)) {
      const auto& sieve = t.omega()->sieve(a, k);
      Subobject s(c->object_count());
      for (int b = 0; b < c->object_count(); ++b) {
        for (int m : c->hom(b, a)) s[b].push_back(sieve.contains(m));
      }
      const auto sp = subpresheaf(*y, s);
      const auto families = oracle::natural_maps(sp, p);
      if (static_cast<int>(families.size()) != p.size(a)) return false;
      std::set<Components> restricted;
      for (int x = 0; x < p.size(a); ++x) {
        Components fam(c->object_count());
        for (int b = 0; b < c->object_count(); ++b) {
          for (int m : c->hom(b, a)) {
            if (sieve.contains(m)) fam[b].push_back(p.act(m, x));
          }
        }
        restricted.insert(fam);
      }
      if (static_cast<int>(restricted.size()) != p.size(a)) return false;
    }
  }
  return true;
}

std::vector<GrothendieckTopology> fixture_sites() {
  std::vector<GrothendieckTopology> out;
  for (const auto& c : fixture_categories()) {
    for (auto& t : enumerate_topologies(shared_omega(c))) out.push_back(std::move(t));
  }
  auto w = load("sierpinski.fs");
  const auto& x = w.space("sierpinski");
  out.push_back(canonical_topology(x, w.category("Open(sierpinski)")));
  return out;
}

}  // namespace

TEST(Topologies, TerminalHasTwo) {
  auto c = catalog::terminal_category();
  EXPECT_EQ(enumerate_topologies(shared_omega(c)).size(), 2u);
  EXPECT_EQ(oracle::topologies(*c).size(), 2u);
}

TEST(Topologies, ArrowAgreesWithLT) {
  auto c = catalog::walking_arrow();
  auto om = shared_omega(c);
  const auto n = enumerate_topologies(om).size();
  EXPECT_EQ(n, oracle::topologies(*c).size());
  EXPECT_EQ(n, enumerate_lt_operators(om).size());
  EXPECT_EQ(n, oracle::lt_operator_count(*c));
}

TEST(Topologies, CyclicTwoHasTwo) {
  auto c = catalog::cyclic_group(2);
  EXPECT_EQ(enumerate_topologies(shared_omega(c)).size(), 2u);
}

TEST(TopologiesProperty, MatchAxiomFilter) {
  for (const auto& c : small_categories()) {
    auto om = shared_omega(c);
    std::set<oracle::Covers> mine, theirs;
    for (const auto& t : enumerate_topologies(om)) {
      mine.insert(as_covers(t));
      EXPECT_FALSE(check_topology_axioms(*om, t.covers()).has_value());
    }
    for (const auto& j : oracle::topologies(*c)) theirs.insert(j);
    EXPECT_EQ(mine, theirs) << c->name();
  }
}

TEST(TopologiesProperty, LTBijection) {
  for (const auto& c : small_categories()) {
    auto om = shared_omega(c);
    double functions = 1;
    for (int a = 0; a < c->object_count(); ++a) functions *= std::pow(om->object->size(a), om->object->size(a));
    if (functions > 1e6) continue;
    const auto tops = enumerate_topologies(om);
    const auto ops = enumerate_lt_operators(om);
    EXPECT_EQ(tops.size(), ops.size()) << c->name();
    EXPECT_EQ(ops.size(), oracle::lt_operator_count(*c)) << c->name();
    for (const auto& t : tops) EXPECT_EQ(j_to_topology(om, topology_to_j(t)), t);
    for (const auto& j : ops) {
      EXPECT_FALSE(check_lt_axioms(*om, j.j).has_value());
      EXPECT_EQ(topology_to_j(j_to_topology(om, j)).j, j.j);
    }
  }
}

TEST(LT, TrivialIsIdentity) {
  auto om = shared_omega(catalog::walking_arrow());
  EXPECT_EQ(topology_to_j(trivial_topology(om)).j, identity_map(om->object));
}

TEST(LT, LargestIsConstantTruth) {
  auto om = shared_omega(catalog::walking_arrow());
  auto j = topology_to_j(largest_topology(om)).j;
  for (int a = 0; a < om->base->object_count(); ++a) {
    for (int s = 0; s < om->object->size(a); ++s) EXPECT_EQ(j(a, s), om->maximal(a));
  }
}

TEST(LT, TerminalRoundTrips) {
  auto om = shared_omega(catalog::terminal_category());
  for (const auto& t : enumerate_topologies(om)) EXPECT_EQ(j_to_topology(om, topology_to_j(t)), t);
}

TEST(Sheaf, TrivialTopologyAlwaysSheaf) {
  for (const auto& c : fixture_categories()) {
    auto t = trivial_topology(shared_omega(c));
    for (const auto& p : standard_corpus(c, 3, 3)) EXPECT_TRUE(is_sheaf(*p, t));
  }
}

TEST(Sheaf, TerminalAlwaysSheaf) {
  for (const auto& t : fixture_sites()) EXPECT_TRUE(is_sheaf(terminal_presheaf(t.base()), t));
}

TEST(Sheaf, GluingFailureOnSierpinski) {
  auto w = load("bad.fp");
  auto p = w.presheaf("bad");
  const auto& t = w.topology("canonical(sierpinski)");
  auto check = check_sheaf(*p, t);
  EXPECT_FALSE(check.sheaf);
  ASSERT_TRUE(check.failure.has_value());
  EXPECT_EQ(check.failure->kind, "non-unique amalgamation");
  EXPECT_FALSE(sheaf_oracle(*p, t));
}

TEST(SheafProperty, MatchesNatOracle) {
  for (const auto& t : fixture_sites()) {
    for (const auto& p : standard_corpus(t.base(), 2, 3)) EXPECT_EQ(is_sheaf(*p, t), sheaf_oracle(*p, t));
  }
}

TEST(Sheafify, SheafUnitIsIso) {
  for (const auto& t : fixture_sites()) {
    for (const auto& p : standard_corpus(t.base(), 2, 2)) {
      if (!is_sheaf(*p, t)) continue;
      EXPECT_TRUE(is_iso(sheafify(p, t).unit));
    }
  }
}

TEST(Sheafify, LargestGivesTerminal) {
  for (const auto& c : fixture_categories()) {
    auto t = largest_topology(shared_omega(c));
    for (const auto& p : standard_corpus(c, 2, 2)) EXPECT_EQ(*sheafify(p, t).sheaf, terminal_presheaf(c));
  }
}

TEST(Sheafify, RepairsGluingFailure) {
  auto w = load("bad.fp");
  const auto& t = w.topology("canonical(sierpinski)");
  auto s = sheafify(w.presheaf("bad"), t);
  EXPECT_TRUE(is_sheaf(*s.sheaf, t));
  EXPECT_TRUE(sheaf_oracle(*s.sheaf, t));
}

TEST(SheafifyProperty, Idempotent) {
  for (const auto& t : fixture_sites()) {
    for (const auto& p : standard_corpus(t.base(), 2, 2)) {
      auto once = sheafify(p, t);
      EXPECT_TRUE(is_sheaf(*once.sheaf, t));
      EXPECT_TRUE(is_iso(sheafify(once.sheaf, t).unit));
    }
  }
}

TEST(SheafifyProperty, PreservesFiniteLimits) {
  for (const auto& t : fixture_sites()) {
    const auto& c = t.base();
    auto one = share(terminal_presheaf(c));
    EXPECT_TRUE(oracle::isomorphic(*sheafify(one, t).sheaf, *one));
    auto corpus = standard_corpus(c, 2, 1);
    corpus.resize(std::min<std::size_t>(corpus.size(), 4));
    for (const auto& x : corpus) {
      for (const auto& y : corpus) {
        auto prod = product(x, y);
        auto sx = sheafify(x, t), sy = sheafify(y, t), sp = sheafify(prod.apex, t);
        auto target = product(sx.sheaf, sy.sheaf);
        auto cmp = pairing(target, sheafify_map(sp, sx, prod.legs[0], t), sheafify_map(sp, sy, prod.legs[1], t));
        EXPECT_TRUE(is_iso(cmp));
        for (const auto& f : enumerate_maps(x, y, {.limit = 3})) {
          for (const auto& g : enumerate_maps(x, y, {.limit = 3})) {
            auto eq = equalizer(f, g);
            auto se = sheafify(eq.apex, t);
            auto eq2 = equalizer(sheafify_map(sx, sy, f, t), sheafify_map(sx, sy, g, t));
            auto cmp2 = eq2.mediate(se.sheaf, {sheafify_map(se, sx, eq.legs[0], t),
                                               compose(sheafify_map(sx, sy, f, t), sheafify_map(se, sx, eq.legs[0], t))});
            EXPECT_TRUE(is_iso(cmp2));
          }
        }
      }
    }
  }
}

TEST(SheafifyProperty, UniversalProperty) {
  for (const auto& t : fixture_sites()) {
    auto corpus = standard_corpus(t.base(), 2, 1);
    corpus.resize(std::min<std::size_t>(corpus.size(), 4));
    for (const auto& p : corpus) {
      auto sp = sheafify(p, t);
      for (const auto& q0 : corpus) {
        auto q = sheafify(q0, t).sheaf;
        for (const auto& h : enumerate_maps(p, q, {.limit = 4})) {
          int factorings = 0;
          for (const auto& comp : oracle::natural_maps(*sp.sheaf, *q)) {
            factorings += compose(PresheafMap(sp.sheaf, q, comp), sp.unit) == h;
          }
          EXPECT_EQ(factorings, 1);
        }
      }
    }
  }
}

TEST(Sites, OmegaJIsSheaf) {
  for (const auto& t : fixture_sites()) EXPECT_TRUE(is_sheaf(omega_j(t), t));
}
