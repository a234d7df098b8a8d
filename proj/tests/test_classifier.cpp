#include <gtest/gtest.h>

#include "categories.hpp"
#include "oracles.hpp"
#include "toposkit/classifier.hpp"
#include "toposkit/corpus.hpp"
#include "toposkit/error.hpp"

using namespace toposkit;

namespace {

oracle::MorphismSet as_set(const Sieve& s) { return {s.members.begin(), s.members.end()}; }

}  // namespace

TEST(Sieves, Terminal) {
  auto c = catalog::terminal_category();
  EXPECT_EQ(sieves_on(*c, 0).size(), 2u);
  EXPECT_EQ(oracle::sieves(*c, 0).size(), 2u);
}

TEST(Sieves, WalkingArrow) {
  auto c = catalog::walking_arrow();
  const int a = *c->find_object("a"), b = *c->find_object("b");
  EXPECT_EQ(sieves_on(*c, a).size(), 2u);
  const auto on_b = sieves_on(*c, b);
  ASSERT_EQ(on_b.size(), 3u);
  const int u = *c->find_morphism("u");
  EXPECT_TRUE(on_b[0].members.empty());
  EXPECT_EQ(on_b[1].members, std::vector<int>{u});
  EXPECT_EQ(on_b[2].size(), 2u);
}

TEST(Sieves, CyclicTwo) { EXPECT_EQ(sieves_on(*catalog::cyclic_group(2), 0).size(), 2u); }

TEST(SievesProperty, MatchSubsetOracle) {
  for (const auto& c : small_categories()) {
    for (int a = 0; a < c->object_count(); ++a) {
      std::set<oracle::MorphismSet> mine, theirs;
      const auto list = sieves_on(*c, a);
      for (const auto& s : list) mine.insert(as_set(s));
      for (const auto& s : oracle::sieves(*c, a)) theirs.insert(s);
      EXPECT_EQ(mine, theirs) << c->name();
      EXPECT_EQ(mine.size(), list.size());
      EXPECT_TRUE(std::ranges::is_sorted(list));
      EXPECT_EQ(as_set(list.back()), oracle::maximal(*c, a));
    }
  }
}

TEST(Omega, OneObjectBaseIsTwo) {
  auto om = omega(catalog::terminal_category());
  EXPECT_EQ(om.object->sizes(), std::vector<int>{2});
}

TEST(Omega, GroupBaseIsTrivialTwo) {
  for (int n : {2, 3}) {
    auto c = catalog::cyclic_group(n);
    auto om = omega(c);
    EXPECT_EQ(om.object->sizes(), std::vector<int>{2});
    for (int m = 0; m < c->morphism_count(); ++m) EXPECT_EQ(om.object->action(m), (std::vector<int>{0, 1}));
  }
}

TEST(Omega, DiscreteBaseIsConstantFamily) {
  auto c = catalog::discrete(3);
  auto om = omega(c);
  EXPECT_EQ(om.object->sizes(), (std::vector<int>{2, 2, 2}));
}

TEST(Omega, TruthPicksMaximalSieves) {
  for (const auto& c : fixture_categories()) {
    auto om = omega(c);
    for (int a = 0; a < c->object_count(); ++a) {
      EXPECT_EQ(om.truth(a, 0), om.maximal(a));
      EXPECT_EQ(as_set(om.sieve(a, om.truth(a, 0))), oracle::maximal(*c, a));
    }
  }
}

TEST(OmegaProperty, Functorial) {
  for (const auto& c : small_categories()) {
    auto om = omega(c);
    for (int a = 0; a < c->object_count(); ++a) {
      for (const auto& s : om.sieves[a]) {
        EXPECT_EQ(pullback_sieve(*c, s, c->identity(a)), s);
        for (int f : c->into(a)) {
          EXPECT_EQ(as_set(pullback_sieve(*c, s, f)), oracle::pull(*c, as_set(s), f));
          for (int g : c->into(c->dom(f))) {
            EXPECT_EQ(pullback_sieve(*c, pullback_sieve(*c, s, f), g), pullback_sieve(*c, s, c->compose(f, g)));
          }
        }
      }
    }
  }
}

TEST(Characteristic, WholeIsTruth) {
  auto c = catalog::walking_arrow();
  auto om = omega(c);
  auto x = share(representable(c, 1));
  auto chi = characteristic(om, identity_map(x));
  for (int a = 0; a < c->object_count(); ++a) {
    for (int e = 0; e < x->size(a); ++e) EXPECT_EQ(chi(a, e), om.maximal(a));
  }
}

TEST(Characteristic, EmptyIsBottom) {
  auto c = catalog::walking_arrow();
  auto om = omega(c);
  auto x = share(representable(c, 1));
  auto chi = characteristic(om, initial_map(*x));
  for (int a = 0; a < c->object_count(); ++a) {
    for (int e = 0; e < x->size(a); ++e) EXPECT_TRUE(om.sieve(a, chi(a, e)).members.empty());
  }
}

TEST(Characteristic, GeneratedByU) {
  auto c = catalog::walking_arrow();
  auto om = omega(c);
  const int a = *c->find_object("a"), b = *c->find_object("b"), u = *c->find_morphism("u");
  auto y = share(representable(c, b));
  Subobject s(2);
  s[a] = {true};
  s[b] = {false};
  auto chi = characteristic(om, y, s);
  const int id_pos = c->hom_position(c->identity(b));
  EXPECT_EQ(om.sieve(b, chi(b, id_pos)).members, std::vector<int>{u});
  // the square is a pullback, and no other map X -> Omega classifies s
  int classifying = 0;
  for (const auto& comp : oracle::natural_maps(*y, *om.object)) {
    classifying += classified(om, PresheafMap(y, om.object, comp)) == s;
  }
  EXPECT_EQ(classifying, 1);
}

TEST(Characteristic, RejectsNonMono) {
  auto c = catalog::terminal_category();
  auto om = omega(c);
  EXPECT_THROW(characteristic(om, terminal_map(constant_presheaf(c, 2))), PreconditionFailed);
}

TEST(Subobjects, Counts) {
  auto t = catalog::terminal_category();
  EXPECT_EQ(subobjects(share(terminal_presheaf(t))).elements.size(), 2u);
  EXPECT_EQ(subobjects(share(constant_presheaf(t, 2))).elements.size(), 4u);
  auto c = catalog::walking_arrow();
  auto y = share(representable(c, 1));
  const auto lattice = subobjects(y);
  EXPECT_EQ(lattice.elements.size(), 3u);
  EXPECT_EQ(lattice.elements.size(), sieves_on(*c, 1).size());
}

TEST(SubobjectsProperty, MatchOracleAndFormLattice) {
  for (const auto& c : fixture_categories()) {
    for (const auto& x : standard_corpus(c, 3, 4)) {
      const auto lattice = subobjects(x);
      EXPECT_EQ(lattice.elements.size(), oracle::subobject_count(*x)) << c->name();
      for (const auto& s : lattice.elements) EXPECT_TRUE(is_subpresheaf(*x, s));
      EXPECT_EQ(subobject_size(lattice.elements[lattice.bottom()]), 0u);
      EXPECT_EQ(static_cast<int>(subobject_size(lattice.elements[lattice.top()])), x->total_size());
      for (std::size_t i = 0; i < lattice.elements.size(); ++i) {
        EXPECT_TRUE(lattice.leq[lattice.bottom()][i]);
        EXPECT_TRUE(lattice.leq[i][lattice.top()]);
      }
    }
  }
}

TEST(VerifyClassifier, TerminalCounts) {
  auto c = catalog::terminal_category();
  std::vector<PresheafPtr> corpus = {share(constant_presheaf(c, 2))};
  auto cert = verify_classifier(c, corpus);
  EXPECT_TRUE(cert.ok) << cert.failure;
  ASSERT_EQ(cert.counts.size(), 1u);
  EXPECT_EQ(cert.counts[0], (std::pair<std::size_t, std::size_t>{4, 4}));
  EXPECT_EQ(oracle::natural_maps(*corpus[0], *omega(c).object).size(), 4u);
}

TEST(VerifyClassifier, WalkingArrow) {
  auto c = catalog::walking_arrow();
  auto cert = verify_classifier(c, standard_corpus(c, 3, 4));
  EXPECT_TRUE(cert.ok) << cert.failure;
  EXPECT_TRUE(cert.truth_domain_terminal);
}

TEST(VerifyClassifier, CyclicTwoRegular) {
  auto c = catalog::cyclic_group(2);
  auto regular = share(representable(c, 0));
  auto cert = verify_classifier(c, {regular});
  EXPECT_TRUE(cert.ok) << cert.failure;
  EXPECT_EQ(cert.counts[0].second, 2u);
  EXPECT_EQ(oracle::natural_maps(*regular, *omega(c).object).size(), 2u);
}

TEST(ClassifierProperty, TruthIsMono) {
  for (const auto& c : small_categories()) EXPECT_TRUE(is_mono(omega(c).truth));
}

TEST(ClassifierProperty, SubIsHomOmega) {
  for (const auto& c : fixture_categories()) {
    auto om = omega(c);
    for (const auto& x : standard_corpus(c, 3, 3)) {
      const auto lattice = subobjects(x);
      std::set<std::vector<int>> images;
      for (const auto& s : lattice.elements) {
        auto chi = characteristic(om, x, s);
        EXPECT_EQ(classified(om, chi), s);
        images.insert(flatten(chi.components()));
      }
      const auto all = oracle::natural_maps(*x, *om.object);
      EXPECT_EQ(images.size(), all.size()) << c->name();
      for (const auto& phi : all) {
        PresheafMap p(x, om.object, phi);
        EXPECT_EQ(characteristic(om, x, classified(om, p)), p);
      }
    }
  }
}

TEST(ClassifierProperty, ClassificationIsNatural) {
  for (const auto& c : {catalog::walking_arrow(), catalog::cyclic_group(2), catalog::chain(3)}) {
    auto om = omega(c);
    const auto corpus = standard_corpus(c, 2, 3);
    for (const auto& x : corpus) {
      const auto lattice = subobjects(x);
      for (const auto& x2 : corpus) {
        for (const auto& h : enumerate_maps(x2, x, {.limit = 6})) {
          for (const auto& s : lattice.elements) {
            Subobject back(c->object_count());
            for (int a = 0; a < c->object_count(); ++a) {
              for (int e = 0; e < x2->size(a); ++e) back[a].push_back(s[a][h(a, e)]);
            }
            EXPECT_EQ(characteristic(om, x2, back), compose(characteristic(om, x, s), h));
          }
        }
      }
    }
  }
}
