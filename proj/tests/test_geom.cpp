#include <gtest/gtest.h>

#include <cmath>

#include "categories.hpp"
#include "oracles.hpp"
#include "support.hpp"
#include "toposkit/corpus.hpp"
#include "toposkit/geom.hpp"
#include "toposkit/spaces.hpp"

using namespace toposkit;

namespace {

// |f_! P (d)| as classes of (c, x in P(c), h : d -> f c) under the coend relation.
int lower_size_oracle(const FinFunctor& f, const Presheaf& p, int d) {
  const auto& c = *f.source();
  const auto& dc = *f.target();
  std::map<std::array<int, 3>, int> id;
  for (int a = 0; a < c.object_count(); ++a) {
    for (int x = 0; x < p.size(a); ++x) {
      for (int h : dc.hom(d, f.object(a))) id.emplace(std::array{a, x, h}, static_cast<int>(id.size()));
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < c.morphism_count(); ++u) {
    const int a = c.dom(u), b = c.cod(u);
    for (int x = 0; x < p.size(b); ++x) {
      for (int h : dc.hom(d, f.object(a))) {
        pairs.push_back({id.at({a, p.act(u, x), h}), id.at({b, x, dc.compose(f.morphism(u), h)})});
      }
    }
  }
  return oracle::classes(static_cast<int>(id.size()), pairs);
}

PresheafValuedFunctor set_valued(const CategoryPtr& c, const Presheaf& on_opposite) {
  auto one = catalog::terminal_category();
  PresheafValuedFunctor m{c, one, {}, {}};
  for (int a = 0; a < c->object_count(); ++a) m.objects.push_back(share(constant_presheaf(one, on_opposite.size(a))));
  for (int u = 0; u < c->morphism_count(); ++u) {
    m.arrows.emplace_back(m.objects[c->dom(u)], m.objects[c->cod(u)], Components{on_opposite.action(u)});
  }
  return m;
}

void expect_triple_ok(const FinFunctor& f, int size = 2, int random = 2) {
  auto triple = adjoint_triple(f);
  const auto cc = standard_corpus(f.source(), size, random);
  const auto dc = standard_corpus(f.target(), size, random);
  auto left = verify_adjunction(triple.left, cc, dc, 4);
  EXPECT_TRUE(left.ok) << left.failure;
  EXPECT_GT(left.triangles, 0u);
  auto right = verify_adjunction(triple.right, dc, cc, 4);
  EXPECT_TRUE(right.ok) << right.failure;
  auto lex = check_lex(triple.restrict, dc);
  EXPECT_TRUE(lex.ok) << lex.failure;
}

}  // namespace

TEST(AdjointTriple, IdentityIsIdentity) {
  for (const auto& c : fixture_categories()) {
    auto triple = adjoint_triple(identity_functor(c));
    for (const auto& p : standard_corpus(c, 2, 2)) {
      EXPECT_TRUE(oracle::isomorphic(*triple.lower(p), *p));
      EXPECT_TRUE(oracle::isomorphic(*triple.restrict(p), *p));
      EXPECT_TRUE(oracle::isomorphic(*triple.upper(p), *p));
    }
  }
}

TEST(AdjointTriple, PickObjectOfArrow) {
  auto t = catalog::terminal_category();
  auto c = catalog::walking_arrow();
  const int b = *c->find_object("b");
  FinFunctor f(t, c, {b}, {c->identity(b)}, "pick_b");
  auto triple = adjoint_triple(f);
  for (const auto& q : standard_corpus(c, 3, 3)) EXPECT_EQ(triple.restrict(q)->size(0), q->size(b));
  for (const auto& p : standard_corpus(t, 3, 0)) {
    for (int d = 0; d < c->object_count(); ++d) {
      const int n = p->size(0);
      EXPECT_EQ(triple.lower(p)->size(d), n * static_cast<int>(c->hom(d, b).size()));
      EXPECT_EQ(triple.lower(p)->size(d), lower_size_oracle(f, *p, d));
      EXPECT_EQ(triple.upper(p)->size(d), static_cast<int>(std::pow(n, c->hom(b, d).size())));
      EXPECT_EQ(static_cast<std::size_t>(triple.upper(p)->size(d)),
                oracle::natural_maps(restrict_along(f, representable(c, d)), *p).size());
    }
  }
  expect_triple_ok(f, 3, 3);
}

TEST(AdjointTriple, DirectImageAlongOpenPoint) {
  auto w = load("maps.fs");
  const auto& extend = w.functor("extend");
  const auto& restrict = w.functor("restrict");
  auto triple = adjoint_triple(extend);
  for (const auto& f : standard_corpus(extend.source(), 3, 3)) {
    auto direct = triple.upper(f);
    auto expected = restrict_along(restrict, *f);
    for (int v = 0; v < extend.target()->object_count(); ++v) {
      EXPECT_EQ(direct->size(v), f->size(restrict.object(v)));
    }
    EXPECT_TRUE(oracle::isomorphic(*direct, expected));
  }
  expect_triple_ok(extend, 3, 3);
}

TEST(GeomProperty, TriplesOnFixtureFunctors) {
  auto w = load("geom.fw");
  expect_triple_ok(w.functor("collapse"));
  expect_triple_ok(w.functor("pick_b"));
  for (const auto& c : fixture_categories()) expect_triple_ok(identity_functor(c));
  auto chain = catalog::chain(3);
  auto arrow = catalog::walking_arrow();
  expect_triple_ok(FinFunctor(arrow, chain, {0, 2}, {chain->identity(0), chain->identity(2), *chain->find_morphism("0_2")}));
}

TEST(GeomProperty, LowerMatchesCoendOracle) {
  auto w = load("geom.fw");
  for (const auto& name : {"collapse", "pick_b"}) {
    const auto& f = w.functor(name);
    for (const auto& p : standard_corpus(f.source(), 3, 4)) {
      auto l = left_kan(f, p);
      for (int d = 0; d < f.target()->object_count(); ++d) EXPECT_EQ(l.object->size(d), lower_size_oracle(f, *p, d));
    }
  }
}

TEST(VerifyGeometric, EssentialIsCertified) {
  auto w = load("geom.fw");
  const auto& f = w.functor("pick_b");
  auto g = essential_morphism(f, standard_corpus(f.source(), 3, 2), standard_corpus(f.target(), 3, 2));
  auto cert = verify_geometric(g);
  EXPECT_TRUE(cert.ok) << cert.failure;
}

TEST(VerifyGeometric, BrokenPairFails) {
  auto cert = verify_geometric(broken_pair());
  EXPECT_FALSE(cert.ok);
  EXPECT_FALSE(cert.lex.ok);
  EXPECT_FALSE(cert.lex.products);
  EXPECT_FALSE(cert.failure.empty());
}

TEST(VerifyGeometric, IdentityIsCertified) {
  for (const auto& c : fixture_categories()) {
    auto cert = verify_geometric(identity_morphism(c, standard_corpus(c, 2, 2)));
    EXPECT_TRUE(cert.ok) << cert.failure;
  }
}

TEST(Embedding, SheafInclusion) {
  auto w = load("arrow.fj");
  const auto& t = w.topology("dense");
  auto g = sheaf_inclusion(t, standard_corpus(t.base(), 3, 3));
  EXPECT_TRUE(verify_geometric(g).ok);
  EXPECT_TRUE(is_embedding(g));
}

TEST(Embedding, NonFullFunctorIsNot) {
  auto two = catalog::discrete(2);
  auto one = catalog::terminal_category();
  FinFunctor f(two, one, {0, 0}, {0, 0});
  EXPECT_FALSE(f.is_full());
  auto g = essential_morphism(f, standard_corpus(two, 2, 0), standard_corpus(one, 2, 0));
  auto r = check_embedding(g);
  EXPECT_FALSE(r.embedding);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_FALSE(is_iso(g.adjunction.counit(g.domain_corpus[*r.witness])));
}

TEST(Embedding, Identity) {
  auto c = catalog::walking_arrow();
  EXPECT_TRUE(is_embedding(identity_morphism(c, standard_corpus(c, 2, 2))));
}

TEST(Points, TerminalHasOne) {
  EXPECT_EQ(points(catalog::terminal_category(), 3).size(), 1u);
}

TEST(Points, CyclicTwoHasTorsor) {
  auto c = catalog::cyclic_group(2);
  auto pts = points(c, 4);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_EQ(pts[0].functor.sizes(), std::vector<int>{2});
}

TEST(Points, FlatnessMatchesDirectCheck) {
  for (const auto& c : fixture_categories()) {
    auto op = opposite(c);
    std::size_t flat = 0;
    for (const auto& p : up_to_iso(enumerate_presheaves(op, 2))) {
      const bool mine = flatness(p).flat();
      EXPECT_EQ(mine, oracle::flat(*c, p)) << c->name();
      flat += mine;
    }
    EXPECT_EQ(points(c, 2).size(), flat) << c->name();
  }
}

TEST(GeomProperty, PointsAreLexFunctors) {
  for (const auto& c : {catalog::terminal_category(), catalog::walking_arrow(), catalog::chain(3),
                        catalog::commutative_square()}) {
    ASSERT_TRUE(has_finite_limits(*c));
    auto pts = points(c, 3);
    auto lex = lex_set_functors(c, 3);
    ASSERT_EQ(pts.size(), lex.size()) << c->name();
    for (const auto& p : pts) {
      EXPECT_TRUE(std::ranges::any_of(lex, [&](const Presheaf& q) { return oracle::isomorphic(p.functor, q); }));
    }
  }
}

TEST(ClassifyLex, TerminalModel) {
  auto c = catalog::terminal_category();
  PresheafValuedFunctor m{c, c, {share(terminal_presheaf(c))}, {}};
  m.arrows.push_back(identity_map(m.objects[0]));
  auto r = classify_lex(m, standard_corpus(c, 2, 0), standard_corpus(c, 2, 0));
  EXPECT_TRUE(r.round_trip.ok) << r.round_trip.failure;
  EXPECT_TRUE(verify_geometric(r.morphism).ok);
}

TEST(ClassifyLex, SquareIntoSets) {
  auto c = catalog::commutative_square();
  for (const auto& f : lex_set_functors(c, 2)) {
    auto m = set_valued(c, f);
    EXPECT_FALSE(lex_failure(m).has_value());
    auto r = classify_lex(m, standard_corpus(c, 2, 2), standard_corpus(m.target_base, 2, 0));
    EXPECT_TRUE(r.round_trip.ok) << r.round_trip.failure;
    for (const auto& k : r.round_trip.comparison) EXPECT_TRUE(is_iso(k));
  }
}

TEST(ClassifyLex, YonedaGivesIdentity) {
  for (const auto& c : {catalog::walking_arrow(), catalog::commutative_square()}) {
    auto m = yoneda_functor(c);
    const auto corpus = standard_corpus(c, 2, 2);
    auto r = classify_lex(m, corpus, corpus);
    EXPECT_TRUE(r.round_trip.ok) << r.round_trip.failure;
    for (const auto& p : corpus) EXPECT_TRUE(oracle::isomorphic(*r.morphism.inverse_image()(p), *p));
  }
}

TEST(ClassifyLex, RejectsNonLex) {
  auto c = catalog::walking_arrow();
  auto one = catalog::terminal_category();
  PresheafValuedFunctor m{c, one, {share(constant_presheaf(one, 2)), share(constant_presheaf(one, 2))}, {}};
  for (int u = 0; u < c->morphism_count(); ++u) m.arrows.push_back(identity_map(m.objects[0]));
  EXPECT_TRUE(lex_failure(m).has_value());
  EXPECT_THROW(classify_lex(m, {}, {}), PreconditionFailed);
}

TEST(GeomProperty, ClassifyLexOnFixtureModels) {
  auto w = load("geom.fw");
  for (const auto& name : {"yoneda_square", "along_pick"}) {
    const auto& m = w.model(name);
    auto r = classify_lex(m, standard_corpus(m.source, 2, 2), standard_corpus(m.target_base, 2, 2));
    EXPECT_TRUE(r.round_trip.ok) << name << ": " << r.round_trip.failure;
    EXPECT_TRUE(verify_geometric(r.morphism).ok) << name;
  }
}
