#include <gtest/gtest.h>

#include <random>

#include "categories.hpp"
#include "oracles.hpp"
#include "toposkit/classifier.hpp"
#include "toposkit/corpus.hpp"
#include "toposkit/internal.hpp"
#include "toposkit/psh.hpp"

using namespace toposkit;

namespace {

PresheafPtr constant(const CategoryPtr& c, int n) { return share(constant_presheaf(c, n)); }

bool injective_everywhere(const PresheafMap& h) {
  for (int a = 0; a < h.base()->object_count(); ++a) {
    std::set<int> seen(h.component(a).begin(), h.component(a).end());
    if (static_cast<int>(seen.size()) != h.source().size(a)) return false;
  }
  return true;
}

// The same presheaf with every set listed in reverse, and the iso to it.
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

}  // namespace

TEST(Limits, EmptyDiagramIsTerminal) {
  auto c = catalog::walking_arrow();
  auto lim = finite_limit(discrete_diagram(c, {}));
  EXPECT_EQ(*lim.apex, terminal_presheaf(c));
}

TEST(Limits, ProductOfTwoAndThree) {
  auto c = catalog::terminal_category();
  auto p = product(constant(c, 2), constant(c, 3));
  EXPECT_EQ(p.apex->size(0), 6);
  EXPECT_EQ(p.legs.size(), 2u);
}

TEST(Limits, PullbackOfTruthRecoversSubobject) {
  auto c = catalog::walking_arrow();
  auto om = omega(c);
  for (const auto& x : standard_corpus(c, 3, 3)) {
    const auto lattice = subobjects(x);
    for (const auto& s : lattice.elements) {
      const auto m = inclusion(x, s);
      const auto chi = characteristic(om, m);
      const auto pb = pullback(om.truth, chi);
      EXPECT_TRUE(oracle::isomorphic(*pb.apex, m.source()));
    }
  }
}

TEST(Colimits, EmptyDiagramIsInitial) {
  auto c = catalog::walking_arrow();
  auto col = finite_colimit(discrete_diagram(c, {}));
  EXPECT_EQ(*col.apex, initial_presheaf(c));
}

TEST(Colimits, CoproductSizesAdd) {
  auto c = catalog::terminal_category();
  auto s = coproduct(constant(c, 1), constant(c, 3));
  EXPECT_EQ(s.apex->size(0), 4);
}

TEST(Colimits, CoequalizerOfTwoPoints) {
  auto c = catalog::terminal_category();
  auto one = constant(c, 1), two = constant(c, 2);
  PresheafMap f(one, two, {{0}}), g(one, two, {{1}});
  auto q = coequalizer(f, g);
  EXPECT_EQ(q.apex->size(0), oracle::classes(2, {{0, 1}}));
  EXPECT_EQ(q.apex->size(0), 1);
}

TEST(ColimitsProperty, CoequalizerMatchesUnionFind) {
  std::mt19937_64 rng(7);
  auto c = catalog::terminal_category();
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3), k = 1 + static_cast<int>(rng() % 5);
    std::vector<int> fv(n), gv(n);
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
      fv[i] = static_cast<int>(rng() % k);
      gv[i] = static_cast<int>(rng() % k);
      pairs.push_back({fv[i], gv[i]});
    }
    PresheafMap f(constant(c, n), constant(c, k), {fv}), g(constant(c, n), constant(c, k), {gv});
    EXPECT_EQ(coequalizer(f, g).apex->size(0), oracle::classes(k, pairs));
  }
}

TEST(Exponential, CountsFunctions) {
  auto c = catalog::terminal_category();
  auto e = exponential(constant(c, 2), constant(c, 3));
  EXPECT_EQ(e.object->size(0), 9);
}

TEST(Exponential, PowerOfTerminal) {
  for (const auto& c : fixture_categories()) {
    for (const auto& y : standard_corpus(c, 2, 2)) {
      auto e = exponential(share(terminal_presheaf(c)), y);
      EXPECT_TRUE(oracle::isomorphic(*e.object, *y)) << c->name();
    }
  }
}

TEST(Exponential, OmegaToOmegaMatchesNatEnumeration) {
  auto c = catalog::walking_arrow();
  auto om = omega(c);
  auto e = exponential(om.object, om.object);
  for (int a = 0; a < c->object_count(); ++a) {
    const auto stage = product(share(representable(c, a)), om.object);
    EXPECT_EQ(static_cast<std::size_t>(e.object->size(a)),
              oracle::natural_maps(*stage.apex, *om.object).size());
  }
}

TEST(ExponentialProperty, TransposeIsBijective) {
  for (const auto& c : {catalog::terminal_category(), catalog::walking_arrow(), catalog::cyclic_group(2)}) {
    const auto corpus = standard_corpus(c, 2, 1);
    for (std::size_t i = 0; i < corpus.size() && i < 4; ++i) {
      for (std::size_t j = 0; j < corpus.size() && j < 4; ++j) {
        const auto& x = corpus[i];
        const auto& y = corpus[j];
        auto e = exponential(x, y);
        auto z = corpus.back();
        auto zx = product(z, x);
        std::set<std::vector<int>> seen;
        const auto maps = enumerate_maps(zx.apex, y);
        for (const auto& h : maps) {
          auto k = e.transpose(z, h);
          seen.insert(flatten(k.components()));
          EXPECT_EQ(flatten(e.untranspose(k).components()), flatten(h.components()));
        }
        EXPECT_EQ(seen.size(), maps.size());
        EXPECT_EQ(count_maps(*z, *e.object), maps.size());
      }
    }
  }
}

TEST(ClassifyMap, IdentityIsIso) {
  auto c = catalog::walking_arrow();
  EXPECT_TRUE(is_iso(identity_map(representable(c, 1))));
}

TEST(ClassifyMap, InitialToTerminal) {
  auto c = catalog::walking_arrow();
  auto h = initial_map(terminal_presheaf(c));
  EXPECT_TRUE(is_mono(h));
  EXPECT_FALSE(is_epi(h));
}

TEST(ClassifyMap, TwoToOne) {
  auto c = catalog::terminal_category();
  auto h = terminal_map(constant_presheaf(c, 2));
  EXPECT_TRUE(is_epi(h));
  EXPECT_FALSE(is_mono(h));
}

TEST(Factor, IsoFactorsTrivially) {
  auto c = catalog::walking_arrow();
  auto y = share(representable(c, 1));
  auto [q, iso] = relabel(y);
  auto f = factor_epi_mono(iso);
  EXPECT_EQ(f.epi, iso);
  EXPECT_EQ(f.mono.components(), identity_map(q).components());
}

TEST(Factor, ConstantMapHasPointImage) {
  auto c = catalog::terminal_category();
  auto two = constant(c, 2);
  auto f = factor_epi_mono(PresheafMap(two, two, {{1, 1}}));
  EXPECT_EQ(f.mono.source().size(0), 1);
  EXPECT_TRUE(is_epi(f.epi));
  EXPECT_TRUE(is_mono(f.mono));
}

TEST(Factor, UnitsOfZ4) {
  auto r = zmod_ring(catalog::terminal_category(), 4);
  auto u = units_subobject(r);
  std::vector<int> expected;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      if (x * y % 4 == 1) {
        expected.push_back(x);
        break;
      }
    }
  }
  EXPECT_EQ(u.mono().component(0), expected);
  EXPECT_EQ(expected, (std::vector<int>{1, 3}));
}

// Random bases, random presheaves as quotients of representables.
TEST(PshProperty, PullbackOfMonoIsMono) {
  std::mt19937_64 rng(1);
  const auto bases = small_categories();
  int squares = 0, attempts = 0;
  while (squares < 200 && attempts < 20000) {
    ++attempts;
    const auto& c = bases[rng() % bases.size()];
    if (c->object_count() > 4) continue;
    auto a = random_presheaf(c, rng, 4, 1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 2));
    auto z = random_presheaf(c, rng, 4, 1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 2));
    auto y = random_presheaf(c, rng, 4, 1 + static_cast<int>(rng() % 2), static_cast<int>(rng() % 2));
    if (!a || !z || !y) continue;
    auto monos = enumerate_maps(*a, *z, {.injective = true, .limit = 32});
    auto others = enumerate_maps(*y, *z, {.limit = 32});
    if (monos.empty() || others.empty()) continue;
    const auto& m = monos[rng() % monos.size()];
    const auto& g = others[rng() % others.size()];
    ASSERT_TRUE(injective_everywhere(m));
    auto pb = pullback(m, g);
    EXPECT_TRUE(is_mono(pb.legs[1]));
    EXPECT_TRUE(injective_everywhere(pb.legs[1]));
    ++squares;
  }
  EXPECT_EQ(squares, 200);
}

TEST(PshProperty, MapsOutOfTerminalAreMono) {
  for (const auto& c : fixture_categories()) {
    auto one = share(terminal_presheaf(c));
    for (const auto& x : standard_corpus(c, 3, 4)) {
      for (const auto& h : enumerate_maps(one, x)) EXPECT_TRUE(is_mono(h)) << c->name();
    }
  }
}

TEST(PshProperty, FactorizationUniqueUpToUniqueIso) {
  for (const auto& c : {catalog::terminal_category(), catalog::walking_arrow(), catalog::cyclic_group(2)}) {
    const auto corpus = standard_corpus(c, 3, 2);
    for (std::size_t i = 0; i < corpus.size() && i < 6; ++i) {
      for (std::size_t j = 0; j < corpus.size() && j < 6; ++j) {
        for (const auto& h : enumerate_maps(corpus[i], corpus[j], {.limit = 6})) {
          auto f = factor_epi_mono(h);
          EXPECT_EQ(compose(f.mono, f.epi), h);
          auto [other, sigma] = relabel(f.epi.target_ptr());
          auto e2 = compose(sigma, f.epi);
          auto m2 = compose(f.mono, inverse(sigma));
          ASSERT_EQ(compose(m2, e2), h);
          int commuting = 0;
          for (const auto& phi : oracle::natural_maps(f.epi.target(), *other)) {
            PresheafMap p(f.epi.target_ptr(), other, phi);
            if (is_iso(p) && compose(p, f.epi) == e2 && compose(m2, p) == f.mono) ++commuting;
          }
          EXPECT_EQ(commuting, 1);
        }
      }
    }
  }
}

// Pointwise injectivity against left cancellation with representable and
// corpus test objects.
TEST(PshProperty, PointwiseMonoMatchesCancellation) {
  for (const auto& c : {catalog::walking_arrow(), catalog::cyclic_group(2), catalog::chain(3)}) {
    auto corpus = standard_corpus(c, 2, 2);
    auto probes = corpus;
    for (int a = 0; a < c->object_count(); ++a) probes.push_back(share(representable(c, a)));
    for (std::size_t i = 0; i < corpus.size() && i < 6; ++i) {
      for (std::size_t j = 0; j < corpus.size() && j < 6; ++j) {
        for (const auto& h : enumerate_maps(corpus[i], corpus[j], {.limit = 8})) {
          bool cancels = true;
          for (const auto& z : probes) {
            const auto maps = enumerate_maps(z, corpus[i]);
            for (std::size_t p = 0; p < maps.size() && cancels; ++p) {
              for (std::size_t q = p + 1; q < maps.size() && cancels; ++q) {
                if (compose(h, maps[p]) == compose(h, maps[q])) cancels = false;
              }
            }
          }
          EXPECT_EQ(is_mono(h), cancels);
        }
      }
    }
  }
}

TEST(PshProperty, LimitAndColimitMediatorsUnique) {
  for (const auto& c : {catalog::terminal_category(), catalog::walking_arrow(), catalog::cyclic_group(2)}) {
    const auto corpus = standard_corpus(c, 2, 1);
    const std::size_t n = std::min<std::size_t>(corpus.size(), 4);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        auto prod = product(corpus[i], corpus[j]);
        auto sum = coproduct(corpus[i], corpus[j]);
        for (std::size_t k = 0; k < n; ++k) {
          const auto& z = corpus[k];
          for (const auto& f : enumerate_maps(z, corpus[i], {.limit = 3})) {
            for (const auto& g : enumerate_maps(z, corpus[j], {.limit = 3})) {
              auto med = prod.mediate(z, {f, g});
              int found = 0;
              for (const auto& comp : oracle::natural_maps(*z, *prod.apex)) {
                PresheafMap m(z, prod.apex, comp);
                found += compose(prod.legs[0], m) == f && compose(prod.legs[1], m) == g;
              }
              EXPECT_EQ(found, 1);
              EXPECT_EQ(compose(prod.legs[0], med), f);
            }
          }
          for (const auto& f : enumerate_maps(corpus[i], z, {.limit = 3})) {
            for (const auto& g : enumerate_maps(corpus[j], z, {.limit = 3})) {
              auto med = sum.mediate(z, {f, g});
              int found = 0;
              for (const auto& comp : oracle::natural_maps(*sum.apex, *z)) {
                PresheafMap m(sum.apex, z, comp);
                found += compose(m, sum.injections[0]) == f && compose(m, sum.injections[1]) == g;
              }
              EXPECT_EQ(found, 1);
              EXPECT_EQ(compose(med, sum.injections[1]), g);
            }
          }
        }
      }
    }
  }
}

TEST(PshProperty, MapEnumerationMatchesOracle) {
  for (const auto& c : fixture_categories()) {
    const auto corpus = standard_corpus(c, 2, 2);
    for (const auto& x : corpus) {
      for (const auto& y : corpus) {
        EXPECT_EQ(count_maps(*x, *y), oracle::natural_maps(*x, *y).size()) << c->name();
      }
    }
  }
}
