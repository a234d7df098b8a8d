#include <gtest/gtest.h>

#include <algorithm>

#include "categories.hpp"
#include "toposkit/elements.hpp"
#include "toposkit/error.hpp"
#include "toposkit/fincat.hpp"
#include "toposkit/psh.hpp"

using namespace toposkit;

namespace {

bool has_law(const ValidationReport& r, const std::string& law) {
  return std::ranges::any_of(r.violations, [&](const Violation& v) { return v.law == law; });
}

CategoryData arrow_data() {
  CategoryData d;
  d.name = "arrow";
  d.objects = {"a", "b"};
  d.morphisms = {{"u", 0, 1}};
  d.complete_identities();
  return d;
}

}  // namespace

TEST(Fincat, TerminalValidates) {
  CategoryData d;
  d.objects = {"pt"};
  d.complete_identities();
  EXPECT_TRUE(validate_category(d).ok());
  EXPECT_EQ(FinCategory(d).morphism_count(), 1);
}

TEST(Fincat, ArrowValidates) { EXPECT_TRUE(validate_category(arrow_data()).ok()); }

TEST(Fincat, CompositeOnNonComposablePair) {
  auto d = arrow_data();
  const int u = 0;
  d.composites.push_back({u, u, u});
  const auto r = validate_category(d);
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(has_law(r, "composite on non-composable pair"));
  EXPECT_THROW(FinCategory{d}, MalformedInput);
}

TEST(Fincat, MissingComposite) {
  CategoryData d;
  d.objects = {"a", "b", "c"};
  d.morphisms = {{"f", 0, 1}, {"g", 1, 2}};
  d.complete_identities();
  EXPECT_TRUE(has_law(validate_category(d), "missing composite"));
}

TEST(Fincat, AssociativityViolation) {
  // e unit, a.a = b, a.b = a, b.a = a, b.b = e
  CategoryData d;
  d.objects = {"o"};
  d.morphisms = {{"a", 0, 0}, {"b", 0, 0}};
  d.complete_identities();
  d.composites.push_back({0, 0, 1});
  d.composites.push_back({0, 1, 0});
  d.composites.push_back({1, 0, 0});
  d.composites.push_back({1, 1, 2});
  const auto r = validate_category(d);
  EXPECT_TRUE(has_law(r, "associativity"));
}

TEST(Fincat, ReportNeverThrows) {
  CategoryData d;
  d.objects = {"a"};
  d.morphisms = {{"x", 0, 5}};
  d.composites.push_back({7, -1, 3});
  ValidationReport r;
  EXPECT_NO_THROW(r = validate_category(d));
  EXPECT_FALSE(r.ok());
}

TEST(Fincat, OppositeOfTerminalIsItself) {
  auto t = catalog::terminal_category();
  auto op = opposite(t);
  EXPECT_EQ(op->object_count(), 1);
  EXPECT_EQ(op->morphism_count(), 1);
  EXPECT_EQ(op->data().composites.size(), t->data().composites.size());
}

TEST(Fincat, OppositeReversesArrow) {
  auto c = catalog::walking_arrow();
  auto op = opposite(c);
  const int u = *c->find_morphism("u");
  EXPECT_EQ(op->dom(u), c->cod(u));
  EXPECT_EQ(op->cod(u), c->dom(u));
}

TEST(Fincat, OppositeReversesChain) {
  auto c = catalog::chain(3);
  auto op = opposite(c);
  for (int f = 0; f < c->morphism_count(); ++f) {
    EXPECT_EQ(op->dom(f), c->cod(f));
    EXPECT_EQ(op->cod(f), c->dom(f));
    for (int g = 0; g < c->morphism_count(); ++g) {
      if (c->composable(g, f)) EXPECT_EQ(op->compose(f, g), c->compose(g, f));
    }
  }
}

TEST(FincatProperty, ValidAndInvolutive) {
  for (const auto& c : small_categories()) {
    EXPECT_TRUE(validate_category(c->data()).ok()) << c->name();
    EXPECT_TRUE(*opposite(opposite(c)) == *c) << c->name();
  }
}

// Against a direct check of the four laws on every object and morphism map.
TEST(FincatProperty, FunctorValidationMatchesLaws) {
  const auto cats = std::vector{catalog::walking_arrow(), catalog::cyclic_group(2), catalog::chain(3),
                                catalog::parallel_pair()};
  for (const auto& s : cats) {
    for (const auto& t : cats) {
      const int ns = s->object_count(), ms = s->morphism_count();
      const int nt = t->object_count(), mt = t->morphism_count();
      std::vector<int> om(ns, 0), mm(ms, 0);
      std::size_t accepted = 0;
      while (true) {
        bool laws = true;
        for (int f = 0; f < ms; ++f) {
          laws = laws && t->dom(mm[f]) == om[s->dom(f)] && t->cod(mm[f]) == om[s->cod(f)];
        }
        for (int a = 0; a < ns && laws; ++a) laws = mm[s->identity(a)] == t->identity(om[a]);
        for (int g = 0; g < ms && laws; ++g) {
          for (int f = 0; f < ms && laws; ++f) {
            if (s->composable(g, f)) laws = mm[s->compose(g, f)] == t->compose(mm[g], mm[f]);
          }
        }
        EXPECT_EQ(validate_functor(*s, *t, om, mm).ok(), laws);
        accepted += laws;
        int i = 0;
        for (; i < ms; ++i) {
          if (++mm[i] < mt) break;
          mm[i] = 0;
        }
        if (i == ms) {
          int k = 0;
          for (; k < ns; ++k) {
            if (++om[k] < nt) break;
            om[k] = 0;
          }
          if (k == ns) break;
        }
      }
      EXPECT_GT(accepted, 0u);
    }
  }
}

TEST(Elements, TerminalPresheafGivesBase) {
  auto c = catalog::walking_arrow();
  auto e = category_of_elements(terminal_presheaf(c), Orientation::Contravariant);
  EXPECT_EQ(e.category->object_count(), 2);
  EXPECT_EQ(e.category->morphism_count(), 3);
}

TEST(Elements, EmptyPresheafGivesEmptyCategory) {
  auto c = catalog::walking_arrow();
  auto e = category_of_elements(initial_presheaf(c), Orientation::Contravariant);
  EXPECT_EQ(e.category->object_count(), 0);
  EXPECT_EQ(e.category->morphism_count(), 0);
}

// Counts pairs (a, x) and arrows f : a -> b with P(f)(y) = x directly.
TEST(Elements, RepresentableMatchesBruteForce) {
  auto c = catalog::walking_arrow();
  const auto y = representable(c, *c->find_object("b"));
  int objects = 0, arrows = 0;
  for (int a = 0; a < c->object_count(); ++a) objects += y.size(a);
  for (int f = 0; f < c->morphism_count(); ++f) {
    for (int x = 0; x < y.size(c->dom(f)); ++x) {
      for (int z = 0; z < y.size(c->cod(f)); ++z) arrows += y.act(f, z) == x;
    }
  }
  auto e = category_of_elements(y, Orientation::Contravariant);
  EXPECT_EQ(objects, 2);
  EXPECT_EQ(e.category->object_count(), objects);
  EXPECT_EQ(e.category->morphism_count(), arrows);
  EXPECT_TRUE(validate_category(e.category->data()).ok());
}

TEST(ElementsProperty, RepresentableHasTerminal) {
  for (const auto& c : small_categories()) {
    if (c->object_count() > 4) continue;
    for (int a = 0; a < c->object_count(); ++a) {
      const auto y = representable(c, a);
      auto e = category_of_elements(y, Orientation::Contravariant);
      const auto t = find_terminal(*e.category);
      ASSERT_TRUE(t.has_value()) << c->name();
      const auto [obj, x] = e.elements[*t];
      EXPECT_EQ(obj, a);
      // id_a sits at the position of the identity in hom(a, a)
      EXPECT_EQ(x, c->hom_position(c->identity(a)));
    }
  }
}

TEST(Elements, CovariantOrientationReversesArrows) {
  auto c = catalog::walking_arrow();
  auto f = terminal_presheaf(opposite(c));
  auto e = category_of_elements(f, Orientation::Covariant);
  const int u = *c->find_morphism("u");
  int image = -1;
  for (int m = 0; m < e.category->morphism_count(); ++m) {
    if (e.morphism_of[m] == u) image = m;
  }
  ASSERT_GE(image, 0);
  EXPECT_EQ(e.elements[e.category->dom(image)].first, c->dom(u));
}
