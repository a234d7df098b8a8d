#pragma once

#include <array>
#include <utility>
#include <vector>

#include "toposkit/fincat.hpp"
#include "toposkit/psh.hpp"

namespace toposkit {

// Contravariant: P is a presheaf on C; a morphism (a, x) -> (b, y) is an f : a -> b
// of C with P(f)(y) = x.
// Covariant: P is a presheaf on C^op, read as a functor F : C -> finite sets; a
// morphism (a, x) -> (b, y) is an f : a -> b of C with F(f)(x) = y.
enum class Orientation { Contravariant, Covariant };

struct ElementsCategory {
  CategoryPtr category;
  // Projection to C (the base of P, or its opposite for the covariant reading).
  FinFunctor projection;
  std::vector<std::pair<int, int>> elements;  // object index -> (a, x)
  std::vector<int> morphism_of;               // element morphism -> morphism of C

  int object_of(int a, int x) const;
};

ElementsCategory category_of_elements(const Presheaf& p, Orientation orientation);

// Witness families for cofilteredness: nonempty, every pair of objects has a
// span, every parallel pair is equalized by some arrow into its domain.
struct CofilteredReport {
  bool nonempty = false;
  std::vector<std::pair<int, int>> missing_span;           // object pairs
  std::vector<std::pair<int, int>> unequalized_pair;       // morphism pairs
  // cones found: (i, j, apex) for spans, (f, g, w) with f . w = g . w
  std::vector<std::array<int, 3>> spans;
  std::vector<std::array<int, 3>> equalizers;
  bool ok() const { return nonempty && missing_span.empty() && unequalized_pair.empty(); }
};

CofilteredReport check_cofiltered(const FinCategory& c);

}  // namespace toposkit
