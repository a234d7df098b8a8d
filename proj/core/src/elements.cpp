#include "toposkit/elements.hpp"

#include <string>

namespace toposkit {

int ElementsCategory::object_of(int a, int x) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] == std::pair{a, x}) return static_cast<int>(i);
  }
  return -1;
}

ElementsCategory category_of_elements(const Presheaf& p, Orientation orientation) {
  const bool covariant = orientation == Orientation::Covariant;
  const CategoryPtr base = covariant ? opposite(p.base()) : p.base();
  const auto& c = *base;
  CategoryData d;
  d.name = (covariant ? "el+(" : "el(") + (p.name().empty() ? std::string("P") : p.name()) + ")";
  std::vector<std::vector<int>> object_index(c.object_count());
  std::vector<std::pair<int, int>> elements;
  for (int a = 0; a < c.object_count(); ++a) {
    for (int x = 0; x < p.size(a); ++x) {
      object_index[a].push_back(static_cast<int>(elements.size()));
      elements.emplace_back(a, x);
      d.objects.push_back(c.object_name(a) + ":" + p.label(a, x));
    }
  }
  d.identities.assign(elements.size(), -1);
  std::vector<int> morphism_of;
  std::vector<int> object_map;
  for (const auto& e : elements) object_map.push_back(e.first);
  for (int f = 0; f < c.morphism_count(); ++f) {
    const int a = c.dom(f);
    const int b = c.cod(f);
    for (int x = 0; x < p.size(a); ++x) {
      int y = -1;
      if (covariant) {
        y = p.act(f, x);
      } else {
        for (int cand = 0; cand < p.size(b); ++cand) {
          if (p.act(f, cand) != x) continue;
          // one element morphism per (f, x, y)
          const int id = static_cast<int>(d.morphisms.size());
          d.morphisms.push_back({c.morphism_name(f) + "@" + p.label(a, x) + ">" + p.label(b, cand),
                                 object_index[a][x], object_index[b][cand]});
          morphism_of.push_back(f);
          if (c.is_identity(f)) d.identities[object_index[a][x]] = id;
        }
        continue;
      }
      const int id = static_cast<int>(d.morphisms.size());
      d.morphisms.push_back({c.morphism_name(f) + "@" + p.label(a, x), object_index[a][x],
                             object_index[b][y]});
      morphism_of.push_back(f);
      if (c.is_identity(f)) d.identities[object_index[a][x]] = id;
    }
  }
  // Composite of element morphisms is determined by the composite in C and the
  // endpoints.
  const int m = static_cast<int>(d.morphisms.size());
  std::vector<std::vector<int>> by_endpoints(elements.size() * elements.size());
  for (int i = 0; i < m; ++i) {
    by_endpoints[d.morphisms[i].dom * elements.size() + d.morphisms[i].cod].push_back(i);
  }
  for (int g = 0; g < m; ++g) {
    for (int f = 0; f < m; ++f) {
      if (d.morphisms[f].cod != d.morphisms[g].dom) continue;
      const int h = c.compose(morphism_of[g], morphism_of[f]);
      for (int k : by_endpoints[d.morphisms[f].dom * elements.size() + d.morphisms[g].cod]) {
        if (morphism_of[k] == h) {
          d.composites.push_back({g, f, k});
          break;
        }
      }
    }
  }
  auto category = make_category(d);
  std::vector<int> morphism_map = morphism_of;
  FinFunctor projection(category, base, std::move(object_map), std::move(morphism_map), "pi");
  return ElementsCategory{category, std::move(projection), std::move(elements),
                          std::move(morphism_of)};
}

CofilteredReport check_cofiltered(const FinCategory& c) {
  CofilteredReport report;
  const int n = c.object_count();
  report.nonempty = n > 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      bool found = false;
      for (int k = 0; k < n && !found; ++k) {
        found = !c.hom(k, i).empty() && !c.hom(k, j).empty();
        if (found) report.spans.push_back({i, j, k});
      }
      if (!found) report.missing_span.emplace_back(i, j);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const auto hom = c.hom(i, j);
      for (std::size_t p = 0; p < hom.size(); ++p) {
        for (std::size_t q = p + 1; q < hom.size(); ++q) {
          bool found = false;
          for (int w : c.into(i)) {
            if (c.compose(hom[p], w) == c.compose(hom[q], w)) {
              found = true;
              report.equalizers.push_back({hom[p], hom[q], w});
              break;
            }
          }
          if (!found) report.unequalized_pair.emplace_back(hom[p], hom[q]);
        }
      }
    }
  }
  return report;
}

}  // namespace toposkit
