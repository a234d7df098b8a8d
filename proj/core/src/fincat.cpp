#include "toposkit/fincat.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "toposkit/error.hpp"

namespace toposkit {

void CategoryData::complete_identities() {
  identities.resize(objects.size(), -1);
  for (std::size_t a = 0; a < objects.size(); ++a) {
    if (identities[a] >= 0) continue;
    identities[a] = static_cast<int>(morphisms.size());
    morphisms.push_back({"id_" + objects[a], static_cast<int>(a), static_cast<int>(a)});
  }
  std::set<std::pair<int, int>> listed;
  for (const auto& c : composites) listed.emplace(c.g, c.f);
  for (int m = 0; m < static_cast<int>(morphisms.size()); ++m) {
    const auto& spec = morphisms[m];
    if (spec.dom < 0 || spec.cod < 0 || spec.dom >= static_cast<int>(objects.size()) ||
        spec.cod >= static_cast<int>(objects.size())) {
      continue;
    }
    const int id_cod = identities[spec.cod];
    const int id_dom = identities[spec.dom];
    if (listed.emplace(id_cod, m).second) composites.push_back({id_cod, m, m});
    if (listed.emplace(m, id_dom).second) composites.push_back({m, id_dom, m});
  }
}

std::string ValidationReport::summary(std::size_t max_lines) const {
  if (ok()) return "ok";
  std::ostringstream out;
  out << violations.size() << " violation(s)";
  for (std::size_t i = 0; i < violations.size() && i < max_lines; ++i) {
    out << "\n  " << violations[i].law << ": " << violations[i].witness;
  }
  if (violations.size() > max_lines) out << "\n  ...";
  return out.str();
}

ValidationReport validate_category(const CategoryData& raw) {
  ValidationReport report;
  auto add = [&](std::string law, std::string witness) {
    report.violations.push_back({std::move(law), std::move(witness)});
  };
  const int n = static_cast<int>(raw.objects.size());
  const int m = static_cast<int>(raw.morphisms.size());
  auto mname = [&](int i) {
    return (i >= 0 && i < m) ? raw.morphisms[i].name : "#" + std::to_string(i);
  };

  std::set<std::string> seen;
  for (const auto& o : raw.objects) {
    if (!seen.insert(o).second) add("duplicate object", o);
  }
  seen.clear();
  bool shape_ok = true;
  for (int i = 0; i < m; ++i) {
    const auto& spec = raw.morphisms[i];
    if (!seen.insert(spec.name).second) add("duplicate morphism", spec.name);
    if (spec.dom < 0 || spec.dom >= n || spec.cod < 0 || spec.cod >= n) {
      add("morphism endpoint out of range", spec.name);
      shape_ok = false;
    }
  }
  if (static_cast<int>(raw.identities.size()) != n) {
    add("identity table size", std::to_string(raw.identities.size()) + " entries for " +
                                   std::to_string(n) + " objects");
    return report;
  }
  if (!shape_ok) return report;
  for (int a = 0; a < n; ++a) {
    const int id = raw.identities[a];
    if (id < 0 || id >= m) {
      add("missing identity", raw.objects[a]);
      shape_ok = false;
    } else if (raw.morphisms[id].dom != a || raw.morphisms[id].cod != a) {
      add("identity has wrong endpoints", mname(id) + " for " + raw.objects[a]);
      shape_ok = false;
    }
  }

  std::vector<int> table(static_cast<std::size_t>(m) * m, -1);
  for (const auto& c : raw.composites) {
    if (c.g < 0 || c.g >= m || c.f < 0 || c.f >= m || c.h < 0 || c.h >= m) {
      add("composite references unknown morphism",
          mname(c.g) + " . " + mname(c.f) + " = " + mname(c.h));
      continue;
    }
    const auto& g = raw.morphisms[c.g];
    const auto& f = raw.morphisms[c.f];
    const auto& h = raw.morphisms[c.h];
    if (f.cod != g.dom) {
      add("composite on non-composable pair", g.name + " . " + f.name);
      continue;
    }
    if (h.dom != f.dom || h.cod != g.cod) {
      add("composite has wrong endpoints", g.name + " . " + f.name + " = " + h.name);
      continue;
    }
    int& slot = table[static_cast<std::size_t>(c.g) * m + c.f];
    if (slot >= 0 && slot != c.h) {
      add("conflicting composite",
          g.name + " . " + f.name + " = " + mname(slot) + " and " + h.name);
      continue;
    }
    slot = c.h;
  }
  auto at = [&](int g, int f) { return table[static_cast<std::size_t>(g) * m + f]; };

  for (int g = 0; g < m; ++g) {
    for (int f = 0; f < m; ++f) {
      if (raw.morphisms[f].cod == raw.morphisms[g].dom && at(g, f) < 0) {
        add("missing composite", mname(g) + " . " + mname(f));
      }
    }
  }
  if (!shape_ok) return report;
  for (int f = 0; f < m; ++f) {
    const int left = at(raw.identities[raw.morphisms[f].cod], f);
    const int right = at(f, raw.identities[raw.morphisms[f].dom]);
    if (left >= 0 && left != f) add("left identity law", "id . " + mname(f) + " = " + mname(left));
    if (right >= 0 && right != f) add("right identity law", mname(f) + " . id = " + mname(right));
  }
  for (int h = 0; h < m; ++h) {
    for (int g = 0; g < m; ++g) {
      if (raw.morphisms[h].dom != raw.morphisms[g].cod) continue;
      const int hg = at(h, g);
      if (hg < 0) continue;
      for (int f = 0; f < m; ++f) {
        if (raw.morphisms[g].dom != raw.morphisms[f].cod) continue;
        const int gf = at(g, f);
        if (gf < 0) continue;
        const int x = at(h, gf);
        const int y = at(hg, f);
        if (x >= 0 && y >= 0 && x != y) {
          add("associativity", mname(h) + " . (" + mname(g) + " . " + mname(f) + ") = " +
                                   mname(x) + " but (" + mname(h) + " . " + mname(g) + ") . " +
                                   mname(f) + " = " + mname(y));
        }
      }
    }
  }
  return report;
}

FinCategory::FinCategory(const CategoryData& raw) {
  const auto report = validate_category(raw);
  if (!report.ok()) {
    throw MalformedInput("category '" + raw.name + "': " + report.summary());
  }
  name_ = raw.name;
  objects_ = raw.objects;
  morphisms_ = raw.morphisms;
  identities_ = raw.identities;
  const int n = object_count();
  const int m = morphism_count();
  composition_.assign(static_cast<std::size_t>(m) * m, -1);
  for (const auto& c : raw.composites) composition_[static_cast<std::size_t>(c.g) * m + c.f] = c.h;
  homs_.assign(static_cast<std::size_t>(n) * n, {});
  into_.assign(n, {});
  out_of_.assign(n, {});
  hom_pos_.assign(m, 0);
  for (int i = 0; i < m; ++i) {
    auto& hom = homs_[dom(i) * n + cod(i)];
    hom_pos_[i] = static_cast<int>(hom.size());
    hom.push_back(i);
    into_[cod(i)].push_back(i);
    out_of_[dom(i)].push_back(i);
  }
}

int FinCategory::compose(int g, int f) const {
  const int h = composition_[static_cast<std::size_t>(g) * morphism_count() + f];
  if (h < 0) {
    throw PreconditionFailed("cannot compose " + morphism_name(g) + " . " + morphism_name(f) +
                             " in " + name_);
  }
  return h;
}

std::optional<int> FinCategory::find_object(std::string_view name) const {
  for (int a = 0; a < object_count(); ++a) {
    if (objects_[a] == name) return a;
  }
  return std::nullopt;
}

std::optional<int> FinCategory::find_morphism(std::string_view name) const {
  for (int i = 0; i < morphism_count(); ++i) {
    if (morphisms_[i].name == name) return i;
  }
  return std::nullopt;
}

CategoryData FinCategory::data() const {
  CategoryData d;
  d.name = name_;
  d.objects = objects_;
  d.morphisms = morphisms_;
  d.identities = identities_;
  const int m = morphism_count();
  for (int g = 0; g < m; ++g) {
    for (int f = 0; f < m; ++f) {
      const int h = composition_[static_cast<std::size_t>(g) * m + f];
      if (h >= 0) d.composites.push_back({g, f, h});
    }
  }
  return d;
}

bool operator==(const FinCategory& x, const FinCategory& y) {
  if (x.name_ != y.name_ || x.objects_ != y.objects_ || x.identities_ != y.identities_ ||
      x.composition_ != y.composition_ || x.morphisms_.size() != y.morphisms_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < x.morphisms_.size(); ++i) {
    const auto& a = x.morphisms_[i];
    const auto& b = y.morphisms_[i];
    if (a.name != b.name || a.dom != b.dom || a.cod != b.cod) return false;
  }
  return true;
}

CategoryPtr make_category(const CategoryData& raw) {
  return std::make_shared<const FinCategory>(raw);
}

CategoryPtr opposite(const CategoryPtr& c) {
  CategoryData d = c->data();
  const std::string suffix = "^op";
  if (d.name.size() >= suffix.size() &&
      d.name.compare(d.name.size() - suffix.size(), suffix.size(), suffix) == 0) {
    d.name.resize(d.name.size() - suffix.size());
  } else {
    d.name += suffix;
  }
  for (auto& spec : d.morphisms) std::swap(spec.dom, spec.cod);
  for (auto& comp : d.composites) std::swap(comp.g, comp.f);
  return make_category(d);
}

bool same_category(const CategoryPtr& x, const CategoryPtr& y) {
  return x == y || (x && y && *x == *y);
}

ValidationReport validate_functor(const FinCategory& source, const FinCategory& target,
                                  const std::vector<int>& object_map,
                                  const std::vector<int>& morphism_map) {
  ValidationReport report;
  auto add = [&](std::string law, std::string witness) {
    report.violations.push_back({std::move(law), std::move(witness)});
  };
  if (static_cast<int>(object_map.size()) != source.object_count() ||
      static_cast<int>(morphism_map.size()) != source.morphism_count()) {
    add("table size", "object/morphism map does not cover the source");
    return report;
  }
  for (int a = 0; a < source.object_count(); ++a) {
    if (object_map[a] < 0 || object_map[a] >= target.object_count()) {
      add("object image out of range", source.object_name(a));
      return report;
    }
  }
  for (int f = 0; f < source.morphism_count(); ++f) {
    if (morphism_map[f] < 0 || morphism_map[f] >= target.morphism_count()) {
      add("morphism image out of range", source.morphism_name(f));
      return report;
    }
  }
  for (int f = 0; f < source.morphism_count(); ++f) {
    const int image = morphism_map[f];
    if (target.dom(image) != object_map[source.dom(f)]) {
      add("domain not preserved", source.morphism_name(f));
    }
    if (target.cod(image) != object_map[source.cod(f)]) {
      add("codomain not preserved", source.morphism_name(f));
    }
  }
  if (!report.ok()) return report;
  for (int a = 0; a < source.object_count(); ++a) {
    if (morphism_map[source.identity(a)] != target.identity(object_map[a])) {
      add("identity not preserved", source.object_name(a));
    }
  }
  for (int g = 0; g < source.morphism_count(); ++g) {
    for (int f : source.into(source.dom(g))) {
      const int lhs = morphism_map[source.compose(g, f)];
      const int rhs = target.compose(morphism_map[g], morphism_map[f]);
      if (lhs != rhs) {
        add("composite not preserved", source.morphism_name(g) + " . " + source.morphism_name(f));
      }
    }
  }
  return report;
}

FinFunctor::FinFunctor(CategoryPtr source, CategoryPtr target, std::vector<int> object_map,
                       std::vector<int> morphism_map, std::string name)
    : name_(std::move(name)),
      source_(std::move(source)),
      target_(std::move(target)),
      object_map_(std::move(object_map)),
      morphism_map_(std::move(morphism_map)) {
  const auto report = validate_functor(*source_, *target_, object_map_, morphism_map_);
  if (!report.ok()) throw MalformedInput("functor '" + name_ + "': " + report.summary());
}

bool FinFunctor::is_full() const {
  for (int a = 0; a < source_->object_count(); ++a) {
    for (int b = 0; b < source_->object_count(); ++b) {
      std::set<int> images;
      for (int f : source_->hom(a, b)) images.insert(morphism_map_[f]);
      if (images.size() != target_->hom(object_map_[a], object_map_[b]).size()) return false;
    }
  }
  return true;
}

bool FinFunctor::is_faithful() const {
  for (int a = 0; a < source_->object_count(); ++a) {
    for (int b = 0; b < source_->object_count(); ++b) {
      std::set<int> images;
      for (int f : source_->hom(a, b)) images.insert(morphism_map_[f]);
      if (images.size() != source_->hom(a, b).size()) return false;
    }
  }
  return true;
}

bool operator==(const FinFunctor& x, const FinFunctor& y) {
  return same_category(x.source_, y.source_) && same_category(x.target_, y.target_) &&
         x.object_map_ == y.object_map_ && x.morphism_map_ == y.morphism_map_;
}

FinFunctor identity_functor(const CategoryPtr& c) {
  std::vector<int> objects(c->object_count());
  std::vector<int> morphisms(c->morphism_count());
  for (int a = 0; a < c->object_count(); ++a) objects[a] = a;
  for (int f = 0; f < c->morphism_count(); ++f) morphisms[f] = f;
  return FinFunctor(c, c, std::move(objects), std::move(morphisms), "id_" + c->name());
}

FinFunctor compose(const FinFunctor& g, const FinFunctor& f) {
  if (!same_category(f.target(), g.source())) {
    throw PreconditionFailed("functor composite: target of " + f.name() + " is not source of " +
                             g.name());
  }
  std::vector<int> objects(f.source()->object_count());
  std::vector<int> morphisms(f.source()->morphism_count());
  for (std::size_t a = 0; a < objects.size(); ++a) objects[a] = g.object(f.object(a));
  for (std::size_t m = 0; m < morphisms.size(); ++m) morphisms[m] = g.morphism(f.morphism(m));
  return FinFunctor(f.source(), g.target(), std::move(objects), std::move(morphisms),
                    g.name() + "." + f.name());
}

NatTransform::NatTransform(FinFunctor source, FinFunctor target, std::vector<int> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  const auto& c = *source_.source();
  const auto& d = *source_.target();
  if (!same_category(source_.source(), target_.source()) ||
      !same_category(source_.target(), target_.target())) {
    throw MalformedInput("natural transformation between functors with different endpoints");
  }
  if (static_cast<int>(components_.size()) != c.object_count()) {
    throw MalformedInput("natural transformation: component table size");
  }
  for (int a = 0; a < c.object_count(); ++a) {
    const int k = components_[a];
    if (k < 0 || k >= d.morphism_count() || d.dom(k) != source_.object(a) ||
        d.cod(k) != target_.object(a)) {
      throw MalformedInput("natural transformation: bad component at " + c.object_name(a));
    }
  }
  for (int f = 0; f < c.morphism_count(); ++f) {
    const int lhs = d.compose(components_[c.cod(f)], source_.morphism(f));
    const int rhs = d.compose(target_.morphism(f), components_[c.dom(f)]);
    if (lhs != rhs) {
      throw MalformedInput("natural transformation: naturality fails at " + c.morphism_name(f));
    }
  }
}

std::optional<int> find_terminal(const FinCategory& c) {
  for (int t = 0; t < c.object_count(); ++t) {
    bool terminal = true;
    for (int x = 0; x < c.object_count() && terminal; ++x) terminal = c.hom(x, t).size() == 1;
    if (terminal) return t;
  }
  return std::nullopt;
}

std::optional<ProductCone> find_product(const FinCategory& c, int a, int b) {
  for (int p = 0; p < c.object_count(); ++p) {
    for (int p1 : c.hom(p, a)) {
      for (int p2 : c.hom(p, b)) {
        bool universal = true;
        for (int x = 0; x < c.object_count() && universal; ++x) {
          for (int f : c.hom(x, a)) {
            for (int g : c.hom(x, b)) {
              int count = 0;
              for (int h : c.hom(x, p)) {
                if (c.compose(p1, h) == f && c.compose(p2, h) == g) ++count;
              }
              if (count != 1) universal = false;
            }
          }
        }
        if (universal) return ProductCone{p, p1, p2};
      }
    }
  }
  return std::nullopt;
}

std::optional<EqualizerCone> find_equalizer(const FinCategory& c, int u, int v) {
  const int a = c.dom(u);
  for (int e = 0; e < c.object_count(); ++e) {
    for (int k : c.hom(e, a)) {
      if (c.compose(u, k) != c.compose(v, k)) continue;
      bool universal = true;
      for (int x = 0; x < c.object_count() && universal; ++x) {
        for (int h : c.hom(x, a)) {
          if (c.compose(u, h) != c.compose(v, h)) continue;
          int count = 0;
          for (int m : c.hom(x, e)) {
            if (c.compose(k, m) == h) ++count;
          }
          if (count != 1) universal = false;
        }
      }
      if (universal) return EqualizerCone{e, k};
    }
  }
  return std::nullopt;
}

bool has_finite_limits(const FinCategory& c, std::string* witness) {
  auto fail = [&](std::string why) {
    if (witness) *witness = std::move(why);
    return false;
  };
  if (!find_terminal(c)) return fail("no terminal object");
  for (int a = 0; a < c.object_count(); ++a) {
    for (int b = 0; b < c.object_count(); ++b) {
      if (!find_product(c, a, b)) {
        return fail("no product of " + c.object_name(a) + " and " + c.object_name(b));
      }
    }
  }
  for (int u = 0; u < c.morphism_count(); ++u) {
    for (int v : c.hom(c.dom(u), c.cod(u))) {
      if (!find_equalizer(c, u, v)) {
        return fail("no equalizer of " + c.morphism_name(u) + " and " + c.morphism_name(v));
      }
    }
  }
  return true;
}

}  // namespace toposkit
