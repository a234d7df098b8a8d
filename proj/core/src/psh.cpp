#include "toposkit/psh.hpp"

#include <algorithm>
#include <numeric>

#include "toposkit/catalog.hpp"
#include "toposkit/error.hpp"

namespace toposkit {

namespace {

bool same_presheaf(const PresheafPtr& x, const PresheafPtr& y) { return x == y || *x == *y; }

std::string describe(const Presheaf& p) {
  return p.name().empty() ? "presheaf over " + p.base()->name() : "'" + p.name() + "'";
}

}  // namespace

Presheaf::Presheaf(CategoryPtr base, std::vector<int> sizes, std::vector<std::vector<int>> actions,
                   std::vector<std::vector<std::string>> labels, std::string name)
    : base_(std::move(base)),
      name_(std::move(name)),
      sizes_(std::move(sizes)),
      actions_(std::move(actions)),
      labels_(std::move(labels)) {
  if (!base_) throw MalformedInput("presheaf without base category");
  const auto& c = *base_;
  auto fail = [&](const std::string& why) {
    throw MalformedInput("presheaf " + describe(*this) + ": " + why);
  };
  if (static_cast<int>(sizes_.size()) != c.object_count()) fail("set table size");
  for (int s : sizes_) {
    if (s < 0) fail("negative set size");
  }
  if (static_cast<int>(actions_.size()) != c.morphism_count()) fail("action table size");
  for (int m = 0; m < c.morphism_count(); ++m) {
    auto& act = actions_[m];
    if (c.is_identity(m) && act.empty()) {
      act.resize(sizes_[c.dom(m)]);
      std::iota(act.begin(), act.end(), 0);
    }
    if (static_cast<int>(act.size()) != sizes_[c.cod(m)]) {
      fail("action of " + c.morphism_name(m) + " is not defined on all of P(" +
           c.object_name(c.cod(m)) + ")");
    }
    for (int v : act) {
      if (v < 0 || v >= sizes_[c.dom(m)]) fail("action of " + c.morphism_name(m) + " out of range");
    }
    if (c.is_identity(m)) {
      for (int x = 0; x < static_cast<int>(act.size()); ++x) {
        if (act[x] != x) fail("identity " + c.morphism_name(m) + " does not act trivially");
      }
    }
  }
  for (int g = 0; g < c.morphism_count(); ++g) {
    for (int f : c.into(c.dom(g))) {
      const int gf = c.compose(g, f);
      for (int y = 0; y < sizes_[c.cod(g)]; ++y) {
        if (actions_[gf][y] != actions_[f][actions_[g][y]]) {
          fail("functoriality fails: P(" + c.morphism_name(g) + " . " + c.morphism_name(f) +
               ") != P(" + c.morphism_name(f) + ") P(" + c.morphism_name(g) + ")");
        }
      }
    }
  }
  if (!labels_.empty()) {
    if (static_cast<int>(labels_.size()) != c.object_count()) fail("label table size");
    for (int a = 0; a < c.object_count(); ++a) {
      if (static_cast<int>(labels_[a].size()) != sizes_[a]) fail("label table size");
    }
  }
}

Presheaf Presheaf::named(std::string name) const {
  Presheaf copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Presheaf Presheaf::with_labels(std::vector<std::vector<std::string>> labels) const {
  return Presheaf(base_, sizes_, actions_, std::move(labels), name_);
}

int Presheaf::total_size() const { return std::accumulate(sizes_.begin(), sizes_.end(), 0); }

int Presheaf::max_size() const {
  return sizes_.empty() ? 0 : *std::max_element(sizes_.begin(), sizes_.end());
}

std::string Presheaf::label(int a, int x) const {
  return labels_.empty() ? std::to_string(x) : labels_[a][x];
}

std::optional<int> Presheaf::find_label(int a, std::string_view label) const {
  for (int x = 0; x < sizes_[a]; ++x) {
    if (this->label(a, x) == label) return x;
  }
  return std::nullopt;
}

bool operator==(const Presheaf& x, const Presheaf& y) {
  return same_category(x.base_, y.base_) && x.sizes_ == y.sizes_ && x.actions_ == y.actions_;
}

PresheafMap::PresheafMap(PresheafPtr source, PresheafPtr target, Components components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  if (!same_category(source_->base(), target_->base())) {
    throw MalformedInput("presheaf map between different base categories");
  }
  const auto& c = *source_->base();
  auto fail = [&](const std::string& why) {
    throw MalformedInput("presheaf map " + describe(*source_) + " -> " + describe(*target_) +
                         ": " + why);
  };
  if (static_cast<int>(components_.size()) != c.object_count()) fail("component table size");
  for (int a = 0; a < c.object_count(); ++a) {
    if (static_cast<int>(components_[a].size()) != source_->size(a)) {
      fail("component at " + c.object_name(a) + " has the wrong size");
    }
    for (int v : components_[a]) {
      if (v < 0 || v >= target_->size(a)) fail("component at " + c.object_name(a) + " out of range");
    }
  }
  for (int m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m)) continue;
    const int a = c.dom(m);
    const int b = c.cod(m);
    for (int x = 0; x < source_->size(b); ++x) {
      if (components_[a][source_->act(m, x)] != target_->act(m, components_[b][x])) {
        fail("naturality fails along " + c.morphism_name(m));
      }
    }
  }
}

PresheafMap::PresheafMap(const Presheaf& source, const Presheaf& target, Components components)
    : PresheafMap(share(source), share(target), std::move(components)) {}

bool operator==(const PresheafMap& x, const PresheafMap& y) {
  return x.components_ == y.components_ && same_presheaf(x.source_, y.source_) &&
         same_presheaf(x.target_, y.target_);
}

Presheaf terminal_presheaf(const CategoryPtr& base) {
  std::vector<std::vector<int>> actions(base->morphism_count(), std::vector<int>{0});
  return Presheaf(base, std::vector<int>(base->object_count(), 1), std::move(actions), {}, "1");
}

Presheaf initial_presheaf(const CategoryPtr& base) {
  std::vector<std::vector<int>> actions(base->morphism_count());
  return Presheaf(base, std::vector<int>(base->object_count(), 0), std::move(actions), {}, "0");
}

Presheaf representable(const CategoryPtr& base, int a) {
  const auto& c = *base;
  std::vector<int> sizes(c.object_count());
  std::vector<std::vector<std::string>> labels(c.object_count());
  for (int x = 0; x < c.object_count(); ++x) {
    sizes[x] = static_cast<int>(c.hom(x, a).size());
    for (int g : c.hom(x, a)) labels[x].push_back(c.morphism_name(g));
  }
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int f = 0; f < c.morphism_count(); ++f) {
    for (int g : c.hom(c.cod(f), a)) actions[f].push_back(c.hom_position(c.compose(g, f)));
  }
  return Presheaf(base, std::move(sizes), std::move(actions), std::move(labels),
                  "y(" + c.object_name(a) + ")");
}

Presheaf constant_presheaf(const CategoryPtr& base, int n) {
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> actions(base->morphism_count(), id);
  return Presheaf(base, std::vector<int>(base->object_count(), n), std::move(actions), {},
                  "const" + std::to_string(n));
}

PresheafMap identity_map(const PresheafPtr& x) {
  Components comps(x->base()->object_count());
  for (int a = 0; a < x->base()->object_count(); ++a) {
    comps[a].resize(x->size(a));
    std::iota(comps[a].begin(), comps[a].end(), 0);
  }
  return PresheafMap(x, x, std::move(comps));
}

PresheafMap identity_map(const Presheaf& x) { return identity_map(share(x)); }

PresheafMap compose(const PresheafMap& g, const PresheafMap& f) {
  if (!same_presheaf(f.target_ptr(), g.source_ptr())) {
    throw PreconditionFailed("cannot compose presheaf maps: target of the first is not the " +
                             std::string("source of the second"));
  }
  Components comps(f.components().size());
  for (std::size_t a = 0; a < comps.size(); ++a) {
    comps[a].reserve(f.component(a).size());
    for (int x : f.component(a)) comps[a].push_back(g(static_cast<int>(a), x));
  }
  return PresheafMap(f.source_ptr(), g.target_ptr(), std::move(comps));
}

PresheafMap terminal_map(const Presheaf& x) {
  Components comps(x.base()->object_count());
  for (int a = 0; a < x.base()->object_count(); ++a) comps[a].assign(x.size(a), 0);
  return PresheafMap(x, terminal_presheaf(x.base()), std::move(comps));
}

PresheafMap initial_map(const Presheaf& x) {
  return PresheafMap(initial_presheaf(x.base()), x, Components(x.base()->object_count()));
}

PresheafMap inverse(const PresheafMap& iso) {
  if (!is_iso(iso)) throw PreconditionFailed("inverse of a map that is not an isomorphism");
  Components comps(iso.components().size());
  for (std::size_t a = 0; a < comps.size(); ++a) {
    comps[a].resize(iso.component(a).size());
    for (std::size_t x = 0; x < comps[a].size(); ++x) comps[a][iso.component(a)[x]] = static_cast<int>(x);
  }
  return PresheafMap(iso.target_ptr(), iso.source_ptr(), std::move(comps));
}

MapClass classify_map(const PresheafMap& h) {
  MapClass result{true, true};
  for (int a = 0; a < h.base()->object_count(); ++a) {
    std::vector<bool> hit(h.target().size(a));
    for (int v : h.component(a)) {
      if (hit[v]) result.mono = false;
      hit[v] = true;
    }
    if (std::find(hit.begin(), hit.end(), false) != hit.end()) result.epi = false;
  }
  return result;
}

EpiMono factor_epi_mono(const PresheafMap& h) {
  const auto& c = *h.base();
  const auto& y = h.target();
  std::vector<std::vector<int>> image(c.object_count());
  std::vector<std::vector<int>> position(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    std::vector<bool> hit(y.size(a));
    for (int v : h.component(a)) hit[v] = true;
    position[a].assign(y.size(a), -1);
    for (int v = 0; v < y.size(a); ++v) {
      if (hit[v]) {
        position[a][v] = static_cast<int>(image[a].size());
        image[a].push_back(v);
      }
    }
  }
  std::vector<int> sizes(c.object_count());
  std::vector<std::vector<std::string>> labels;
  if (y.has_labels()) labels.resize(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    sizes[a] = static_cast<int>(image[a].size());
    if (y.has_labels()) {
      for (int v : image[a]) labels[a].push_back(y.label(a, v));
    }
  }
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    for (int v : image[c.cod(m)]) actions[m].push_back(position[c.dom(m)][y.act(m, v)]);
  }
  auto im = share(Presheaf(h.base(), sizes, std::move(actions), std::move(labels), "im"));
  Components epi(c.object_count());
  Components mono(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    for (int v : h.component(a)) epi[a].push_back(position[a][v]);
    mono[a] = image[a];
  }
  return EpiMono{PresheafMap(h.source_ptr(), im, std::move(epi)),
                 PresheafMap(im, h.target_ptr(), std::move(mono))};
}

namespace {

// Backtracking search for natural transformations with forward propagation:
// fixing alpha_b(x) forces alpha_a(X(m)(x)) = Y(m)(alpha_b(x)) for every m : a -> b.
class MapSearcher {
 public:
  MapSearcher(const Presheaf& x, const Presheaf& y, MapSearch options,
              const std::function<bool(const Components&)>& visit)
      : x_(x), y_(y), c_(*x.base()), options_(options), visit_(visit), budget_("map search") {
    values_.resize(c_.object_count());
    used_.resize(c_.object_count());
    for (int a = 0; a < c_.object_count(); ++a) {
      values_[a].assign(x.size(a), -1);
      used_[a].assign(y.size(a), false);
      for (int i = 0; i < x.size(a); ++i) order_.emplace_back(a, i);
    }
  }

  void run() {
    for (int a = 0; a < c_.object_count(); ++a) {
      if (x_.size(a) > 0 && y_.size(a) == 0) return;
      if (options_.injective && x_.size(a) > y_.size(a)) return;
    }
    search(0);
  }

 private:
  bool assign(int a, int i, int v) {
    std::vector<std::pair<int, int>> queue{{a, i}};
    if (!set(a, i, v)) return false;
    while (!queue.empty()) {
      auto [b, x] = queue.back();
      queue.pop_back();
      const int value = values_[b][x];
      for (int m : c_.into(b)) {
        if (c_.is_identity(m)) continue;
        const int d = c_.dom(m);
        const int xs = x_.act(m, x);
        const int forced = y_.act(m, value);
        const int current = values_[d][xs];
        if (current < 0) {
          if (!set(d, xs, forced)) return false;
          queue.emplace_back(d, xs);
        } else if (current != forced) {
          return false;
        }
      }
    }
    return true;
  }

  bool set(int a, int i, int v) {
    if (options_.injective) {
      if (used_[a][v]) return false;
      used_[a][v] = true;
    }
    values_[a][i] = v;
    trail_.emplace_back(a, i);
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [a, i] = trail_.back();
      trail_.pop_back();
      if (options_.injective) used_[a][values_[a][i]] = false;
      values_[a][i] = -1;
    }
  }

  void search(std::size_t pos) {
    while (pos < order_.size() && values_[order_[pos].first][order_[pos].second] >= 0) ++pos;
    if (pos == order_.size()) {
      ++found_;
      if (!visit_(values_)) stopped_ = true;
      if (options_.limit && found_ >= options_.limit) stopped_ = true;
      return;
    }
    const auto [a, i] = order_[pos];
    for (int v = 0; v < y_.size(a) && !stopped_; ++v) {
      budget_.tick();
      const std::size_t mark = trail_.size();
      if (assign(a, i, v)) search(pos + 1);
      undo(mark);
    }
  }

  const Presheaf& x_;
  const Presheaf& y_;
  const FinCategory& c_;
  MapSearch options_;
  const std::function<bool(const Components&)>& visit_;
  Budget budget_;
  Components values_;
  std::vector<std::vector<bool>> used_;
  std::vector<std::pair<int, int>> order_;
  std::vector<std::pair<int, int>> trail_;
  std::size_t found_ = 0;
  bool stopped_ = false;
};

}  // namespace

void for_each_map(const Presheaf& x, const Presheaf& y,
                  const std::function<bool(const Components&)>& visit, MapSearch options) {
  if (!same_category(x.base(), y.base())) {
    throw PreconditionFailed("map search between presheaves over different bases");
  }
  MapSearcher searcher(x, y, options, visit);
  searcher.run();
}

std::vector<PresheafMap> enumerate_maps(const PresheafPtr& x, const PresheafPtr& y,
                                        MapSearch options) {
  std::vector<PresheafMap> maps;
  for_each_map(
      *x, *y,
      [&](const Components& c) {
        maps.emplace_back(x, y, c);
        return true;
      },
      options);
  return maps;
}

std::vector<PresheafMap> enumerate_maps(const Presheaf& x, const Presheaf& y, MapSearch options) {
  return enumerate_maps(share(x), share(y), options);
}

std::size_t count_maps(const Presheaf& x, const Presheaf& y) {
  std::size_t n = 0;
  for_each_map(x, y, [&](const Components&) {
    ++n;
    return true;
  });
  return n;
}

std::optional<PresheafMap> find_isomorphism(const Presheaf& x, const Presheaf& y) {
  if (!same_category(x.base(), y.base()) || x.sizes() != y.sizes()) return std::nullopt;
  std::optional<PresheafMap> result;
  auto px = share(x);
  auto py = share(y);
  for_each_map(
      x, y,
      [&](const Components& c) {
        result.emplace(px, py, c);
        return false;
      },
      MapSearch{.injective = true, .limit = 1});
  return result;
}

void validate_diagram(const Diagram& d) {
  const auto& shape = *d.shape;
  if (static_cast<int>(d.objects.size()) != shape.object_count() ||
      static_cast<int>(d.arrows.size()) != shape.morphism_count()) {
    throw MalformedInput("diagram table size");
  }
  for (const auto& o : d.objects) {
    if (!same_category(o->base(), d.base)) throw MalformedInput("diagram object over another base");
  }
  for (int u = 0; u < shape.morphism_count(); ++u) {
    const auto& arrow = d.arrows[u];
    if (!(arrow.source() == *d.objects[shape.dom(u)]) ||
        !(arrow.target() == *d.objects[shape.cod(u)])) {
      throw MalformedInput("diagram arrow " + shape.morphism_name(u) + " has the wrong endpoints");
    }
    if (shape.is_identity(u) && !(arrow == identity_map(d.objects[shape.dom(u)]))) {
      throw MalformedInput("diagram sends identity " + shape.morphism_name(u) + " elsewhere");
    }
  }
  for (int v = 0; v < shape.morphism_count(); ++v) {
    for (int u : shape.into(shape.dom(v))) {
      if (!(d.arrows[shape.compose(v, u)] == compose(d.arrows[v], d.arrows[u]))) {
        throw MalformedInput("diagram is not functorial at " + shape.morphism_name(v) + " . " +
                             shape.morphism_name(u));
      }
    }
  }
}

Diagram discrete_diagram(const CategoryPtr& base, const std::vector<PresheafPtr>& objects) {
  Diagram d;
  d.base = base;
  d.shape = catalog::discrete(static_cast<int>(objects.size()));
  d.objects = objects;
  for (const auto& o : objects) d.arrows.push_back(identity_map(o));
  return d;
}

Diagram parallel_pair_diagram(const PresheafMap& f, const PresheafMap& g) {
  static const CategoryPtr shape = catalog::parallel_pair();
  if (!(f.source() == g.source()) || !(f.target() == g.target())) {
    throw PreconditionFailed("parallel pair with different endpoints");
  }
  Diagram d;
  d.base = f.base();
  d.shape = shape;
  d.objects = {f.source_ptr(), f.target_ptr()};
  d.arrows = {identity_map(f.source_ptr()), identity_map(f.target_ptr()), f,
              PresheafMap(f.source_ptr(), f.target_ptr(), g.components())};
  return d;
}

Diagram cospan_diagram(const PresheafMap& f, const PresheafMap& g) {
  static const CategoryPtr shape = catalog::cospan();
  if (!(f.target() == g.target())) throw PreconditionFailed("cospan with different targets");
  Diagram d;
  d.base = f.base();
  d.shape = shape;
  d.objects = {f.source_ptr(), g.source_ptr(), f.target_ptr()};
  d.arrows = {identity_map(f.source_ptr()), identity_map(g.source_ptr()),
              identity_map(f.target_ptr()), f,
              PresheafMap(g.source_ptr(), f.target_ptr(), g.components())};
  return d;
}

int Limit::index_of(int a, const std::vector<int>& tuple) const {
  auto it = index[a].find(tuple);
  return it == index[a].end() ? -1 : it->second;
}

PresheafMap Limit::mediate(const PresheafPtr& z, const std::vector<PresheafMap>& cone) const {
  if (cone.size() != legs.size()) throw PreconditionFailed("cone has the wrong number of legs");
  const int n = z->base()->object_count();
  Components comps(n);
  std::vector<int> tuple(cone.size());
  for (int a = 0; a < n; ++a) {
    for (int x = 0; x < z->size(a); ++x) {
      for (std::size_t i = 0; i < cone.size(); ++i) tuple[i] = cone[i](a, x);
      const int k = index_of(a, tuple);
      if (k < 0) throw PreconditionFailed("cone does not commute with the diagram");
      comps[a].push_back(k);
    }
  }
  return PresheafMap(z, apex, std::move(comps));
}

PresheafMap Colimit::mediate(const PresheafPtr& z, const std::vector<PresheafMap>& cocone) const {
  if (cocone.size() != injections.size()) {
    throw PreconditionFailed("cocone has the wrong number of legs");
  }
  const int n = z->base()->object_count();
  Components comps(n);
  for (int a = 0; a < n; ++a) {
    comps[a].assign(apex->size(a), -1);
    for (std::size_t i = 0; i < cocone.size(); ++i) {
      for (std::size_t x = 0; x < class_of[a][i].size(); ++x) {
        const int k = class_of[a][i][x];
        const int v = cocone[i](a, static_cast<int>(x));
        if (comps[a][k] >= 0 && comps[a][k] != v) {
          throw PreconditionFailed("cocone does not commute with the diagram");
        }
        comps[a][k] = v;
      }
    }
  }
  return PresheafMap(apex, z, std::move(comps));
}

Limit finite_limit(const Diagram& d) {
  validate_diagram(d);
  const auto& c = *d.base;
  const auto& shape = *d.shape;
  const int k = shape.object_count();
  // Constraints checked once both endpoints of a shape arrow are chosen.
  std::vector<std::vector<int>> checks(k);
  for (int u = 0; u < shape.morphism_count(); ++u) {
    if (shape.is_identity(u)) continue;
    checks[std::max(shape.dom(u), shape.cod(u))].push_back(u);
  }
  Limit lim;
  lim.tuples.resize(c.object_count());
  lim.index.resize(c.object_count());
  Budget budget("finite limit");
  for (int a = 0; a < c.object_count(); ++a) {
    std::vector<int> tuple(k);
    std::function<void(int)> fill = [&](int i) {
      if (i == k) {
        lim.index[a].emplace(tuple, static_cast<int>(lim.tuples[a].size()));
        lim.tuples[a].push_back(tuple);
        return;
      }
      for (int x = 0; x < d.objects[i]->size(a); ++x) {
        budget.tick();
        tuple[i] = x;
        bool ok = true;
        for (int u : checks[i]) {
          if (d.arrows[u](a, tuple[shape.dom(u)]) != tuple[shape.cod(u)]) {
            ok = false;
            break;
          }
        }
        if (ok) fill(i + 1);
      }
    };
    fill(0);
  }
  std::vector<int> sizes(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) sizes[a] = static_cast<int>(lim.tuples[a].size());
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    const int from = c.cod(m);
    const int to = c.dom(m);
    for (const auto& t : lim.tuples[from]) {
      std::vector<int> image(k);
      for (int i = 0; i < k; ++i) image[i] = d.objects[i]->act(m, t[i]);
      actions[m].push_back(lim.index_of(to, image));
    }
  }
  lim.apex = share(Presheaf(d.base, std::move(sizes), std::move(actions), {}, "lim"));
  for (int i = 0; i < k; ++i) {
    Components comps(c.object_count());
    for (int a = 0; a < c.object_count(); ++a) {
      for (const auto& t : lim.tuples[a]) comps[a].push_back(t[i]);
    }
    lim.legs.emplace_back(lim.apex, d.objects[i], std::move(comps));
  }
  return lim;
}

Colimit finite_colimit(const Diagram& d) {
  validate_diagram(d);
  const auto& c = *d.base;
  const auto& shape = *d.shape;
  const int k = shape.object_count();
  Colimit col;
  col.representative.resize(c.object_count());
  col.class_of.resize(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    std::vector<int> offset(k + 1, 0);
    for (int i = 0; i < k; ++i) offset[i + 1] = offset[i] + d.objects[i]->size(a);
    std::vector<int> parent(offset[k]);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (int u = 0; u < shape.morphism_count(); ++u) {
      if (shape.is_identity(u)) continue;
      const int i = shape.dom(u);
      const int j = shape.cod(u);
      for (int x = 0; x < d.objects[i]->size(a); ++x) {
        const int p = find(offset[i] + x);
        const int q = find(offset[j] + d.arrows[u](a, x));
        if (p != q) parent[std::max(p, q)] = std::min(p, q);
      }
    }
    std::vector<int> class_id(offset[k], -1);
    col.class_of[a].resize(k);
    for (int i = 0; i < k; ++i) {
      for (int x = 0; x < d.objects[i]->size(a); ++x) {
        const int root = find(offset[i] + x);
        if (class_id[root] < 0) {
          class_id[root] = static_cast<int>(col.representative[a].size());
          col.representative[a].emplace_back(i, x);
        }
        col.class_of[a][i].push_back(class_id[root]);
      }
    }
  }
  std::vector<int> sizes(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) sizes[a] = static_cast<int>(col.representative[a].size());
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    const int from = c.cod(m);
    const int to = c.dom(m);
    for (const auto& [i, x] : col.representative[from]) {
      actions[m].push_back(col.class_of[to][i][d.objects[i]->act(m, x)]);
    }
  }
  col.apex = share(Presheaf(d.base, std::move(sizes), std::move(actions), {}, "colim"));
  for (int i = 0; i < k; ++i) {
    Components comps(c.object_count());
    for (int a = 0; a < c.object_count(); ++a) comps[a] = col.class_of[a][i];
    col.injections.emplace_back(d.objects[i], col.apex, std::move(comps));
  }
  return col;
}

Limit product(const PresheafPtr& x, const PresheafPtr& y) {
  return finite_limit(discrete_diagram(x->base(), {x, y}));
}

Limit product(const Presheaf& x, const Presheaf& y) { return product(share(x), share(y)); }

Limit equalizer(const PresheafMap& f, const PresheafMap& g) {
  return finite_limit(parallel_pair_diagram(f, g));
}

Limit pullback(const PresheafMap& f, const PresheafMap& g) {
  return finite_limit(cospan_diagram(f, g));
}

Colimit coproduct(const PresheafPtr& x, const PresheafPtr& y) {
  return finite_colimit(discrete_diagram(x->base(), {x, y}));
}

Colimit coproduct(const Presheaf& x, const Presheaf& y) { return coproduct(share(x), share(y)); }

Colimit coequalizer(const PresheafMap& f, const PresheafMap& g) {
  return finite_colimit(parallel_pair_diagram(f, g));
}

PresheafMap pairing(const Limit& prod, const PresheafMap& f, const PresheafMap& g) {
  return prod.mediate(f.source_ptr(), {f, g});
}

PresheafMap product_map(const Limit& from, const Limit& to, const PresheafMap& f,
                        const PresheafMap& g) {
  return to.mediate(from.apex, {compose(f, from.legs[0]), compose(g, from.legs[1])});
}

PresheafMap copairing(const Colimit& sum, const PresheafMap& f, const PresheafMap& g) {
  return sum.mediate(f.target_ptr(), {f, g});
}

std::vector<int> flatten(const Components& c) {
  std::vector<int> flat;
  for (const auto& row : c) flat.insert(flat.end(), row.begin(), row.end());
  return flat;
}

Exponential exponential(const PresheafPtr& x, const PresheafPtr& y) {
  if (!same_category(x->base(), y->base())) {
    throw PreconditionFailed("exponential of presheaves over different bases");
  }
  const CategoryPtr& base = x->base();
  const auto& c = *base;
  const int n = c.object_count();
  Exponential e{.base_x = x, .base_y = y, .object = nullptr, .evaluation_domain = {},
                .evaluation = identity_map(x), .elements = {}, .element_index = {}, .stages = {}};
  e.elements.resize(n);
  e.element_index.resize(n);
  for (int a = 0; a < n; ++a) {
    e.stages.push_back(product(share(representable(base, a)), x));
    for_each_map(*e.stages[a].apex, *y, [&](const Components& comps) {
      e.element_index[a].emplace(flatten(comps), static_cast<int>(e.elements[a].size()));
      e.elements[a].push_back(comps);
      return true;
    });
  }
  std::vector<int> sizes(n);
  for (int a = 0; a < n; ++a) sizes[a] = static_cast<int>(e.elements[a].size());
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    const int b = c.dom(m);
    const int a = c.cod(m);
    for (const auto& theta : e.elements[a]) {
      // theta'_c(g, x) = theta_c(m . g, x) for g : c -> b
      Components restricted(n);
      for (int s = 0; s < n; ++s) {
        for (const auto& t : e.stages[b].tuples[s]) {
          const int g = c.hom(s, b)[t[0]];
          const int src = e.stages[a].index_of(s, {c.hom_position(c.compose(m, g)), t[1]});
          restricted[s].push_back(theta[s][src]);
        }
      }
      actions[m].push_back(e.element_index[b].at(flatten(restricted)));
    }
  }
  e.object = share(Presheaf(base, std::move(sizes), std::move(actions), {}, "exp"));
  e.evaluation_domain = product(e.object, x);
  Components ev(n);
  for (int s = 0; s < n; ++s) {
    const int id_pos = c.hom_position(c.identity(s));
    for (const auto& t : e.evaluation_domain.tuples[s]) {
      const auto& theta = e.elements[s][t[0]];
      ev[s].push_back(theta[s][e.stages[s].index_of(s, {id_pos, t[1]})]);
    }
  }
  e.evaluation = PresheafMap(e.evaluation_domain.apex, y, std::move(ev));
  return e;
}

PresheafMap Exponential::transpose(const PresheafPtr& z, const PresheafMap& h) const {
  const auto& c = *z->base();
  const int n = c.object_count();
  const Limit zx = product(z, base_x);
  if (!(h.source() == *zx.apex) || !(h.target() == *base_y)) {
    throw PreconditionFailed("transpose expects a map Z x X -> Y");
  }
  Components comps(n);
  for (int a = 0; a < n; ++a) {
    for (int zv = 0; zv < z->size(a); ++zv) {
      Components theta(n);
      for (int s = 0; s < n; ++s) {
        for (const auto& t : stages[a].tuples[s]) {
          const int g = c.hom(s, a)[t[0]];
          theta[s].push_back(h(s, zx.index_of(s, {z->act(g, zv), t[1]})));
        }
      }
      comps[a].push_back(element_index[a].at(flatten(theta)));
    }
  }
  return PresheafMap(z, object, std::move(comps));
}

PresheafMap Exponential::untranspose(const PresheafMap& k) const {
  if (!(k.target() == *object)) throw PreconditionFailed("untranspose expects a map Z -> Y^X");
  const Limit zx = product(k.source_ptr(), base_x);
  return compose(evaluation, product_map(zx, evaluation_domain, k, identity_map(base_x)));
}

}  // namespace toposkit
