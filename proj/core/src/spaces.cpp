#include "toposkit/spaces.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>

#include "toposkit/catalog.hpp"
#include "toposkit/detail/closed_sets.hpp"
#include "toposkit/error.hpp"

namespace toposkit {

namespace {

bool has(PointSet s, int p) { return (s >> p) & 1; }
PointSet bit(int p) { return PointSet{1} << p; }

bool open_order(PointSet a, PointSet b) {
  const int ca = std::popcount(a);
  const int cb = std::popcount(b);
  return ca != cb ? ca < cb : a < b;
}

std::vector<PointSet> minimal_neighbourhoods(int n, const std::vector<PointSet>& opens, PointSet full) {
  std::vector<PointSet> minimal(n, full);
  for (PointSet u : opens) {
    for (int p = 0; p < n; ++p) {
      if (has(u, p)) minimal[p] &= u;
    }
  }
  return minimal;
}

// All unions of minimal neighbourhoods, i.e. the sets S with p in S => N(p) in S.
std::vector<PointSet> opens_from_neighbourhoods(const std::vector<PointSet>& nbhd) {
  const int n = static_cast<int>(nbhd.size());
  std::vector<std::vector<int>> implies(n);
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q) {
      if (q != p && has(nbhd[p], q)) implies[p].push_back(q);
    }
  }
  std::vector<PointSet> opens;
  Budget budget("open set enumeration");
  detail::for_each_closed_set(n, implies, budget, [&](const std::vector<signed char>& state) {
    PointSet s = 0;
    for (int p = 0; p < n; ++p) {
      if (state[p]) s |= bit(p);
    }
    opens.push_back(s);
  });
  std::sort(opens.begin(), opens.end(), open_order);
  return opens;
}

}  // namespace

FinSpace::FinSpace(std::vector<std::string> points, std::vector<PointSet> opens, std::string name)
    : name_(std::move(name)), points_(std::move(points)) {
  if (points_.size() > 64) throw MalformedInput("space '" + name_ + "': more than 64 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      if (points_[i] == points_[j]) throw MalformedInput("space '" + name_ + "': duplicate point " + points_[i]);
    }
  }
  opens.push_back(0);
  opens.push_back(full());
  for (PointSet u : opens) {
    if (u & ~full()) throw MalformedInput("space '" + name_ + "': open mentions an unknown point");
  }
  std::sort(opens.begin(), opens.end(), open_order);
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  opens_ = std::move(opens);
  for (std::size_t i = 0; i < opens_.size(); ++i) {
    for (std::size_t j = i + 1; j < opens_.size(); ++j) {
      if (!is_open(opens_[i] | opens_[j])) {
        throw MalformedInput("space '" + name_ + "': union of " + format(opens_[i]) + " and " +
                             format(opens_[j]) + " is not open");
      }
      if (!is_open(opens_[i] & opens_[j])) {
        throw MalformedInput("space '" + name_ + "': intersection of " + format(opens_[i]) +
                             " and " + format(opens_[j]) + " is not open");
      }
    }
  }
  minimal_ = minimal_neighbourhoods(point_count(), opens_, full());
}

std::optional<int> FinSpace::find_point(std::string_view name) const {
  for (int p = 0; p < point_count(); ++p) {
    if (points_[p] == name) return p;
  }
  return std::nullopt;
}

bool FinSpace::is_open(PointSet s) const { return open_index(s) >= 0; }

int FinSpace::open_index(PointSet s) const {
  auto it = std::lower_bound(opens_.begin(), opens_.end(), s, open_order);
  return (it != opens_.end() && *it == s) ? static_cast<int>(it - opens_.begin()) : -1;
}

PointSet FinSpace::closure(PointSet s) const {
  PointSet outside = 0;
  for (PointSet u : opens_) {
    if ((u & s) == 0) outside |= u;
  }
  return full() & ~outside;
}

std::string FinSpace::format(PointSet s) const {
  std::string out = "{";
  bool first = true;
  for (int p = 0; p < point_count(); ++p) {
    if (!has(s, p)) continue;
    if (!first) out += ',';
    out += points_[p];
    first = false;
  }
  return out + "}";
}

namespace {

std::vector<std::string> numbered(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back(std::to_string(i));
  return names;
}

}  // namespace

FinSpace point_space() { return FinSpace({"0"}, {}, "point"); }

FinSpace sierpinski_space() { return FinSpace({"0", "1"}, {0b10}, "sierpinski"); }

FinSpace discrete_space(int n) {
  std::vector<PointSet> opens;
  for (PointSet s = 0; s < bit(n); ++s) opens.push_back(s);
  return FinSpace(numbered(n), opens, "discrete" + std::to_string(n));
}

FinSpace indiscrete_space(int n) { return FinSpace(numbered(n), {}, "indiscrete" + std::to_string(n)); }

FinSpace alexandrov_space(const std::vector<std::vector<bool>>& leq, std::string name) {
  const int n = static_cast<int>(leq.size());
  std::vector<PointSet> nbhd(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j || leq[i][j]) nbhd[i] |= bit(j);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (has(nbhd[i], j) && (nbhd[j] & ~nbhd[i])) throw MalformedInput("order is not transitive");
    }
  }
  return FinSpace(numbered(n), opens_from_neighbourhoods(nbhd), std::move(name));
}

std::vector<FinSpace> enumerate_spaces(int n) {
  const int pairs = n * (n - 1);
  if (pairs >= 31) throw ResourceLimit("space enumeration: too many points");
  std::vector<std::pair<int, int>> off;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) off.emplace_back(i, j);
    }
  }
  std::vector<FinSpace> out;
  Budget budget("space enumeration");
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << pairs); ++bits) {
    budget.tick();
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) leq[i][i] = true;
    for (int k = 0; k < pairs; ++k) {
      if ((bits >> k) & 1) leq[off[k].first][off[k].second] = true;
    }
    bool transitive = true;
    for (int i = 0; i < n && transitive; ++i) {
      for (int j = 0; j < n && transitive; ++j) {
        for (int k = 0; k < n && transitive; ++k) {
          if (leq[i][j] && leq[j][k] && !leq[i][k]) transitive = false;
        }
      }
    }
    if (transitive) out.push_back(alexandrov_space(leq, "space" + std::to_string(n) + "_" + std::to_string(out.size())));
  }
  return out;
}

PointSet preimage(const std::vector<int>& f, PointSet s) {
  PointSet r = 0;
  for (std::size_t p = 0; p < f.size(); ++p) {
    if (has(s, f[p])) r |= bit(static_cast<int>(p));
  }
  return r;
}

PointSet image(const std::vector<int>& f, PointSet s) {
  PointSet r = 0;
  for (std::size_t p = 0; p < f.size(); ++p) {
    if (has(s, static_cast<int>(p))) r |= bit(f[p]);
  }
  return r;
}

std::optional<PointSet> discontinuity(const FinSpace& x, const FinSpace& y, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != x.point_count()) throw MalformedInput("point map has the wrong size");
  for (int v : f) {
    if (v < 0 || v >= y.point_count()) throw MalformedInput("point map out of range");
  }
  for (PointSet v : y.opens()) {
    if (!x.is_open(preimage(f, v))) return v;
  }
  return std::nullopt;
}

Frame::Frame(std::vector<std::string> names, std::vector<std::vector<bool>> leq)
    : names_(std::move(names)), leq_(std::move(leq)) {
  const int n = size();
  if (static_cast<int>(leq_.size()) != n) throw MalformedInput("frame order table size");
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(leq_[i].size()) != n) throw MalformedInput("frame order table size");
    if (!leq_[i][i]) throw MalformedInput("frame order is not reflexive at " + names_[i]);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && leq_[i][j] && leq_[j][i]) {
        throw MalformedInput("frame order is not antisymmetric: " + names_[i] + ", " + names_[j]);
      }
      for (int k = 0; k < n; ++k) {
        if (leq_[i][j] && leq_[j][k] && !leq_[i][k]) throw MalformedInput("frame order is not transitive");
      }
    }
  }
  if (n == 0) throw MalformedInput("empty frame");
  auto bound = [&](int i, int j, bool upper) {
    int best = -1;
    for (int k = 0; k < n; ++k) {
      const bool is_bound = upper ? (leq_[i][k] && leq_[j][k]) : (leq_[k][i] && leq_[k][j]);
      if (!is_bound) continue;
      if (best < 0 || (upper ? leq_[k][best] : leq_[best][k])) best = k;
    }
    if (best < 0) return -1;
    for (int k = 0; k < n; ++k) {
      const bool is_bound = upper ? (leq_[i][k] && leq_[j][k]) : (leq_[k][i] && leq_[k][j]);
      if (is_bound && !(upper ? leq_[best][k] : leq_[k][best])) return -1;
    }
    return best;
  };
  join_.assign(n, std::vector<int>(n));
  meet_.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      join_[i][j] = bound(i, j, true);
      meet_[i][j] = bound(i, j, false);
      if (join_[i][j] < 0) throw MalformedInput("no join of " + names_[i] + " and " + names_[j]);
      if (meet_[i][j] < 0) throw MalformedInput("no meet of " + names_[i] + " and " + names_[j]);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (std::all_of(leq_[i].begin(), leq_[i].end(), [](bool b) { return b; })) bottom_ = i;
    bool is_top = true;
    for (int j = 0; j < n; ++j) is_top = is_top && leq_[j][i];
    if (is_top) top_ = i;
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        if (meet_[a][join_[b][c]] != join_[meet_[a][b]][meet_[a][c]]) {
          throw MalformedInput("meets do not distribute over joins at " + names_[a] + ", " + names_[b] +
                               ", " + names_[c]);
        }
      }
    }
  }
}

Frame two_frame() { return Frame({"0", "1"}, {{true, true}, {false, true}}); }

Frame chain_frame(int n) {
  std::vector<std::string> names;
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i) {
    names.push_back(std::to_string(i));
    for (int j = i; j < n; ++j) leq[i][j] = true;
  }
  return Frame(names, leq);
}

std::optional<std::string> frame_map_failure(const Frame& s, const Frame& t, const std::vector<int>& map) {
  if (static_cast<int>(map.size()) != s.size()) return "map has the wrong size";
  for (int v : map) {
    if (v < 0 || v >= t.size()) return "map out of range";
  }
  if (map[s.bottom()] != t.bottom()) return "bottom not preserved";
  if (map[s.top()] != t.top()) return "top not preserved";
  for (int i = 0; i < s.size(); ++i) {
    for (int j = 0; j < s.size(); ++j) {
      if (s.leq(i, j) && !t.leq(map[i], map[j])) return "order not preserved at " + s.name(i) + " <= " + s.name(j);
      if (map[s.join(i, j)] != t.join(map[i], map[j])) return "join of " + s.name(i) + " and " + s.name(j) + " not preserved";
      if (map[s.meet(i, j)] != t.meet(map[i], map[j])) return "meet of " + s.name(i) + " and " + s.name(j) + " not preserved";
    }
  }
  return std::nullopt;
}

FrameMap::FrameMap(const Frame& source, const Frame& target, std::vector<int> map) : map_(std::move(map)) {
  if (auto why = frame_map_failure(source, target, map_)) throw MalformedInput("frame map: " + *why);
}

bool FrameMap::injective() const {
  auto sorted = map_;
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

bool FrameMap::surjective(int target_size) const {
  std::vector<bool> hit(target_size);
  for (int v : map_) hit[v] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

OpenFrame open_frame(const FinSpace& x) {
  std::vector<std::string> names;
  const int n = x.open_count();
  std::vector<std::vector<bool>> leq(n, std::vector<bool>(n));
  for (int i = 0; i < n; ++i) {
    names.push_back(x.format(x.opens()[i]));
    for (int j = 0; j < n; ++j) leq[i][j] = (x.opens()[i] & ~x.opens()[j]) == 0;
  }
  const std::string name = "Open(" + (x.name().empty() ? std::string("X") : x.name()) + ")";
  return OpenFrame{Frame(names, leq), catalog::poset(name, names, leq)};
}

GrothendieckTopology canonical_topology(const FinSpace& x, const CategoryPtr& open_category) {
  const auto om = shared_omega(open_category);
  const auto& c = *open_category;
  std::vector<std::vector<int>> covers(c.object_count());
  for (int u = 0; u < c.object_count(); ++u) {
    for (std::size_t k = 0; k < om->sieves[u].size(); ++k) {
      PointSet joined = 0;
      for (int f : om->sieves[u][k].members) joined |= x.opens()[c.dom(f)];
      if (joined == x.opens()[u]) covers[u].push_back(static_cast<int>(k));
    }
  }
  return GrothendieckTopology(om, std::move(covers), "canonical(" + x.name() + ")");
}

FrameMap open_functor(const FinSpace& x, const FinSpace& y, const std::vector<int>& f) {
  if (auto bad = discontinuity(x, y, f)) {
    throw PreconditionFailed("map is not continuous: preimage of " + y.format(*bad) + " is " +
                             x.format(preimage(f, *bad)) + ", which is not open");
  }
  std::vector<int> table;
  for (PointSet v : y.opens()) table.push_back(x.open_index(preimage(f, v)));
  return FrameMap(open_frame(y).frame, open_frame(x).frame, std::move(table));
}

FinFunctor preimage_functor(const FinSpace& x, const CategoryPtr& open_x, const FinSpace& y,
                            const CategoryPtr& open_y, const std::vector<int>& f) {
  const auto table = open_functor(x, y, f).table();
  std::vector<int> morphisms;
  for (int m = 0; m < open_y->morphism_count(); ++m) {
    morphisms.push_back(open_x->hom(table[open_y->dom(m)], table[open_y->cod(m)])[0]);
  }
  return FinFunctor(open_y, open_x, table, std::move(morphisms), "preimage");
}

FinFunctor image_functor(const FinSpace& x, const CategoryPtr& open_x, const FinSpace& y,
                         const CategoryPtr& open_y, const std::vector<int>& f) {
  if (auto bad = discontinuity(x, y, f)) throw PreconditionFailed("map is not continuous at " + y.format(*bad));
  std::vector<int> table;
  for (PointSet u : x.opens()) {
    const int v = y.open_index(image(f, u));
    if (v < 0) throw PreconditionFailed("not an open map: image of " + x.format(u) + " is not open");
    table.push_back(v);
  }
  for (std::size_t p = 0; p < f.size(); ++p) {
    for (std::size_t q = p + 1; q < f.size(); ++q) {
      if (f[p] == f[q]) throw PreconditionFailed("not injective: " + x.point_name(static_cast<int>(p)) + " and " +
                                                 x.point_name(static_cast<int>(q)));
    }
  }
  std::vector<int> morphisms;
  for (int m = 0; m < open_x->morphism_count(); ++m) {
    morphisms.push_back(open_y->hom(table[open_x->dom(m)], table[open_x->cod(m)])[0]);
  }
  return FinFunctor(open_x, open_y, table, std::move(morphisms), "image");
}

Bundle::Bundle(FinSpace total_, FinSpace base_, std::vector<int> projection_)
    : total(std::move(total_)), base(std::move(base_)), projection(std::move(projection_)) {
  if (auto bad = discontinuity(total, base, projection)) {
    throw MalformedInput("bundle projection is not continuous: preimage of " + base.format(*bad) +
                         " is not open");
  }
}

Bundle identity_bundle(const FinSpace& x) {
  std::vector<int> id(x.point_count());
  for (int p = 0; p < x.point_count(); ++p) id[p] = p;
  return Bundle(x, x, id);
}

Presheaf sections_sheaf(const Bundle& b, const CategoryPtr& open_base) {
  const auto& x = b.base;
  const auto& y = b.total;
  const auto& c = *open_base;
  if (c.object_count() != x.open_count()) throw PreconditionFailed("open category does not match the base space");
  std::vector<std::vector<int>> fibre(x.point_count());
  for (int q = 0; q < y.point_count(); ++q) fibre[b.projection[q]].push_back(q);
  // sections over U as value tuples on the points of U in ascending order
  std::vector<std::vector<std::vector<int>>> sections(c.object_count());
  std::vector<std::map<std::vector<int>, int>> index(c.object_count());
  Budget budget("section enumeration");
  for (int u = 0; u < c.object_count(); ++u) {
    std::vector<int> pts;
    for (int p = 0; p < x.point_count(); ++p) {
      if (has(x.opens()[u], p)) pts.push_back(p);
    }
    std::vector<int> value(pts.size());
    std::vector<int> where(x.point_count(), -1);
    for (std::size_t i = 0; i < pts.size(); ++i) where[pts[i]] = static_cast<int>(i);
    // s continuous iff s(N(p)) lies in N(s(p)) for all p
    auto ok_at = [&](std::size_t i) {
      for (std::size_t j = 0; j <= i; ++j) {
        if (has(x.neighbourhood(pts[j]), pts[i]) && !has(y.neighbourhood(value[j]), value[i])) return false;
        if (has(x.neighbourhood(pts[i]), pts[j]) && !has(y.neighbourhood(value[i]), value[j])) return false;
      }
      return true;
    };
    std::function<void(std::size_t)> fill = [&](std::size_t i) {
      if (i == pts.size()) {
        index[u].emplace(value, static_cast<int>(sections[u].size()));
        sections[u].push_back(value);
        return;
      }
      for (int q : fibre[pts[i]]) {
        budget.tick();
        value[i] = q;
        if (ok_at(i)) fill(i + 1);
      }
    };
    fill(0);
  }
  std::vector<int> sizes(c.object_count());
  std::vector<std::vector<std::string>> labels(c.object_count());
  for (int u = 0; u < c.object_count(); ++u) {
    sizes[u] = static_cast<int>(sections[u].size());
    for (const auto& s : sections[u]) {
      std::string l = "[";
      for (std::size_t i = 0; i < s.size(); ++i) l += (i ? "," : "") + y.point_name(s[i]);
      labels[u].push_back(l + "]");
    }
  }
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    const PointSet v = x.opens()[c.dom(m)];
    const PointSet u = x.opens()[c.cod(m)];
    for (const auto& s : sections[c.cod(m)]) {
      std::vector<int> r;
      std::size_t i = 0;
      for (int p = 0; p < x.point_count(); ++p) {
        if (!has(u, p)) continue;
        if (has(v, p)) r.push_back(s[i]);
        ++i;
      }
      actions[m].push_back(index[c.dom(m)].at(r));
    }
  }
  return Presheaf(open_base, std::move(sizes), std::move(actions), std::move(labels), "sections");
}

EtaleSpace etale_space(const FinSpace& x, const Presheaf& f) {
  const auto& c = *f.base();
  if (c.object_count() != x.open_count()) throw PreconditionFailed("presheaf is not on Open of this space");
  std::vector<std::pair<int, int>> germ;
  std::vector<std::vector<int>> germ_index(x.point_count());
  std::vector<std::string> names;
  std::vector<int> projection;
  for (int p = 0; p < x.point_count(); ++p) {
    const int up = x.open_index(x.neighbourhood(p));
    for (int s = 0; s < f.size(up); ++s) {
      germ_index[p].push_back(static_cast<int>(germ.size()));
      germ.emplace_back(p, s);
      names.push_back(f.label(up, s) + "@" + x.point_name(p));
      projection.push_back(p);
    }
  }
  if (germ.size() > 64) throw ResourceLimit("etale space has more than 64 points");
  // basic opens: germs of one section over one open
  std::vector<PointSet> nbhd(germ.size(), germ.size() == 64 ? ~PointSet{0} : bit(static_cast<int>(germ.size())) - 1);
  for (int u = 0; u < c.object_count(); ++u) {
    for (int s = 0; s < f.size(u); ++s) {
      PointSet basic = 0;
      for (int p = 0; p < x.point_count(); ++p) {
        if (!has(x.opens()[u], p)) continue;
        const int up = x.open_index(x.neighbourhood(p));
        basic |= bit(germ_index[p][f.act(c.hom(up, u)[0], s)]);
      }
      for (std::size_t g = 0; g < germ.size(); ++g) {
        if (has(basic, static_cast<int>(g))) nbhd[g] &= basic;
      }
    }
  }
  FinSpace total(names, opens_from_neighbourhoods(nbhd), "germs");
  return EtaleSpace{Bundle(std::move(total), x, std::move(projection)), std::move(germ)};
}

std::optional<int> etale_failure(const Bundle& b) {
  const auto& y = b.total;
  const auto& x = b.base;
  for (int q = 0; q < y.point_count(); ++q) {
    const PointSet w = y.neighbourhood(q);
    std::vector<int> pts;
    for (int r = 0; r < y.point_count(); ++r) {
      if (has(w, r)) pts.push_back(r);
    }
    bool ok = x.is_open(image(b.projection, w));
    for (std::size_t i = 0; i < pts.size() && ok; ++i) {
      for (std::size_t j = 0; j < pts.size() && ok; ++j) {
        const int pi = b.projection[pts[i]];
        const int pj = b.projection[pts[j]];
        if (i != j && pi == pj) ok = false;
        if (has(y.neighbourhood(pts[i]), pts[j]) != has(x.neighbourhood(pi), pj)) ok = false;
      }
    }
    if (!ok) return q;
  }
  return std::nullopt;
}

bool is_etale(const Bundle& b) { return !etale_failure(b).has_value(); }

std::optional<std::vector<int>> find_bundle_iso(const Bundle& a, const Bundle& b) {
  if (!(a.base == b.base) || a.total.point_count() != b.total.point_count()) return std::nullopt;
  const int n = a.total.point_count();
  std::vector<int> h(n, -1);
  std::vector<bool> used(n, false);
  std::optional<std::vector<int>> found;
  Budget budget("bundle isomorphism search");
  std::function<void(int)> search = [&](int q) {
    if (found) return;
    if (q == n) {
      found = h;
      return;
    }
    for (int r = 0; r < n && !found; ++r) {
      if (used[r] || b.projection[r] != a.projection[q]) continue;
      budget.tick();
      bool ok = true;
      for (int p = 0; p < q && ok; ++p) {
        ok = has(a.total.neighbourhood(p), q) == has(b.total.neighbourhood(h[p]), r) &&
             has(a.total.neighbourhood(q), p) == has(b.total.neighbourhood(r), h[p]);
      }
      if (!ok) continue;
      h[q] = r;
      used[r] = true;
      search(q + 1);
      used[r] = false;
    }
    h[q] = -1;
  };
  search(0);
  return found;
}

RecoveredLocale recover_locale(const FinSpace& x) {
  const auto of = open_frame(x);
  const auto site = canonical_topology(x, of.category);
  const auto one = share(terminal_presheaf(of.category));
  const auto lattice = subobjects(one);
  RecoveredLocale out{two_frame(), {}, {}};
  std::vector<std::string> names;
  for (const auto& s : lattice.elements) {
    if (is_sheaf(subpresheaf(*one, s), site)) {
      out.subterminals.push_back(s);
      names.push_back("S" + std::to_string(names.size()));
    }
  }
  const int k = static_cast<int>(out.subterminals.size());
  std::vector<std::vector<bool>> leq(k, std::vector<bool>(k));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      bool sub = true;
      for (int u = 0; u < x.open_count(); ++u) sub = sub && (!out.subterminals[i][u][0] || out.subterminals[j][u][0]);
      leq[i][j] = sub;
    }
  }
  out.frame = Frame(names, leq);
  for (int u = 0; u < x.open_count(); ++u) {
    Subobject down(x.open_count());
    for (int v = 0; v < x.open_count(); ++v) down[v] = {(x.opens()[v] & ~x.opens()[u]) == 0};
    const auto it = std::find(out.subterminals.begin(), out.subterminals.end(), down);
    out.iso.push_back(it == out.subterminals.end() ? -1 : static_cast<int>(it - out.subterminals.begin()));
  }
  return out;
}

SobrietyReport check_sober(const FinSpace& x) {
  SobrietyReport report;
  std::vector<PointSet> closed;
  for (PointSet u : x.opens()) closed.push_back(x.full() & ~u);
  std::sort(closed.begin(), closed.end(), open_order);
  for (PointSet c : closed) {
    if (c == 0) continue;
    bool reducible = false;
    for (PointSet c1 : closed) {
      if (c1 == c || (c1 & ~c)) continue;
      for (PointSet c2 : closed) {
        if (c2 == c || (c2 & ~c)) continue;
        if ((c1 | c2) == c) reducible = true;
      }
    }
    if (reducible) continue;
    PointSet generic = 0;
    for (int p = 0; p < x.point_count(); ++p) {
      if (has(c, p) && x.closure(bit(p)) == c) generic |= bit(p);
    }
    report.irreducible.emplace_back(c, generic);
    if (std::popcount(generic) != 1 && report.sober) {
      report.sober = false;
      report.witness = c;
    }
  }
  return report;
}

bool is_t0(const FinSpace& x) {
  for (int p = 0; p < x.point_count(); ++p) {
    for (int q = p + 1; q < x.point_count(); ++q) {
      if (x.neighbourhood(p) == x.neighbourhood(q)) return false;
    }
  }
  return true;
}

std::vector<FramePoint> frame_points(const Frame& l) {
  const Frame two = two_frame();
  std::vector<FramePoint> out;
  for (int a = 0; a < l.size(); ++a) {
    std::vector<int> map(l.size());
    for (int i = 0; i < l.size(); ++i) map[i] = l.leq(a, i) ? 1 : 0;
    if (!frame_map_failure(l, two, map)) out.push_back({a, std::move(map)});
  }
  return out;
}

SpatialReport check_spatial(const Frame& l) {
  const auto pts = frame_points(l);
  for (int i = 0; i < l.size(); ++i) {
    for (int j = i + 1; j < l.size(); ++j) {
      const bool separated = std::any_of(pts.begin(), pts.end(), [&](const FramePoint& p) { return p.map[i] != p.map[j]; });
      if (!separated) return {false, std::pair{i, j}};
    }
  }
  return {true, std::nullopt};
}

std::optional<std::vector<int>> find_frame_iso(const Frame& x, const Frame& y) {
  if (x.size() != y.size()) return std::nullopt;
  const int n = x.size();
  std::vector<int> h(n, -1);
  std::vector<bool> used(n, false);
  std::optional<std::vector<int>> found;
  std::function<void(int)> search = [&](int i) {
    if (found) return;
    if (i == n) {
      found = h;
      return;
    }
    for (int r = 0; r < n && !found; ++r) {
      if (used[r]) continue;
      bool ok = true;
      for (int p = 0; p < i && ok; ++p) ok = x.leq(p, i) == y.leq(h[p], r) && x.leq(i, p) == y.leq(r, h[p]);
      if (!ok) continue;
      h[i] = r;
      used[r] = true;
      search(i + 1);
      used[r] = false;
    }
    h[i] = -1;
  };
  search(0);
  return found;
}

}  // namespace toposkit
