#include "toposkit/sites.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "toposkit/error.hpp"

namespace toposkit {

namespace {

std::vector<std::vector<bool>> to_mask(const Omega& om, const std::vector<std::vector<int>>& covers) {
  std::vector<std::vector<bool>> mask(om.sieves.size());
  for (std::size_t a = 0; a < om.sieves.size(); ++a) {
    mask[a].assign(om.sieves[a].size(), false);
    if (a < covers.size()) {
      for (int k : covers[a]) mask[a][k] = true;
    }
  }
  return mask;
}

std::vector<std::vector<int>> from_mask(const std::vector<std::vector<bool>>& mask) {
  std::vector<std::vector<int>> covers(mask.size());
  for (std::size_t a = 0; a < mask.size(); ++a) {
    for (std::size_t k = 0; k < mask[a].size(); ++k) {
      if (mask[a][k]) covers[a].push_back(static_cast<int>(k));
    }
  }
  return covers;
}

// pull[f][k]: index of f*(S_k) in Omega(dom f)
std::vector<std::vector<int>> pullback_table(const Omega& om) {
  std::vector<std::vector<int>> t(om.base->morphism_count());
  for (int f = 0; f < om.base->morphism_count(); ++f) t[f] = om.object->action(f);
  return t;
}

std::optional<std::string> check_axioms(const Omega& om, const std::vector<std::vector<bool>>& mask,
                                        const std::vector<std::vector<int>>& pull) {
  const auto& c = *om.base;
  for (int a = 0; a < c.object_count(); ++a) {
    if (!mask[a][om.maximal(a)]) return "maximality fails at " + c.object_name(a);
  }
  for (int a = 0; a < c.object_count(); ++a) {
    for (std::size_t k = 0; k < mask[a].size(); ++k) {
      if (!mask[a][k]) continue;
      for (int f : c.into(a)) {
        if (!mask[c.dom(f)][pull[f][k]]) {
          return "stability fails: " + format_sieve(c, om.sieves[a][k]) + " covers " +
                 c.object_name(a) + " but its pullback along " + c.morphism_name(f) +
                 " does not cover " + c.object_name(c.dom(f));
        }
      }
    }
  }
  for (int a = 0; a < c.object_count(); ++a) {
    for (std::size_t k = 0; k < mask[a].size(); ++k) {
      if (!mask[a][k]) continue;
      const Sieve& s = om.sieves[a][k];
      for (std::size_t r = 0; r < mask[a].size(); ++r) {
        if (mask[a][r]) continue;
        const bool locally = std::all_of(s.members.begin(), s.members.end(), [&](int f) {
          return mask[c.dom(f)][pull[f][r]];
        });
        if (locally) {
          return "transitivity fails: " + format_sieve(c, om.sieves[a][r]) + " is locally covering along " +
                 format_sieve(c, s) + " on " + c.object_name(a) + " but does not cover";
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

GrothendieckTopology::GrothendieckTopology(OmegaPtr omega, std::vector<std::vector<int>> covers,
                                           std::string name)
    : omega_(std::move(omega)), name_(std::move(name)) {
  if (static_cast<int>(covers.size()) != omega_->base->object_count()) {
    throw MalformedInput("topology '" + name_ + "': cover table size");
  }
  for (std::size_t a = 0; a < covers.size(); ++a) {
    for (int k : covers[a]) {
      if (k < 0 || k >= static_cast<int>(omega_->sieves[a].size())) {
        throw MalformedInput("topology '" + name_ + "': sieve index out of range");
      }
    }
  }
  mask_ = to_mask(*omega_, covers);
  covers_ = from_mask(mask_);
  if (auto why = check_axioms(*omega_, mask_, pullback_table(*omega_))) {
    throw MalformedInput("topology '" + name_ + "': " + *why);
  }
}

bool GrothendieckTopology::covers(const Sieve& s) const {
  const int k = omega_->index_of(s);
  return k >= 0 && mask_[s.apex][k];
}

std::optional<std::string> check_topology_axioms(const Omega& om,
                                                 const std::vector<std::vector<int>>& covers) {
  return check_axioms(om, to_mask(om, covers), pullback_table(om));
}

GrothendieckTopology trivial_topology(const OmegaPtr& om) {
  std::vector<std::vector<int>> covers(om->sieves.size());
  for (std::size_t a = 0; a < covers.size(); ++a) covers[a] = {om->maximal(static_cast<int>(a))};
  return GrothendieckTopology(om, std::move(covers), "trivial");
}

GrothendieckTopology largest_topology(const OmegaPtr& om) {
  std::vector<std::vector<int>> covers(om->sieves.size());
  for (std::size_t a = 0; a < covers.size(); ++a) {
    covers[a].resize(om->sieves[a].size());
    std::iota(covers[a].begin(), covers[a].end(), 0);
  }
  return GrothendieckTopology(om, std::move(covers), "largest");
}

GrothendieckTopology generated_topology(const OmegaPtr& om,
                                        const std::vector<std::vector<int>>& covers) {
  const auto& c = *om->base;
  auto mask = to_mask(*om, covers);
  const auto pull = pullback_table(*om);
  for (int a = 0; a < c.object_count(); ++a) mask[a][om->maximal(a)] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < c.object_count(); ++a) {
      for (std::size_t k = 0; k < mask[a].size(); ++k) {
        if (!mask[a][k]) continue;
        for (int f : c.into(a)) {
          if (!mask[c.dom(f)][pull[f][k]]) {
            mask[c.dom(f)][pull[f][k]] = true;
            changed = true;
          }
        }
        for (std::size_t r = 0; r < mask[a].size(); ++r) {
          if (mask[a][r]) continue;
          const auto& s = om->sieves[a][k].members;
          if (std::all_of(s.begin(), s.end(), [&](int f) { return mask[c.dom(f)][pull[f][r]]; })) {
            mask[a][r] = true;
            changed = true;
          }
        }
      }
    }
  }
  return GrothendieckTopology(om, from_mask(mask), "generated");
}

std::vector<GrothendieckTopology> enumerate_topologies(const OmegaPtr& om) {
  const auto& c = *om->base;
  const int n = c.object_count();
  const auto pull = pullback_table(*om);
  Budget budget("topology enumeration");
  auto mask = to_mask(*om, {});
  std::vector<GrothendieckTopology> out;
  // stability between objects already assigned
  auto stable_at = [&](int a) {
    for (int b = 0; b <= a; ++b) {
      for (int f : c.into(b)) {
        if (c.dom(f) > a) continue;
        for (std::size_t k = 0; k < mask[b].size(); ++k) {
          if (mask[b][k] && !mask[c.dom(f)][pull[f][k]]) return false;
        }
      }
    }
    return true;
  };
  std::function<void(int)> assign = [&](int a) {
    if (a == n) {
      if (!check_axioms(*om, mask, pull)) {
        out.emplace_back(om, from_mask(mask), "J" + std::to_string(out.size()));
      }
      return;
    }
    const int k = static_cast<int>(om->sieves[a].size()) - 1;
    if (k > 62) throw ResourceLimit("topology enumeration: too many sieves on " + c.object_name(a));
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
      budget.tick();
      for (int i = 0; i < k; ++i) mask[a][i] = (bits >> i) & 1;
      mask[a][k] = true;
      if (stable_at(a)) assign(a + 1);
    }
    std::fill(mask[a].begin(), mask[a].end(), false);
  };
  assign(0);
  return out;
}

namespace {

struct LTTables {
  std::vector<std::vector<std::vector<int>>> meet;  // [a][s][t]
};

LTTables lt_tables(const Omega& om) {
  LTTables t;
  t.meet.resize(om.sieves.size());
  for (std::size_t a = 0; a < om.sieves.size(); ++a) {
    const auto& list = om.sieves[a];
    t.meet[a].assign(list.size(), std::vector<int>(list.size()));
    for (std::size_t s = 0; s < list.size(); ++s) {
      for (std::size_t r = 0; r < list.size(); ++r) t.meet[a][s][r] = om.index_of(intersect(list[s], list[r]));
    }
  }
  return t;
}

std::optional<std::string> lt_failure(const Omega& om, const LTTables& t, const Components& j) {
  const auto& c = *om.base;
  for (int a = 0; a < c.object_count(); ++a) {
    if (j[a][om.maximal(a)] != om.maximal(a)) return "j . t != t at " + c.object_name(a);
  }
  for (int a = 0; a < c.object_count(); ++a) {
    for (std::size_t s = 0; s < j[a].size(); ++s) {
      if (j[a][j[a][s]] != j[a][s]) {
        return "j . j != j at " + c.object_name(a) + " on " + format_sieve(c, om.sieves[a][s]);
      }
    }
  }
  for (int a = 0; a < c.object_count(); ++a) {
    for (std::size_t s = 0; s < j[a].size(); ++s) {
      for (std::size_t r = 0; r < j[a].size(); ++r) {
        if (j[a][t.meet[a][s][r]] != t.meet[a][j[a][s]][j[a][r]]) {
          return "j does not preserve meets at " + c.object_name(a) + " on " +
                 format_sieve(c, om.sieves[a][s]) + " and " + format_sieve(c, om.sieves[a][r]);
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_lt_axioms(const Omega& om, const PresheafMap& j) {
  if (!(j.source() == *om.object) || !(j.target() == *om.object)) return "j is not a map Omega -> Omega";
  return lt_failure(om, lt_tables(om), j.components());
}

std::vector<LTOperator> enumerate_lt_operators(const OmegaPtr& om) {
  const auto tables = lt_tables(*om);
  std::vector<LTOperator> out;
  for_each_map(*om->object, *om->object, [&](const Components& j) {
    if (!lt_failure(*om, tables, j)) out.push_back({PresheafMap(om->object, om->object, j)});
    return true;
  });
  return out;
}

LTOperator topology_to_j(const GrothendieckTopology& t) {
  const auto& om = *t.omega();
  const auto& c = *om.base;
  Components comps(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    for (std::size_t k = 0; k < om.sieves[a].size(); ++k) {
      Sieve closure{a, {}};
      for (int f : c.into(a)) {
        if (t.covers(c.dom(f), om.object->act(f, static_cast<int>(k)))) closure.members.push_back(f);
      }
      comps[a].push_back(om.index_of(closure));
    }
  }
  return {PresheafMap(om.object, om.object, std::move(comps))};
}

GrothendieckTopology j_to_topology(const OmegaPtr& om, const LTOperator& j) {
  std::vector<std::vector<int>> covers(om->sieves.size());
  for (std::size_t a = 0; a < covers.size(); ++a) {
    for (std::size_t k = 0; k < om->sieves[a].size(); ++k) {
      if (j.j(static_cast<int>(a), static_cast<int>(k)) == om->maximal(static_cast<int>(a))) {
        covers[a].push_back(static_cast<int>(k));
      }
    }
  }
  return GrothendieckTopology(om, std::move(covers));
}

MatchingFamilies matching_families(const Presheaf& p, const Sieve& s) {
  const auto& base = p.base();
  const auto& c = *base;
  const auto y = share(representable(base, s.apex));
  Subobject mask(c.object_count());
  MatchingFamilies mf;
  mf.member.resize(c.object_count());
  for (int b = 0; b < c.object_count(); ++b) {
    for (int f : c.hom(b, s.apex)) {
      mask[b].push_back(s.contains(f));
      if (s.contains(f)) mf.member[b].push_back(f);
    }
  }
  mf.sieve = share(subpresheaf(*y, mask));
  for_each_map(*mf.sieve, p, [&](const Components& comps) {
    mf.index.emplace(flatten(comps), static_cast<int>(mf.families.size()));
    mf.families.push_back(comps);
    return true;
  });
  return mf;
}

Components restrict_to(const Presheaf& p, const MatchingFamilies& mf, int x) {
  Components fam(mf.member.size());
  for (std::size_t b = 0; b < mf.member.size(); ++b) {
    for (int f : mf.member[b]) fam[b].push_back(p.act(f, x));
  }
  return fam;
}

std::string CoverFailure::describe(const Presheaf& p, const Omega& om) const {
  const auto& c = *om.base;
  std::string out = kind + " for cover " + format_sieve(c, om.sieves[object][sieve]) + " of " +
                    c.object_name(object) + "; family";
  const Sieve& s = om.sieves[object][sieve];
  if (s.members.empty()) return out + " (empty)";
  for (int b = 0; b < c.object_count(); ++b) {
    std::size_t pos = 0;
    for (int f : c.hom(b, s.apex)) {
      if (!s.contains(f)) continue;
      out += " " + c.morphism_name(f) + "=" + p.label(b, family[b][pos++]);
    }
  }
  return out;
}

SheafCheck check_sheaf(const Presheaf& p, const GrothendieckTopology& t) {
  if (!same_category(p.base(), t.base())) throw PreconditionFailed("sheaf check over a different base");
  const auto& om = *t.omega();
  for (int a = 0; a < p.base()->object_count(); ++a) {
    for (int k : t.covers(a)) {
      const auto mf = matching_families(p, om.sieves[a][k]);
      std::vector<int> hits(mf.families.size(), 0);
      for (int x = 0; x < p.size(a); ++x) ++hits[mf.index.at(flatten(restrict_to(p, mf, x)))];
      for (std::size_t i = 0; i < hits.size(); ++i) {
        if (hits[i] != 1) {
          return {false, CoverFailure{a, k, hits[i] == 0 ? "no amalgamation" : "non-unique amalgamation",
                                      mf.families[i]}};
        }
      }
    }
  }
  return {true, std::nullopt};
}

int PlusConstruction::class_of(int a, int sieve, const Components& family) const {
  auto it = lookup[a].find({sieve, flatten(family)});
  if (it == lookup[a].end()) throw PreconditionFailed("not a matching family over a covering sieve");
  return it->second;
}

namespace {

// Position of each member morphism of a family table: morphism -> (object, pos).
std::vector<std::pair<int, int>> member_positions(const MatchingFamilies& mf, int morphisms) {
  std::vector<std::pair<int, int>> pos(morphisms, {-1, -1});
  for (std::size_t b = 0; b < mf.member.size(); ++b) {
    for (std::size_t i = 0; i < mf.member[b].size(); ++i) {
      pos[mf.member[b][i]] = {static_cast<int>(b), static_cast<int>(i)};
    }
  }
  return pos;
}

}  // namespace

PlusConstruction plus_construction(const PresheafPtr& pp, const GrothendieckTopology& t) {
  const auto& p = *pp;
  if (!same_category(p.base(), t.base())) throw PreconditionFailed("plus construction over a different base");
  const auto& om = *t.omega();
  const auto& c = *om.base;
  const int n = c.object_count();
  PlusConstruction plus{pp, nullptr, identity_map(pp), {}, {}, {}};
  plus.representative.resize(n);
  plus.lookup.resize(n);
  plus.families.resize(n);
  Budget budget("plus construction");
  for (int a = 0; a < n; ++a) {
    const auto& covers = t.covers(a);
    std::vector<std::vector<std::pair<int, int>>> where;
    for (int k : covers) {
      plus.families[a].push_back(matching_families(p, om.sieves[a][k]));
      where.push_back(member_positions(plus.families[a].back(), c.morphism_count()));
    }
    // flat list of (cover position, family)
    std::vector<std::pair<int, int>> items;
    for (std::size_t i = 0; i < covers.size(); ++i) {
      for (std::size_t f = 0; f < plus.families[a][i].families.size(); ++f) {
        items.emplace_back(static_cast<int>(i), static_cast<int>(f));
      }
    }
    budget.tick(items.size() * items.size());
    std::vector<int> cls(items.size(), -1);
    for (std::size_t u = 0; u < items.size(); ++u) {
      if (cls[u] >= 0) continue;
      cls[u] = static_cast<int>(plus.representative[a].size());
      const auto [iu, fu] = items[u];
      plus.representative[a].emplace_back(covers[iu], plus.families[a][iu].families[fu]);
      const Sieve& su = om.sieves[a][covers[iu]];
      const auto& xu = plus.families[a][iu].families[fu];
      for (std::size_t v = u + 1; v < items.size(); ++v) {
        if (cls[v] >= 0) continue;
        const auto [iv, fv] = items[v];
        const Sieve& sv = om.sieves[a][covers[iv]];
        const auto& xv = plus.families[a][iv].families[fv];
        Sieve agree{a, {}};
        for (int f : intersect(su, sv).members) {
          const auto [bu, pu] = where[iu][f];
          const auto [bv, pv] = where[iv][f];
          if (xu[bu][pu] == xv[bv][pv]) agree.members.push_back(f);
        }
        if (t.covers(agree)) cls[v] = cls[u];
      }
    }
    for (std::size_t u = 0; u < items.size(); ++u) {
      const auto [iu, fu] = items[u];
      plus.lookup[a].emplace(std::pair{covers[iu], flatten(plus.families[a][iu].families[fu])}, cls[u]);
    }
  }
  std::vector<int> sizes(n);
  for (int a = 0; a < n; ++a) sizes[a] = static_cast<int>(plus.representative[a].size());
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    const int b = c.dom(m);
    const int a = c.cod(m);
    for (const auto& [k, fam] : plus.representative[a]) {
      const int kb = om.object->act(m, k);
      const auto pos_in_s = member_positions(
          plus.families[a][std::find(t.covers(a).begin(), t.covers(a).end(), k) - t.covers(a).begin()],
          c.morphism_count());
      const auto& mfb = plus.families[b][std::find(t.covers(b).begin(), t.covers(b).end(), kb) -
                                         t.covers(b).begin()];
      Components restricted(n);
      for (int d = 0; d < n; ++d) {
        for (int g : mfb.member[d]) {
          const auto [e, q] = pos_in_s[c.compose(m, g)];
          restricted[d].push_back(fam[e][q]);
        }
      }
      actions[m].push_back(plus.class_of(b, kb, restricted));
    }
  }
  plus.object = share(Presheaf(p.base(), std::move(sizes), std::move(actions), {}, p.name() + "+"));
  Components unit(n);
  for (int a = 0; a < n; ++a) {
    const int top = om.maximal(a);
    const auto& mf = plus.families[a][std::find(t.covers(a).begin(), t.covers(a).end(), top) -
                                      t.covers(a).begin()];
    for (int x = 0; x < p.size(a); ++x) unit[a].push_back(plus.class_of(a, top, restrict_to(p, mf, x)));
  }
  plus.unit = PresheafMap(pp, plus.object, std::move(unit));
  return plus;
}

PresheafMap plus_map(const PlusConstruction& from, const PlusConstruction& to, const PresheafMap& h,
                     const GrothendieckTopology& t) {
  (void)t;
  const int n = static_cast<int>(from.representative.size());
  Components comps(n);
  for (int a = 0; a < n; ++a) {
    for (const auto& [k, fam] : from.representative[a]) {
      Components image(fam.size());
      for (int d = 0; d < n; ++d) {
        for (int v : fam[d]) image[d].push_back(h(d, v));
      }
      comps[a].push_back(to.class_of(a, k, image));
    }
  }
  return PresheafMap(from.object, to.object, std::move(comps));
}

Sheafification sheafify(const PresheafPtr& p, const GrothendieckTopology& t) {
  auto first = plus_construction(p, t);
  auto second = plus_construction(first.object, t);
  auto sheaf = second.object;
  auto unit = compose(second.unit, first.unit);
  return Sheafification{std::move(first), std::move(second), std::move(sheaf), std::move(unit)};
}

PresheafMap sheafify_map(const Sheafification& from, const Sheafification& to, const PresheafMap& h,
                         const GrothendieckTopology& t) {
  const auto h1 = plus_map(from.first, to.first, h, t);
  return plus_map(from.second, to.second, h1, t);
}

Subobject closed_sieves(const GrothendieckTopology& t) {
  const auto j = topology_to_j(t);
  const auto& om = *t.omega();
  Subobject s(om.sieves.size());
  for (std::size_t a = 0; a < om.sieves.size(); ++a) {
    for (std::size_t k = 0; k < om.sieves[a].size(); ++k) {
      s[a].push_back(j.j(static_cast<int>(a), static_cast<int>(k)) == static_cast<int>(k));
    }
  }
  return s;
}

Presheaf omega_j(const GrothendieckTopology& t) {
  return subpresheaf(*t.omega()->object, closed_sieves(t)).named("Omega_j");
}

}  // namespace toposkit
