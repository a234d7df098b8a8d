#include "toposkit/classifier.hpp"

#include <algorithm>
#include <map>

#include "toposkit/detail/closed_sets.hpp"
#include "toposkit/error.hpp"

namespace toposkit {

bool Sieve::contains(int m) const { return std::binary_search(members.begin(), members.end(), m); }

std::strong_ordering operator<=>(const Sieve& x, const Sieve& y) {
  if (auto c = x.apex <=> y.apex; c != 0) return c;
  if (auto c = x.members.size() <=> y.members.size(); c != 0) return c;
  return x.members <=> y.members;
}

bool is_sieve(const FinCategory& c, int apex, const std::vector<int>& members) {
  std::vector<bool> in(c.morphism_count());
  for (int f : members) {
    if (c.cod(f) != apex) return false;
    in[f] = true;
  }
  for (int f : members) {
    for (int g : c.into(c.dom(f))) {
      if (!in[c.compose(f, g)]) return false;
    }
  }
  return true;
}

Sieve maximal_sieve(const FinCategory& c, int a) {
  auto into = c.into(a);
  return Sieve{a, std::vector<int>(into.begin(), into.end())};
}

Sieve generated_sieve(const FinCategory& c, int a, const std::vector<int>& generators) {
  std::vector<bool> in(c.morphism_count());
  for (int f : generators) {
    if (c.cod(f) != a) throw PreconditionFailed("generator " + c.morphism_name(f) + " is not into " + c.object_name(a));
    for (int g : c.into(c.dom(f))) in[c.compose(f, g)] = true;
  }
  Sieve s{a, {}};
  for (int f : c.into(a)) {
    if (in[f]) s.members.push_back(f);
  }
  return s;
}

Sieve intersect(const Sieve& s, const Sieve& t) {
  Sieve r{s.apex, {}};
  std::set_intersection(s.members.begin(), s.members.end(), t.members.begin(), t.members.end(),
                        std::back_inserter(r.members));
  return r;
}

Sieve pullback_sieve(const FinCategory& c, const Sieve& s, int f) {
  if (c.cod(f) != s.apex) throw PreconditionFailed("pullback of a sieve along a morphism with the wrong codomain");
  Sieve r{c.dom(f), {}};
  for (int g : c.into(c.dom(f))) {
    if (s.contains(c.compose(f, g))) r.members.push_back(g);
  }
  return r;
}

std::string format_sieve(const FinCategory& c, const Sieve& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.members.size(); ++i) {
    if (i) out += ' ';
    out += c.morphism_name(s.members[i]);
  }
  return out + "}";
}

std::vector<Sieve> sieves_on(const FinCategory& c, int a) {
  const auto into = c.into(a);
  const int n = static_cast<int>(into.size());
  std::vector<int> position(c.morphism_count(), -1);
  for (int i = 0; i < n; ++i) position[into[i]] = i;
  std::vector<std::vector<int>> implies(n);
  for (int i = 0; i < n; ++i) {
    for (int g : c.into(c.dom(into[i]))) implies[i].push_back(position[c.compose(into[i], g)]);
  }
  std::vector<Sieve> out;
  Budget budget("sieve enumeration on " + c.object_name(a));
  detail::for_each_closed_set(n, implies, budget, [&](const std::vector<signed char>& state) {
    Sieve s{a, {}};
    for (int i = 0; i < n; ++i) {
      if (state[i]) s.members.push_back(into[i]);
    }
    out.push_back(std::move(s));
  });
  std::sort(out.begin(), out.end());
  return out;
}

int Omega::index_of(const Sieve& s) const {
  const auto& list = sieves[s.apex];
  auto it = std::lower_bound(list.begin(), list.end(), s);
  if (it == list.end() || !(*it == s)) return -1;
  return static_cast<int>(it - list.begin());
}

PresheafMap Omega::meet(const Limit& square) const {
  const auto& c = *base;
  Components comps(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    for (const auto& t : square.tuples[a]) {
      comps[a].push_back(index_of(intersect(sieves[a][t[0]], sieves[a][t[1]])));
    }
  }
  return PresheafMap(square.apex, object, std::move(comps));
}

Omega omega(const CategoryPtr& base) {
  const auto& c = *base;
  std::vector<std::vector<Sieve>> sieves(c.object_count());
  std::vector<int> sizes(c.object_count());
  std::vector<std::vector<std::string>> labels(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    sieves[a] = sieves_on(c, a);
    sizes[a] = static_cast<int>(sieves[a].size());
    for (const auto& s : sieves[a]) labels[a].push_back(format_sieve(c, s));
  }
  auto find = [&](const Sieve& s) {
    const auto& list = sieves[s.apex];
    return static_cast<int>(std::lower_bound(list.begin(), list.end(), s) - list.begin());
  };
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int f = 0; f < c.morphism_count(); ++f) {
    for (const auto& s : sieves[c.cod(f)]) actions[f].push_back(find(pullback_sieve(c, s, f)));
  }
  auto object = share(Presheaf(base, sizes, std::move(actions), std::move(labels), "Omega"));
  Components truth(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) truth[a] = {sizes[a] - 1};
  PresheafMap t(share(terminal_presheaf(base)), object, std::move(truth));
  return Omega{base, object, std::move(t), std::move(sieves)};
}

OmegaPtr shared_omega(const CategoryPtr& c) { return std::make_shared<const Omega>(omega(c)); }

bool is_subpresheaf(const Presheaf& x, const Subobject& s) {
  const auto& c = *x.base();
  if (static_cast<int>(s.size()) != c.object_count()) return false;
  for (int a = 0; a < c.object_count(); ++a) {
    if (static_cast<int>(s[a].size()) != x.size(a)) return false;
  }
  for (int m = 0; m < c.morphism_count(); ++m) {
    for (int y = 0; y < x.size(c.cod(m)); ++y) {
      if (s[c.cod(m)][y] && !s[c.dom(m)][x.act(m, y)]) return false;
    }
  }
  return true;
}

namespace {

std::vector<std::vector<int>> positions(const Subobject& s) {
  std::vector<std::vector<int>> pos(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    int k = 0;
    pos[a].assign(s[a].size(), -1);
    for (std::size_t x = 0; x < s[a].size(); ++x) {
      if (s[a][x]) pos[a][x] = k++;
    }
  }
  return pos;
}

}  // namespace

Presheaf subpresheaf(const Presheaf& x, const Subobject& s) {
  if (!is_subpresheaf(x, s)) throw PreconditionFailed("subset is not closed under the action");
  const auto& c = *x.base();
  const auto pos = positions(s);
  std::vector<int> sizes(c.object_count());
  std::vector<std::vector<std::string>> labels;
  if (x.has_labels()) labels.resize(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    for (int v = 0; v < x.size(a); ++v) {
      if (!s[a][v]) continue;
      ++sizes[a];
      if (x.has_labels()) labels[a].push_back(x.label(a, v));
    }
  }
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    for (int y = 0; y < x.size(c.cod(m)); ++y) {
      if (s[c.cod(m)][y]) actions[m].push_back(pos[c.dom(m)][x.act(m, y)]);
    }
  }
  return Presheaf(x.base(), std::move(sizes), std::move(actions), std::move(labels), "sub");
}

PresheafMap inclusion(const PresheafPtr& x, const Subobject& s) {
  auto sub = share(subpresheaf(*x, s));
  Components comps(s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t v = 0; v < s[a].size(); ++v) {
      if (s[a][v]) comps[a].push_back(static_cast<int>(v));
    }
  }
  return PresheafMap(sub, x, std::move(comps));
}

Subobject image_of(const PresheafMap& m) {
  const auto& y = m.target();
  Subobject s(y.base()->object_count());
  for (int a = 0; a < y.base()->object_count(); ++a) {
    s[a].assign(y.size(a), false);
    for (int v : m.component(a)) s[a][v] = true;
  }
  return s;
}

std::size_t subobject_size(const Subobject& s) {
  std::size_t n = 0;
  for (const auto& row : s) n += static_cast<std::size_t>(std::count(row.begin(), row.end(), true));
  return n;
}

int SubobjectLattice::index_of(const Subobject& s) const {
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (elements[i] == s) return static_cast<int>(i);
  }
  return -1;
}

SubobjectLattice subobjects(const PresheafPtr& xp) {
  const auto& x = *xp;
  const auto& c = *x.base();
  std::vector<int> offset(c.object_count() + 1, 0);
  for (int a = 0; a < c.object_count(); ++a) offset[a + 1] = offset[a] + x.size(a);
  const int n = offset.back();
  std::vector<std::vector<int>> implies(n);
  for (int m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m)) continue;
    for (int y = 0; y < x.size(c.cod(m)); ++y) {
      implies[offset[c.cod(m)] + y].push_back(offset[c.dom(m)] + x.act(m, y));
    }
  }
  std::vector<std::vector<int>> flat;
  Budget budget("subobject enumeration");
  detail::for_each_closed_set(n, implies, budget, [&](const std::vector<signed char>& state) {
    std::vector<int> members;
    for (int v = 0; v < n; ++v) {
      if (state[v]) members.push_back(v);
    }
    flat.push_back(std::move(members));
  });
  std::sort(flat.begin(), flat.end(), [](const auto& p, const auto& q) {
    return p.size() != q.size() ? p.size() < q.size() : p < q;
  });
  SubobjectLattice lattice;
  lattice.carrier = xp;
  for (const auto& members : flat) {
    Subobject s(c.object_count());
    for (int a = 0; a < c.object_count(); ++a) s[a].assign(x.size(a), false);
    int a = 0;
    for (int v : members) {
      while (v >= offset[a + 1]) ++a;
      s[a][v - offset[a]] = true;
    }
    lattice.elements.push_back(std::move(s));
  }
  const std::size_t k = lattice.elements.size();
  lattice.leq.assign(k, std::vector<bool>(k, false));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      bool sub = true;
      for (int a = 0; a < c.object_count() && sub; ++a) {
        for (int v = 0; v < x.size(a) && sub; ++v) {
          if (lattice.elements[i][a][v] && !lattice.elements[j][a][v]) sub = false;
        }
      }
      lattice.leq[i][j] = sub;
    }
  }
  return lattice;
}

PresheafMap characteristic(const Omega& om, const PresheafPtr& x, const Subobject& s) {
  if (!is_subpresheaf(*x, s)) throw PreconditionFailed("subset is not closed under the action");
  const auto& c = *om.base;
  Components comps(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    for (int v = 0; v < x->size(a); ++v) {
      Sieve chi{a, {}};
      for (int f : c.into(a)) {
        if (s[c.dom(f)][x->act(f, v)]) chi.members.push_back(f);
      }
      comps[a].push_back(om.index_of(chi));
    }
  }
  return PresheafMap(x, om.object, std::move(comps));
}

PresheafMap characteristic(const Omega& om, const PresheafMap& m) {
  const auto& c = *m.base();
  for (int a = 0; a < c.object_count(); ++a) {
    std::vector<int> seen(m.target().size(a), -1);
    for (int v = 0; v < m.source().size(a); ++v) {
      const int w = m(a, v);
      if (seen[w] >= 0) {
        throw PreconditionFailed("not a mono: elements " + m.source().label(a, seen[w]) + " and " +
                                 m.source().label(a, v) + " of " + c.object_name(a) +
                                 " both map to " + m.target().label(a, w));
      }
      seen[w] = v;
    }
  }
  return characteristic(om, m.target_ptr(), image_of(m));
}

Subobject classified(const Omega& om, const PresheafMap& phi) {
  const auto& c = *om.base;
  Subobject s(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    for (int v : phi.component(a)) s[a].push_back(v == om.maximal(a));
  }
  return s;
}

namespace {

// The square (A -> 1, m, t, chi) is a pullback: the mediating map from A into
// the computed pullback of t along chi is an iso.
bool is_pullback_square(const Omega& om, const PresheafMap& m, const PresheafMap& chi) {
  const Limit pb = pullback(om.truth, chi);
  const PresheafMap bang(m.source_ptr(), om.truth.source_ptr(), terminal_map(m.source()).components());
  if (!(compose(om.truth, bang) == compose(chi, m))) return false;
  return is_iso(pb.mediate(m.source_ptr(), {bang, m, compose(chi, m)}));
}

}  // namespace

ClassifierCertificate verify_classifier(const CategoryPtr& c, const std::vector<PresheafPtr>& corpus) {
  ClassifierCertificate cert;
  const Omega om = omega(c);
  auto fail = [&](std::string why) {
    if (cert.ok) {
      cert.ok = false;
      cert.failure = std::move(why);
    }
  };
  auto describe = [](const PresheafPtr& p, std::size_t i) {
    return p->name().empty() ? "corpus[" + std::to_string(i) + "]" : p->name();
  };
  const auto one = share(terminal_presheaf(c));
  cert.truth_domain_terminal = true;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& x = corpus[i];
    ++cert.presheaves;
    if (count_maps(*x, *one) != 1) {
      cert.truth_domain_terminal = false;
      fail("domain of t is not terminal: " + describe(x, i) + " has " +
           std::to_string(count_maps(*x, *one)) + " maps to it");
    }
    // Every phi : X -> Omega classifies exactly one subobject; count by image.
    std::map<Subobject, std::vector<Components>> by_subobject;
    std::size_t hom_count = 0;
    for_each_map(*x, *om.object, [&](const Components& comps) {
      ++hom_count;
      by_subobject[classified(om, PresheafMap(x, om.object, comps))].push_back(comps);
      return true;
    });
    const auto lattice = subobjects(x);
    cert.counts.emplace_back(lattice.elements.size(), hom_count);
    if (lattice.elements.size() != hom_count) {
      fail("|Sub(" + describe(x, i) + ")| = " + std::to_string(lattice.elements.size()) +
           " but |Hom(X, Omega)| = " + std::to_string(hom_count));
    }
    auto check_mono = [&](const PresheafMap& m, const std::string& what) {
      ++cert.monos;
      const auto chi = characteristic(om, m);
      const auto it = by_subobject.find(image_of(m));
      if (it == by_subobject.end() || it->second.size() != 1) {
        fail(what + ": " + std::to_string(it == by_subobject.end() ? 0 : it->second.size()) +
             " classifying maps");
      } else if (it->second.front() != chi.components()) {
        fail(what + ": characteristic map differs from the unique classifying map");
      } else if (!is_pullback_square(om, m, chi)) {
        fail(what + ": square is not a pullback");
      }
    };
    for (std::size_t k = 0; k < lattice.elements.size(); ++k) {
      check_mono(inclusion(x, lattice.elements[k]),
                 "subobject " + std::to_string(k) + " of " + describe(x, i));
    }
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      for_each_map(
          *corpus[j], *x,
          [&](const Components& comps) {
            check_mono(PresheafMap(corpus[j], x, comps),
                       "mono " + describe(corpus[j], j) + " >-> " + describe(x, i));
            return cert.ok;
          },
          MapSearch{.injective = true});
      if (!cert.ok) break;
    }
    if (!cert.ok) break;
  }
  return cert;
}

}  // namespace toposkit
