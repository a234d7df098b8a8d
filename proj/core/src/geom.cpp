#include "toposkit/geom.hpp"

#include <memory>
#include <numeric>

#include "toposkit/catalog.hpp"
#include "toposkit/corpus.hpp"
#include "toposkit/error.hpp"

namespace toposkit {

namespace {

std::string nameof(const Presheaf& p, std::size_t i) {
  return p.name().empty() ? "corpus[" + std::to_string(i) + "]" : "'" + p.name() + "'";
}

bool is_identity_on(const PresheafMap& h) {
  for (int a = 0; a < static_cast<int>(h.components().size()); ++a) {
    for (int x = 0; x < static_cast<int>(h.component(a).size()); ++x) {
      if (h(a, x) != x) return false;
    }
  }
  return h.source() == h.target();
}

bool all_singletons(const Presheaf& p) {
  for (int s : p.sizes()) {
    if (s != 1) return false;
  }
  return true;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

PresheafFunctor identity_presheaf_functor(const CategoryPtr& base) {
  return PresheafFunctor{"id", base, base, [](const PresheafPtr& x) { return x; },
                         [](const PresheafMap& h) { return h; }};
}

Adjunction identity_adjunction(const CategoryPtr& base) {
  return Adjunction{identity_presheaf_functor(base), identity_presheaf_functor(base),
                    [](const PresheafPtr& x) { return identity_map(x); },
                    [](const PresheafPtr& x) { return identity_map(x); }};
}

AdjunctionCertificate verify_adjunction(const Adjunction& adj, const std::vector<PresheafPtr>& left_corpus,
                                        const std::vector<PresheafPtr>& right_corpus,
                                        std::size_t maps_per_pair) {
  AdjunctionCertificate cert;
  auto fail = [&](std::string why) {
    if (cert.ok) cert.failure = std::move(why);
    cert.ok = false;
  };
  for (std::size_t i = 0; i < left_corpus.size() && cert.ok; ++i) {
    const auto& x = left_corpus[i];
    const auto eta = adj.unit(x);
    const auto lx = adj.left(x);
    const auto triangle = compose(adj.counit(lx), adj.left(eta));
    ++cert.triangles;
    if (!is_identity_on(triangle)) fail("counit . L(unit) is not the identity at " + nameof(*x, i));
  }
  for (std::size_t i = 0; i < right_corpus.size() && cert.ok; ++i) {
    const auto& y = right_corpus[i];
    const auto ry = adj.right(y);
    const auto triangle = compose(adj.right(adj.counit(y)), adj.unit(ry));
    ++cert.triangles;
    if (!is_identity_on(triangle)) fail("R(counit) . unit is not the identity at " + nameof(*y, i));
  }
  const MapSearch some{false, maps_per_pair};
  for (std::size_t i = 0; i < left_corpus.size() && cert.ok; ++i) {
    for (std::size_t j = 0; j < left_corpus.size() && cert.ok; ++j) {
      const auto eta_x = adj.unit(left_corpus[i]);
      const auto eta_y = adj.unit(left_corpus[j]);
      for (const auto& h : enumerate_maps(left_corpus[i], left_corpus[j], some)) {
        ++cert.naturality;
        if (compose(adj.right(adj.left(h)), eta_x).components() != compose(eta_y, h).components()) {
          fail("unit is not natural along a map " + nameof(*left_corpus[i], i) + " -> " +
               nameof(*left_corpus[j], j));
          break;
        }
      }
    }
  }
  for (std::size_t i = 0; i < right_corpus.size() && cert.ok; ++i) {
    for (std::size_t j = 0; j < right_corpus.size() && cert.ok; ++j) {
      const auto eps_x = adj.counit(right_corpus[i]);
      const auto eps_y = adj.counit(right_corpus[j]);
      for (const auto& h : enumerate_maps(right_corpus[i], right_corpus[j], some)) {
        ++cert.naturality;
        if (compose(eps_y, adj.left(adj.right(h))).components() != compose(h, eps_x).components()) {
          fail("counit is not natural along a map " + nameof(*right_corpus[i], i) + " -> " +
               nameof(*right_corpus[j], j));
          break;
        }
      }
    }
  }
  return cert;
}

Presheaf restrict_along(const FinFunctor& f, const Presheaf& q) {
  const auto& c = *f.source();
  if (!same_category(f.target(), q.base())) throw PreconditionFailed("presheaf is not on the functor's target");
  std::vector<int> sizes(c.object_count());
  std::vector<std::vector<std::string>> labels(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    sizes[a] = q.size(f.object(a));
    for (int x = 0; x < sizes[a]; ++x) labels[a].push_back(q.label(f.object(a), x));
  }
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) actions[m] = q.action(f.morphism(m));
  return Presheaf(f.source(), std::move(sizes), std::move(actions), std::move(labels), q.name());
}

PresheafMap restrict_along(const FinFunctor& f, const PresheafMap& h) {
  Components comps(f.source()->object_count());
  for (int a = 0; a < f.source()->object_count(); ++a) comps[a] = h.component(f.object(a));
  return PresheafMap(share(restrict_along(f, h.source())), share(restrict_along(f, h.target())), std::move(comps));
}

void validate(const PresheafValuedFunctor& m) {
  const auto& c = *m.source;
  if (static_cast<int>(m.objects.size()) != c.object_count() ||
      static_cast<int>(m.arrows.size()) != c.morphism_count()) {
    throw MalformedInput("functor into presheaves: wrong number of objects or arrows");
  }
  for (const auto& p : m.objects) {
    if (!same_category(p->base(), m.target_base)) throw MalformedInput("functor into presheaves: object on the wrong base");
  }
  for (int u = 0; u < c.morphism_count(); ++u) {
    const auto& a = m.arrows[u];
    if (!(a.source() == *m.objects[c.dom(u)]) || !(a.target() == *m.objects[c.cod(u)])) {
      throw MalformedInput("functor into presheaves: arrow " + c.morphism_name(u) + " has the wrong type");
    }
    if (c.is_identity(u) && !is_identity_on(a)) {
      throw MalformedInput("functor into presheaves: identity " + c.morphism_name(u) + " not preserved");
    }
  }
  for (int g = 0; g < c.morphism_count(); ++g) {
    for (int f : c.into(c.dom(g))) {
      if (compose(m.arrows[g], m.arrows[f]).components() != m.arrows[c.compose(g, f)].components()) {
        throw MalformedInput("functor into presheaves: composite " + c.morphism_name(g) + " . " +
                             c.morphism_name(f) + " not preserved");
      }
    }
  }
}

PresheafMap representable_map(const CategoryPtr& c, int k) {
  const auto src = share(representable(c, c->dom(k)));
  const auto tgt = share(representable(c, c->cod(k)));
  Components comps(c->object_count());
  for (int x = 0; x < c->object_count(); ++x) {
    for (int h : c->hom(x, c->dom(k))) comps[x].push_back(c->hom_position(c->compose(k, h)));
  }
  return PresheafMap(src, tgt, std::move(comps));
}

PresheafValuedFunctor yoneda_along(const FinFunctor& f) {
  const auto& c = *f.source();
  PresheafValuedFunctor m{f.source(), f.target(), {}, {}};
  for (int a = 0; a < c.object_count(); ++a) m.objects.push_back(share(representable(f.target(), f.object(a))));
  for (int u = 0; u < c.morphism_count(); ++u) {
    const auto y = representable_map(f.target(), f.morphism(u));
    m.arrows.emplace_back(m.objects[c.dom(u)], m.objects[c.cod(u)], y.components());
  }
  return m;
}

PresheafValuedFunctor yoneda_functor(const CategoryPtr& c) { return yoneda_along(identity_functor(c)); }

PresheafValuedFunctor restricted_yoneda(const FinFunctor& f) {
  const auto& d = *f.target();
  PresheafValuedFunctor m{f.target(), f.source(), {}, {}};
  for (int b = 0; b < d.object_count(); ++b) {
    m.objects.push_back(share(restrict_along(f, representable(f.target(), b))));
  }
  for (int k = 0; k < d.morphism_count(); ++k) {
    const auto y = restrict_along(f, representable_map(f.target(), k));
    m.arrows.emplace_back(m.objects[d.dom(k)], m.objects[d.cod(k)], y.components());
  }
  return m;
}

Tensor tensor(const PresheafPtr& p, const PresheafValuedFunctor& m) {
  const auto& c = *m.source;
  const auto& d = *m.target_base;
  if (!same_category(p->base(), m.source)) throw PreconditionFailed("tensor: presheaf on the wrong base");
  Tensor t;
  const int nd = d.object_count();
  const int nc = c.object_count();
  t.representative.resize(nd);
  t.offset.assign(nd, std::vector<int>(nc));
  t.width.assign(nd, std::vector<int>(nc));
  t.class_of_triple.resize(nd);
  Budget budget("tensor product");
  std::vector<int> sizes(nd);
  std::vector<std::vector<std::string>> labels(nd);
  for (int e = 0; e < nd; ++e) {
    int total = 0;
    for (int a = 0; a < nc; ++a) {
      t.offset[e][a] = total;
      t.width[e][a] = m.objects[a]->size(e);
      total += p->size(a) * t.width[e][a];
    }
    budget.tick(static_cast<std::uint64_t>(total));
    UnionFind uf(total);
    for (int u = 0; u < c.morphism_count(); ++u) {
      const int a = c.dom(u);
      const int b = c.cod(u);
      for (int x = 0; x < p->size(b); ++x) {
        for (int k = 0; k < t.width[e][a]; ++k) {
          uf.unite(t.offset[e][a] + p->act(u, x) * t.width[e][a] + k,
                   t.offset[e][b] + x * t.width[e][b] + m.arrows[u](e, k));
        }
      }
    }
    std::vector<int> class_of_root(total, -1);
    t.class_of_triple[e].resize(total);
    for (int a = 0; a < nc; ++a) {
      for (int x = 0; x < p->size(a); ++x) {
        for (int k = 0; k < t.width[e][a]; ++k) {
          const int i = t.offset[e][a] + x * t.width[e][a] + k;
          const int r = uf.find(i);
          if (class_of_root[r] < 0) {
            class_of_root[r] = static_cast<int>(t.representative[e].size());
            t.representative[e].push_back({a, x, k});
            labels[e].push_back(p->label(a, x) + "|" + m.objects[a]->label(e, k));
          }
          t.class_of_triple[e][i] = class_of_root[r];
        }
      }
    }
    sizes[e] = static_cast<int>(t.representative[e].size());
  }
  std::vector<std::vector<int>> actions(d.morphism_count());
  for (int k = 0; k < d.morphism_count(); ++k) {
    const int from = d.cod(k);
    const int to = d.dom(k);
    for (const auto& [a, x, i] : t.representative[from]) {
      actions[k].push_back(t.class_of(to, a, x, m.objects[a]->act(k, i)));
    }
  }
  t.object = share(Presheaf(m.target_base, std::move(sizes), std::move(actions), std::move(labels),
                            p->name().empty() ? "tensor" : p->name() + "*"));
  return t;
}

PresheafMap tensor_map(const Tensor& from, const Tensor& to, const PresheafMap& h,
                       const PresheafValuedFunctor& m) {
  Components comps(m.target_base->object_count());
  for (int e = 0; e < m.target_base->object_count(); ++e) {
    for (const auto& [a, x, i] : from.representative[e]) comps[e].push_back(to.class_of(e, a, h(a, x), i));
  }
  return PresheafMap(from.object, to.object, std::move(comps));
}

HomPresheaf hom_presheaf(const PresheafValuedFunctor& a, const PresheafPtr& q) {
  const auto& c = *a.source;
  if (!same_category(q->base(), a.target_base)) throw PreconditionFailed("hom presheaf: target on the wrong base");
  HomPresheaf h;
  h.elements.resize(c.object_count());
  h.index.resize(c.object_count());
  std::vector<int> sizes(c.object_count());
  for (int x = 0; x < c.object_count(); ++x) {
    for_each_map(*a.objects[x], *q, [&](const Components& phi) {
      h.index[x].emplace(flatten(phi), static_cast<int>(h.elements[x].size()));
      h.elements[x].push_back(phi);
      return true;
    });
    sizes[x] = static_cast<int>(h.elements[x].size());
  }
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int u = 0; u < c.morphism_count(); ++u) {
    const auto& arrow = a.arrows[u];
    for (const auto& phi : h.elements[c.cod(u)]) {
      Components pulled(phi.size());
      for (std::size_t e = 0; e < phi.size(); ++e) {
        for (int v : arrow.component(static_cast<int>(e))) pulled[e].push_back(phi[e][v]);
      }
      actions[u].push_back(h.index[c.dom(u)].at(flatten(pulled)));
    }
  }
  h.object = share(Presheaf(a.source, std::move(sizes), std::move(actions), {},
                            q->name().empty() ? "hom" : "hom(" + q->name() + ")"));
  return h;
}

PresheafMap hom_presheaf_map(const HomPresheaf& from, const HomPresheaf& to, const PresheafMap& h) {
  Components comps(from.elements.size());
  for (std::size_t x = 0; x < from.elements.size(); ++x) {
    for (const auto& phi : from.elements[x]) {
      Components pushed(phi.size());
      for (std::size_t e = 0; e < phi.size(); ++e) {
        for (int v : phi[e]) pushed[e].push_back(h(static_cast<int>(e), v));
      }
      comps[x].push_back(to.index[x].at(flatten(pushed)));
    }
  }
  return PresheafMap(from.object, to.object, std::move(comps));
}

Tensor left_kan(const FinFunctor& f, const PresheafPtr& p) { return tensor(p, yoneda_along(f)); }

HomPresheaf right_kan(const FinFunctor& f, const PresheafPtr& p) { return hom_presheaf(restricted_yoneda(f), p); }

PresheafMap coyoneda(const PresheafPtr& p) {
  const auto& c = p->base();
  const auto t = tensor(p, yoneda_functor(c));
  Components comps(c->object_count());
  for (int e = 0; e < c->object_count(); ++e) {
    for (const auto& [a, x, i] : t.representative[e]) comps[e].push_back(p->act(c->hom(e, a)[i], x));
  }
  return PresheafMap(t.object, p, std::move(comps));
}

AdjointTriple adjoint_triple(const FinFunctor& f) {
  const auto y = std::make_shared<const PresheafValuedFunctor>(yoneda_along(f));
  const auto ry = std::make_shared<const PresheafValuedFunctor>(restricted_yoneda(f));
  const CategoryPtr c = f.source();
  const CategoryPtr d = f.target();
  PresheafFunctor lower{"lan", c, d, [y](const PresheafPtr& p) { return tensor(p, *y).object; },
                        [y](const PresheafMap& h) {
                          return tensor_map(tensor(h.source_ptr(), *y), tensor(h.target_ptr(), *y), h, *y);
                        }};
  PresheafFunctor restrict{"restrict", d, c, [f](const PresheafPtr& q) { return share(restrict_along(f, *q)); },
                           [f](const PresheafMap& h) { return restrict_along(f, h); }};
  PresheafFunctor upper{"ran", c, d, [ry](const PresheafPtr& p) { return hom_presheaf(*ry, p).object; },
                        [ry](const PresheafMap& h) {
                          return hom_presheaf_map(hom_presheaf(*ry, h.source_ptr()), hom_presheaf(*ry, h.target_ptr()), h);
                        }};
  // f_! -| f*
  auto lower_unit = [f, y](const PresheafPtr& p) {
    const auto t = tensor(p, *y);
    const auto& cc = *f.source();
    const auto& dd = *f.target();
    Components comps(cc.object_count());
    for (int a = 0; a < cc.object_count(); ++a) {
      const int fa = f.object(a);
      for (int x = 0; x < p->size(a); ++x) comps[a].push_back(t.class_of(fa, a, x, dd.hom_position(dd.identity(fa))));
    }
    return PresheafMap(p, share(restrict_along(f, *t.object)), std::move(comps));
  };
  auto lower_counit = [f, y](const PresheafPtr& q) {
    const auto t = tensor(share(restrict_along(f, *q)), *y);
    const auto& dd = *f.target();
    Components comps(dd.object_count());
    for (int e = 0; e < dd.object_count(); ++e) {
      for (const auto& [a, x, i] : t.representative[e]) comps[e].push_back(q->act(dd.hom(e, f.object(a))[i], x));
    }
    return PresheafMap(t.object, q, std::move(comps));
  };
  // f* -| f_*
  auto upper_unit = [f, ry](const PresheafPtr& q) {
    const auto h = hom_presheaf(*ry, share(restrict_along(f, *q)));
    const auto& cc = *f.source();
    const auto& dd = *f.target();
    Components comps(dd.object_count());
    for (int e = 0; e < dd.object_count(); ++e) {
      for (int x = 0; x < q->size(e); ++x) {
        Components theta(cc.object_count());
        for (int a = 0; a < cc.object_count(); ++a) {
          for (int k : dd.hom(f.object(a), e)) theta[a].push_back(q->act(k, x));
        }
        comps[e].push_back(h.index[e].at(flatten(theta)));
      }
    }
    return PresheafMap(q, h.object, std::move(comps));
  };
  auto upper_counit = [f, ry](const PresheafPtr& p) {
    const auto h = hom_presheaf(*ry, p);
    const auto& cc = *f.source();
    const auto& dd = *f.target();
    Components comps(cc.object_count());
    for (int a = 0; a < cc.object_count(); ++a) {
      const int fa = f.object(a);
      for (const auto& theta : h.elements[fa]) comps[a].push_back(theta[a][dd.hom_position(dd.identity(fa))]);
    }
    return PresheafMap(share(restrict_along(f, *h.object)), p, std::move(comps));
  };
  Adjunction left{lower, restrict, lower_unit, lower_counit};
  Adjunction right{restrict, upper, upper_unit, upper_counit};
  return AdjointTriple{f, lower, restrict, upper, std::move(left), std::move(right)};
}

LexReport check_lex(const PresheafFunctor& l, const std::vector<PresheafPtr>& corpus, std::size_t maps_per_pair) {
  LexReport r;
  auto fail = [&](bool& kind, std::string why) {
    if (r.ok) r.failure = std::move(why);
    r.ok = false;
    kind = false;
  };
  ++r.probes;
  const auto one = l(share(terminal_presheaf(l.source)));
  if (!all_singletons(*one)) fail(r.terminal, "terminal: image of 1 is not terminal");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = i; j < corpus.size(); ++j) {
      ++r.probes;
      const auto prod = product(corpus[i], corpus[j]);
      const auto image = product(l(corpus[i]), l(corpus[j]));
      const auto cmp = pairing(image, l(prod.legs[0]), l(prod.legs[1]));
      if (!is_iso(cmp)) {
        fail(r.products, "product: comparison at " + nameof(*corpus[i], i) + " x " + nameof(*corpus[j], j) +
                             " is not iso");
      }
    }
  }
  const MapSearch some{false, maps_per_pair};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      const auto maps = enumerate_maps(corpus[i], corpus[j], some);
      for (std::size_t p = 0; p < maps.size(); ++p) {
        for (std::size_t q = p + 1; q < maps.size(); ++q) {
          ++r.probes;
          const auto eq = equalizer(maps[p], maps[q]);
          const auto le = l(eq.legs[0]);
          const auto lf = l(maps[p]);
          const auto image = equalizer(lf, l(maps[q]));
          const auto cmp = image.mediate(le.source_ptr(), {le, compose(lf, le)});
          if (!is_iso(cmp)) {
            fail(r.equalizers, "equalizer: comparison for maps " + nameof(*corpus[i], i) + " => " +
                                   nameof(*corpus[j], j) + " (#" + std::to_string(p) + ", #" +
                                   std::to_string(q) + ") is not iso");
          }
        }
      }
    }
  }
  return r;
}

GeometricCertificate verify_geometric(const GeometricMorphism& g) {
  GeometricCertificate cert;
  cert.adjunction = verify_adjunction(g.adjunction, g.codomain_corpus, g.domain_corpus);
  cert.lex = check_lex(g.inverse_image(), g.codomain_corpus);
  cert.ok = cert.adjunction.ok && cert.lex.ok;
  cert.failure = !cert.adjunction.ok ? "adjunction: " + cert.adjunction.failure
                 : !cert.lex.ok      ? "inverse image not left exact: " + cert.lex.failure
                                     : "";
  return cert;
}

GeometricMorphism essential_morphism(const FinFunctor& f, std::vector<PresheafPtr> c_corpus,
                                     std::vector<PresheafPtr> d_corpus) {
  auto triple = adjoint_triple(f);
  return GeometricMorphism{"essential(" + f.name() + ")", std::move(triple.right), std::move(d_corpus),
                           std::move(c_corpus)};
}

GeometricMorphism identity_morphism(const CategoryPtr& base, std::vector<PresheafPtr> corpus) {
  auto copy = corpus;
  return GeometricMorphism{"id", identity_adjunction(base), std::move(corpus), std::move(copy)};
}

GeometricMorphism sheaf_inclusion(const GrothendieckTopology& t, std::vector<PresheafPtr> corpus) {
  const auto base = t.base();
  PresheafFunctor sheafify_functor{
      "sheafify", base, base, [t](const PresheafPtr& p) { return sheafify(p, t).sheaf; },
      [t](const PresheafMap& h) {
        return sheafify_map(sheafify(h.source_ptr(), t), sheafify(h.target_ptr(), t), h, t);
      }};
  Adjunction adj{sheafify_functor, identity_presheaf_functor(base),
                 [t](const PresheafPtr& p) { return sheafify(p, t).unit; },
                 [t](const PresheafPtr& f) { return inverse(sheafify(f, t).unit); }};
  std::vector<PresheafPtr> sheaves;
  for (const auto& p : corpus) {
    auto s = sheafify(p, t).sheaf;
    bool seen = false;
    for (const auto& q : sheaves) seen = seen || *q == *s;
    if (!seen) sheaves.push_back(std::move(s));
  }
  return GeometricMorphism{"sheaves(" + t.name() + ")", std::move(adj), std::move(corpus), std::move(sheaves)};
}

GeometricMorphism broken_pair() {
  const auto two = catalog::discrete(2, "2");
  const auto one = catalog::terminal_category();
  const FinFunctor f(two, one, {0, 0}, {0, 0}, "collapse");
  auto triple = adjoint_triple(f);
  return GeometricMorphism{"broken", std::move(triple.left), standard_corpus(two, 2, 0),
                           standard_corpus(one, 3, 0)};
}

EmbeddingReport check_embedding(const GeometricMorphism& g) {
  EmbeddingReport r;
  for (std::size_t i = 0; i < g.domain_corpus.size(); ++i) {
    if (!is_iso(g.adjunction.counit(g.domain_corpus[i]))) {
      r.embedding = false;
      r.witness = i;
      r.failure = "counit at " + nameof(*g.domain_corpus[i], i) + " is not iso";
      break;
    }
  }
  return r;
}

FlatnessCertificate flatness(const Presheaf& functor_on_opposite) {
  auto elements = category_of_elements(functor_on_opposite, Orientation::Covariant);
  auto report = check_cofiltered(*elements.category);
  return FlatnessCertificate{functor_on_opposite, std::move(elements), std::move(report)};
}

std::vector<FlatnessCertificate> points(const CategoryPtr& c, int size_bound) {
  std::vector<FlatnessCertificate> out;
  for_each_presheaf(opposite(c), size_bound, [&](const Presheaf& p) {
    auto cert = flatness(p);
    if (!cert.flat()) return true;
    for (const auto& q : out) {
      if (isomorphic(q.functor, p)) return true;
    }
    out.push_back(std::move(cert));
    return true;
  });
  return out;
}

namespace {

struct LimitData {
  int terminal = -1;
  std::vector<std::array<int, 2>> pairs;
  std::vector<ProductCone> products;
  std::vector<std::array<int, 2>> parallel;
  std::vector<EqualizerCone> equalizers;
};

LimitData limit_data(const FinCategory& c) {
  std::string why;
  if (!has_finite_limits(c, &why)) throw PreconditionFailed("category lacks finite limits: " + why);
  LimitData l;
  l.terminal = *find_terminal(c);
  for (int a = 0; a < c.object_count(); ++a) {
    for (int b = a; b < c.object_count(); ++b) {
      l.pairs.push_back({a, b});
      l.products.push_back(*find_product(c, a, b));
    }
  }
  for (int a = 0; a < c.object_count(); ++a) {
    for (int b = 0; b < c.object_count(); ++b) {
      const auto hom = c.hom(a, b);
      for (std::size_t i = 0; i < hom.size(); ++i) {
        for (std::size_t j = i + 1; j < hom.size(); ++j) {
          l.parallel.push_back({hom[i], hom[j]});
          l.equalizers.push_back(*find_equalizer(c, hom[i], hom[j]));
        }
      }
    }
  }
  return l;
}

// F : C -> sets stored on C^op; F(f) = p.action(f).
bool preserves_limits(const Presheaf& p, const FinCategory& c, const LimitData& l) {
  if (p.size(l.terminal) != 1) return false;
  for (std::size_t k = 0; k < l.pairs.size(); ++k) {
    const auto [a, b] = l.pairs[k];
    const auto& cone = l.products[k];
    if (p.size(cone.apex) != p.size(a) * p.size(b)) return false;
    std::vector<bool> hit(p.size(a) * p.size(b));
    for (int x = 0; x < p.size(cone.apex); ++x) {
      const int i = p.act(cone.first, x) * p.size(b) + p.act(cone.second, x);
      if (hit[i]) return false;
      hit[i] = true;
    }
  }
  for (std::size_t k = 0; k < l.parallel.size(); ++k) {
    const auto [u, v] = l.parallel[k];
    const auto& cone = l.equalizers[k];
    const int a = c.dom(u);
    std::vector<int> count(p.size(a));
    for (int x = 0; x < p.size(cone.apex); ++x) {
      const int y = p.act(cone.arrow, x);
      if (count[y]++ > 0) return false;
    }
    for (int y = 0; y < p.size(a); ++y) {
      const bool equalized = p.act(u, y) == p.act(v, y);
      if (equalized != (count[y] == 1)) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<Presheaf> lex_set_functors(const CategoryPtr& c, int size_bound) {
  const auto l = limit_data(*c);
  std::vector<Presheaf> out;
  for_each_presheaf(opposite(c), size_bound, [&](const Presheaf& p) {
    if (!preserves_limits(p, *c, l)) return true;
    for (const auto& q : out) {
      if (isomorphic(q, p)) return true;
    }
    out.push_back(p);
    return true;
  });
  return out;
}

std::optional<std::string> lex_failure(const PresheafValuedFunctor& m) {
  const auto& c = *m.source;
  const auto l = limit_data(c);
  if (!all_singletons(*m.objects[l.terminal])) {
    return "terminal object " + c.object_name(l.terminal) + " is not sent to 1";
  }
  for (std::size_t k = 0; k < l.pairs.size(); ++k) {
    const auto [a, b] = l.pairs[k];
    const auto& cone = l.products[k];
    const auto prod = product(m.objects[a], m.objects[b]);
    if (!is_iso(pairing(prod, m.arrows[cone.first], m.arrows[cone.second]))) {
      return "product of " + c.object_name(a) + " and " + c.object_name(b) + " is not preserved";
    }
  }
  for (std::size_t k = 0; k < l.parallel.size(); ++k) {
    const auto [u, v] = l.parallel[k];
    const auto& cone = l.equalizers[k];
    const auto eq = equalizer(m.arrows[u], m.arrows[v]);
    const auto& e = m.arrows[cone.arrow];
    if (!is_iso(eq.mediate(m.objects[cone.apex], {e, compose(m.arrows[u], e)}))) {
      return "equalizer of " + c.morphism_name(u) + " and " + c.morphism_name(v) + " is not preserved";
    }
  }
  return std::nullopt;
}

ClassifiedMorphism classify_lex(const PresheafValuedFunctor& model, std::vector<PresheafPtr> c_corpus,
                                std::vector<PresheafPtr> d_corpus) {
  validate(model);
  if (auto why = lex_failure(model)) throw PreconditionFailed("functor is not left exact: " + *why);
  const auto m = std::make_shared<const PresheafValuedFunctor>(model);
  const auto c = model.source;
  const auto d = model.target_base;
  PresheafFunctor left{"tensor", c, d, [m](const PresheafPtr& p) { return tensor(p, *m).object; },
                       [m](const PresheafMap& h) {
                         return tensor_map(tensor(h.source_ptr(), *m), tensor(h.target_ptr(), *m), h, *m);
                       }};
  PresheafFunctor right{"hom", d, c, [m](const PresheafPtr& q) { return hom_presheaf(*m, q).object; },
                        [m](const PresheafMap& h) {
                          return hom_presheaf_map(hom_presheaf(*m, h.source_ptr()), hom_presheaf(*m, h.target_ptr()), h);
                        }};
  auto unit = [m](const PresheafPtr& p) {
    const auto t = tensor(p, *m);
    const auto h = hom_presheaf(*m, t.object);
    const auto& cc = *m->source;
    Components comps(cc.object_count());
    for (int a = 0; a < cc.object_count(); ++a) {
      for (int x = 0; x < p->size(a); ++x) {
        Components phi(m->target_base->object_count());
        for (int e = 0; e < m->target_base->object_count(); ++e) {
          for (int i = 0; i < m->objects[a]->size(e); ++i) phi[e].push_back(t.class_of(e, a, x, i));
        }
        comps[a].push_back(h.index[a].at(flatten(phi)));
      }
    }
    return PresheafMap(p, h.object, std::move(comps));
  };
  auto counit = [m](const PresheafPtr& q) {
    const auto h = hom_presheaf(*m, q);
    const auto t = tensor(h.object, *m);
    Components comps(m->target_base->object_count());
    for (int e = 0; e < m->target_base->object_count(); ++e) {
      for (const auto& [a, phi, i] : t.representative[e]) comps[e].push_back(h.elements[a][phi][e][i]);
    }
    return PresheafMap(t.object, q, std::move(comps));
  };
  ClassifiedMorphism out{GeometricMorphism{"classified", Adjunction{left, right, unit, counit}, std::move(c_corpus),
                                           std::move(d_corpus)},
                         model,
                         {}};
  // L(y c) -> M(c), [(c', h, x)] |-> M(h) x, natural in c
  auto& rt = out.round_trip;
  std::vector<Tensor> images;
  for (int a = 0; a < c->object_count(); ++a) {
    images.push_back(tensor(share(representable(c, a)), *m));
    const auto& t = images.back();
    Components comps(d->object_count());
    for (int e = 0; e < d->object_count(); ++e) {
      for (const auto& [b, h, i] : t.representative[e]) comps[e].push_back(m->arrows[c->hom(b, a)[h]](e, i));
    }
    rt.comparison.emplace_back(t.object, m->objects[a], std::move(comps));
    if (rt.ok && !is_iso(rt.comparison.back())) {
      rt.ok = false;
      rt.failure = "L(y(" + c->object_name(a) + ")) is not isomorphic to M(" + c->object_name(a) + ")";
    }
  }
  for (int u = 0; u < c->morphism_count() && rt.ok; ++u) {
    const int a = c->dom(u);
    const int b = c->cod(u);
    const auto ly = tensor_map(images[a], images[b], representable_map(c, u), *m);
    if (compose(rt.comparison[b], ly).components() != compose(m->arrows[u], rt.comparison[a]).components()) {
      rt.ok = false;
      rt.failure = "comparison is not natural along " + c->morphism_name(u);
    }
  }
  return out;
}

}  // namespace toposkit
