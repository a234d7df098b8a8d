#include "toposkit/corpus.hpp"

#include <algorithm>
#include <numeric>

#include "toposkit/classifier.hpp"
#include "toposkit/error.hpp"

namespace toposkit {

namespace {

bool fits(const Presheaf& p, int max_size) { return p.max_size() <= max_size; }

// Quotient of p by the smallest congruence identifying the given pairs.
Presheaf quotient(const Presheaf& p, const std::vector<std::tuple<int, int, int>>& glue) {
  const auto& c = *p.base();
  std::vector<int> offset(c.object_count() + 1, 0);
  for (int a = 0; a < c.object_count(); ++a) offset[a + 1] = offset[a] + p.size(a);
  std::vector<int> parent(offset.back());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  auto unite = [&](int u, int v) {
    u = find(u);
    v = find(v);
    if (u == v) return false;
    parent[std::max(u, v)] = std::min(u, v);
    return true;
  };
  for (auto [a, x, y] : glue) unite(offset[a] + x, offset[a] + y);
  // close: x ~ y at b forces P(m)x ~ P(m)y at dom m
  bool changed = true;
  while (changed) {
    changed = false;
    for (int m = 0; m < c.morphism_count(); ++m) {
      const int b = c.cod(m);
      const int a = c.dom(m);
      for (int x = 0; x < p.size(b); ++x) {
        const int r = find(offset[b] + x) - offset[b];
        if (r != x) changed |= unite(offset[a] + p.act(m, x), offset[a] + p.act(m, r));
      }
    }
  }
  std::vector<int> sizes(c.object_count());
  std::vector<std::vector<int>> cls(c.object_count());
  for (int a = 0; a < c.object_count(); ++a) {
    std::vector<int> id(p.size(a), -1);
    for (int x = 0; x < p.size(a); ++x) {
      const int r = find(offset[a] + x) - offset[a];
      if (id[r] < 0) id[r] = sizes[a]++;
      cls[a].push_back(id[r]);
    }
  }
  std::vector<std::vector<int>> actions(c.morphism_count());
  for (int m = 0; m < c.morphism_count(); ++m) {
    std::vector<int> act(sizes[c.cod(m)]);
    for (int x = 0; x < p.size(c.cod(m)); ++x) act[cls[c.cod(m)][x]] = cls[c.dom(m)][p.act(m, x)];
    actions[m] = std::move(act);
  }
  return Presheaf(p.base(), std::move(sizes), std::move(actions));
}

}  // namespace

std::optional<Presheaf> random_presheaf(const CategoryPtr& base, std::mt19937_64& rng,
                                        int max_size, int pieces, int merges) {
  const auto& c = *base;
  if (c.object_count() == 0) return initial_presheaf(base);
  std::uniform_int_distribution<int> pick(0, c.object_count() - 1);
  Presheaf p = initial_presheaf(base);
  for (int i = 0; i < pieces; ++i) {
    p = *coproduct(p, representable(base, pick(rng))).apex;
  }
  std::vector<std::tuple<int, int, int>> glue;
  for (int i = 0; i < merges; ++i) {
    const int a = pick(rng);
    if (p.size(a) < 2) continue;
    std::uniform_int_distribution<int> elt(0, p.size(a) - 1);
    glue.emplace_back(a, elt(rng), elt(rng));
  }
  Presheaf q = quotient(p, glue);
  if (!fits(q, max_size)) return std::nullopt;
  return q;
}

void for_each_presheaf(const CategoryPtr& base, int max_size,
                       const std::function<bool(const Presheaf&)>& visit) {
  const auto& c = *base;
  const int n = c.object_count();
  std::vector<int> sizes(n, 0);
  std::vector<int> moves;
  for (int m = 0; m < c.morphism_count(); ++m) {
    if (!c.is_identity(m)) moves.push_back(m);
  }
  Budget budget("presheaf enumeration");
  bool stop = false;
  // entries of every non-identity action, filled in order, checked as soon as a
  // composite's entries are known
  std::vector<std::vector<int>> actions(c.morphism_count());
  std::vector<std::pair<int, int>> cells;
  auto consistent = [&](int m) {
    // every known instance of P(g . f) = P(f) P(g) involving m
    for (int g = 0; g < c.morphism_count(); ++g) {
      for (int f : c.into(c.dom(g))) {
        const int gf = c.compose(g, f);
        if (g != m && f != m && gf != m) continue;
        for (int v = 0; v < sizes[c.cod(g)]; ++v) {
          const int pg = actions[g][v];
          if (pg < 0) continue;
          const int pf = actions[f][pg];
          const int pgf = actions[gf][v];
          if (pf < 0 || pgf < 0) continue;
          if (pgf != pf) return false;
        }
      }
    }
    return true;
  };
  std::function<void(std::size_t)> fill = [&](std::size_t k) {
    if (stop) return;
    if (k == cells.size()) {
      if (!visit(Presheaf(base, sizes, actions))) stop = true;
      return;
    }
    const auto [m, y] = cells[k];
    for (int v = 0; v < sizes[c.dom(m)] && !stop; ++v) {
      budget.tick();
      actions[m][y] = v;
      if (consistent(m)) fill(k + 1);
    }
    actions[m][y] = -1;
  };
  std::function<void(int)> choose = [&](int a) {
    if (stop) return;
    if (a == n) {
      cells.clear();
      for (int m = 0; m < c.morphism_count(); ++m) {
        if (c.is_identity(m)) {
          actions[m].resize(sizes[c.dom(m)]);
          std::iota(actions[m].begin(), actions[m].end(), 0);
        } else {
          actions[m].assign(sizes[c.cod(m)], -1);
        }
      }
      for (int m : moves) {
        for (int y = 0; y < sizes[c.cod(m)]; ++y) cells.emplace_back(m, y);
      }
      fill(0);
      return;
    }
    for (int s = 0; s <= max_size && !stop; ++s) {
      sizes[a] = s;
      choose(a + 1);
    }
  };
  choose(0);
}

std::vector<Presheaf> enumerate_presheaves(const CategoryPtr& base, int max_size) {
  std::vector<Presheaf> out;
  for_each_presheaf(base, max_size, [&](const Presheaf& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

std::vector<Presheaf> up_to_iso(std::vector<Presheaf> list) {
  std::vector<Presheaf> kept;
  for (auto& p : list) {
    const bool seen = std::any_of(kept.begin(), kept.end(),
                                  [&](const Presheaf& q) { return isomorphic(p, q); });
    if (!seen) kept.push_back(std::move(p));
  }
  return kept;
}

std::vector<PresheafPtr> standard_corpus(const CategoryPtr& base, int max_size, int random_count,
                                         std::uint64_t seed) {
  const auto& c = *base;
  std::vector<PresheafPtr> out;
  auto add = [&](Presheaf p, std::string name) {
    if (!fits(p, max_size)) return;
    for (const auto& q : out) {
      if (*q == p) return;
    }
    out.push_back(share(p.named(std::move(name))));
  };
  add(initial_presheaf(base), "0");
  add(terminal_presheaf(base), "1");
  for (int n = 2; n <= max_size; ++n) add(constant_presheaf(base, n), "const" + std::to_string(n));
  for (int a = 0; a < c.object_count(); ++a) add(representable(base, a), "y(" + c.object_name(a) + ")");
  for (int a = 0; a < c.object_count(); ++a) {
    for (int b = a; b < c.object_count(); ++b) {
      add(*coproduct(representable(base, a), representable(base, b)).apex,
          "y(" + c.object_name(a) + ")+y(" + c.object_name(b) + ")");
    }
  }
  for (int a = 0; a < c.object_count(); ++a) {
    const auto y = share(representable(base, a));
    const auto lattice = subobjects(y);
    for (std::size_t k = 1; k + 1 < lattice.elements.size(); ++k) {
      add(subpresheaf(*y, lattice.elements[k]), "sub" + std::to_string(k) + "(y(" + c.object_name(a) + "))");
    }
  }
  std::mt19937_64 rng(seed);
  int made = 0;
  for (int attempt = 0; made < random_count && attempt < 20 * random_count + 20; ++attempt) {
    std::uniform_int_distribution<int> pieces(1, 3);
    std::uniform_int_distribution<int> merges(0, 2);
    auto p = random_presheaf(base, rng, max_size, pieces(rng), merges(rng));
    if (!p) continue;
    const std::size_t before = out.size();
    add(*p, "random" + std::to_string(made));
    if (out.size() > before) ++made;
  }
  return out;
}

}  // namespace toposkit
