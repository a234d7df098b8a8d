#include "toposkit/workspace.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "toposkit/catalog.hpp"
#include "toposkit/corpus.hpp"

namespace toposkit {

namespace {

std::string position(const std::string& file, int line, const std::string& message) {
  if (line <= 0) return file + ": " + message;
  return file + ":" + std::to_string(line) + ": " + message;
}

const std::set<std::string, std::less<>> kHeaders = {
    "category", "presheaf", "presheaf-map", "topology", "space",  "space-map", "bundle",
    "functor",  "model",    "group",        "ring",     "corpus", "workspace", "include"};

std::vector<std::string> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> raw;
  std::istringstream in{std::string(line)};
  for (std::string t; in >> t;) raw.push_back(t);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::string t = raw[i];
    auto depth = [](const std::string& s) {
      return std::count(s.begin(), s.end(), '{') - std::count(s.begin(), s.end(), '}');
    };
    while (depth(t) > 0 && i + 1 < raw.size()) t += " " + raw[++i];
    if (t.size() > 1 && t.back() == ':') {
      t.pop_back();
      out.push_back(t);
      out.emplace_back(":");
    } else {
      out.push_back(t);
    }
  }
  return out;
}

std::string strip_spaces(std::string s) {
  std::erase(s, ' ');
  return s;
}

}  // namespace

ParseError::ParseError(std::string file, int line, const std::string& message)
    : MalformedInput(position(file, line, message)), file_(std::move(file)), line_(line), message_(message) {}

std::string to_string(ArtifactKind k) {
  switch (k) {
    case ArtifactKind::Category: return "category";
    case ArtifactKind::Presheaf: return "presheaf";
    case ArtifactKind::PresheafMap: return "presheaf-map";
    case ArtifactKind::Topology: return "topology";
    case ArtifactKind::Space: return "space";
    case ArtifactKind::SpaceMap: return "space-map";
    case ArtifactKind::Bundle: return "bundle";
    case ArtifactKind::Functor: return "functor";
    case ArtifactKind::Model: return "model";
    case ArtifactKind::Group: return "group";
    case ArtifactKind::Ring: return "ring";
    case ArtifactKind::Corpus: return "corpus";
  }
  return "?";
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// One block at a time; every failure is reported at the line being read.
class BlockBuilder {
 public:
  BlockBuilder(Workspace& ws, const Workspace::Block& b) : ws_(ws), b_(b), line_(b.header.number) {}

  void run() {
    try {
      dispatch();
    } catch (const ParseError&) {
      throw;
    } catch (const MalformedInput& e) {
      throw ParseError(b_.file, line_, e.what());
    } catch (const PreconditionFailed& e) {
      throw ParseError(b_.file, line_, e.what());
    }
  }

 private:
  using Tokens = std::vector<std::string>;

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(b_.file, line_, message); }

  const Tokens& header() const { return b_.header.tokens; }

  void at(const Workspace::Line& l) { line_ = l.number; }

  const std::string& token(const Tokens& t, std::size_t i, const char* what) const {
    if (i >= t.size()) fail(std::string("expected ") + what);
    return t[i];
  }
  void expect(const Tokens& t, std::size_t i, std::string_view word) const {
    if (i >= t.size() || t[i] != word) {
      fail("expected '" + std::string(word) + "'" + (i < t.size() ? " but found '" + t[i] + "'" : ""));
    }
  }
  void expect_end(const Tokens& t, std::size_t n) const {
    if (t.size() > n) fail("unexpected '" + t[n] + "'");
  }
  int number(const std::string& s) const {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v < 0) fail("expected a non-negative integer, found '" + s + "'");
    return v;
  }
  std::vector<std::string> set_literal(const std::string& s) const {
    if (s.size() < 2 || s.front() != '{' || s.back() != '}') fail("expected {...}, found '" + s + "'");
    std::vector<std::string> out;
    std::string cur;
    for (char c : s.substr(1, s.size() - 2)) {
      if (c == ' ' || c == ',') {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
  }

  int object(const FinCategory& c, const std::string& name) const {
    if (auto a = c.find_object(name)) return *a;
    if (auto a = c.find_object(strip_spaces(name))) return *a;
    fail("unknown object '" + name + "' in category " + c.name());
  }
  int morphism(const FinCategory& c, const std::string& name) const {
    if (auto m = c.find_morphism(name)) return *m;
    if (auto m = c.find_morphism(strip_spaces(name))) return *m;
    fail("unknown morphism '" + name + "' in category " + c.name());
  }
  int element(const Presheaf& p, int a, const std::string& name) const {
    if (auto x = p.find_label(a, name)) return *x;
    fail("unknown element '" + name + "' of " + (p.name().empty() ? "presheaf" : p.name()) + "(" +
         p.base()->object_name(a) + ")");
  }
  int point(const FinSpace& x, const std::string& name) const {
    if (auto p = x.find_point(name)) return *p;
    fail("unknown point '" + name + "' of space " + x.name());
  }

  void name_free(ArtifactKind k, const std::string& name) const {
    if (ws_.has(k, name)) fail("duplicate " + to_string(k) + " '" + name + "'");
  }
  void no_body() const {
    if (!b_.body.empty()) throw ParseError(b_.file, b_.body.front().number, "unexpected line in " + header()[0] + " block");
  }

  void dispatch() {
    const auto& kw = header()[0];
    if (kw == "category") return category();
    if (kw == "presheaf") return presheaf();
    if (kw == "presheaf-map") return presheaf_map();
    if (kw == "topology") return topology();
    if (kw == "space") return space();
    if (kw == "space-map") return space_map();
    if (kw == "bundle") return bundle();
    if (kw == "functor") return functor();
    if (kw == "model") return model();
    if (kw == "group") return group();
    if (kw == "ring") return ring();
    if (kw == "corpus") return corpus();
    if (kw == "workspace") {
      token(header(), 1, "a workspace name");
      expect_end(header(), 2);
      return no_body();
    }
    fail("unknown block '" + kw + "'");
  }

  // category <name> [= <builtin> ...]
  void category() {
    const auto& h = header();
    const std::string name = token(h, 1, "a category name");
    name_free(ArtifactKind::Category, name);
    CategoryData data;
    if (h.size() > 2) {
      expect(h, 2, "=");
      no_body();
      const std::string kind = token(h, 3, "a builtin category");
      auto arg = [&] { return number(token(h, 4, "a size")); };
      CategoryPtr c;
      std::size_t used = 4;
      if (kind == "terminal") c = catalog::terminal_category();
      else if (kind == "empty") c = catalog::empty_category();
      else if (kind == "arrow") c = catalog::walking_arrow();
      else if (kind == "square") c = catalog::commutative_square();
      else if (kind == "parallel") c = catalog::parallel_pair();
      else if (kind == "cospan") c = catalog::cospan();
      else if (kind == "s3") c = catalog::group("S3", catalog::s3_table());
      else if (kind == "chain") c = catalog::chain(arg()), used = 5;
      else if (kind == "discrete") c = catalog::discrete(arg()), used = 5;
      else if (kind == "cyclic") {
        int n = arg();
        if (n < 1) fail("cyclic group needs n >= 1");
        c = catalog::cyclic_group(n), used = 5;
      } else fail("unknown builtin category '" + kind + "'");
      expect_end(h, used);
      data = c->data();
    } else {
      data.name = name;
      for (const auto& l : b_.body) {
        at(l);
        const auto& t = l.tokens;
        if (t[0] == "object") {
          if (t.size() < 2) fail("expected an object name");
          for (std::size_t i = 1; i < t.size(); ++i) {
            if (std::ranges::find(data.objects, t[i]) != data.objects.end()) fail("duplicate object '" + t[i] + "'");
            data.objects.push_back(t[i]);
            data.identities.push_back(-1);
          }
        } else if (t[0] == "morphism") {
          const std::string m = token(t, 1, "a morphism name");
          expect(t, 2, ":");
          auto find = [&](const std::string& o) {
            auto it = std::ranges::find(data.objects, o);
            if (it == data.objects.end()) fail("unknown object '" + o + "'");
            return static_cast<int>(it - data.objects.begin());
          };
          int dom = find(token(t, 3, "a domain"));
          expect(t, 4, "->");
          int cod = find(token(t, 5, "a codomain"));
          expect_end(t, 6);
          for (const auto& spec : data.morphisms) {
            if (spec.name == m) fail("duplicate morphism '" + m + "'");
          }
          data.morphisms.push_back({m, dom, cod});
        } else if (t[0] == "compose") {
          auto find = [&](const std::string& name) {
            for (std::size_t i = 0; i < data.morphisms.size(); ++i) {
              if (data.morphisms[i].name == name) return static_cast<int>(i);
            }
            // identities are implicit until completed
            if (name.starts_with("id_")) {
              auto it = std::ranges::find(data.objects, name.substr(3));
              if (it != data.objects.end()) {
                const auto a = static_cast<std::size_t>(it - data.objects.begin());
                if (data.identities[a] < 0) {
                  data.identities[a] = static_cast<int>(data.morphisms.size());
                  data.morphisms.push_back({name, static_cast<int>(a), static_cast<int>(a)});
                }
                return data.identities[a];
              }
            }
            fail("unknown morphism '" + name + "'");
          };
          int g = find(token(t, 1, "a morphism"));
          expect(t, 2, ".");
          int f = find(token(t, 3, "a morphism"));
          expect(t, 4, "=");
          int k = find(token(t, 5, "a morphism"));
          expect_end(t, 6);
          data.composites.push_back({g, f, k});
        } else {
          fail("unexpected '" + t[0] + "' in category block");
        }
      }
      line_ = b_.header.number;
      // identity morphisms spelled out as ordinary morphisms
      for (std::size_t i = 0; i < data.morphisms.size(); ++i) {
        const auto& spec = data.morphisms[i];
        if (spec.dom == spec.cod && spec.name == "id_" + data.objects[spec.dom]) {
          data.identities[spec.dom] = static_cast<int>(i);
        }
      }
      data.complete_identities();
    }
    data.name = name;
    auto report = validate_category(data);
    if (!report.ok()) fail("category " + name + " violates its laws:\n" + report.summary());
    ws_.categories_[name] = make_category(data);
    ws_.add(ArtifactKind::Category, name, b_);
  }

  // presheaf <name> over <category>, or presheaf <name> = <builtin> [arg] over <category>
  void presheaf() {
    const auto& h = header();
    const std::string name = token(h, 1, "a presheaf name");
    name_free(ArtifactKind::Presheaf, name);
    if (h.size() > 2 && h[2] == "=") {
      no_body();
      const std::string kind = token(h, 3, "a builtin presheaf");
      std::size_t over = 4;
      if (kind == "representable" || kind == "constant") over = 5;
      expect(h, over, "over");
      auto base = ws_.category(token(h, over + 1, "a category"));
      expect_end(h, over + 2);
      Presheaf p = [&]() -> Presheaf {
        if (kind == "terminal") return terminal_presheaf(base);
        if (kind == "initial") return initial_presheaf(base);
        if (kind == "omega") return *ws_.omega(base)->object;
        if (kind == "representable") return representable(base, object(*base, token(h, 4, "an object")));
        if (kind == "constant") return constant_presheaf(base, number(token(h, 4, "a size")));
        fail("unknown builtin presheaf '" + kind + "'");
      }();
      ws_.presheaves_[name] = share(p.named(name));
      ws_.add(ArtifactKind::Presheaf, name, b_);
      return;
    }
    expect(h, 2, "over");
    auto base = ws_.category(token(h, 3, "a category"));
    expect_end(h, 4);
    const FinCategory& c = *base;
    std::vector<std::optional<std::vector<std::string>>> sets(c.object_count());
    struct Entry {
      int line, m;
      std::string from, to;
    };
    std::vector<Entry> entries;
    for (const auto& l : b_.body) {
      at(l);
      const auto& t = l.tokens;
      if (t[0] == "set") {
        int a = object(c, token(t, 1, "an object"));
        expect(t, 2, "=");
        auto elems = set_literal(token(t, 3, "a set"));
        expect_end(t, 4);
        if (sets[a]) fail("set for " + c.object_name(a) + " given twice");
        std::set<std::string> seen(elems.begin(), elems.end());
        if (seen.size() != elems.size()) fail("repeated element in set for " + c.object_name(a));
        sets[a] = std::move(elems);
      } else if (t[0] == "map") {
        int m = morphism(c, token(t, 1, "a morphism"));
        expect(t, 2, ":");
        const std::string from = token(t, 3, "an element");
        expect(t, 4, "->");
        const std::string to = token(t, 5, "an element");
        expect_end(t, 6);
        entries.push_back({l.number, m, from, to});
      } else {
        fail("unexpected '" + t[0] + "' in presheaf block");
      }
    }
    line_ = b_.header.number;
    std::vector<int> sizes(c.object_count());
    std::vector<std::vector<std::string>> labels(c.object_count());
    for (int a = 0; a < c.object_count(); ++a) {
      if (!sets[a]) fail("presheaf " + name + " has no set for object " + c.object_name(a));
      labels[a] = *sets[a];
      sizes[a] = static_cast<int>(labels[a].size());
    }
    auto index = [&](int a, const std::string& e) {
      auto it = std::ranges::find(labels[a], e);
      if (it == labels[a].end()) fail("unknown element '" + e + "' of " + name + "(" + c.object_name(a) + ")");
      return static_cast<int>(it - labels[a].begin());
    };
    std::vector<std::vector<int>> actions(c.morphism_count());
    for (int m = 0; m < c.morphism_count(); ++m) actions[m].assign(sizes[c.cod(m)], -1);
    for (const auto& e : entries) {
      line_ = e.line;
      int x = index(c.cod(e.m), e.from);
      int y = index(c.dom(e.m), e.to);
      if (actions[e.m][x] >= 0 && actions[e.m][x] != y) fail("conflicting action of " + c.morphism_name(e.m) + " on " + e.from);
      actions[e.m][x] = y;
    }
    line_ = b_.header.number;
    for (int m = 0; m < c.morphism_count(); ++m) {
      if (c.is_identity(m)) {
        for (int x = 0; x < sizes[c.cod(m)]; ++x) {
          if (actions[m][x] >= 0 && actions[m][x] != x) fail("identity " + c.morphism_name(m) + " must act trivially");
          actions[m][x] = x;
        }
        continue;
      }
      for (int x = 0; x < sizes[c.cod(m)]; ++x) {
        if (actions[m][x] < 0) fail("action of " + c.morphism_name(m) + " on " + labels[c.cod(m)][x] + " not given");
      }
    }
    ws_.presheaves_[name] = share(Presheaf(base, sizes, actions, labels, name));
    ws_.add(ArtifactKind::Presheaf, name, b_);
  }

  // presheaf-map <name> : <P> -> <Q>, or = identity|terminal|initial <P>
  void presheaf_map() {
    const auto& h = header();
    const std::string name = token(h, 1, "a map name");
    name_free(ArtifactKind::PresheafMap, name);
    if (h.size() > 2 && h[2] == "=") {
      no_body();
      const std::string kind = token(h, 3, "identity, terminal or initial");
      auto p = ws_.presheaf(token(h, 4, "a presheaf"));
      expect_end(h, 5);
      std::optional<PresheafMap> m;
      if (kind == "identity") m = identity_map(p);
      else if (kind == "terminal") m = PresheafMap(p, share(terminal_presheaf(p->base())), terminal_map(*p).components());
      else if (kind == "initial") m = PresheafMap(share(initial_presheaf(p->base())), p, initial_map(*p).components());
      else fail("unknown builtin map '" + kind + "'");
      ws_.maps_.emplace(name, *m);
      ws_.add(ArtifactKind::PresheafMap, name, b_);
      return;
    }
    expect(h, 2, ":");
    auto p = ws_.presheaf(token(h, 3, "a source presheaf"));
    expect(h, 4, "->");
    auto q = ws_.presheaf(token(h, 5, "a target presheaf"));
    expect_end(h, 6);
    if (!same_category(p->base(), q->base())) fail("source and target of " + name + " live over different categories");
    const FinCategory& c = *p->base();
    Components comp(c.object_count());
    for (int a = 0; a < c.object_count(); ++a) comp[a].assign(p->size(a), -1);
    for (const auto& l : b_.body) {
      at(l);
      const auto& t = l.tokens;
      if (t[0] != "at") fail("unexpected '" + t[0] + "' in presheaf-map block");
      int a = object(c, token(t, 1, "an object"));
      expect(t, 2, ":");
      int x = element(*p, a, token(t, 3, "an element"));
      expect(t, 4, "->");
      int y = element(*q, a, token(t, 5, "an element"));
      expect_end(t, 6);
      if (comp[a][x] >= 0 && comp[a][x] != y) fail("conflicting value at " + c.object_name(a) + " on " + t[3]);
      comp[a][x] = y;
    }
    line_ = b_.header.number;
    for (int a = 0; a < c.object_count(); ++a) {
      for (int x = 0; x < p->size(a); ++x) {
        if (comp[a][x] < 0) fail("map " + name + " has no value at " + c.object_name(a) + " on " + p->label(a, x));
      }
    }
    ws_.maps_.emplace(name, PresheafMap(p, q, comp));
    ws_.add(ArtifactKind::PresheafMap, name, b_);
  }

  // topology <name> over <category> [generated], or = trivial|largest over <category>, or = canonical <space>
  void topology() {
    const auto& h = header();
    const std::string name = token(h, 1, "a topology name");
    name_free(ArtifactKind::Topology, name);
    if (h.size() > 2 && h[2] == "=") {
      no_body();
      const std::string kind = token(h, 3, "a builtin topology");
      std::optional<GrothendieckTopology> t;
      if (kind == "canonical") {
        const std::string space = token(h, 4, "a space");
        expect_end(h, 5);
        t = ws_.topology("canonical(" + space + ")");
      } else {
        expect(h, 4, "over");
        auto base = ws_.category(token(h, 5, "a category"));
        expect_end(h, 6);
        if (kind == "trivial") t = trivial_topology(ws_.omega(base));
        else if (kind == "largest") t = largest_topology(ws_.omega(base));
        else fail("unknown builtin topology '" + kind + "'");
      }
      ws_.topologies_.emplace(name, GrothendieckTopology(t->omega(), t->covers(), name));
      ws_.add(ArtifactKind::Topology, name, b_);
      return;
    }
    expect(h, 2, "over");
    auto base = ws_.category(token(h, 3, "a category"));
    bool generated = false;
    if (h.size() > 4) {
      expect(h, 4, "generated");
      expect_end(h, 5);
      generated = true;
    }
    auto om = ws_.omega(base);
    const FinCategory& c = *base;
    std::vector<std::vector<int>> covers(c.object_count());
    for (const auto& l : b_.body) {
      at(l);
      const auto& t = l.tokens;
      if (t[0] != "cover") fail("unexpected '" + t[0] + "' in topology block");
      int a = object(c, token(t, 1, "an object"));
      expect(t, 2, "=");
      std::vector<int> gens;
      for (const auto& m : set_literal(token(t, 3, "a set of morphisms"))) {
        int f = morphism(c, m);
        if (c.cod(f) != a) fail("morphism " + m + " does not land in " + c.object_name(a));
        gens.push_back(f);
      }
      expect_end(t, 4);
      covers[a].push_back(om->index_of(generated_sieve(c, a, gens)));
    }
    line_ = b_.header.number;
    for (int a = 0; a < c.object_count(); ++a) {
      covers[a].push_back(om->maximal(a));
      std::ranges::sort(covers[a]);
      auto dup = std::ranges::unique(covers[a]);
      covers[a].erase(dup.begin(), dup.end());
    }
    if (generated) {
      auto t = generated_topology(om, covers);
      ws_.topologies_.emplace(name, GrothendieckTopology(om, t.covers(), name));
    } else {
      if (auto bad = check_topology_axioms(*om, covers)) fail("topology " + name + ": " + *bad);
      ws_.topologies_.emplace(name, GrothendieckTopology(om, covers, name));
    }
    ws_.add(ArtifactKind::Topology, name, b_);
  }

  // space <name> [= sierpinski|point|discrete n|indiscrete n]
  void space() {
    const auto& h = header();
    const std::string name = token(h, 1, "a space name");
    name_free(ArtifactKind::Space, name);
    std::vector<std::string> points;
    std::vector<PointSet> opens;
    if (h.size() > 2) {
      expect(h, 2, "=");
      no_body();
      const std::string kind = token(h, 3, "a builtin space");
      std::optional<FinSpace> x;
      std::size_t used = 4;
      if (kind == "sierpinski") x = sierpinski_space();
      else if (kind == "point") x = point_space();
      else if (kind == "discrete") x = discrete_space(number(token(h, 4, "a size"))), used = 5;
      else if (kind == "indiscrete") x = indiscrete_space(number(token(h, 4, "a size"))), used = 5;
      else fail("unknown builtin space '" + kind + "'");
      expect_end(h, used);
      for (int p = 0; p < x->point_count(); ++p) points.push_back(x->point_name(p));
      opens = x->opens();
    } else {
      bool have_points = false;
      for (const auto& l : b_.body) {
        at(l);
        const auto& t = l.tokens;
        if (t[0] == "points") {
          if (have_points) fail("points given twice");
          have_points = true;
          points.assign(t.begin() + 1, t.end());
          std::set<std::string> seen(points.begin(), points.end());
          if (seen.size() != points.size()) fail("repeated point");
          if (points.size() > 64) fail("at most 64 points");
        } else if (t[0] == "open") {
          if (!have_points) fail("open before points");
          PointSet s = 0;
          for (const auto& p : set_literal(token(t, 1, "a set of points"))) {
            auto it = std::ranges::find(points, p);
            if (it == points.end()) fail("unknown point '" + p + "'");
            s |= PointSet{1} << (it - points.begin());
          }
          expect_end(t, 2);
          opens.push_back(s);
        } else {
          fail("unexpected '" + t[0] + "' in space block");
        }
      }
      line_ = b_.header.number;
      if (!have_points) fail("space " + name + " has no points line");
    }
    ws_.spaces_.emplace(name, FinSpace(points, opens, name));
    ws_.add(ArtifactKind::Space, name, b_);
  }

  std::vector<int> pointwise(const FinSpace& x, const FinSpace& y, const char* keyword) {
    std::vector<int> f(x.point_count(), -1);
    for (const auto& l : b_.body) {
      at(l);
      const auto& t = l.tokens;
      if (t[0] != keyword) fail("unexpected '" + t[0] + "', expected " + keyword);
      int p = point(x, token(t, 1, "a point"));
      expect(t, 2, "->");
      int q = point(y, token(t, 3, "a point"));
      expect_end(t, 4);
      if (f[p] >= 0 && f[p] != q) fail("point " + t[1] + " sent twice");
      f[p] = q;
    }
    line_ = b_.header.number;
    for (int p = 0; p < x.point_count(); ++p) {
      if (f[p] < 0) fail("no image for point " + x.point_name(p));
    }
    return f;
  }

  // space-map <name> : <X> -> <Y>, lines send p -> q
  void space_map() {
    const auto& h = header();
    const std::string name = token(h, 1, "a map name");
    name_free(ArtifactKind::SpaceMap, name);
    expect(h, 2, ":");
    const std::string xs = token(h, 3, "a source space");
    expect(h, 4, "->");
    const std::string ys = token(h, 5, "a target space");
    expect_end(h, 6);
    const auto& x = ws_.space(xs);
    const auto& y = ws_.space(ys);
    auto f = pointwise(x, y, "send");
    if (auto bad = discontinuity(x, y, f)) fail("map " + name + " is not continuous: preimage of " + y.format(*bad) + " is not open");
    ws_.space_maps_.emplace(name, SpaceMap{xs, ys, f});
    ws_.add(ArtifactKind::SpaceMap, name, b_);
  }

  // bundle <name> : <total> -> <base>, lines project p -> q
  void bundle() {
    const auto& h = header();
    const std::string name = token(h, 1, "a bundle name");
    name_free(ArtifactKind::Bundle, name);
    expect(h, 2, ":");
    const auto& e = ws_.space(token(h, 3, "a total space"));
    expect(h, 4, "->");
    const auto& x = ws_.space(token(h, 5, "a base space"));
    expect_end(h, 6);
    auto f = pointwise(e, x, "project");
    ws_.bundles_.emplace(name, Bundle(e, x, f));
    ws_.add(ArtifactKind::Bundle, name, b_);
  }

  // functor <name> : <C> -> <D>, or = identity <C> | image <map> | preimage <map>
  void functor() {
    const auto& h = header();
    const std::string name = token(h, 1, "a functor name");
    name_free(ArtifactKind::Functor, name);
    if (h.size() > 2 && h[2] == "=") {
      no_body();
      const std::string kind = token(h, 3, "a builtin functor");
      const std::string arg = token(h, 4, "an argument");
      expect_end(h, 5);
      std::optional<FinFunctor> f;
      if (kind == "identity") {
        auto c = identity_functor(ws_.category(arg));
        f = FinFunctor(c.source(), c.target(), c.object_map(), c.morphism_map(), name);
      } else if (kind == "image" || kind == "preimage") {
        const auto& m = ws_.space_map(arg);
        const auto& x = ws_.space(m.source);
        const auto& y = ws_.space(m.target);
        auto ox = ws_.category("Open(" + m.source + ")");
        auto oy = ws_.category("Open(" + m.target + ")");
        auto g = kind == "image" ? image_functor(x, ox, y, oy, m.points) : preimage_functor(x, ox, y, oy, m.points);
        f = FinFunctor(g.source(), g.target(), g.object_map(), g.morphism_map(), name);
      } else {
        fail("unknown builtin functor '" + kind + "'");
      }
      ws_.functors_.emplace(name, *f);
      ws_.add(ArtifactKind::Functor, name, b_);
      return;
    }
    expect(h, 2, ":");
    auto c = ws_.category(token(h, 3, "a source category"));
    expect(h, 4, "->");
    auto d = ws_.category(token(h, 5, "a target category"));
    expect_end(h, 6);
    std::vector<int> objects(c->object_count(), -1);
    std::vector<int> morphisms(c->morphism_count(), -1);
    for (const auto& l : b_.body) {
      at(l);
      const auto& t = l.tokens;
      if (t[0] != "object" && t[0] != "morphism") fail("unexpected '" + t[0] + "' in functor block");
      const bool obj = t[0] == "object";
      int from = obj ? object(*c, token(t, 1, "an object")) : morphism(*c, token(t, 1, "a morphism"));
      expect(t, 2, "->");
      int to = obj ? object(*d, token(t, 3, "an object")) : morphism(*d, token(t, 3, "a morphism"));
      expect_end(t, 4);
      auto& slot = obj ? objects[from] : morphisms[from];
      if (slot >= 0 && slot != to) fail(t[1] + " mapped twice");
      slot = to;
    }
    line_ = b_.header.number;
    for (int a = 0; a < c->object_count(); ++a) {
      if (objects[a] < 0) fail("functor " + name + " has no image for object " + c->object_name(a));
    }
    for (int m = 0; m < c->morphism_count(); ++m) {
      if (morphisms[m] >= 0) continue;
      if (c->is_identity(m)) morphisms[m] = d->identity(objects[c->dom(m)]);
      else fail("functor " + name + " has no image for morphism " + c->morphism_name(m));
    }
    ws_.functors_.emplace(name, FinFunctor(c, d, objects, morphisms, name));
    ws_.add(ArtifactKind::Functor, name, b_);
  }

  // model <name> : <C> -> <D>, lines object c = <presheaf>, morphism u = <map>;
  // or = yoneda <C> | yoneda-along <functor>
  void model() {
    const auto& h = header();
    const std::string name = token(h, 1, "a model name");
    name_free(ArtifactKind::Model, name);
    if (h.size() > 2 && h[2] == "=") {
      no_body();
      const std::string kind = token(h, 3, "yoneda or yoneda-along");
      const std::string arg = token(h, 4, "an argument");
      expect_end(h, 5);
      if (kind == "yoneda") ws_.models_.emplace(name, yoneda_functor(ws_.category(arg)));
      else if (kind == "yoneda-along") ws_.models_.emplace(name, yoneda_along(ws_.functor(arg)));
      else fail("unknown builtin model '" + kind + "'");
      ws_.add(ArtifactKind::Model, name, b_);
      return;
    }
    expect(h, 2, ":");
    auto c = ws_.category(token(h, 3, "a source category"));
    expect(h, 4, "->");
    auto d = ws_.category(token(h, 5, "a target category"));
    expect_end(h, 6);
    std::vector<PresheafPtr> objects(c->object_count());
    std::vector<std::optional<PresheafMap>> arrows(c->morphism_count());
    for (const auto& l : b_.body) {
      at(l);
      const auto& t = l.tokens;
      if (t[0] == "object") {
        int a = object(*c, token(t, 1, "an object"));
        expect(t, 2, "=");
        auto p = ws_.presheaf(token(t, 3, "a presheaf"));
        expect_end(t, 4);
        if (!same_category(p->base(), d)) fail("presheaf " + t[3] + " is not over " + d->name());
        objects[a] = p;
      } else if (t[0] == "morphism") {
        int m = morphism(*c, token(t, 1, "a morphism"));
        expect(t, 2, "=");
        arrows[m] = ws_.presheaf_map(token(t, 3, "a presheaf map"));
        expect_end(t, 4);
      } else {
        fail("unexpected '" + t[0] + "' in model block");
      }
    }
    line_ = b_.header.number;
    PresheafValuedFunctor m{c, d, {}, {}};
    for (int a = 0; a < c->object_count(); ++a) {
      if (!objects[a]) fail("model " + name + " has no presheaf for object " + c->object_name(a));
    }
    m.objects = objects;
    for (int u = 0; u < c->morphism_count(); ++u) {
      if (!arrows[u]) {
        if (!c->is_identity(u)) fail("model " + name + " has no map for morphism " + c->morphism_name(u));
        arrows[u] = identity_map(objects[c->dom(u)]);
      }
      m.arrows.push_back(*arrows[u]);
    }
    validate(m);
    ws_.models_.emplace(name, std::move(m));
    ws_.add(ArtifactKind::Model, name, b_);
  }

  void table_rows(const Presheaf& p, const std::string& keyword, const Tokens& t, OperationTables& tables) {
    const FinCategory& c = *p.base();
    int a = object(c, token(t, 1, "an object"));
    int x = element(p, a, token(t, 2, "an element"));
    expect(t, 3, ":");
    if (t.size() != 4 + static_cast<std::size_t>(p.size(a))) {
      fail(keyword + " row needs " + std::to_string(p.size(a)) + " entries");
    }
    auto& row = tables[a][x];
    if (!row.empty()) fail(keyword + " row for " + t[2] + " at " + c.object_name(a) + " given twice");
    for (int y = 0; y < p.size(a); ++y) row.push_back(element(p, a, t[4 + y]));
  }

  void require_rows(const Presheaf& p, const std::string& keyword, const OperationTables& tables) {
    for (int a = 0; a < p.base()->object_count(); ++a) {
      for (int x = 0; x < p.size(a); ++x) {
        if (tables[a][x].empty()) fail("no " + keyword + " row for " + p.label(a, x) + " at " + p.base()->object_name(a));
      }
    }
  }

  void constant_line(const Presheaf& p, const Tokens& t, std::vector<int>& values) {
    int a = object(*p.base(), token(t, 1, "an object"));
    int x = element(p, a, token(t, 2, "an element"));
    expect_end(t, 3);
    values[a] = x;
  }

  void require_constants(const Presheaf& p, const std::string& keyword, const std::vector<int>& v) {
    for (int a = 0; a < p.base()->object_count(); ++a) {
      if (v[a] < 0) fail("no " + keyword + " at " + p.base()->object_name(a));
    }
  }

  // group <name> on <presheaf>, or = cyclic n | s3 over <category>
  void group() {
    const auto& h = header();
    const std::string name = token(h, 1, "a group name");
    name_free(ArtifactKind::Group, name);
    if (h.size() > 2 && h[2] == "=") {
      no_body();
      const std::string kind = token(h, 3, "cyclic or s3");
      std::size_t over = kind == "cyclic" ? 5 : 4;
      expect(h, over, "over");
      auto base = ws_.category(token(h, over + 1, "a category"));
      expect_end(h, over + 2);
      std::vector<std::vector<int>> table;
      if (kind == "cyclic") {
        int n = number(token(h, 4, "an order"));
        if (n < 1) fail("cyclic group needs n >= 1");
        table = cyclic_table(n);
      } else if (kind == "s3") {
        table = catalog::s3_table();
      } else {
        fail("unknown builtin group '" + kind + "'");
      }
      ws_.groups_.emplace(name, constant_group(base, table, name));
      ws_.add(ArtifactKind::Group, name, b_);
      return;
    }
    expect(h, 2, "on");
    auto p = ws_.presheaf(token(h, 3, "a carrier presheaf"));
    expect_end(h, 4);
    const int n = p->base()->object_count();
    OperationTables mul(n);
    for (int a = 0; a < n; ++a) mul[a].resize(p->size(a));
    std::vector<int> unit(n, -1);
    for (const auto& l : b_.body) {
      at(l);
      const auto& t = l.tokens;
      if (t[0] == "mul") table_rows(*p, "mul", t, mul);
      else if (t[0] == "unit") constant_line(*p, t, unit);
      else fail("unexpected '" + t[0] + "' in group block");
    }
    line_ = b_.header.number;
    require_rows(*p, "mul", mul);
    require_constants(*p, "unit", unit);
    ws_.groups_.emplace(name, group_from_tables(name, p, mul, unit));
    ws_.add(ArtifactKind::Group, name, b_);
  }

  // ring <name> on <presheaf>, or = zmod n over <category>
  void ring() {
    const auto& h = header();
    const std::string name = token(h, 1, "a ring name");
    name_free(ArtifactKind::Ring, name);
    if (h.size() > 2 && h[2] == "=") {
      no_body();
      expect(h, 3, "zmod");
      int n = number(token(h, 4, "a modulus"));
      if (n < 1) fail("zmod needs n >= 1");
      expect(h, 5, "over");
      auto base = ws_.category(token(h, 6, "a category"));
      expect_end(h, 7);
      auto r = zmod_ring(base, n);
      r.name = name;
      ws_.rings_.emplace(name, std::move(r));
      ws_.add(ArtifactKind::Ring, name, b_);
      return;
    }
    expect(h, 2, "on");
    auto p = ws_.presheaf(token(h, 3, "a carrier presheaf"));
    expect_end(h, 4);
    const int n = p->base()->object_count();
    OperationTables add(n), mul(n);
    for (int a = 0; a < n; ++a) {
      add[a].resize(p->size(a));
      mul[a].resize(p->size(a));
    }
    std::vector<int> zero(n, -1), one(n, -1);
    for (const auto& l : b_.body) {
      at(l);
      const auto& t = l.tokens;
      if (t[0] == "add") table_rows(*p, "add", t, add);
      else if (t[0] == "mul") table_rows(*p, "mul", t, mul);
      else if (t[0] == "zero") constant_line(*p, t, zero);
      else if (t[0] == "one") constant_line(*p, t, one);
      else fail("unexpected '" + t[0] + "' in ring block");
    }
    line_ = b_.header.number;
    require_rows(*p, "add", add);
    require_rows(*p, "mul", mul);
    require_constants(*p, "zero", zero);
    require_constants(*p, "one", one);
    ws_.rings_.emplace(name, ring_from_tables(name, p, add, mul, zero, one));
    ws_.add(ArtifactKind::Ring, name, b_);
  }

  // corpus <name> over <category> [topology <J>] | corpus <name> topology <J>
  void corpus() {
    const auto& h = header();
    const std::string name = token(h, 1, "a corpus name");
    name_free(ArtifactKind::Corpus, name);
    CategoryPtr base;
    std::optional<GrothendieckTopology> top;
    std::size_t i = 2;
    if (i < h.size() && h[i] == "over") {
      base = ws_.category(token(h, i + 1, "a category"));
      i += 2;
    }
    if (i < h.size() && h[i] == "topology") {
      top = ws_.topology(token(h, i + 1, "a topology"));
      i += 2;
      if (base && !same_category(base, top->base())) fail("topology " + h[i - 1] + " is not over " + base->name());
      base = top->base();
    }
    expect_end(h, i);
    if (!base) fail("corpus " + name + " needs 'over <category>' or 'topology <name>'");
    std::vector<PresheafPtr> objects;
    std::vector<RecursionTriple> triples;
    std::vector<NnoCandidate> candidates;
    auto over_base = [&](const PresheafPtr& p, const std::string& what) {
      if (!same_category(p->base(), base)) fail(what + " is not over " + base->name());
      return p;
    };
    for (const auto& l : b_.body) {
      at(l);
      const auto& t = l.tokens;
      if (t[0] == "object") {
        if (t.size() < 2) fail("expected a presheaf");
        for (std::size_t k = 1; k < t.size(); ++k) objects.push_back(over_base(ws_.presheaf(t[k]), t[k]));
      } else if (t[0] == "all") {
        int n = number(token(t, 1, "a size bound"));
        expect_end(t, 2);
        for (auto& p : up_to_iso(enumerate_presheaves(base, n))) objects.push_back(share(std::move(p)));
      } else if (t[0] == "triples") {
        int n = number(token(t, 1, "a chain length"));
        if (n < 1) fail("chain length must be positive");
        expect_end(t, 2);
        for (auto& r : recursion_triples(base, n)) triples.push_back(std::move(r));
      } else if (t[0] == "triple" || t[0] == "nno") {
        const bool triple = t[0] == "triple";
        const std::string label = token(t, 1, "a name");
        auto x = over_base(ws_.presheaf(token(t, 2, "an object")), t[2]);
        expect(t, 3, triple ? "point" : "zero");
        const auto& p = ws_.presheaf_map(token(t, 4, "a map"));
        expect(t, 5, triple ? "step" : "succ");
        const auto& s = ws_.presheaf_map(token(t, 6, "a map"));
        expect_end(t, 7);
        if (triple) triples.push_back({label, x, p, s});
        else candidates.push_back({label, x, p, s});
      } else {
        fail("unexpected '" + t[0] + "' in corpus block");
      }
    }
    line_ = b_.header.number;
    ToposCorpus c = top ? sheaf_corpus(*top, objects, name) : presheaf_corpus(base, objects, name);
    c.triples = std::move(triples);
    c.candidates = std::move(candidates);
    validate(c);
    ws_.corpora_.emplace(name, std::move(c));
    ws_.add(ArtifactKind::Corpus, name, b_);
  }

  Workspace& ws_;
  const Workspace::Block& b_;
  int line_;
};

void Workspace::add(ArtifactKind kind, const std::string& name, const Block& b) {
  artifacts_.push_back({kind, name, b.file, b.header.number});
}

bool Workspace::has(ArtifactKind kind, const std::string& name) const {
  return std::ranges::any_of(artifacts_, [&](const Artifact& a) { return a.kind == kind && a.name == name; });
}

const Artifact* Workspace::first(ArtifactKind kind) const {
  for (const auto& a : artifacts_) {
    if (a.kind == kind) return &a;
  }
  return nullptr;
}

void Workspace::build(const Block& b) { BlockBuilder(*this, b).run(); }

void Workspace::load_file(const std::filesystem::path& path) {
  std::error_code ec;
  auto canonical = std::filesystem::weakly_canonical(path, ec);
  if (ec) canonical = path;
  if (std::ranges::find(loaded_, canonical) != loaded_.end()) return;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot read file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  loaded_.push_back(canonical);
  const std::string text = buffer.str();
  files_.push_back({path.string(), fnv1a(text)});
  load_text(text, path.string(), path.parent_path());
}

void Workspace::load_text(const std::string& text, const std::string& origin,
                          const std::filesystem::path& directory) {
  std::istringstream in(text);
  std::optional<Block> current;
  auto flush = [&] {
    if (current) build(*current);
    current.reset();
  };
  int number = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    auto tokens = tokenize(raw);
    if (tokens.empty()) continue;
    if (kHeaders.contains(tokens[0])) {
      flush();
      if (tokens[0] == "include") {
        if (tokens.size() != 2) throw ParseError(origin, number, "include takes one path");
        std::filesystem::path target = directory / tokens[1];
        try {
          load_file(target);
        } catch (const ParseError& e) {
          if (e.line() == 0) throw ParseError(origin, number, "cannot include " + tokens[1]);
          throw;
        }
        continue;
      }
      current = Block{origin, directory, {number, std::move(tokens)}, {}};
    } else {
      if (!current) throw ParseError(origin, number, "expected a block header, found '" + tokens[0] + "'");
      current->body.push_back({number, std::move(tokens)});
    }
  }
  flush();
}

namespace {

template <class Map>
const auto& lookup(const Map& m, const std::string& name, const char* kind) {
  auto it = m.find(name);
  if (it == m.end()) throw MalformedInput(std::string("unknown ") + kind + " '" + name + "'");
  return it->second;
}

// "f(x)" -> x when the prefix matches.
std::optional<std::string> argument(const std::string& name, std::string_view f) {
  if (name.size() > f.size() + 2 && name.starts_with(f) && name[f.size()] == '(' && name.back() == ')') {
    return name.substr(f.size() + 1, name.size() - f.size() - 2);
  }
  return std::nullopt;
}

}  // namespace

OmegaPtr Workspace::omega(const CategoryPtr& c) const {
  for (const auto& [k, v] : omegas_) {
    if (k == c) return v;
  }
  auto om = shared_omega(c);
  omegas_.emplace_back(c, om);
  return om;
}

CategoryPtr Workspace::category(const std::string& name) const {
  if (auto it = categories_.find(name); it != categories_.end()) return it->second;
  if (auto x = argument(name, "Open"); x && spaces_.contains(*x)) {
    auto c = open_frame(spaces_.at(*x)).category;
    categories_[name] = c;
    return c;
  }
  throw MalformedInput("unknown category '" + name + "'");
}

PresheafPtr Workspace::presheaf(const std::string& name) const { return lookup(presheaves_, name, "presheaf"); }
const PresheafMap& Workspace::presheaf_map(const std::string& name) const {
  return lookup(maps_, name, "presheaf map");
}

const GrothendieckTopology& Workspace::topology(const std::string& name) const {
  if (auto it = topologies_.find(name); it != topologies_.end()) return it->second;
  if (auto x = argument(name, "canonical"); x && spaces_.contains(*x)) {
    auto t = canonical_topology(spaces_.at(*x), category("Open(" + *x + ")"));
    return topologies_.emplace(name, GrothendieckTopology(omega(t.base()), t.covers(), name)).first->second;
  }
  for (std::string_view kind : {"trivial", "largest"}) {
    if (auto c = argument(name, kind); c && categories_.contains(*c)) {
      auto om = omega(category(*c));
      auto t = kind == "trivial" ? trivial_topology(om) : largest_topology(om);
      return topologies_.emplace(name, GrothendieckTopology(om, t.covers(), name)).first->second;
    }
  }
  throw MalformedInput("unknown topology '" + name + "'");
}

const FinSpace& Workspace::space(const std::string& name) const { return lookup(spaces_, name, "space"); }
const SpaceMap& Workspace::space_map(const std::string& name) const { return lookup(space_maps_, name, "space map"); }
const Bundle& Workspace::bundle(const std::string& name) const { return lookup(bundles_, name, "bundle"); }
const FinFunctor& Workspace::functor(const std::string& name) const { return lookup(functors_, name, "functor"); }
const PresheafValuedFunctor& Workspace::model(const std::string& name) const { return lookup(models_, name, "model"); }
const InternalGroup& Workspace::group(const std::string& name) const { return lookup(groups_, name, "group"); }
const InternalRing& Workspace::ring(const std::string& name) const { return lookup(rings_, name, "ring"); }
const ToposCorpus& Workspace::corpus(const std::string& name) const { return lookup(corpora_, name, "corpus"); }

Workspace parse_workspace(const std::vector<std::filesystem::path>& paths) {
  Workspace ws;
  for (const auto& p : paths) ws.load_file(p);
  return ws;
}

}  // namespace toposkit
