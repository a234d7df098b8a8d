#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "toposkit/classifier.hpp"
#include "toposkit/corpus.hpp"
#include "toposkit/etcs.hpp"
#include "toposkit/geom.hpp"
#include "toposkit/internal.hpp"
#include "toposkit/sites.hpp"
#include "toposkit/spaces.hpp"
#include "toposkit/workspace.hpp"

namespace toposkit::cli {

namespace {

using json = nlohmann::ordered_json;
constexpr int kSchemaVersion = 1;

struct Options {
  bool json = false;
  std::optional<std::uint64_t> max_enum;
  std::uint64_t seed = 1;
  std::optional<int> max_size;
  std::vector<std::string> args;
  std::string corpus_file;
  std::string checks = "well-pointed,choice,nno,global";
  std::string variant = "both";
  std::string source_corpus;
  std::string target_corpus;
};

struct Report {
  std::string subcommand;
  std::vector<SourceFile> inputs;
  bool failed = false;
  std::vector<std::string> lines;
  std::vector<std::string> witness;
  json result = json::object();

  void line(std::string s) { lines.push_back(std::move(s)); }
  void fail(std::string w) {
    failed = true;
    witness.push_back(std::move(w));
  }
};

std::string hex(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

template <class T>
std::string list(const std::vector<T>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, std::string>) out += v[i];
    else out += std::to_string(v[i]);
  }
  return out + "]";
}

std::string yes(bool b) { return b ? "yes" : "no"; }

struct Context {
  Workspace ws;
  std::vector<std::string> names;
  std::size_t next = 0;
  const Options& opt;
  Report& r;

  bool resolves(ArtifactKind k, const std::string& name) const {
    try {
      switch (k) {
        case ArtifactKind::Category: ws.category(name); break;
        case ArtifactKind::Presheaf: ws.presheaf(name); break;
        case ArtifactKind::PresheafMap: ws.presheaf_map(name); break;
        case ArtifactKind::Topology: ws.topology(name); break;
        case ArtifactKind::Space: ws.space(name); break;
        case ArtifactKind::SpaceMap: ws.space_map(name); break;
        case ArtifactKind::Bundle: ws.bundle(name); break;
        case ArtifactKind::Functor: ws.functor(name); break;
        case ArtifactKind::Model: ws.model(name); break;
        case ArtifactKind::Group: ws.group(name); break;
        case ArtifactKind::Ring: ws.ring(name); break;
        case ArtifactKind::Corpus: ws.corpus(name); break;
      }
      return true;
    } catch (const MalformedInput&) {
      return false;
    }
  }

  // The next positional name if it denotes an artifact of this kind, else the
  // first such artifact loaded.
  std::optional<std::string> try_pick(ArtifactKind k) {
    if (next < names.size() && resolves(k, names[next])) return names[next++];
    if (auto a = ws.first(k)) return a->name;
    return std::nullopt;
  }
  std::string pick(ArtifactKind k) {
    if (auto n = try_pick(k)) return *n;
    if (next < names.size()) throw MalformedInput("unknown " + to_string(k) + " '" + names[next] + "'");
    throw MalformedInput("no " + to_string(k) + " given");
  }
  std::string take_text(const char* what) {
    if (next >= names.size()) throw MalformedInput(std::string("missing ") + what);
    return names[next++];
  }
  void finish() const {
    if (next < names.size()) throw MalformedInput("unknown or unused argument '" + names[next] + "'");
  }

  int max_size(int fallback) const { return opt.max_size.value_or(fallback); }

  std::vector<PresheafPtr> corpus_for(const CategoryPtr& c, const std::string& named) {
    if (!named.empty()) {
      const auto& t = ws.corpus(named);
      if (!same_category(t.base, c)) throw MalformedInput("corpus " + named + " is not over " + c->name());
      return t.objects;
    }
    return standard_corpus(c, max_size(3), 2, opt.seed);
  }
};

json presheaf_json(const Presheaf& p) {
  const auto& c = *p.base();
  json sets = json::object();
  json actions = json::object();
  for (int a = 0; a < c.object_count(); ++a) {
    json s = json::array();
    for (int x = 0; x < p.size(a); ++x) s.push_back(p.label(a, x));
    sets[c.object_name(a)] = s;
  }
  for (int m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m)) continue;
    json row = json::array();
    for (int x = 0; x < p.size(c.cod(m)); ++x) row.push_back(p.label(c.dom(m), p.act(m, x)));
    actions[c.morphism_name(m)] = row;
  }
  return {{"name", p.name()}, {"base", c.name()}, {"sizes", p.sizes()}, {"sets", sets}, {"actions", actions}};
}

void presheaf_lines(Report& r, const Presheaf& p, const std::string& title) {
  const auto& c = *p.base();
  r.line(title + " over " + c.name() + ": sizes " + list(p.sizes()));
  for (int a = 0; a < c.object_count(); ++a) {
    std::string s = "  " + c.object_name(a) + " = {";
    for (int x = 0; x < p.size(a); ++x) s += (x ? " " : "") + p.label(a, x);
    r.line(s + "}");
  }
  for (int m = 0; m < c.morphism_count(); ++m) {
    if (c.is_identity(m)) continue;
    std::string s = "  " + c.morphism_name(m) + ":";
    for (int x = 0; x < p.size(c.cod(m)); ++x) s += " " + p.label(c.cod(m), x) + "->" + p.label(c.dom(m), p.act(m, x));
    r.line(s);
  }
}

std::string subobject_text(const Presheaf& p, const Subobject& s) {
  const auto& c = *p.base();
  std::string out = "{";
  for (int a = 0; a < c.object_count(); ++a) {
    if (a) out += "; ";
    out += c.object_name(a) + ":";
    for (int x = 0; x < p.size(a); ++x) {
      if (s[a][x]) out += " " + p.label(a, x);
    }
  }
  return out + "}";
}

// ---- psh / classifier ------------------------------------------------------

void cmd_validate(Context& c) {
  c.finish();
  json arts = json::array();
  for (const auto& a : c.ws.artifacts()) {
    c.r.line(to_string(a.kind) + " " + a.name + " (" + a.file + ":" + std::to_string(a.line) + ")");
    arts.push_back({{"kind", to_string(a.kind)}, {"name", a.name}, {"file", a.file}, {"line", a.line}});
  }
  c.r.line("artifacts: " + std::to_string(c.ws.artifacts().size()));
  c.r.result["artifacts"] = arts;
}

void cmd_omega(Context& c) {
  auto base = c.ws.category(c.pick(ArtifactKind::Category));
  c.finish();
  auto om = c.ws.omega(base);
  const auto& cat = *base;
  c.r.line("category: " + cat.name());
  c.r.line("sizes: " + list(om->object->sizes()));
  json sieves = json::object();
  json truth = json::object();
  std::string t = "truth:";
  for (int a = 0; a < cat.object_count(); ++a) {
    std::vector<std::string> ss;
    for (const auto& s : om->sieves[a]) ss.push_back(format_sieve(cat, s));
    c.r.line("Omega(" + cat.object_name(a) + ") = " + list(ss));
    sieves[cat.object_name(a)] = ss;
    const auto top = format_sieve(cat, om->sieve(a, om->truth(a, 0)));
    t += " " + cat.object_name(a) + "->" + top;
    truth[cat.object_name(a)] = top;
  }
  c.r.line(t);
  c.r.result = {{"category", cat.name()}, {"sizes", om->object->sizes()}, {"sieves", sieves}, {"truth", truth}};
}

void cmd_char(Context& c) {
  const auto name = c.pick(ArtifactKind::PresheafMap);
  c.finish();
  const auto& m = c.ws.presheaf_map(name);
  auto om = c.ws.omega(m.base());
  const auto& cat = *m.base();
  c.r.line("map: " + name);
  try {
    auto chi = characteristic(*om, m);
    json table = json::object();
    for (int a = 0; a < cat.object_count(); ++a) {
      std::string s = "chi(" + cat.object_name(a) + "):";
      json row = json::array();
      for (int x = 0; x < m.target().size(a); ++x) {
        auto f = format_sieve(cat, om->sieve(a, chi(a, x)));
        s += " " + m.target().label(a, x) + "->" + f;
        row.push_back(f);
      }
      c.r.line(s);
      table[cat.object_name(a)] = row;
    }
    c.r.result = {{"map", name}, {"mono", true}, {"characteristic", table}};
  } catch (const PreconditionFailed& e) {
    c.r.result = {{"map", name}, {"mono", false}};
    c.r.fail(e.what());
  }
}

void cmd_sub(Context& c) {
  const auto name = c.pick(ArtifactKind::Presheaf);
  c.finish();
  auto p = c.ws.presheaf(name);
  auto om = c.ws.omega(p->base());
  auto lattice = subobjects(p);
  const auto homs = count_maps(*p, *om->object);
  c.r.line("presheaf: " + name);
  c.r.line("subobjects: " + std::to_string(lattice.elements.size()));
  json subs = json::array();
  bool bijective = homs == lattice.elements.size();
  for (const auto& s : lattice.elements) {
    c.r.line("  " + subobject_text(*p, s));
    subs.push_back(subobject_text(*p, s));
    if (classified(*om, characteristic(*om, p, s)) != s) {
      bijective = false;
      c.r.fail("subobject " + subobject_text(*p, s) + " is not recovered from its characteristic map");
    }
  }
  c.r.line("maps to Omega: " + std::to_string(homs));
  c.r.line("bijection: " + yes(bijective));
  if (!bijective && c.r.witness.empty()) c.r.fail("|Sub| != |Hom(X, Omega)|");
  c.r.result = {{"presheaf", name}, {"subobjects", subs}, {"maps_to_omega", homs}, {"bijection", bijective}};
}

void cmd_verify_classifier(Context& c) {
  auto base = c.ws.category(c.pick(ArtifactKind::Category));
  c.finish();
  const int size = c.max_size(3);
  auto corpus = standard_corpus(base, size, 6, c.opt.seed);
  auto cert = verify_classifier(base, corpus);
  c.r.line("category: " + base->name());
  c.r.line("corpus: " + std::to_string(corpus.size()) + " presheaves, sets <= " + std::to_string(size));
  c.r.line("monos checked: " + std::to_string(cert.monos));
  c.r.line("truth domain terminal: " + yes(cert.truth_domain_terminal));
  json counts = json::array();
  std::string s = "Sub/Hom:";
  for (const auto& [a, b] : cert.counts) {
    s += " " + std::to_string(a) + "/" + std::to_string(b);
    counts.push_back({a, b});
  }
  c.r.line(s);
  c.r.line("certificate: " + std::string(cert.ok ? "pass" : "fail"));
  if (!cert.ok) c.r.fail(cert.failure);
  c.r.result = {{"category", base->name()},       {"presheaves", cert.presheaves},
                {"monos", cert.monos},             {"truth_domain_terminal", cert.truth_domain_terminal},
                {"counts", counts},                {"ok", cert.ok}};
}

// ---- sites -----------------------------------------------------------------

std::string topology_text(const GrothendieckTopology& t) {
  const auto& cat = *t.base();
  std::string out;
  for (int a = 0; a < cat.object_count(); ++a) {
    if (a) out += "; ";
    out += cat.object_name(a) + ":";
    for (int k : t.covers(a)) out += " " + format_sieve(cat, t.omega()->sieve(a, k));
  }
  return out;
}

void cmd_topologies(Context& c) {
  auto base = c.ws.category(c.pick(ArtifactKind::Category));
  c.finish();
  auto ts = enumerate_topologies(c.ws.omega(base));
  c.r.line("category: " + base->name());
  c.r.line("topologies: " + std::to_string(ts.size()));
  json all = json::array();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    c.r.line("  J" + std::to_string(k) + " " + topology_text(ts[k]));
    all.push_back(ts[k].covers());
  }
  c.r.result = {{"category", base->name()}, {"count", ts.size()}, {"covers", all}};
}

void cmd_lt_ops(Context& c) {
  auto base = c.ws.category(c.pick(ArtifactKind::Category));
  c.finish();
  auto om = c.ws.omega(base);
  auto ops = enumerate_lt_operators(om);
  auto ts = enumerate_topologies(om);
  const auto& cat = *base;
  c.r.line("category: " + cat.name());
  c.r.line("operators: " + std::to_string(ops.size()));
  c.r.line("topologies: " + std::to_string(ts.size()));
  bool bijection = ops.size() == ts.size();
  json all = json::array();
  for (std::size_t k = 0; k < ops.size(); ++k) {
    std::string s = "  j" + std::to_string(k);
    for (int a = 0; a < cat.object_count(); ++a) {
      s += " " + cat.object_name(a) + ":";
      for (int x = 0; x < om->object->size(a); ++x) s += " " + std::to_string(ops[k].j(a, x));
    }
    c.r.line(s);
    all.push_back(ops[k].j.components());
    auto t = j_to_topology(om, ops[k]);
    if (!(topology_to_j(t).j == ops[k].j) || std::ranges::find(ts, t) == ts.end()) {
      bijection = false;
      c.r.fail("operator j" + std::to_string(k) + " does not round-trip through its topology");
    }
  }
  c.r.line("bijection: " + yes(bijection));
  if (!bijection && c.r.witness.empty()) c.r.fail("operator and topology counts differ");
  c.r.result = {{"category", cat.name()}, {"operators", all}, {"topologies", ts.size()}, {"bijection", bijection}};
}

void same_base(const Presheaf& p, const GrothendieckTopology& t) {
  if (!same_category(p.base(), t.base())) {
    throw MalformedInput("presheaf " + p.name() + " is over " + p.base()->name() + ", topology " + t.name() +
                         " over " + t.base()->name());
  }
}

void cmd_is_sheaf(Context& c) {
  const auto pname = c.pick(ArtifactKind::Presheaf);
  const auto tname = c.pick(ArtifactKind::Topology);
  c.finish();
  auto p = c.ws.presheaf(pname);
  const auto& t = c.ws.topology(tname);
  same_base(*p, t);
  auto check = check_sheaf(*p, t);
  c.r.line("presheaf: " + pname);
  c.r.line("topology: " + tname);
  c.r.line("sheaf: " + yes(check.sheaf));
  c.r.result = {{"presheaf", pname}, {"topology", tname}, {"sheaf", check.sheaf}};
  if (check.failure) {
    const auto& f = *check.failure;
    const auto& cat = *t.base();
    c.r.result["failure"] = {{"object", cat.object_name(f.object)},
                             {"sieve", format_sieve(cat, t.omega()->sieve(f.object, f.sieve))},
                             {"kind", f.kind},
                             {"family", f.family}};
    c.r.fail(f.describe(*p, *t.omega()));
  }
}

void cmd_sheafify(Context& c) {
  const auto pname = c.pick(ArtifactKind::Presheaf);
  const auto tname = c.pick(ArtifactKind::Topology);
  c.finish();
  auto p = c.ws.presheaf(pname);
  const auto& t = c.ws.topology(tname);
  same_base(*p, t);
  auto s = sheafify(p, t);
  const bool sheaf = is_sheaf(*s.sheaf, t);
  const bool unit_iso = is_iso(s.unit);
  c.r.line("presheaf: " + pname + " sizes " + list(p->sizes()));
  c.r.line("plus: sizes " + list(s.first.object->sizes()));
  c.r.line("plus plus: sizes " + list(s.sheaf->sizes()));
  c.r.line("unit iso: " + yes(unit_iso));
  c.r.line("result is a sheaf: " + yes(sheaf));
  presheaf_lines(c.r, *s.sheaf, "sheafification");
  if (!sheaf) c.r.fail("P++ fails the sheaf condition");
  c.r.result = {{"presheaf", pname},        {"topology", tname},   {"plus_sizes", s.first.object->sizes()},
                {"sheaf", presheaf_json(*s.sheaf)}, {"unit_iso", unit_iso}, {"is_sheaf", sheaf}};
}

// ---- spaces ----------------------------------------------------------------

const FinSpace& space_of(Context& c, const Presheaf& p, std::string* name) {
  for (const auto& a : c.ws.artifacts()) {
    if (a.kind != ArtifactKind::Space) continue;
    if (same_category(c.ws.category("Open(" + a.name + ")"), p.base())) {
      if (name) *name = a.name;
      return c.ws.space(a.name);
    }
  }
  throw MalformedInput("presheaf " + p.name() + " is not over Open(X) for a loaded space X");
}

void cmd_frame(Context& c) {
  const auto name = c.pick(ArtifactKind::Space);
  c.finish();
  const auto& x = c.ws.space(name);
  auto of = open_frame(x);
  const auto& f = of.frame;
  std::vector<std::string> names;
  for (int i = 0; i < f.size(); ++i) names.push_back(f.name(i));
  c.r.line("space: " + name);
  c.r.line("opens: " + std::to_string(f.size()) + " " + list(names));
  json covers = json::array();
  for (int i = 0; i < f.size(); ++i) {
    for (int j = 0; j < f.size(); ++j) {
      if (i == j || !f.leq(i, j)) continue;
      bool between = false;
      for (int k = 0; k < f.size() && !between; ++k) between = k != i && k != j && f.leq(i, k) && f.leq(k, j);
      if (!between) {
        c.r.line("  " + f.name(i) + " < " + f.name(j));
        covers.push_back({f.name(i), f.name(j)});
      }
    }
  }
  c.r.result = {{"space", name}, {"opens", names}, {"covers", covers}};
}

void cmd_canonical(Context& c) {
  const auto name = c.pick(ArtifactKind::Space);
  c.finish();
  const auto& t = c.ws.topology("canonical(" + name + ")");
  const auto& cat = *t.base();
  c.r.line("space: " + name);
  json covers = json::object();
  for (int a = 0; a < cat.object_count(); ++a) {
    std::vector<std::string> ss;
    for (int k : t.covers(a)) ss.push_back(format_sieve(cat, t.omega()->sieve(a, k)));
    c.r.line("  " + cat.object_name(a) + ": " + list(ss));
    covers[cat.object_name(a)] = ss;
  }
  c.r.result = {{"space", name}, {"covers", covers}};
}

void cmd_sections(Context& c) {
  const auto name = c.pick(ArtifactKind::Bundle);
  c.finish();
  const auto& b = c.ws.bundle(name);
  auto open = c.ws.category("Open(" + b.base.name() + ")");
  auto f = sections_sheaf(b, open);
  c.r.line("bundle: " + name);
  presheaf_lines(c.r, f, "sections");
  c.r.result = {{"bundle", name}, {"sections", presheaf_json(f)}};
}

void cmd_etale(Context& c) {
  const auto pname = c.pick(ArtifactKind::Presheaf);
  c.finish();
  auto p = c.ws.presheaf(pname);
  std::string xname;
  const auto& x = space_of(c, *p, &xname);
  auto e = etale_space(x, *p);
  const auto& total = e.bundle.total;
  std::vector<std::string> germs;
  for (int i = 0; i < total.point_count(); ++i) germs.push_back(total.point_name(i));
  std::vector<std::string> opens;
  for (auto u : total.opens()) opens.push_back(total.format(u));
  const auto failure = etale_failure(e.bundle);
  const bool sheaf = is_sheaf(*p, c.ws.topology("canonical(" + xname + ")"));
  auto back = sections_sheaf(e.bundle, p->base());
  const bool iso = isomorphic(back, *p);
  c.r.line("presheaf: " + pname + " over " + p->base()->name());
  c.r.line("germs: " + std::to_string(germs.size()) + " " + list(germs));
  c.r.line("opens: " + std::to_string(opens.size()));
  c.r.line("etale: " + yes(!failure));
  c.r.line("sheaf: " + yes(sheaf));
  c.r.line("sections iso: " + yes(iso));
  if (failure) c.r.fail("germ " + total.point_name(*failure) + " has no neighbourhood mapped onto an open");
  if (sheaf && !iso) c.r.fail("sections of the etale space are not isomorphic to the sheaf");
  c.r.result = {{"presheaf", pname}, {"germs", germs}, {"opens", opens}, {"etale", !failure},
                {"sheaf", sheaf},    {"sections_iso", iso}};
}

void cmd_sheafify_space(Context& c) {
  const auto pname = c.pick(ArtifactKind::Presheaf);
  c.finish();
  auto p = c.ws.presheaf(pname);
  std::string xname;
  const auto& x = space_of(c, *p, &xname);
  auto viaetale = sections_sheaf(etale_space(x, *p).bundle, p->base());
  auto plus = sheafify(p, c.ws.topology("canonical(" + xname + ")"));
  const bool agree = isomorphic(viaetale, *plus.sheaf);
  c.r.line("presheaf: " + pname);
  presheaf_lines(c.r, viaetale, "sections of germs");
  c.r.line("agrees with plus construction: " + yes(agree));
  if (!agree) c.r.fail("sections of the etale space differ from P++");
  c.r.result = {{"presheaf", pname}, {"sheaf", presheaf_json(viaetale)}, {"agrees", agree}};
}

void cmd_sober(Context& c) {
  const auto name = c.pick(ArtifactKind::Space);
  c.finish();
  const auto& x = c.ws.space(name);
  auto rep = check_sober(x);
  const bool t0 = is_t0(x);
  c.r.line("space: " + name);
  json irr = json::array();
  for (const auto& [closed, generic] : rep.irreducible) {
    c.r.line("  irreducible " + x.format(closed) + " generic " + x.format(generic));
    irr.push_back({x.format(closed), x.format(generic)});
  }
  c.r.line("t0: " + yes(t0));
  c.r.line("sober: " + yes(rep.sober));
  if (rep.witness) {
    c.r.fail("irreducible closed set " + x.format(*rep.witness) + " has no unique generic point");
  }
  c.r.result = {{"space", name}, {"irreducible", irr}, {"t0", t0}, {"sober", rep.sober}};
}

void cmd_spatial(Context& c) {
  const auto name = c.pick(ArtifactKind::Space);
  c.finish();
  auto of = open_frame(c.ws.space(name));
  auto pts = frame_points(of.frame);
  auto rep = check_spatial(of.frame);
  c.r.line("frame: Open(" + name + ") with " + std::to_string(of.frame.size()) + " elements");
  c.r.line("points: " + std::to_string(pts.size()));
  c.r.line("spatial: " + yes(rep.spatial));
  if (rep.unseparated) {
    c.r.fail(of.frame.name(rep.unseparated->first) + " and " + of.frame.name(rep.unseparated->second) +
             " are not separated by points");
  }
  c.r.result = {{"space", name}, {"points", pts.size()}, {"spatial", rep.spatial}};
}

void cmd_recover_locale(Context& c) {
  const auto name = c.pick(ArtifactKind::Space);
  c.finish();
  const auto& x = c.ws.space(name);
  auto of = open_frame(x);
  auto rl = recover_locale(x);
  const bool iso = std::ranges::find(rl.iso, -1) == rl.iso.end() && find_frame_iso(of.frame, rl.frame).has_value();
  c.r.line("space: " + name);
  c.r.line("opens: " + std::to_string(of.frame.size()));
  c.r.line("subterminal sheaves: " + std::to_string(rl.frame.size()));
  json map = json::object();
  for (int i = 0; i < of.frame.size(); ++i) {
    const auto target = rl.iso[i] < 0 ? std::string("?") : rl.frame.name(rl.iso[i]);
    c.r.line("  " + of.frame.name(i) + " -> " + target);
    map[of.frame.name(i)] = target;
  }
  c.r.line("iso: " + yes(iso));
  if (!iso) c.r.fail("Sub(1) is not isomorphic to Open(" + name + ")");
  c.r.result = {{"space", name}, {"opens", of.frame.size()}, {"subterminals", rl.frame.size()}, {"iso", map},
                {"ok", iso}};
}

// ---- geom ------------------------------------------------------------------

json adjunction_json(const AdjunctionCertificate& a) {
  return {{"ok", a.ok}, {"triangles", a.triangles}, {"naturality", a.naturality}, {"failure", a.failure}};
}

void adjunction_line(Report& r, const std::string& title, const AdjunctionCertificate& a) {
  r.line(title + ": " + (a.ok ? "pass" : "fail") + ", triangles " + std::to_string(a.triangles) + ", naturality " +
         std::to_string(a.naturality));
  if (!a.ok) r.fail(title + ": " + a.failure);
}

void cmd_triple(Context& c) {
  const auto name = c.pick(ArtifactKind::Functor);
  c.finish();
  const auto& f = c.ws.functor(name);
  auto cc = c.corpus_for(f.source(), c.opt.source_corpus);
  auto dc = c.corpus_for(f.target(), c.opt.target_corpus);
  auto t = adjoint_triple(f);
  auto left = verify_adjunction(t.left, cc, dc);
  auto right = verify_adjunction(t.right, dc, cc);
  c.r.line("functor: " + name + " : " + f.source()->name() + " -> " + f.target()->name());
  c.r.line("corpora: " + std::to_string(cc.size()) + " / " + std::to_string(dc.size()));
  adjunction_line(c.r, "f_! -| f*", left);
  adjunction_line(c.r, "f* -| f_*", right);
  c.r.result = {{"functor", name}, {"left", adjunction_json(left)}, {"right", adjunction_json(right)}};
}

void geometric_lines(Context& c, const GeometricMorphism& g) {
  auto cert = verify_geometric(g);
  adjunction_line(c.r, "adjunction", cert.adjunction);
  const auto& l = cert.lex;
  c.r.line("inverse image lex: " + std::string(l.ok ? "pass" : "fail") + ", probes " + std::to_string(l.probes) +
           " (terminal " + yes(l.terminal) + ", products " + yes(l.products) + ", equalizers " + yes(l.equalizers) +
           ")");
  if (!l.ok) c.r.fail("inverse image: " + l.failure);
  c.r.result["adjunction"] = adjunction_json(cert.adjunction);
  c.r.result["lex"] = {{"ok", l.ok},           {"terminal", l.terminal},     {"products", l.products},
                       {"equalizers", l.equalizers}, {"probes", l.probes}, {"failure", l.failure}};
  c.r.result["geometric"] = cert.ok;
}

void cmd_verify_gm(Context& c) {
  if (c.next < c.names.size() && c.names[c.next] == "broken") {
    ++c.next;
    c.finish();
    auto g = broken_pair();
    c.r.line("morphism: " + g.name);
    c.r.result["morphism"] = g.name;
    geometric_lines(c, g);
    return;
  }
  std::optional<std::string> fname;
  if (c.next < c.names.size() && c.resolves(ArtifactKind::Functor, c.names[c.next])) fname = c.names[c.next++];
  std::optional<std::string> tname;
  if (!fname && c.next < c.names.size() && c.resolves(ArtifactKind::Topology, c.names[c.next])) tname = c.names[c.next++];
  if (!fname && !tname) {
    if (auto a = c.ws.first(ArtifactKind::Functor)) fname = a->name;
    else if (auto b = c.ws.first(ArtifactKind::Topology)) tname = b->name;
    else throw MalformedInput(c.next < c.names.size() ? "unknown functor or topology '" + c.names[c.next] + "'"
                                                      : "no functor or topology given");
  }
  c.finish();
  if (fname) {
    const auto& f = c.ws.functor(*fname);
    auto g = essential_morphism(f, c.corpus_for(f.source(), c.opt.source_corpus),
                                c.corpus_for(f.target(), c.opt.target_corpus));
    c.r.line("morphism: Psh(" + f.source()->name() + ") -> Psh(" + f.target()->name() + ") along " + *fname);
    c.r.result["functor"] = *fname;
    geometric_lines(c, g);
  } else {
    const auto& t = c.ws.topology(*tname);
    auto g = sheaf_inclusion(t, c.corpus_for(t.base(), c.opt.source_corpus));
    c.r.line("morphism: Sh(" + t.base()->name() + ", " + *tname + ") -> Psh(" + t.base()->name() + ")");
    c.r.result["topology"] = *tname;
    geometric_lines(c, g);
    auto e = check_embedding(g);
    c.r.line("embedding: " + yes(e.embedding));
    if (!e.embedding) c.r.fail(e.failure);
    c.r.result["embedding"] = e.embedding;
  }
}

void cmd_points(Context& c) {
  auto base = c.ws.category(c.pick(ArtifactKind::Category));
  c.finish();
  const int bound = c.max_size(3);
  auto pts = points(base, bound);
  c.r.line("category: " + base->name() + ", sets <= " + std::to_string(bound));
  c.r.line("points: " + std::to_string(pts.size()));
  json all = json::array();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    c.r.line("  point " + std::to_string(k) + ": sizes " + list(pts[k].functor.sizes()));
    all.push_back(presheaf_json(pts[k].functor));
  }
  c.r.result = {{"category", base->name()}, {"bound", bound}, {"points", all}};
  std::string missing;
  if (has_finite_limits(*base, &missing)) {
    auto lex = lex_set_functors(base, bound);
    bool agree = lex.size() == pts.size();
    for (const auto& l : lex) {
      agree = agree && std::ranges::any_of(pts, [&](const auto& p) { return isomorphic(p.functor, l); });
    }
    c.r.line("lex functors: " + std::to_string(lex.size()));
    c.r.line("flat = lex: " + yes(agree));
    c.r.result["lex_functors"] = lex.size();
    c.r.result["agree"] = agree;
    if (!agree) c.r.fail("flat and lex enumerations differ");
  } else {
    c.r.line("lex comparison skipped: " + missing);
  }
}

void cmd_classify_lex(Context& c) {
  const auto name = c.pick(ArtifactKind::Model);
  c.finish();
  const auto& m = c.ws.model(name);
  c.r.line("model: " + name + " : " + m.source->name() + " -> Psh(" + m.target_base->name() + ")");
  c.r.result["model"] = name;
  try {
    auto cm = classify_lex(m, c.corpus_for(m.source, c.opt.source_corpus),
                           c.corpus_for(m.target_base, c.opt.target_corpus));
    c.r.line("round trip L(y c) = M(c): " + yes(cm.round_trip.ok));
    c.r.result["round_trip"] = cm.round_trip.ok;
    if (!cm.round_trip.ok) c.r.fail(cm.round_trip.failure);
    geometric_lines(c, cm.morphism);
  } catch (const PreconditionFailed& e) {
    c.r.result["round_trip"] = false;
    c.r.fail(e.what());
  }
}

// ---- internal --------------------------------------------------------------

void cmd_check_group(Context& c) {
  const auto name = c.pick(ArtifactKind::Group);
  c.finish();
  const auto& g = c.ws.group(name);
  auto rep = check_group(g);
  c.r.line("group: " + name + " on " + g.carrier->name() + " sizes " + list(g.carrier->sizes()));
  c.r.line("group laws: " + std::string(rep.ok ? "hold" : "fail"));
  if (!rep.ok) c.r.fail(rep.describe(*g.carrier));
  c.r.result = {{"group", name}, {"ok", rep.ok}, {"law", rep.law}};
}

void cmd_check_id(Context& c) {
  const auto name = c.pick(ArtifactKind::Group);
  const auto text = c.take_text("statement");
  c.finish();
  const auto& g = c.ws.group(name);
  auto s = parse_statement(text);
  auto gen = check_identity(s, g);
  auto pw = check_identity_pointwise(s, g);
  c.r.line("group: " + name);
  c.r.line("statement: " + text);
  c.r.line("generalized elements: " + std::string(gen.holds ? "holds" : "fails") + ", assignments " +
           std::to_string(gen.assignments) + ", guarded " + std::to_string(gen.guarded));
  c.r.line("pointwise: " + std::string(pw.holds ? "holds" : "fails") + ", assignments " +
           std::to_string(pw.assignments) + ", guarded " + std::to_string(pw.guarded));
  const bool agree = gen.holds == pw.holds;
  c.r.line("checkers agree: " + yes(agree));
  if (!gen.holds) c.r.fail(gen.describe(g));
  if (!agree) c.r.fail("generalized and pointwise evaluation disagree");
  c.r.result = {{"group", name},          {"statement", text},         {"holds", gen.holds},
                {"assignments", gen.assignments}, {"guarded", gen.guarded}, {"pointwise", pw.holds}};
}

void cmd_check_field(Context& c) {
  const auto name = c.pick(ArtifactKind::Ring);
  c.finish();
  const auto& r = c.ws.ring(name);
  std::vector<std::pair<std::string, FieldVariant>> variants;
  if (c.opt.variant == "standard" || c.opt.variant == "both") variants.push_back({"standard", FieldVariant::Standard});
  if (c.opt.variant == "non-unit-zero" || c.opt.variant == "both") {
    variants.push_back({"non-unit-zero", FieldVariant::NonUnitZero});
  }
  if (variants.empty()) throw MalformedInput("unknown field variant '" + c.opt.variant + "'");
  auto laws = check_ring(r);
  c.r.line("ring: " + name + " sizes " + list(r.carrier->sizes()));
  c.r.line("ring laws: " + std::string(laws.ok ? "hold" : "fail"));
  c.r.result = {{"ring", name}, {"ring_laws", laws.ok}};
  if (!laws.ok) {
    c.r.fail(laws.describe(*r.carrier));
    return;
  }
  for (const auto& [label, v] : variants) {
    auto verdict = check_field(r, v);
    c.r.line(label + ": " + std::string(verdict.field ? "field" : "not a field") +
             (verdict.field ? "" : " (" + to_string(verdict.failed) + ")"));
    c.r.result[label] = {{"field", verdict.field}, {"failed", to_string(verdict.failed)}};
    if (!verdict.field) c.r.fail(label + ": " + verdict.describe(r));
  }
}

// ---- etcs ------------------------------------------------------------------

json certificate_json(const AuditCertificate& a, bool rechecked) {
  return {{"audit", a.audit},     {"subject", a.subject}, {"verdict", to_string(a.verdict)},
          {"corpus", hex(a.corpus_hash)}, {"checked", a.checked}, {"witness", a.summary},
          {"degenerate", a.degenerate},   {"counts", a.counts},   {"rechecked", rechecked}};
}

void cmd_etcs_audit(Context& c) {
  const auto name = c.pick(ArtifactKind::Corpus);
  c.finish();
  const auto& t = c.ws.corpus(name);
  std::vector<std::string> checks;
  std::stringstream in(c.opt.checks);
  for (std::string s; std::getline(in, s, ',');) {
    if (!s.empty()) checks.push_back(s);
  }
  std::vector<std::pair<AuditCertificate, const NnoCandidate*>> certs;
  for (const auto& k : checks) {
    if (k == "well-pointed") certs.push_back({check_well_pointed(t), nullptr});
    else if (k == "choice") certs.push_back({check_choice(t), nullptr});
    else if (k == "global") certs.push_back({count_global_elements(t), nullptr});
    else if (k == "nno") {
      for (const auto& n : t.candidates) certs.push_back({check_nno_candidate(t, n), &n});
    } else {
      throw MalformedInput("unknown check '" + k + "'");
    }
  }
  c.r.line("corpus: " + name + " over " + t.base->name() + (t.topology ? " with topology " + t.topology->name() : "") +
           ", " + std::to_string(t.objects.size()) + " objects");
  json all = json::array();
  for (const auto& [cert, n] : certs) {
    const bool ok = n ? recheck(cert, t, *n) : recheck(cert, t);
    std::stringstream text(cert.to_text());
    for (std::string l; std::getline(text, l);) c.r.line(l);
    if (cert.audit == "global") c.r.line("counts: " + list(cert.counts));
    c.r.line("recheck: " + std::string(ok ? "ok" : "mismatch"));
    all.push_back(certificate_json(cert, ok));
    if (cert.verdict == Verdict::Fail || cert.verdict == Verdict::Refuted) {
      c.r.fail(cert.audit + (cert.subject.empty() ? "" : " " + cert.subject) + ": " + cert.summary);
    }
    if (!ok) c.r.fail(cert.audit + ": certificate does not re-verify");
  }
  c.r.result = {{"corpus", name}, {"hash", hex(corpus_hash(t))}, {"certificates", all}};
}

// ---- driver ----------------------------------------------------------------

using Command = std::function<void(Context&)>;

void print_text(std::ostream& out, const Report& r, double ms) {
  out << "command: " << r.subcommand << "\n";
  for (const auto& f : r.inputs) out << "input: " << f.path << " " << hex(f.hash) << "\n";
  for (const auto& l : r.lines) out << l << "\n";
  for (const auto& w : r.witness) out << "witness: " << w << "\n";
  out << "status: " << (r.failed ? "property fails" : "ok") << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  out << "timing: " << buf << " ms\n";
}

void print_json(std::ostream& out, const Report& r, double ms, const std::string& error = {}) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["subcommand"] = r.subcommand;
  json inputs = json::array();
  for (const auto& f : r.inputs) inputs.push_back({{"path", f.path}, {"hash", hex(f.hash)}});
  j["inputs"] = inputs;
  j["status"] = !error.empty() ? "error" : r.failed ? "property fails" : "ok";
  if (!error.empty()) j["error"] = error;
  j["result"] = r.result;
  j["witnesses"] = r.witness;
  // alone on the last line so reports diff cleanly
  auto body = j.dump(2);
  body.pop_back();  // closing brace
  while (!body.empty() && body.back() == '\n') body.pop_back();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  out << body << ",\n  \"timing_ms\": " << buf << "\n}\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"toposkit: finite topos theory workbench", "toposkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", opt.json, "Emit the report as JSON");
  app.add_option("--max-enum", opt.max_enum, "Bound on enumerated candidates (overrides TOPOSKIT_MAX_ENUM)");
  app.add_option("--seed", opt.seed, "Seed for randomized corpora");

  const std::vector<std::pair<std::string, std::string>> simple = {
      {"validate", "Load files and list their artifacts"},
      {"omega", "Subobject classifier of a category"},
      {"char", "Characteristic map of a mono"},
      {"sub", "Subobjects of a presheaf against maps into Omega"},
      {"verify-classifier", "Check the classifier property over a corpus"},
      {"topologies", "Enumerate Grothendieck topologies"},
      {"lt-ops", "Enumerate Lawvere-Tierney operators"},
      {"is-sheaf", "Check the sheaf condition"},
      {"sheafify", "Sheafify a presheaf"},
      {"frame", "Frame of opens of a space"},
      {"canonical", "Canonical topology on Open(X)"},
      {"sections", "Sheaf of sections of a bundle"},
      {"etale", "Etale space of a presheaf on Open(X)"},
      {"sheafify-space", "Sheafify on a space via germs"},
      {"sober", "Sobriety of a space"},
      {"spatial", "Spatiality of the frame of opens"},
      {"recover-locale", "Sub(1) in Sh(X) against Open(X)"},
      {"triple", "Adjoint triple along a functor"},
      {"verify-gm", "Check a geometric morphism"},
      {"points", "Points of a presheaf topos"},
      {"classify-lex", "Geometric morphism classified by a lex functor"},
      {"check-group", "Group laws of an internal group"},
      {"check-id", "Check an identity in an internal group"},
      {"check-field", "Field axioms of an internal ring"},
  };
  const std::map<std::string, Command> commands = {
      {"validate", cmd_validate},
      {"omega", cmd_omega},
      {"char", cmd_char},
      {"sub", cmd_sub},
      {"verify-classifier", cmd_verify_classifier},
      {"topologies", cmd_topologies},
      {"lt-ops", cmd_lt_ops},
      {"is-sheaf", cmd_is_sheaf},
      {"sheafify", cmd_sheafify},
      {"frame", cmd_frame},
      {"canonical", cmd_canonical},
      {"sections", cmd_sections},
      {"etale", cmd_etale},
      {"sheafify-space", cmd_sheafify_space},
      {"sober", cmd_sober},
      {"spatial", cmd_spatial},
      {"recover-locale", cmd_recover_locale},
      {"triple", cmd_triple},
      {"verify-gm", cmd_verify_gm},
      {"points", cmd_points},
      {"classify-lex", cmd_classify_lex},
      {"check-group", cmd_check_group},
      {"check-id", cmd_check_id},
      {"check-field", cmd_check_field},
      {"etcs audit", cmd_etcs_audit},
  };

  std::string chosen;
  auto positional = [&](CLI::App* sub) {
    sub->add_option("args", opt.args, "Files to load, then artifact names");
  };
  for (const auto& [name, help] : simple) {
    auto* sub = app.add_subcommand(name, help);
    positional(sub);
    sub->callback([&chosen, name = name] { chosen = name; });
    if (name == "points" || name == "verify-classifier" || name == "triple" || name == "verify-gm" ||
        name == "classify-lex") {
      sub->add_option("--max-size", opt.max_size, "Set size bound for enumerated corpora");
    }
    if (name == "triple" || name == "verify-gm" || name == "classify-lex") {
      sub->add_option("--source-corpus", opt.source_corpus, "Named corpus over the source category");
      sub->add_option("--target-corpus", opt.target_corpus, "Named corpus over the target category");
    }
    if (name == "check-field") {
      sub->add_option("--variant", opt.variant, "standard, non-unit-zero or both");
    }
  }
  auto* etcs = app.add_subcommand("etcs", "Axiom audits over a topos corpus");
  etcs->require_subcommand(1);
  auto* audit = etcs->add_subcommand("audit", "Run audits over a corpus");
  positional(audit);
  audit->add_option("--corpus", opt.corpus_file, "Workspace file declaring the corpus");
  audit->add_option("--checks", opt.checks, "Comma-separated: well-pointed,choice,nno,global");
  audit->callback([&chosen] { chosen = "etcs audit"; });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kMalformed;
  }

  std::optional<ScopedMaxEnum> guard;
  try {
    if (opt.max_enum) {
      guard.emplace(*opt.max_enum);
    } else if (const char* env = std::getenv("TOPOSKIT_MAX_ENUM")) {
      guard.emplace(std::stoull(env));
    }
  } catch (const std::exception&) {
    err << "error: TOPOSKIT_MAX_ENUM is not a number\n";
    return kMalformed;
  }

  Report report;
  report.subcommand = chosen;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  };
  try {
    Context ctx{Workspace{}, {}, 0, opt, report};
    if (!opt.corpus_file.empty()) ctx.ws.load_file(opt.corpus_file);
    for (const auto& a : opt.args) {
      std::error_code ec;
      if (std::filesystem::is_regular_file(a, ec)) ctx.ws.load_file(a);
      else ctx.names.push_back(a);
    }
    report.inputs = ctx.ws.files();
    commands.at(chosen)(ctx);
  } catch (const Error& e) {
    if (opt.json) print_json(out, report, elapsed(), e.what());
    err << "error: " << e.what() << "\n";
    return kMalformed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kMalformed;
  }
  if (opt.json) print_json(out, report, elapsed());
  else print_text(out, report, elapsed());
  return report.failed ? kPropertyFails : kOk;
}

}  // namespace toposkit::cli
