#include "toposkit/etcs.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "toposkit/classifier.hpp"
#include "toposkit/corpus.hpp"
#include "toposkit/error.hpp"

namespace toposkit {

namespace {

std::string object_name(const ToposCorpus& t, std::size_t i) {
  const auto& p = *t.objects[i];
  return p.name().empty() ? "#" + std::to_string(i) : p.name();
}

std::string format_map(const PresheafMap& h) {
  std::string out = "[";
  for (std::size_t a = 0; a < h.components().size(); ++a) {
    if (a) out += " | ";
    for (std::size_t x = 0; x < h.component(static_cast<int>(a)).size(); ++x) {
      if (x) out += ' ';
      out += h.target().label(static_cast<int>(a), h(static_cast<int>(a), static_cast<int>(x)));
    }
  }
  return out + "]";
}

void push_unique(std::vector<PresheafPtr>& out, PresheafPtr p) {
  for (const auto& q : out) {
    if (*q == *p) return;
  }
  out.push_back(std::move(p));
}

// f . x for a global element x, flattened.
std::vector<int> after(const PresheafMap& f, const PresheafMap& x) {
  std::vector<int> v;
  for (std::size_t a = 0; a < x.components().size(); ++a) v.push_back(f(static_cast<int>(a), x(static_cast<int>(a), 0)));
  return v;
}

struct Fnv {
  std::uint64_t h = 1469598103934665603ull;
  void byte(unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  }
  void word(std::int64_t v) {
    for (int i = 0; i < 8; ++i) byte(static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff));
  }
  void text(const std::string& s) {
    word(static_cast<std::int64_t>(s.size()));
    for (char c : s) byte(static_cast<unsigned char>(c));
  }
  void presheaf(const Presheaf& p) {
    for (int s : p.sizes()) word(s);
    for (int m = 0; m < p.base()->morphism_count(); ++m) {
      for (int v : p.action(m)) word(v);
    }
  }
  void map(const PresheafMap& f) {
    for (const auto& c : f.components()) {
      word(static_cast<std::int64_t>(c.size()));
      for (int v : c) word(v);
    }
  }
};

}  // namespace

PresheafPtr ToposCorpus::terminal() const { return share(terminal_presheaf(base)); }

PresheafPtr ToposCorpus::initial() const {
  auto zero = share(initial_presheaf(base));
  return topology ? sheafify(zero, *topology).sheaf : zero;
}

void validate(const ToposCorpus& t) {
  for (std::size_t i = 0; i < t.objects.size(); ++i) {
    const auto& p = *t.objects[i];
    if (!same_category(p.base(), t.base)) throw MalformedInput("corpus object " + object_name(t, i) + " is on another base");
    if (t.topology && !is_sheaf(p, *t.topology)) {
      throw MalformedInput("corpus object " + object_name(t, i) + " is not a sheaf for " + t.topology->name());
    }
  }
  auto check_point = [&](const PresheafMap& x, const PresheafPtr& target, const std::string& what) {
    for (int s : x.source().sizes()) {
      if (s != 1) throw MalformedInput(what + ": point is not a global element");
    }
    if (!(x.target() == *target)) throw MalformedInput(what + ": point has the wrong target");
  };
  for (const auto& r : t.triples) {
    check_point(r.point, r.object, "triple " + r.name);
    if (!(r.step.source() == *r.object) || !(r.step.target() == *r.object)) {
      throw MalformedInput("triple " + r.name + ": step is not an endomorphism");
    }
  }
  for (const auto& n : t.candidates) {
    check_point(n.zero, n.object, "candidate " + n.name);
    if (!(n.succ.source() == *n.object) || !(n.succ.target() == *n.object)) {
      throw MalformedInput("candidate " + n.name + ": successor is not an endomorphism");
    }
  }
}

ToposCorpus presheaf_corpus(const CategoryPtr& base, std::vector<PresheafPtr> objects, std::string name) {
  ToposCorpus t{std::move(name), base, std::nullopt, {}, {}, {}};
  push_unique(t.objects, share(initial_presheaf(base).named("0")));
  push_unique(t.objects, share(terminal_presheaf(base).named("1")));
  for (auto& p : objects) push_unique(t.objects, std::move(p));
  validate(t);
  return t;
}

ToposCorpus full_corpus(const CategoryPtr& base, int max_size, std::string name) {
  std::vector<PresheafPtr> objects;
  for (auto& p : up_to_iso(enumerate_presheaves(base, max_size))) objects.push_back(share(std::move(p)));
  return presheaf_corpus(base, std::move(objects), std::move(name));
}

ToposCorpus sheaf_corpus(const GrothendieckTopology& t, const std::vector<PresheafPtr>& presheaves, std::string name) {
  ToposCorpus c{std::move(name), t.base(), t, {}, {}, {}};
  push_unique(c.objects, sheafify(share(initial_presheaf(t.base()).named("0")), t).sheaf);
  push_unique(c.objects, share(terminal_presheaf(t.base()).named("1")));
  for (const auto& p : presheaves) push_unique(c.objects, sheafify(p, t).sheaf);
  validate(c);
  return c;
}

std::vector<RecursionTriple> recursion_triples(const CategoryPtr& base, int chain_length) {
  std::vector<RecursionTriple> out;
  const int objects = base->object_count();
  auto constant = [&](int n, const std::string& name) { return share(constant_presheaf(base, n).named(name)); };
  auto point = [&](const PresheafPtr& x, int v) {
    return PresheafMap(share(terminal_presheaf(base)), x, Components(objects, std::vector<int>{v}));
  };
  auto endo = [&](const PresheafPtr& x, const std::vector<int>& f) {
    return PresheafMap(x, x, Components(objects, f));
  };
  auto add = [&](std::string name, int n, int start, std::vector<int> f) {
    auto x = constant(n, name);
    out.push_back(RecursionTriple{std::move(name), x, point(x, start), endo(x, f)});
  };
  std::vector<int> chain(chain_length);
  for (int i = 0; i < chain_length; ++i) chain[i] = std::min(i + 1, chain_length - 1);
  add("chain" + std::to_string(chain_length), chain_length, 0, chain);
  add("cycle2", 2, 0, {1, 0});
  add("cycle3", 3, 0, {1, 2, 0});
  add("swap", 2, 0, {1, 0});
  add("const1", 2, 0, {1, 1});
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Refuted: return "refuted";
    case Verdict::ConsistentUpToCorpus: return "consistent-up-to-corpus";
  }
  return {};
}

std::string AuditCertificate::to_text() const {
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(corpus_hash));
  std::string out = "audit: " + audit + (subject.empty() ? "" : " " + subject) + "\n";
  out += "verdict: " + to_string(verdict) + "\n";
  out += "corpus: " + std::string(hash) + "\n";
  out += "checked: " + std::to_string(checked) + "\n";
  if (!summary.empty()) out += "witness: " + summary + "\n";
  return out;
}

std::uint64_t corpus_hash(const ToposCorpus& t) {
  Fnv f;
  f.text(t.base->name());
  f.word(t.base->object_count());
  f.word(t.base->morphism_count());
  for (int g = 0; g < t.base->morphism_count(); ++g) {
    f.word(t.base->dom(g));
    f.word(t.base->cod(g));
    for (int h : t.base->into(t.base->dom(g))) f.word(t.base->compose(g, h));
  }
  f.word(t.topology ? 1 : 0);
  if (t.topology) {
    for (const auto& c : t.topology->covers()) {
      f.word(static_cast<std::int64_t>(c.size()));
      for (int k : c) f.word(k);
    }
  }
  f.word(static_cast<std::int64_t>(t.objects.size()));
  for (const auto& p : t.objects) f.presheaf(*p);
  f.word(static_cast<std::int64_t>(t.triples.size()));
  for (const auto& r : t.triples) {
    f.presheaf(*r.object);
    f.map(r.point);
    f.map(r.step);
  }
  return f.h;
}

std::vector<PresheafMap> global_elements(const Presheaf& x) {
  return enumerate_maps(share(terminal_presheaf(x.base())), share(x));
}

AuditCertificate check_well_pointed(const ToposCorpus& t) {
  AuditCertificate c;
  c.audit = "well-pointed";
  c.corpus_hash = corpus_hash(t);
  if (isomorphic(*t.initial(), *t.terminal())) {
    c.verdict = Verdict::Fail;
    c.degenerate = true;
    c.summary = "initial object is isomorphic to the terminal object";
    return c;
  }
  for (std::size_t i = 0; i < t.objects.size(); ++i) {
    const auto globals = global_elements(*t.objects[i]);
    for (std::size_t j = 0; j < t.objects.size(); ++j) {
      std::map<std::vector<int>, PresheafMap> seen;
      bool found = false;
      for_each_map(*t.objects[i], *t.objects[j], [&](const Components& comps) {
        ++c.checked;
        PresheafMap g(t.objects[i], t.objects[j], comps);
        std::vector<int> signature;
        for (const auto& x : globals) {
          const auto v = after(g, x);
          signature.insert(signature.end(), v.begin(), v.end());
        }
        auto [it, fresh] = seen.emplace(signature, g);
        if (fresh) return true;
        found = true;
        c.verdict = Verdict::Fail;
        c.objects = {i, j};
        c.maps = {it->second.components(), g.components()};
        c.summary = "maps " + format_map(it->second) + " and " + format_map(g) + " : " + object_name(t, i) + " -> " +
                    object_name(t, j) + " agree on all " + std::to_string(globals.size()) + " global elements";
        return false;
      });
      if (found) return c;
    }
  }
  return c;
}

bool is_epi_in(const ToposCorpus& t, const PresheafMap& h) {
  if (!t.topology) return is_epi(h);
  const auto& base = *t.base;
  const auto image = image_of(h);
  const auto& y = h.target();
  for (int a = 0; a < base.object_count(); ++a) {
    for (int v = 0; v < y.size(a); ++v) {
      Sieve s{a, {}};
      for (int f : base.into(a)) {
        if (image[base.dom(f)][y.act(f, v)]) s.members.push_back(f);
      }
      if (!t.topology->covers(s)) return false;
    }
  }
  return true;
}

AuditCertificate check_choice(const ToposCorpus& t) {
  AuditCertificate c;
  c.audit = "choice";
  c.corpus_hash = corpus_hash(t);
  for (std::size_t i = 0; i < t.objects.size(); ++i) {
    for (std::size_t j = 0; j < t.objects.size(); ++j) {
      bool found = false;
      for_each_map(*t.objects[i], *t.objects[j], [&](const Components& comps) {
        PresheafMap e(t.objects[i], t.objects[j], comps);
        if (!is_epi_in(t, e)) return true;
        ++c.checked;
        bool split = false;
        for_each_map(*t.objects[j], *t.objects[i], [&](const Components& s) {
          PresheafMap section(t.objects[j], t.objects[i], s);
          const auto id = compose(e, section);
          bool identity = true;
          for (std::size_t a = 0; a < id.components().size() && identity; ++a) {
            for (std::size_t x = 0; x < id.component(static_cast<int>(a)).size(); ++x) {
              identity = identity && id(static_cast<int>(a), static_cast<int>(x)) == static_cast<int>(x);
            }
          }
          split = identity;
          return !split;
        });
        if (split) return true;
        found = true;
        c.verdict = Verdict::Fail;
        c.objects = {i, j};
        c.maps = {e.components()};
        c.summary = "epi " + format_map(e) + " : " + object_name(t, i) + " -> " + object_name(t, j) + " has no section";
        return false;
      });
      if (found) return c;
    }
  }
  return c;
}

namespace {

std::size_t count_recursions(const NnoCandidate& n, const RecursionTriple& r, std::size_t limit) {
  std::size_t count = 0;
  for_each_map(*n.object, *r.object, [&](const Components& comps) {
    PresheafMap f(n.object, r.object, comps);
    if (compose(f, n.zero).components() != r.point.components()) return true;
    if (compose(f, n.succ).components() != compose(r.step, f).components()) return true;
    return ++count < limit;
  });
  return count;
}

}  // namespace

AuditCertificate check_nno_candidate(const ToposCorpus& t, const NnoCandidate& n) {
  AuditCertificate c;
  c.audit = "nno";
  c.subject = n.name;
  c.corpus_hash = corpus_hash(t);
  c.verdict = Verdict::ConsistentUpToCorpus;
  for (std::size_t k = 0; k < t.triples.size(); ++k) {
    ++c.checked;
    const auto solutions = count_recursions(n, t.triples[k], 2);
    if (solutions == 1) continue;
    c.verdict = Verdict::Refuted;
    c.triple = k;
    c.solutions = solutions;
    c.summary = "triple " + t.triples[k].name + " admits " + (solutions == 0 ? "no" : "more than one") +
                " map from " + (n.name.empty() ? "N" : n.name);
    break;
  }
  return c;
}

AuditCertificate count_global_elements(const ToposCorpus& t) {
  AuditCertificate c;
  c.audit = "global";
  c.corpus_hash = corpus_hash(t);
  for (std::size_t i = 0; i < t.objects.size(); ++i) {
    c.counts.push_back(global_elements(*t.objects[i]).size());
    ++c.checked;
    if (i) c.summary += ", ";
    c.summary += object_name(t, i) + ": " + std::to_string(c.counts.back());
  }
  return c;
}

bool recheck(const AuditCertificate& c, const ToposCorpus& t, const NnoCandidate& n) {
  auto copy = t;
  copy.candidates = {n};
  return c.subject == n.name && recheck(c, copy);
}

bool recheck(const AuditCertificate& c, const ToposCorpus& t) {
  if (c.corpus_hash != corpus_hash(t)) return false;
  if (c.audit == "global") {
    if (c.counts.size() != t.objects.size()) return false;
    for (std::size_t i = 0; i < t.objects.size(); ++i) {
      if (global_elements(*t.objects[i]).size() != c.counts[i]) return false;
    }
    return true;
  }
  if (c.verdict == Verdict::Pass || c.verdict == Verdict::ConsistentUpToCorpus) {
    if (c.audit == "well-pointed") return check_well_pointed(t).verdict == c.verdict;
    if (c.audit == "choice") return check_choice(t).verdict == c.verdict;
    if (c.audit == "nno") {
      for (const auto& n : t.candidates) {
        if (n.name == c.subject) return check_nno_candidate(t, n).verdict == c.verdict;
      }
    }
    return false;
  }
  if (c.audit == "well-pointed") {
    if (c.degenerate) return isomorphic(*t.initial(), *t.terminal());
    if (c.objects.size() != 2 || c.maps.size() != 2 || c.maps[0] == c.maps[1]) return false;
    const auto& x = t.objects[c.objects[0]];
    const auto& y = t.objects[c.objects[1]];
    PresheafMap f(x, y, c.maps[0]);
    PresheafMap g(x, y, c.maps[1]);
    for (const auto& e : global_elements(*x)) {
      if (after(f, e) != after(g, e)) return false;
    }
    return true;
  }
  if (c.audit == "choice") {
    if (c.objects.size() != 2 || c.maps.size() != 1) return false;
    const auto& x = t.objects[c.objects[0]];
    const auto& y = t.objects[c.objects[1]];
    PresheafMap e(x, y, c.maps[0]);
    if (!is_epi_in(t, e)) return false;
    for (const auto& s : enumerate_maps(y, x)) {
      const auto id = compose(e, s);
      if (id.components() == identity_map(y).components()) return false;
    }
    return true;
  }
  if (c.audit == "nno" && c.triple && *c.triple < t.triples.size()) {
    for (const auto& n : t.candidates) {
      if (n.name == c.subject) return count_recursions(n, t.triples[*c.triple], 2) == c.solutions;
    }
  }
  return false;
}

}  // namespace toposkit
