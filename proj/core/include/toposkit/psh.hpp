#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toposkit/fincat.hpp"

namespace toposkit {

// Per-object function tables of a natural transformation.
using Components = std::vector<std::vector<int>>;

// A contravariant functor from a finite category to finite sets. The set at
// object a is {0, ..., size(a) - 1}; the action of m : a -> b maps P(b) to P(a).
class Presheaf {
 public:
  // `actions` is indexed by morphism; entries for identities may be left empty.
  // Throws MalformedInput if an action is out of range or functoriality fails.
  Presheaf(CategoryPtr base, std::vector<int> sizes, std::vector<std::vector<int>> actions,
           std::vector<std::vector<std::string>> labels = {}, std::string name = {});

  const CategoryPtr& base() const { return base_; }
  const std::string& name() const { return name_; }
  Presheaf named(std::string name) const;
  Presheaf with_labels(std::vector<std::vector<std::string>> labels) const;

  int size(int a) const { return sizes_[a]; }
  const std::vector<int>& sizes() const { return sizes_; }
  int total_size() const;
  int max_size() const;

  int act(int m, int x) const { return actions_[m][x]; }
  const std::vector<int>& action(int m) const { return actions_[m]; }

  bool has_labels() const { return !labels_.empty(); }
  std::string label(int a, int x) const;
  std::optional<int> find_label(int a, std::string_view label) const;

  // Structural equality: base, sizes and actions. Names and labels are ignored.
  friend bool operator==(const Presheaf& x, const Presheaf& y);

 private:
  CategoryPtr base_;
  std::string name_;
  std::vector<int> sizes_;
  std::vector<std::vector<int>> actions_;
  std::vector<std::vector<std::string>> labels_;
};

using PresheafPtr = std::shared_ptr<const Presheaf>;

inline PresheafPtr share(Presheaf p) { return std::make_shared<const Presheaf>(std::move(p)); }

class PresheafMap {
 public:
  // Throws MalformedInput if a component is out of range or naturality fails.
  PresheafMap(PresheafPtr source, PresheafPtr target, Components components);
  PresheafMap(const Presheaf& source, const Presheaf& target, Components components);

  const Presheaf& source() const { return *source_; }
  const Presheaf& target() const { return *target_; }
  const PresheafPtr& source_ptr() const { return source_; }
  const PresheafPtr& target_ptr() const { return target_; }
  const CategoryPtr& base() const { return source_->base(); }

  int operator()(int a, int x) const { return components_[a][x]; }
  const std::vector<int>& component(int a) const { return components_[a]; }
  const Components& components() const { return components_; }

  friend bool operator==(const PresheafMap& x, const PresheafMap& y);

 private:
  PresheafPtr source_;
  PresheafPtr target_;
  Components components_;
};

Presheaf terminal_presheaf(const CategoryPtr& base);
Presheaf initial_presheaf(const CategoryPtr& base);
// y(a)(c) = hom(c, a), elements in hom order.
Presheaf representable(const CategoryPtr& base, int a);
// The constant presheaf on an n-element set: every action is the identity.
Presheaf constant_presheaf(const CategoryPtr& base, int n);

PresheafMap identity_map(const PresheafPtr& x);
PresheafMap identity_map(const Presheaf& x);
// g . f; throws PreconditionFailed if target(f) != source(g).
PresheafMap compose(const PresheafMap& g, const PresheafMap& f);
PresheafMap terminal_map(const Presheaf& x);
PresheafMap initial_map(const Presheaf& x);
// Inverse of an isomorphism; throws PreconditionFailed otherwise.
PresheafMap inverse(const PresheafMap& iso);

struct MapClass {
  bool mono = false;
  bool epi = false;
  bool iso() const { return mono && epi; }
};

// Pointwise criterion: mono iff every component is injective, epi iff every
// component is surjective.
MapClass classify_map(const PresheafMap& h);
inline bool is_mono(const PresheafMap& h) { return classify_map(h).mono; }
inline bool is_epi(const PresheafMap& h) { return classify_map(h).epi; }
inline bool is_iso(const PresheafMap& h) { return classify_map(h).iso(); }

struct EpiMono {
  PresheafMap epi;
  PresheafMap mono;
};

// h = mono . epi with the image taken pointwise, elements in ascending order.
EpiMono factor_epi_mono(const PresheafMap& h);

struct MapSearch {
  bool injective = false;
  // Stop after this many solutions; 0 means all.
  std::size_t limit = 0;
};

// Enumerates natural transformations X -> Y in lexicographic order of their
// flattened component tables. `visit` returns false to stop early. Search
// nodes count against max_enum().
void for_each_map(const Presheaf& x, const Presheaf& y,
                  const std::function<bool(const Components&)>& visit, MapSearch options = {});
std::vector<PresheafMap> enumerate_maps(const PresheafPtr& x, const PresheafPtr& y,
                                        MapSearch options = {});
std::vector<PresheafMap> enumerate_maps(const Presheaf& x, const Presheaf& y,
                                        MapSearch options = {});
std::size_t count_maps(const Presheaf& x, const Presheaf& y);
std::optional<PresheafMap> find_isomorphism(const Presheaf& x, const Presheaf& y);
inline bool isomorphic(const Presheaf& x, const Presheaf& y) {
  return find_isomorphism(x, y).has_value();
}

// A functor from a finite shape into Psh(base).
struct Diagram {
  CategoryPtr base;
  CategoryPtr shape;
  std::vector<PresheafPtr> objects;   // per shape object
  std::vector<PresheafMap> arrows;    // per shape morphism, identities included
};

// Throws MalformedInput when the assignment is not functorial.
void validate_diagram(const Diagram& d);

Diagram discrete_diagram(const CategoryPtr& base, const std::vector<PresheafPtr>& objects);
Diagram parallel_pair_diagram(const PresheafMap& f, const PresheafMap& g);
Diagram cospan_diagram(const PresheafMap& f, const PresheafMap& g);

// Pointwise limit: at each base object the compatible tuples, in
// lexicographic order.
struct Limit {
  PresheafPtr apex;
  std::vector<PresheafMap> legs;
  std::vector<std::vector<std::vector<int>>> tuples;  // [object][element] -> tuple
  std::vector<std::map<std::vector<int>, int>> index;

  int index_of(int a, const std::vector<int>& tuple) const;
  // The unique map Z -> apex commuting with `cone`; throws PreconditionFailed
  // if the cone does not commute.
  PresheafMap mediate(const PresheafPtr& z, const std::vector<PresheafMap>& cone) const;
};

// Pointwise colimit: disjoint union quotiented by the generated relation,
// classes numbered by their first member in (shape object, element) order.
struct Colimit {
  PresheafPtr apex;
  std::vector<PresheafMap> injections;
  std::vector<std::vector<std::pair<int, int>>> representative;  // [object][class]
  std::vector<std::vector<std::vector<int>>> class_of;           // [object][shape obj][x]

  PresheafMap mediate(const PresheafPtr& z, const std::vector<PresheafMap>& cocone) const;
};

Limit finite_limit(const Diagram& d);
Colimit finite_colimit(const Diagram& d);

Limit product(const PresheafPtr& x, const PresheafPtr& y);
Limit product(const Presheaf& x, const Presheaf& y);
Limit equalizer(const PresheafMap& f, const PresheafMap& g);
Limit pullback(const PresheafMap& f, const PresheafMap& g);
Colimit coproduct(const PresheafPtr& x, const PresheafPtr& y);
Colimit coproduct(const Presheaf& x, const Presheaf& y);
Colimit coequalizer(const PresheafMap& f, const PresheafMap& g);

// <f, g> : Z -> X x Y for the given product.
PresheafMap pairing(const Limit& prod, const PresheafMap& f, const PresheafMap& g);
// f x g between the given products.
PresheafMap product_map(const Limit& from, const Limit& to, const PresheafMap& f,
                        const PresheafMap& g);
// [f, g] : X + Y -> Z for the given coproduct.
PresheafMap copairing(const Colimit& sum, const PresheafMap& f, const PresheafMap& g);

// Y^X with (Y^X)(a) = Nat(y(a) x X, Y).
struct Exponential {
  PresheafPtr base_x;
  PresheafPtr base_y;
  PresheafPtr object;
  Limit evaluation_domain;  // Y^X x X
  PresheafMap evaluation;   // Y^X x X -> Y
  std::vector<std::vector<Components>> elements;  // [a][element] as Nat(y(a) x X, Y)
  std::vector<std::map<std::vector<int>, int>> element_index;  // flattened -> element
  std::vector<Limit> stages;                                   // y(a) x X per object a

  // h : Z x X -> Y  |->  Z -> Y^X.
  PresheafMap transpose(const PresheafPtr& z, const PresheafMap& h) const;
  // k : Z -> Y^X  |->  ev . (k x X) : Z x X -> Y.
  PresheafMap untranspose(const PresheafMap& k) const;
};

Exponential exponential(const PresheafPtr& x, const PresheafPtr& y);

// Flattened component table, used as a lookup key.
std::vector<int> flatten(const Components& c);

}  // namespace toposkit
