#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace toposkit {

struct MorphismSpec {
  std::string name;
  int dom = -1;
  int cod = -1;
};

// Category data as read from a file or built by hand, before any law has been
// checked. Composites are listed as triples g . f = h.
struct CategoryData {
  struct Composite {
    int g = -1;
    int f = -1;
    int h = -1;
  };

  std::string name;
  std::vector<std::string> objects;
  std::vector<MorphismSpec> morphisms;
  std::vector<int> identities;  // per object; -1 when absent
  std::vector<Composite> composites;

  // Adds identity morphisms (named id_<obj>) for objects lacking one, and
  // identity composites g . id = g, id . f = f that are not listed.
  void complete_identities();
};

struct Violation {
  std::string law;
  std::string witness;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary(std::size_t max_lines = 8) const;
};

// Lists every failed totality, identity and associativity instance.
ValidationReport validate_category(const CategoryData& raw);

// A validated finite category. Objects and morphisms are dense indices in
// declaration order; morphism equality is index equality.
class FinCategory {
 public:
  // Throws MalformedInput when validate_category reports any violation.
  explicit FinCategory(const CategoryData& raw);

  const std::string& name() const { return name_; }
  int object_count() const { return static_cast<int>(objects_.size()); }
  int morphism_count() const { return static_cast<int>(morphisms_.size()); }
  const std::string& object_name(int a) const { return objects_[a]; }
  const std::string& morphism_name(int m) const { return morphisms_[m].name; }

  int dom(int m) const { return morphisms_[m].dom; }
  int cod(int m) const { return morphisms_[m].cod; }
  int identity(int a) const { return identities_[a]; }
  bool is_identity(int m) const { return identities_[dom(m)] == m; }
  bool composable(int g, int f) const { return dom(g) == cod(f); }

  // g . f. Throws PreconditionFailed when cod(f) != dom(g).
  int compose(int g, int f) const;

  std::span<const int> hom(int a, int b) const { return homs_[a * object_count() + b]; }
  std::span<const int> into(int a) const { return into_[a]; }
  std::span<const int> out_of(int a) const { return out_of_[a]; }
  // Position of m inside hom(dom m, cod m).
  int hom_position(int m) const { return hom_pos_[m]; }

  std::optional<int> find_object(std::string_view name) const;
  std::optional<int> find_morphism(std::string_view name) const;

  CategoryData data() const;

  friend bool operator==(const FinCategory& x, const FinCategory& y);

 private:
  std::string name_;
  std::vector<std::string> objects_;
  std::vector<MorphismSpec> morphisms_;
  std::vector<int> identities_;
  std::vector<int> composition_;  // [g * M + f], -1 when not composable
  std::vector<std::vector<int>> homs_;
  std::vector<std::vector<int>> into_;
  std::vector<std::vector<int>> out_of_;
  std::vector<int> hom_pos_;
};

using CategoryPtr = std::shared_ptr<const FinCategory>;

CategoryPtr make_category(const CategoryData& raw);

// Same objects and morphism indices, domains and codomains swapped.
// opposite(opposite(C)) is structurally identical to C.
CategoryPtr opposite(const CategoryPtr& c);

bool same_category(const CategoryPtr& x, const CategoryPtr& y);

ValidationReport validate_functor(const FinCategory& source, const FinCategory& target,
                                  const std::vector<int>& object_map,
                                  const std::vector<int>& morphism_map);

class FinFunctor {
 public:
  // Throws MalformedInput when a preservation law fails.
  FinFunctor(CategoryPtr source, CategoryPtr target, std::vector<int> object_map,
             std::vector<int> morphism_map, std::string name = {});

  const std::string& name() const { return name_; }
  const CategoryPtr& source() const { return source_; }
  const CategoryPtr& target() const { return target_; }
  int object(int a) const { return object_map_[a]; }
  int morphism(int m) const { return morphism_map_[m]; }
  const std::vector<int>& object_map() const { return object_map_; }
  const std::vector<int>& morphism_map() const { return morphism_map_; }

  bool is_full() const;
  bool is_faithful() const;

  friend bool operator==(const FinFunctor& x, const FinFunctor& y);

 private:
  std::string name_;
  CategoryPtr source_;
  CategoryPtr target_;
  std::vector<int> object_map_;
  std::vector<int> morphism_map_;
};

FinFunctor identity_functor(const CategoryPtr& c);
FinFunctor compose(const FinFunctor& g, const FinFunctor& f);

class NatTransform {
 public:
  // components[a] is a morphism source(a) -> target(a) of the target category.
  NatTransform(FinFunctor source, FinFunctor target, std::vector<int> components);

  const FinFunctor& source() const { return source_; }
  const FinFunctor& target() const { return target_; }
  int component(int a) const { return components_[a]; }

 private:
  FinFunctor source_;
  FinFunctor target_;
  std::vector<int> components_;
};

// Limit search inside a finite category, by brute force over candidate apexes.
struct ProductCone {
  int apex;
  int first;
  int second;
};
struct EqualizerCone {
  int apex;
  int arrow;
};

std::optional<int> find_terminal(const FinCategory& c);
std::optional<ProductCone> find_product(const FinCategory& c, int a, int b);
std::optional<EqualizerCone> find_equalizer(const FinCategory& c, int u, int v);
// Terminal object, all binary products and all equalizers exist. `witness`
// receives the first missing limit when provided.
bool has_finite_limits(const FinCategory& c, std::string* witness = nullptr);

}  // namespace toposkit
