#pragma once

#include <compare>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "toposkit/fincat.hpp"
#include "toposkit/psh.hpp"

namespace toposkit {

// A set of morphisms into `apex`, closed under precomposition. Members are kept
// sorted by morphism index.
struct Sieve {
  int apex = -1;
  std::vector<int> members;

  bool contains(int m) const;
  std::size_t size() const { return members.size(); }

  // (size, lexicographic member list)
  friend std::strong_ordering operator<=>(const Sieve& x, const Sieve& y);
  friend bool operator==(const Sieve& x, const Sieve& y) = default;
};

bool is_sieve(const FinCategory& c, int apex, const std::vector<int>& members);
Sieve maximal_sieve(const FinCategory& c, int a);
// Smallest sieve containing the given morphisms into a.
Sieve generated_sieve(const FinCategory& c, int a, const std::vector<int>& generators);
Sieve intersect(const Sieve& s, const Sieve& t);
// f*(S) = {g | f . g in S} for f : b -> apex(S).
Sieve pullback_sieve(const FinCategory& c, const Sieve& s, int f);
std::string format_sieve(const FinCategory& c, const Sieve& s);

// All sieves on a, ordered by (size, members). The maximal sieve is last.
std::vector<Sieve> sieves_on(const FinCategory& c, int a);

// Omega(a) = sieves on a; the action of f : b -> a is pullback along f.
struct Omega {
  CategoryPtr base;
  PresheafPtr object;
  PresheafMap truth;                       // 1 -> Omega, the maximal sieves
  std::vector<std::vector<Sieve>> sieves;  // [a][element]

  int index_of(const Sieve& s) const;
  int maximal(int a) const { return static_cast<int>(sieves[a].size()) - 1; }
  const Sieve& sieve(int a, int k) const { return sieves[a][k]; }
  // Omega x Omega -> Omega by intersection, over the given product.
  PresheafMap meet(const Limit& square) const;
};

using OmegaPtr = std::shared_ptr<const Omega>;

Omega omega(const CategoryPtr& c);
OmegaPtr shared_omega(const CategoryPtr& c);

// Pointwise membership masks of a subpresheaf.
using Subobject = std::vector<std::vector<bool>>;

bool is_subpresheaf(const Presheaf& x, const Subobject& s);
Presheaf subpresheaf(const Presheaf& x, const Subobject& s);
// The mono S >-> X, elements of S in ascending order.
PresheafMap inclusion(const PresheafPtr& x, const Subobject& s);
Subobject image_of(const PresheafMap& m);
std::size_t subobject_size(const Subobject& s);

struct SubobjectLattice {
  PresheafPtr carrier;
  std::vector<Subobject> elements;  // ordered by (size, flat member list)
  std::vector<std::vector<bool>> leq;

  int bottom() const { return 0; }
  int top() const { return static_cast<int>(elements.size()) - 1; }
  int index_of(const Subobject& s) const;
};

SubobjectLattice subobjects(const PresheafPtr& x);

// chi_a(x) = {f : b -> a | X(f)(x) in the image of m}. Throws PreconditionFailed
// with a collapsing pair when m is not mono.
PresheafMap characteristic(const Omega& om, const PresheafMap& m);
PresheafMap characteristic(const Omega& om, const PresheafPtr& x, const Subobject& s);
// The subobject classified by phi : X -> Omega, i.e. the pullback of truth.
Subobject classified(const Omega& om, const PresheafMap& phi);

struct ClassifierCertificate {
  bool ok = true;
  std::string failure;
  std::size_t presheaves = 0;
  std::size_t monos = 0;
  // per corpus object: |Sub(X)| and |Hom(X, Omega)|
  std::vector<std::pair<std::size_t, std::size_t>> counts;
  bool truth_domain_terminal = false;
};

// Defining property of (Omega, t) checked over the corpus: every mono between
// corpus objects and every subobject of a corpus object has a unique
// classifying map that makes the square a pullback, Sub(X) -> Hom(X, Omega) is
// a bijection, and dom(t) is terminal in the corpus.
ClassifierCertificate verify_classifier(const CategoryPtr& c,
                                        const std::vector<PresheafPtr>& corpus);

}  // namespace toposkit
