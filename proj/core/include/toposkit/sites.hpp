#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toposkit/classifier.hpp"

namespace toposkit {

// Covering sieves per object, as indices into omega->sieves[a] (ascending).
class GrothendieckTopology {
 public:
  GrothendieckTopology(OmegaPtr omega, std::vector<std::vector<int>> covers, std::string name = {});

  const OmegaPtr& omega() const { return omega_; }
  const CategoryPtr& base() const { return omega_->base; }
  const std::string& name() const { return name_; }
  const std::vector<int>& covers(int a) const { return covers_[a]; }
  const std::vector<std::vector<int>>& covers() const { return covers_; }
  bool covers(int a, int sieve) const { return mask_[a][sieve]; }
  bool covers(const Sieve& s) const;

  friend bool operator==(const GrothendieckTopology& x, const GrothendieckTopology& y) {
    return x.covers_ == y.covers_;
  }

 private:
  OmegaPtr omega_;
  std::string name_;
  std::vector<std::vector<int>> covers_;
  std::vector<std::vector<bool>> mask_;
};

// A site is a base category with a topology; the topology carries its base.
using Site = GrothendieckTopology;

// First violated axiom (maximality, stability, transitivity) with witness, if any.
std::optional<std::string> check_topology_axioms(const Omega& om,
                                                 const std::vector<std::vector<int>>& covers);

GrothendieckTopology trivial_topology(const OmegaPtr& om);
GrothendieckTopology largest_topology(const OmegaPtr& om);
// Smallest topology containing the given covers (closure under the axioms).
GrothendieckTopology generated_topology(const OmegaPtr& om,
                                        const std::vector<std::vector<int>>& covers);

std::vector<GrothendieckTopology> enumerate_topologies(const OmegaPtr& om);

struct LTOperator {
  PresheafMap j;  // Omega -> Omega
};

// First failing law among j . t = t, j . j = j, j . meet = meet . (j x j).
std::optional<std::string> check_lt_axioms(const Omega& om, const PresheafMap& j);
std::vector<LTOperator> enumerate_lt_operators(const OmegaPtr& om);

// j_a(S) = {f : b -> a | f*S in J(b)}
LTOperator topology_to_j(const GrothendieckTopology& t);
// J(a) = {S | j_a(S) is maximal}
GrothendieckTopology j_to_topology(const OmegaPtr& om, const LTOperator& j);

// A matching family for a sieve S on a: x_f in P(dom f) for each f in S with
// x_{f . g} = P(g) x_f, i.e. a map S -> P with S viewed as a subpresheaf of y(a).
struct MatchingFamilies {
  PresheafPtr sieve;                 // S as a presheaf
  std::vector<std::vector<int>> member;  // [object][position] -> morphism of S
  std::vector<Components> families;  // lexicographic order
  std::map<std::vector<int>, int> index;  // flattened family -> position
};

MatchingFamilies matching_families(const Presheaf& p, const Sieve& s);
// The family (P(f) x)_{f in S}.
Components restrict_to(const Presheaf& p, const MatchingFamilies& mf, int x);

struct CoverFailure {
  int object = -1;
  int sieve = -1;     // index into Omega(object)
  std::string kind;   // "no amalgamation" or "non-unique amalgamation"
  Components family;  // the offending family
  std::string describe(const Presheaf& p, const Omega& om) const;
};

struct SheafCheck {
  bool sheaf = true;
  std::optional<CoverFailure> failure;
};

SheafCheck check_sheaf(const Presheaf& p, const GrothendieckTopology& t);
inline bool is_sheaf(const Presheaf& p, const GrothendieckTopology& t) {
  return check_sheaf(p, t).sheaf;
}

// P+(a) = matching families over covering sieves of a, two being equal when
// they agree on a covering sieve.
struct PlusConstruction {
  PresheafPtr source;
  PresheafPtr object;
  PresheafMap unit;  // P -> P+
  // [a][class] -> (sieve index, family)
  std::vector<std::vector<std::pair<int, Components>>> representative;
  std::vector<std::map<std::pair<int, std::vector<int>>, int>> lookup;
  std::vector<std::vector<MatchingFamilies>> families;  // [a][covering sieve position]

  int class_of(int a, int sieve, const Components& family) const;
};

PlusConstruction plus_construction(const PresheafPtr& p, const GrothendieckTopology& t);
// h+ : P+ -> Q+
PresheafMap plus_map(const PlusConstruction& from, const PlusConstruction& to,
                     const PresheafMap& h, const GrothendieckTopology& t);

struct Sheafification {
  PlusConstruction first;
  PlusConstruction second;
  PresheafPtr sheaf;
  PresheafMap unit;  // P -> P++
};

Sheafification sheafify(const PresheafPtr& p, const GrothendieckTopology& t);
PresheafMap sheafify_map(const Sheafification& from, const Sheafification& to,
                         const PresheafMap& h, const GrothendieckTopology& t);

// Omega_j(a) = {S | j_a(S) = S}: the subobject classifier of the sheaf topos.
Subobject closed_sieves(const GrothendieckTopology& t);
Presheaf omega_j(const GrothendieckTopology& t);

}  // namespace toposkit
