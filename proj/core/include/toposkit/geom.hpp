#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toposkit/elements.hpp"
#include "toposkit/fincat.hpp"
#include "toposkit/psh.hpp"
#include "toposkit/sites.hpp"

namespace toposkit {

// A functor Psh(source) -> Psh(target), known only through its action. Both
// callbacks must be deterministic, so that images of the same presheaf compare
// equal structurally.
struct PresheafFunctor {
  std::string name;
  CategoryPtr source;
  CategoryPtr target;
  std::function<PresheafPtr(const PresheafPtr&)> object;
  std::function<PresheafMap(const PresheafMap&)> map;

  PresheafPtr operator()(const PresheafPtr& x) const { return object(x); }
  PresheafMap operator()(const PresheafMap& h) const { return map(h); }
};

PresheafFunctor identity_presheaf_functor(const CategoryPtr& base);

// L -| R with unit X -> R L X and counit L R Y -> Y.
struct Adjunction {
  PresheafFunctor left;
  PresheafFunctor right;
  std::function<PresheafMap(const PresheafPtr&)> unit;
  std::function<PresheafMap(const PresheafPtr&)> counit;
};

Adjunction identity_adjunction(const CategoryPtr& base);

struct AdjunctionCertificate {
  bool ok = true;
  std::string failure;
  std::size_t triangles = 0;   // triangle instances checked
  std::size_t naturality = 0;  // naturality squares checked
};

// Both triangle identities on every corpus object, and naturality of unit and
// counit along up to `maps_per_pair` maps between corpus objects.
AdjunctionCertificate verify_adjunction(const Adjunction& adj,
                                        const std::vector<PresheafPtr>& left_corpus,
                                        const std::vector<PresheafPtr>& right_corpus,
                                        std::size_t maps_per_pair = 8);

// f* Q = Q . f
Presheaf restrict_along(const FinFunctor& f, const Presheaf& q);
PresheafMap restrict_along(const FinFunctor& f, const PresheafMap& h);

// A covariant functor C -> Psh(D): objects M(c) and maps M(u) : M(c) -> M(c').
struct PresheafValuedFunctor {
  CategoryPtr source;
  CategoryPtr target_base;
  std::vector<PresheafPtr> objects;
  std::vector<PresheafMap> arrows;
};

// Throws MalformedInput on a typing or functoriality failure.
void validate(const PresheafValuedFunctor& m);
// c |-> y(f c)
PresheafValuedFunctor yoneda_along(const FinFunctor& f);
PresheafValuedFunctor yoneda_functor(const CategoryPtr& c);

// P (x)_C M, the coend of P(c) x M(c) over c: classes of triples (c, x, m),
// x in P(c), m in M(c)(d), under (c, P(u) x', m) ~ (c', x', M(u) m). Classes
// are numbered by their first triple in (c, x, m) order.
struct Tensor {
  PresheafPtr object;
  std::vector<std::vector<std::array<int, 3>>> representative;  // [d][class] -> (c, x, m)
  std::vector<std::vector<int>> offset;                         // [d][c] -> first triple
  std::vector<std::vector<int>> width;                          // [d][c] -> |M(c)(d)|
  std::vector<std::vector<int>> class_of_triple;                // [d][triple]

  int class_of(int d, int c, int x, int m) const {
    return class_of_triple[d][offset[d][c] + x * width[d][c] + m];
  }
};

Tensor tensor(const PresheafPtr& p, const PresheafValuedFunctor& m);
// The induced map P (x) M -> P' (x) M.
PresheafMap tensor_map(const Tensor& from, const Tensor& to, const PresheafMap& h,
                       const PresheafValuedFunctor& m);

// H(c) = Nat(A(c), Q) for a functor A : C -> Psh(D); u : c -> c' acts by
// precomposition with A(u). Elements in the enumeration order of maps.
struct HomPresheaf {
  PresheafPtr object;
  std::vector<std::vector<Components>> elements;  // [c][element]
  std::vector<std::map<std::vector<int>, int>> index;
};

HomPresheaf hom_presheaf(const PresheafValuedFunctor& a, const PresheafPtr& q);
// phi |-> h . phi
PresheafMap hom_presheaf_map(const HomPresheaf& from, const HomPresheaf& to, const PresheafMap& h);

// d |-> f* y(d), a functor D -> Psh(C)
PresheafValuedFunctor restricted_yoneda(const FinFunctor& f);
// y(k) : y(a) -> y(b) for k : a -> b
PresheafMap representable_map(const CategoryPtr& c, int k);

// f_! P = P (x) y(f -), f_* P = Nat(f* y(-), P)
Tensor left_kan(const FinFunctor& f, const PresheafPtr& p);
HomPresheaf right_kan(const FinFunctor& f, const PresheafPtr& p);
// P (x) y -> P, [(c, x, h)] |-> P(h) x
PresheafMap coyoneda(const PresheafPtr& p);

// f_! -| f* -| f_* with both adjunctions.
struct AdjointTriple {
  FinFunctor functor;
  PresheafFunctor lower;     // f_! : Psh(C) -> Psh(D)
  PresheafFunctor restrict;  // f*  : Psh(D) -> Psh(C)
  PresheafFunctor upper;     // f_* : Psh(C) -> Psh(D)
  Adjunction left;           // f_! -| f*
  Adjunction right;          // f* -| f_*
};

AdjointTriple adjoint_triple(const FinFunctor& f);

// E -> F: inverse image F -> E is the left adjoint, direct image E -> F the right one.
struct GeometricMorphism {
  std::string name;
  Adjunction adjunction;
  std::vector<PresheafPtr> codomain_corpus;  // objects of F, the inverse image's inputs
  std::vector<PresheafPtr> domain_corpus;    // objects of E

  const PresheafFunctor& inverse_image() const { return adjunction.left; }
  const PresheafFunctor& direct_image() const { return adjunction.right; }
};

struct LexReport {
  bool ok = true;
  bool terminal = true;
  bool products = true;
  bool equalizers = true;
  std::string failure;  // first failing probe, in corpus order
  std::size_t probes = 0;
};

// L(1) = 1, L(X x Y) -> LX x LY and L(Eq(f, g)) -> Eq(Lf, Lg) are isos for
// corpus objects X, Y and up to `maps_per_pair` parallel pairs X => Y.
LexReport check_lex(const PresheafFunctor& l, const std::vector<PresheafPtr>& corpus,
                    std::size_t maps_per_pair = 4);

struct GeometricCertificate {
  bool ok = true;
  AdjunctionCertificate adjunction;
  LexReport lex;
  std::string failure;
};

GeometricCertificate verify_geometric(const GeometricMorphism& g);

// Psh(C) -> Psh(D) given by f* -| f_*.
GeometricMorphism essential_morphism(const FinFunctor& f, std::vector<PresheafPtr> c_corpus,
                                     std::vector<PresheafPtr> d_corpus);
GeometricMorphism identity_morphism(const CategoryPtr& base, std::vector<PresheafPtr> corpus);
// Sh(C, J) -> Psh(C): inverse image sheafification, direct image the inclusion.
// The sheaf corpus is the sheafification of the given presheaves.
GeometricMorphism sheaf_inclusion(const GrothendieckTopology& t, std::vector<PresheafPtr> corpus);
// f : discrete(2) -> 1 with f_! in the inverse-image slot: an adjunction whose
// left part does not preserve products.
GeometricMorphism broken_pair();

struct EmbeddingReport {
  bool embedding = true;
  std::optional<std::size_t> witness;  // domain corpus index with non-iso counit
  std::string failure;
};

// Direct image full and faithful, checked as: counit iso on the domain corpus.
EmbeddingReport check_embedding(const GeometricMorphism& g);
inline bool is_embedding(const GeometricMorphism& g) { return check_embedding(g).embedding; }

// A functor C -> finite sets, stored as a presheaf on C^op.
struct FlatnessCertificate {
  Presheaf functor;
  ElementsCategory elements;
  CofilteredReport report;
  bool flat() const { return report.ok(); }
};

FlatnessCertificate flatness(const Presheaf& functor_on_opposite);
// Flat functors C -> sets with all sets of size <= bound, one per iso class.
std::vector<FlatnessCertificate> points(const CategoryPtr& c, int size_bound);
// Functors C -> sets preserving the terminal object, binary products and
// equalizers of C, one per iso class. Needs C with finite limits.
std::vector<Presheaf> lex_set_functors(const CategoryPtr& c, int size_bound);
// First limit of C not preserved by M, as text.
std::optional<std::string> lex_failure(const PresheafValuedFunctor& m);

struct RoundTrip {
  bool ok = true;
  std::string failure;
  std::vector<PresheafMap> comparison;  // L(y c) -> M(c) per object c
};

struct ClassifiedMorphism {
  GeometricMorphism morphism;  // Psh(D) -> Psh(C)
  PresheafValuedFunctor model;
  RoundTrip round_trip;
};

// Inverse image P |-> P (x) M, direct image Q |-> Hom(M(-), Q). Throws
// PreconditionFailed when C lacks finite limits or M does not preserve them.
ClassifiedMorphism classify_lex(const PresheafValuedFunctor& m, std::vector<PresheafPtr> c_corpus,
                                std::vector<PresheafPtr> d_corpus);

}  // namespace toposkit
