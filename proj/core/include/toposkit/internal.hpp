#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "toposkit/psh.hpp"

namespace toposkit {

// Per-object binary operation tables: table[a][x][y].
using OperationTables = std::vector<std::vector<std::vector<int>>>;

struct InternalGroup {
  std::string name;
  PresheafPtr carrier;
  Limit square;     // G x G
  PresheafMap mul;  // G x G -> G
  PresheafMap inv;  // G -> G
  PresheafMap unit; // 1 -> G

  int multiply(int a, int x, int y) const;
};

// Throws MalformedInput if a map has the wrong type.
InternalGroup make_group(std::string name, PresheafPtr carrier, PresheafMap mul, PresheafMap inv,
                         PresheafMap unit);
// From pointwise tables; the inverse is solved from the unit. Throws
// MalformedInput if some element has no two-sided inverse or a table is not
// natural.
InternalGroup group_from_tables(std::string name, PresheafPtr carrier, const OperationTables& mul,
                                const std::vector<int>& unit);
// An ordinary group table (unit 0) as a constant presheaf on `base`.
InternalGroup constant_group(const CategoryPtr& base, const std::vector<std::vector<int>>& table,
                             std::string name = "G");
std::vector<std::vector<int>> cyclic_table(int n);

struct AlgebraReport {
  bool ok = true;
  std::string law;             // first failing law
  int object = -1;
  std::vector<int> elements;   // witness elements at `object`
  std::string describe(const Presheaf& carrier) const;
};

// Associativity, unit and inverse laws, element by element.
AlgebraReport check_group(const InternalGroup& g);

// Words over variables with product, inverse and unit, in prefix syntax:
// (* x y), (inv x), e.
struct GroupExpression {
  enum class Kind { Variable, Unit, Product, Inverse };
  Kind kind = Kind::Unit;
  std::string variable;
  std::vector<GroupExpression> args;

  static GroupExpression var(std::string name);
  static GroupExpression unit();
  static GroupExpression product(GroupExpression x, GroupExpression y);
  static GroupExpression inverse(GroupExpression x);

  std::string to_string() const;
  void collect_variables(std::vector<std::string>& out) const;
};

// Throws MalformedInput with the offending position.
GroupExpression parse_expression(std::string_view text);

struct Equation {
  GroupExpression lhs;
  GroupExpression rhs;
};

// Guarded identity: whenever every premise holds, the conclusion holds.
struct Implication {
  std::vector<Equation> premises;
  Equation conclusion;
};

// "l = r" or "l1 = r1, l2 = r2 => l = r".
Implication parse_statement(std::string_view text);

struct IdentityReport {
  bool holds = true;
  std::size_t assignments = 0;  // assignments examined
  std::size_t guarded = 0;      // assignments where all premises held
  // witness: stage object and, per variable (in first-occurrence order),
  // an element of G(stage); for generalized elements x : y(stage) -> G this is
  // x at the identity.
  int object = -1;
  std::vector<std::string> variables;
  std::vector<int> elements;
  std::string describe(const InternalGroup& g) const;
};

// Generalized elements: variables range over maps y(a) -> G for each
// representable shape a; both sides are composites of those maps with m, i, e
// and compared as maps.
IdentityReport check_identity(const Implication& s, const InternalGroup& g);
IdentityReport check_identity(const GroupExpression& lhs, const GroupExpression& rhs,
                              const InternalGroup& g);
// The same statement evaluated on elements of G(a), stage by stage.
IdentityReport check_identity_pointwise(const Implication& s, const InternalGroup& g);

struct InternalRing {
  std::string name;
  PresheafPtr carrier;
  Limit square;
  PresheafMap add;
  PresheafMap mul;
  PresheafMap neg;
  PresheafMap zero;  // 1 -> R
  PresheafMap one;   // 1 -> R

  int plus(int a, int x, int y) const;
  int times(int a, int x, int y) const;
};

// Negation is solved from zero. Throws MalformedInput on missing negatives or
// non-natural tables.
InternalRing ring_from_tables(std::string name, PresheafPtr carrier, const OperationTables& add,
                              const OperationTables& mul, const std::vector<int>& zero,
                              const std::vector<int>& one);
// Z/n as a constant ring on `base`; n = 1 is the zero ring.
InternalRing zmod_ring(const CategoryPtr& base, int n);

// Commutative ring laws, element by element.
AlgebraReport check_ring(const InternalRing& r);

struct Units {
  Limit solutions;          // P = {(x, y) | xy = 1}, a pullback of one along mul
  PresheafMap projection;   // P -> R, first coordinate
  EpiMono image;            // P ->> U >-> R
  const PresheafMap& mono() const { return image.mono; }
};

Units units_subobject(const InternalRing& r);

enum class FieldVariant {
  // 0 != 1, and 1 + U -> R (zero, inclusion) is epi
  Standard,
  // 0 != 1, and non-invertible implies zero: the pseudo-complement of U lies in 0
  NonUnitZero,
};

enum class FieldAxiom { None, Nontrivial, UnitsCover, NonUnitsZero };

struct FieldVerdict {
  bool field = true;
  FieldAxiom failed = FieldAxiom::None;
  int object = -1;
  int element = -1;  // an element not covered, or a non-unit that is not zero
  std::string describe(const InternalRing& r) const;
};

FieldVerdict check_field(const InternalRing& r, FieldVariant variant = FieldVariant::Standard);
std::string to_string(FieldAxiom a);

}  // namespace toposkit
