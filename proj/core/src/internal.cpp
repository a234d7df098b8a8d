#include "toposkit/internal.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "toposkit/classifier.hpp"
#include "toposkit/error.hpp"

namespace toposkit {

namespace {

bool is_terminal_like(const Presheaf& p) {
  for (int s : p.sizes()) {
    if (s != 1) return false;
  }
  return true;
}

void require_type(const PresheafMap& h, const Presheaf& src, const Presheaf& tgt, const std::string& what) {
  if (!(h.source() == src) || !(h.target() == tgt)) throw MalformedInput(what + " has the wrong type");
}

PresheafMap binary_operation(const Limit& square, const PresheafPtr& carrier, const OperationTables& t,
                             const std::string& what) {
  const int n = carrier->base()->object_count();
  if (static_cast<int>(t.size()) != n) throw MalformedInput(what + ": one table per object expected");
  Components comps(n);
  for (int a = 0; a < n; ++a) {
    const int s = carrier->size(a);
    if (static_cast<int>(t[a].size()) != s) throw MalformedInput(what + ": table at " + carrier->base()->object_name(a) + " has the wrong size");
    for (const auto& row : t[a]) {
      if (static_cast<int>(row.size()) != s) throw MalformedInput(what + ": table row has the wrong size");
      for (int v : row) {
        if (v < 0 || v >= s) throw MalformedInput(what + ": table entry out of range");
      }
    }
    for (const auto& pair : square.tuples[a]) comps[a].push_back(t[a][pair[0]][pair[1]]);
  }
  try {
    return PresheafMap(square.apex, carrier, std::move(comps));
  } catch (const MalformedInput& e) {
    throw MalformedInput(what + " is not natural: " + e.what());
  }
}

PresheafMap constant_point(const PresheafPtr& carrier, const std::vector<int>& at, const std::string& what) {
  const auto& base = carrier->base();
  if (static_cast<int>(at.size()) != base->object_count()) throw MalformedInput(what + ": one element per object expected");
  Components comps(base->object_count());
  for (int a = 0; a < base->object_count(); ++a) {
    if (at[a] < 0 || at[a] >= carrier->size(a)) throw MalformedInput(what + ": element out of range");
    comps[a] = {at[a]};
  }
  try {
    return PresheafMap(share(terminal_presheaf(base)), carrier, std::move(comps));
  } catch (const MalformedInput& e) {
    throw MalformedInput(what + " is not a global element: " + e.what());
  }
}

// Solves op(x, y) = target(a) = op(y, x) per element.
PresheafMap solve_inverse(const PresheafPtr& carrier, const std::function<int(int, int, int)>& op,
                          const std::vector<int>& neutral, const std::string& what) {
  const int n = carrier->base()->object_count();
  Components comps(n);
  for (int a = 0; a < n; ++a) {
    for (int x = 0; x < carrier->size(a); ++x) {
      int found = -1;
      for (int y = 0; y < carrier->size(a) && found < 0; ++y) {
        if (op(a, x, y) == neutral[a] && op(a, y, x) == neutral[a]) found = y;
      }
      if (found < 0) {
        throw MalformedInput(what + ": element " + carrier->label(a, x) + " at " + carrier->base()->object_name(a) +
                             " has no inverse");
      }
      comps[a].push_back(found);
    }
  }
  return PresheafMap(carrier, carrier, std::move(comps));
}

int pair_index(const Limit& square, int a, int x, int y) { return square.index_of(a, {x, y}); }

}  // namespace

int InternalGroup::multiply(int a, int x, int y) const { return mul(a, pair_index(square, a, x, y)); }

InternalGroup make_group(std::string name, PresheafPtr carrier, PresheafMap mul, PresheafMap inv, PresheafMap unit) {
  auto square = product(carrier, carrier);
  require_type(mul, *square.apex, *carrier, "multiplication");
  require_type(inv, *carrier, *carrier, "inverse");
  if (!is_terminal_like(unit.source()) || !(unit.target() == *carrier)) throw MalformedInput("unit has the wrong type");
  return InternalGroup{std::move(name), std::move(carrier), std::move(square), std::move(mul), std::move(inv),
                       std::move(unit)};
}

InternalGroup group_from_tables(std::string name, PresheafPtr carrier, const OperationTables& mul,
                                const std::vector<int>& unit) {
  auto square = product(carrier, carrier);
  auto m = binary_operation(square, carrier, mul, "multiplication");
  auto e = constant_point(carrier, unit, "unit");
  auto i = solve_inverse(carrier, [&](int a, int x, int y) { return mul[a][x][y]; }, unit, "group");
  return InternalGroup{std::move(name), std::move(carrier), std::move(square), std::move(m), std::move(i), std::move(e)};
}

std::vector<std::vector<int>> cyclic_table(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) t[x][y] = (x + y) % n;
  }
  return t;
}

InternalGroup constant_group(const CategoryPtr& base, const std::vector<std::vector<int>>& table, std::string name) {
  const int n = static_cast<int>(table.size());
  auto carrier = share(constant_presheaf(base, n).named(name));
  OperationTables tables(base->object_count(), table);
  return group_from_tables(std::move(name), std::move(carrier), tables, std::vector<int>(base->object_count(), 0));
}

std::string AlgebraReport::describe(const Presheaf& carrier) const {
  if (ok) return "ok";
  std::string out = law + " fails at " + carrier.base()->object_name(object) + " for";
  for (int x : elements) out += " " + carrier.label(object, x);
  return out;
}

AlgebraReport check_group(const InternalGroup& g) {
  AlgebraReport r;
  const auto& p = *g.carrier;
  auto fail = [&](std::string law, int a, std::vector<int> xs) {
    r.ok = false;
    r.law = std::move(law);
    r.object = a;
    r.elements = std::move(xs);
  };
  for (int a = 0; a < p.base()->object_count() && r.ok; ++a) {
    const int n = p.size(a);
    const int e = g.unit(a, 0);
    for (int x = 0; x < n && r.ok; ++x) {
      for (int y = 0; y < n && r.ok; ++y) {
        for (int z = 0; z < n && r.ok; ++z) {
          if (g.multiply(a, g.multiply(a, x, y), z) != g.multiply(a, x, g.multiply(a, y, z))) {
            fail("associativity", a, {x, y, z});
          }
        }
      }
    }
    for (int x = 0; x < n && r.ok; ++x) {
      if (g.multiply(a, e, x) != x || g.multiply(a, x, e) != x) fail("unit", a, {x});
    }
    for (int x = 0; x < n && r.ok; ++x) {
      const int i = g.inv(a, x);
      if (g.multiply(a, x, i) != e || g.multiply(a, i, x) != e) fail("inverse", a, {x});
    }
  }
  return r;
}

GroupExpression GroupExpression::var(std::string name) {
  GroupExpression e;
  e.kind = Kind::Variable;
  e.variable = std::move(name);
  return e;
}

GroupExpression GroupExpression::unit() { return GroupExpression{}; }

GroupExpression GroupExpression::product(GroupExpression x, GroupExpression y) {
  GroupExpression e;
  e.kind = Kind::Product;
  e.args = {std::move(x), std::move(y)};
  return e;
}

GroupExpression GroupExpression::inverse(GroupExpression x) {
  GroupExpression e;
  e.kind = Kind::Inverse;
  e.args = {std::move(x)};
  return e;
}

std::string GroupExpression::to_string() const {
  switch (kind) {
    case Kind::Variable: return variable;
    case Kind::Unit: return "e";
    case Kind::Product: return "(* " + args[0].to_string() + " " + args[1].to_string() + ")";
    case Kind::Inverse: return "(inv " + args[0].to_string() + ")";
  }
  return {};
}

void GroupExpression::collect_variables(std::vector<std::string>& out) const {
  if (kind == Kind::Variable) {
    if (std::find(out.begin(), out.end(), variable) == out.end()) out.push_back(variable);
    return;
  }
  for (const auto& a : args) a.collect_variables(out);
}

namespace {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  GroupExpression parse_all() {
    auto e = parse();
    skip();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& why) const {
    throw MalformedInput("expression '" + std::string(text_) + "' at column " + std::to_string(pos_ + 1) + ": " + why);
  }
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  static bool word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }
  std::string word() {
    skip();
    const std::size_t start = pos_;
    if (pos_ < text_.size() && text_[pos_] == '*') {
      ++pos_;
      return "*";
    }
    while (pos_ < text_.size() && word_char(text_[pos_])) ++pos_;
    if (start == pos_) error("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }
  GroupExpression parse() {
    skip();
    if (pos_ >= text_.size()) error("unexpected end of input");
    if (text_[pos_] == ')') error("unexpected ')'");
    if (text_[pos_] != '(') {
      auto w = word();
      if (w == "*") error("'*' outside parentheses");
      return w == "e" ? GroupExpression::unit() : GroupExpression::var(w);
    }
    ++pos_;
    const auto op = word();
    std::vector<GroupExpression> args;
    for (;;) {
      skip();
      if (pos_ >= text_.size()) error("missing ')'");
      if (text_[pos_] == ')') {
        ++pos_;
        break;
      }
      args.push_back(parse());
    }
    if (op == "*") {
      if (args.size() < 2) error("'*' needs at least two arguments");
      auto e = std::move(args[0]);
      for (std::size_t i = 1; i < args.size(); ++i) e = GroupExpression::product(std::move(e), std::move(args[i]));
      return e;
    }
    if (op == "inv") {
      if (args.size() != 1) error("'inv' takes one argument");
      return GroupExpression::inverse(std::move(args[0]));
    }
    if (op == "e" && args.empty()) return GroupExpression::unit();
    error("unknown operation '" + op + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

Equation parse_equation(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw MalformedInput("equation '" + std::string(text) + "' has no '='");
  return Equation{ExpressionParser(text.substr(0, eq)).parse_all(), ExpressionParser(text.substr(eq + 1)).parse_all()};
}

}  // namespace

GroupExpression parse_expression(std::string_view text) { return ExpressionParser(text).parse_all(); }

Implication parse_statement(std::string_view text) {
  Implication s;
  const auto arrow = text.find("=>");
  std::string_view goal = text;
  if (arrow != std::string_view::npos) {
    std::string_view premises = text.substr(0, arrow);
    goal = text.substr(arrow + 2);
    while (!premises.empty()) {
      const auto comma = premises.find(',');
      const auto part = premises.substr(0, comma);
      if (part.find_first_not_of(" \t") != std::string_view::npos) s.premises.push_back(parse_equation(part));
      if (comma == std::string_view::npos) break;
      premises.remove_prefix(comma + 1);
    }
  }
  s.conclusion = parse_equation(goal);
  return s;
}

namespace {

std::vector<std::string> variables_of(const Implication& s) {
  std::vector<std::string> vars;
  for (const auto& p : s.premises) {
    p.lhs.collect_variables(vars);
    p.rhs.collect_variables(vars);
  }
  s.conclusion.lhs.collect_variables(vars);
  s.conclusion.rhs.collect_variables(vars);
  return vars;
}

int variable_slot(const std::vector<std::string>& vars, const std::string& v) {
  return static_cast<int>(std::find(vars.begin(), vars.end(), v) - vars.begin());
}

// Visits every tuple in [0, n)^k in lexicographic order; stops when visit returns false.
void odometer(int k, int n, const std::function<bool(const std::vector<int>&)>& visit) {
  if (n == 0 && k > 0) return;
  std::vector<int> t(k, 0);
  for (;;) {
    if (!visit(t)) return;
    int i = k - 1;
    while (i >= 0 && ++t[i] == n) t[i--] = 0;
    if (i < 0) return;
  }
}

}  // namespace

std::string IdentityReport::describe(const InternalGroup& g) const {
  if (holds) return "holds";
  std::string out = "fails at stage " + g.carrier->base()->object_name(object) + " with";
  for (std::size_t i = 0; i < variables.size(); ++i) {
    out += " " + variables[i] + "=" + g.carrier->label(object, elements[i]);
  }
  return out;
}

IdentityReport check_identity(const Implication& s, const InternalGroup& g) {
  IdentityReport r;
  r.variables = variables_of(s);
  const auto& base = g.carrier->base();
  const int k = static_cast<int>(r.variables.size());
  Budget budget("identity check");
  for (int a = 0; a < base->object_count() && r.holds; ++a) {
    const auto shape = share(representable(base, a));
    const auto elements = enumerate_maps(shape, g.carrier);
    const auto bang = terminal_map(*shape);
    const auto e = compose(g.unit, bang);
    std::function<PresheafMap(const GroupExpression&, const std::vector<int>&)> eval =
        [&](const GroupExpression& x, const std::vector<int>& t) -> PresheafMap {
      switch (x.kind) {
        case GroupExpression::Kind::Variable: return elements[t[variable_slot(r.variables, x.variable)]];
        case GroupExpression::Kind::Unit: return e;
        case GroupExpression::Kind::Product: return compose(g.mul, pairing(g.square, eval(x.args[0], t), eval(x.args[1], t)));
        case GroupExpression::Kind::Inverse: return compose(g.inv, eval(x.args[0], t));
      }
      throw PreconditionFailed("bad expression");
    };
    auto holds = [&](const Equation& q, const std::vector<int>& t) {
      return eval(q.lhs, t).components() == eval(q.rhs, t).components();
    };
    const int id = base->hom_position(base->identity(a));
    odometer(k, static_cast<int>(elements.size()), [&](const std::vector<int>& t) {
      budget.tick();
      ++r.assignments;
      for (const auto& p : s.premises) {
        if (!holds(p, t)) return true;
      }
      ++r.guarded;
      if (holds(s.conclusion, t)) return true;
      r.holds = false;
      r.object = a;
      for (int v : t) r.elements.push_back(elements[v](a, id));
      return false;
    });
  }
  return r;
}

IdentityReport check_identity(const GroupExpression& lhs, const GroupExpression& rhs, const InternalGroup& g) {
  return check_identity(Implication{{}, Equation{lhs, rhs}}, g);
}

IdentityReport check_identity_pointwise(const Implication& s, const InternalGroup& g) {
  IdentityReport r;
  r.variables = variables_of(s);
  const auto& base = g.carrier->base();
  const int k = static_cast<int>(r.variables.size());
  Budget budget("identity check");
  for (int a = 0; a < base->object_count() && r.holds; ++a) {
    std::function<int(const GroupExpression&, const std::vector<int>&)> eval = [&](const GroupExpression& x,
                                                                                  const std::vector<int>& t) -> int {
      switch (x.kind) {
        case GroupExpression::Kind::Variable: return t[variable_slot(r.variables, x.variable)];
        case GroupExpression::Kind::Unit: return g.unit(a, 0);
        case GroupExpression::Kind::Product: return g.multiply(a, eval(x.args[0], t), eval(x.args[1], t));
        case GroupExpression::Kind::Inverse: return g.inv(a, eval(x.args[0], t));
      }
      return -1;
    };
    odometer(k, g.carrier->size(a), [&](const std::vector<int>& t) {
      budget.tick();
      ++r.assignments;
      for (const auto& p : s.premises) {
        if (eval(p.lhs, t) != eval(p.rhs, t)) return true;
      }
      ++r.guarded;
      if (eval(s.conclusion.lhs, t) == eval(s.conclusion.rhs, t)) return true;
      r.holds = false;
      r.object = a;
      r.elements = t;
      return false;
    });
  }
  return r;
}

int InternalRing::plus(int a, int x, int y) const { return add(a, pair_index(square, a, x, y)); }
int InternalRing::times(int a, int x, int y) const { return mul(a, pair_index(square, a, x, y)); }

InternalRing ring_from_tables(std::string name, PresheafPtr carrier, const OperationTables& add,
                              const OperationTables& mul, const std::vector<int>& zero, const std::vector<int>& one) {
  auto square = product(carrier, carrier);
  auto a = binary_operation(square, carrier, add, "addition");
  auto m = binary_operation(square, carrier, mul, "multiplication");
  auto z = constant_point(carrier, zero, "zero");
  auto o = constant_point(carrier, one, "one");
  auto n = solve_inverse(carrier, [&](int s, int x, int y) { return add[s][x][y]; }, zero, "ring");
  return InternalRing{std::move(name), std::move(carrier), std::move(square), std::move(a), std::move(m),
                      std::move(n), std::move(z), std::move(o)};
}

InternalRing zmod_ring(const CategoryPtr& base, int n) {
  if (n < 1) throw PreconditionFailed("Z/n needs n >= 1");
  const std::string name = "Z/" + std::to_string(n);
  auto carrier = share(constant_presheaf(base, n).named(name));
  std::vector<std::vector<int>> add(n, std::vector<int>(n)), mul = add;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      add[x][y] = (x + y) % n;
      mul[x][y] = (x * y) % n;
    }
  }
  const int objects = base->object_count();
  return ring_from_tables(name, std::move(carrier), OperationTables(objects, add), OperationTables(objects, mul),
                          std::vector<int>(objects, 0), std::vector<int>(objects, 1 % n));
}

AlgebraReport check_ring(const InternalRing& r) {
  AlgebraReport rep;
  const auto& p = *r.carrier;
  auto fail = [&](std::string law, int a, std::vector<int> xs) {
    rep.ok = false;
    rep.law = std::move(law);
    rep.object = a;
    rep.elements = std::move(xs);
  };
  for (int a = 0; a < p.base()->object_count() && rep.ok; ++a) {
    const int n = p.size(a);
    const int z = r.zero(a, 0);
    const int o = r.one(a, 0);
    for (int x = 0; x < n && rep.ok; ++x) {
      if (r.plus(a, z, x) != x) fail("additive unit", a, {x});
      else if (r.plus(a, x, r.neg(a, x)) != z) fail("additive inverse", a, {x});
      else if (r.times(a, o, x) != x) fail("multiplicative unit", a, {x});
      for (int y = 0; y < n && rep.ok; ++y) {
        if (r.plus(a, x, y) != r.plus(a, y, x)) fail("additive commutativity", a, {x, y});
        else if (r.times(a, x, y) != r.times(a, y, x)) fail("multiplicative commutativity", a, {x, y});
        for (int w = 0; w < n && rep.ok; ++w) {
          if (r.plus(a, r.plus(a, x, y), w) != r.plus(a, x, r.plus(a, y, w))) fail("additive associativity", a, {x, y, w});
          else if (r.times(a, r.times(a, x, y), w) != r.times(a, x, r.times(a, y, w)))
            fail("multiplicative associativity", a, {x, y, w});
          else if (r.times(a, x, r.plus(a, y, w)) != r.plus(a, r.times(a, x, y), r.times(a, x, w)))
            fail("distributivity", a, {x, y, w});
        }
      }
    }
  }
  return rep;
}

Units units_subobject(const InternalRing& r) {
  auto solutions = pullback(r.mul, r.one);
  auto projection = compose(r.square.legs[0], solutions.legs[0]);
  auto image = factor_epi_mono(projection);
  return Units{std::move(solutions), std::move(projection), std::move(image)};
}

std::string to_string(FieldAxiom a) {
  switch (a) {
    case FieldAxiom::None: return "none";
    case FieldAxiom::Nontrivial: return "0 != 1";
    case FieldAxiom::UnitsCover: return "1 + U -> R epi";
    case FieldAxiom::NonUnitsZero: return "non-units are zero";
  }
  return {};
}

std::string FieldVerdict::describe(const InternalRing& r) const {
  if (field) return "field";
  std::string out = "not a field: axiom '" + to_string(failed) + "' fails at " + r.carrier->base()->object_name(object);
  if (failed == FieldAxiom::Nontrivial) return out + " (the equalizer of 0 and 1 is inhabited)";
  return out + ", element " + r.carrier->label(object, element) +
         (failed == FieldAxiom::UnitsCover ? " is not hit" : " is a non-unit other than 0");
}

FieldVerdict check_field(const InternalRing& r, FieldVariant variant) {
  FieldVerdict v;
  const auto& base = *r.carrier->base();
  const auto eq = equalizer(r.zero, r.one);
  for (int a = 0; a < base.object_count(); ++a) {
    if (eq.apex->size(a) > 0) return FieldVerdict{false, FieldAxiom::Nontrivial, a, -1};
  }
  const auto units = units_subobject(r);
  if (variant == FieldVariant::Standard) {
    const auto sum = coproduct(r.zero.source_ptr(), units.mono().source_ptr());
    const auto cover = copairing(sum, r.zero, units.mono());
    for (int a = 0; a < base.object_count(); ++a) {
      std::vector<bool> hit(r.carrier->size(a));
      for (int x : cover.component(a)) hit[x] = true;
      for (int x = 0; x < r.carrier->size(a); ++x) {
        if (!hit[x]) return FieldVerdict{false, FieldAxiom::UnitsCover, a, x};
      }
    }
    return v;
  }
  const auto u = image_of(units.mono());
  for (int a = 0; a < base.object_count(); ++a) {
    for (int x = 0; x < r.carrier->size(a); ++x) {
      bool never_unit = true;
      for (int f : base.into(a)) never_unit = never_unit && !u[base.dom(f)][r.carrier->act(f, x)];
      if (never_unit && x != r.zero(a, 0)) return FieldVerdict{false, FieldAxiom::NonUnitsZero, a, x};
    }
  }
  return v;
}

}  // namespace toposkit
