#include <doctest.h>

#include <random>

#include "../support/corpus.hpp"
#include "iostd/dsl.hpp"

using namespace iostd;

namespace {

// Random well-typed behavior descriptions for the parse/print round trip.
class Gen {
 public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  BehaviorDescription behavior() {
    BehaviorDescription b;
    b.name = "G" + std::to_string(pick(100));
    b.enums.push_back({"Color", {"Red", "Green", "Blue"}});
    std::int64_t lo = pick(3) - 1;
    b.attributes = {{"x", IntType{lo, lo + 1 + pick(5)}}, {"f", BoolType{}}, {"c", EnumType{"Color"}},
                    {"o", IdType{}}};
    attrs_ = b.attributes;
    b.init = boolean(2, {});
    int n = 1 + pick(2);
    for (int i = 0; i < n; ++i) b.services.push_back(service("s" + std::to_string(i)));
    return b;
  }

 private:
  int pick(int n) { return static_cast<int>(rng_() % static_cast<unsigned>(n)); }

  struct Var {
    std::string name;
    Type type;
    bool primable;
  };

  std::vector<Var> scope(const ServiceSTD* svc) const {
    std::vector<Var> v;
    for (const auto& a : attrs_) v.push_back({a.name, a.type, true});
    if (svc) {
      for (const auto& p : svc->params) v.push_back({p.name, p.type, false});
      for (const auto& l : svc->locals) v.push_back({l.name, l.type, true});
    }
    return v;
  }

  Expr integer(int depth, const std::vector<Var>& vars, bool primed = false) {
    std::vector<const Var*> ints;
    for (const auto& v : vars)
      if (std::holds_alternative<IntType>(v.type)) ints.push_back(&v);
    int k = depth <= 0 ? pick(2) : pick(5);
    if (k == 0 || ints.empty()) return lit(Value(static_cast<std::int64_t>(pick(9))));
    if (k == 1) {
      const Var* v = ints[pick(static_cast<int>(ints.size()))];
      return var(v->name, primed && v->primable && pick(2));
    }
    if (k == 2) return unary(UnOp::Neg, var(ints[pick(static_cast<int>(ints.size()))]->name));
    static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul};
    return binary(ops[pick(3)], integer(depth - 1, vars, primed), integer(depth - 1, vars, primed));
  }

  Expr boolean(int depth, const std::vector<Var>& vars, bool primed = false) {
    int k = depth <= 0 ? pick(3) : pick(7);
    switch (k) {
      case 0: return lit(Value(pick(2) == 0));
      case 1: {
        static const BinOp cmp[] = {BinOp::Eq, BinOp::Ne, BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge};
        return binary(cmp[pick(6)], integer(depth - 1, vars, primed), integer(depth - 1, vars, primed));
      }
      case 2: {
        for (const auto& v : vars)
          if (std::holds_alternative<BoolType>(v.type)) return var(v.name, primed && v.primable && pick(2));
        return lit(Value(true));
      }
      case 3: return unary(UnOp::Not, boolean(depth - 1, vars, primed));
      case 4: {
        static const char* colors[] = {"Red", "Green", "Blue"};
        return binary(pick(2) ? BinOp::Eq : BinOp::Ne, var("c", primed && pick(2)),
                      lit(Value(EnumConst{colors[pick(3)]})));
      }
      case 5: return binary(BinOp::Eq, var("o"), lit(Value(ObjectId{"o" + std::to_string(1 + pick(3))})));
      default:
        return binary(pick(2) ? BinOp::And : BinOp::Or, boolean(depth - 1, vars, primed),
                      boolean(depth - 1, vars, primed));
    }
  }

  ServiceSTD service(const std::string& name) {
    ServiceSTD s;
    s.name = name;
    s.callable = static_cast<Callable>(pick(3));
    s.params = {{"n", IntType{0, 1 + pick(3)}}, {"d", IdType{}}};
    if (pick(2)) s.locals = {{"r", IntType{0, 2}}, {"g", BoolType{}}};
    s.states.push_back({"Idle", boolean(1, scope(nullptr)), {}});
    s.states.push_back({"Wait", boolean(1, scope(nullptr)), {}});
    s.initial = {"Idle"};
    if (pick(2)) s.states[1].exclusions = {name};
    int n = 1 + pick(3);
    for (int i = 0; i < n; ++i) {
      DiagramTransition t;
      t.from = pick(2) ? "Idle" : "Wait";
      t.to = pick(2) ? "Idle" : "Wait";
      bool ret_in = t.from == "Wait";
      t.pattern.name = ret_in ? kRetName : name;
      if (!ret_in) t.pattern.binders = {"n", "d"};
      else if (!s.locals.empty() && pick(2)) t.pattern.binders = {"r"};
      auto vars = scope(&s);
      if (pick(2)) {
        t.pattern.sender = "snd";
        vars.push_back({"snd", IdType{}, false});
      }
      t.pre = boolean(2, vars);
      t.post = boolean(2, vars, true);
      if (pick(3) == 0) t.havoc = {"f"};
      if (pick(2)) {
        OutputTemplate o;
        o.target = var("d");
        o.service = "s0";
        o.kind = MessageKind::ConcCall;
        o.args = {{"n", integer(1, vars, true)}};
        t.outputs.push_back(o);
      }
      OutputTemplate last;
      if (pick(2)) {
        last.service = kRetName;
        last.kind = MessageKind::Ret;
        if (pick(2)) last.args = {{"v", integer(1, vars, true)}, {"ok", boolean(1, vars, true)}};
      } else {
        last.target = lit(Value(ObjectId{"o2"}));
        last.service = name;
        last.kind = MessageKind::SequCall;
      }
      t.outputs.push_back(last);
      s.transitions.push_back(std::move(t));
    }
    return s;
  }

  std::mt19937 rng_;
  std::vector<VarDecl> attrs_;
};

}  // namespace

TEST_CASE("corpus behaviors survive print and reparse") {
  for (const char* f : {"bank.iostd", "purse.iostd", "wallet.iostd", "chain.iostd", "register.iostd", "echo.iostd",
                        "bank_debit_late.iostd"}) {
    CAPTURE(f);
    BehaviorDescription b = testing::behavior(f);
    std::string text = print(b);
    BehaviorDescription again = parse_or_throw(text, f);
    CHECK(again == b);
    CHECK(print(again) == text);
  }
}

TEST_CASE("random behaviors survive print and reparse") {
  for (unsigned seed = 0; seed < 300; ++seed) {
    CAPTURE(seed);
    BehaviorDescription b = Gen(seed).behavior();
    std::string text = print(b);
    ParseOutcome p = parse(text, "gen");
    INFO(text);
    INFO(p.error_text());
    REQUIRE(p.ok());
    CHECK(*p.behavior == b);
  }
}

TEST_CASE("expression printing keeps the tree shape") {
  Expr e = binary(BinOp::Sub, var("a"), binary(BinOp::Sub, var("b"), var("c")));
  CHECK(print(e) == "a - (b - c)");
  CHECK(print(binary(BinOp::Sub, binary(BinOp::Sub, var("a"), var("b")), var("c"))) == "a - b - c");
  CHECK(print(unary(UnOp::Not, binary(BinOp::And, var("p"), var("q")))) == "not (p and q)");
  CHECK(print(binary(BinOp::Eq, var("x", true), binary(BinOp::Add, var("x"), lit(Value(1))))) == "x' = x + 1");
}

TEST_CASE("parse errors carry positions and all errors are reported") {
  const char* text =
      "behavior B {\n"
      "  attributes { x: int[0..3]; }\n"
      "  init { y = 1 }\n"
      "  service s() callable both {\n"
      "    states { Idle: x > ; }\n"
      "    initial Idle;\n"
      "  }\n"
      "}\n";
  ParseOutcome p = parse(text, "bad.iostd");
  CHECK_FALSE(p.ok());
  REQUIRE(p.errors.size() >= 2);
  CHECK(p.errors[0].span.line == 3);
  CHECK(p.errors[1].span.line == 5);
  CHECK(p.error_text().find("bad.iostd:3:") != std::string::npos);
  CHECK_THROWS_AS(parse_or_throw(text), Error);
}

TEST_CASE("type errors are parse errors") {
  ParseOutcome p = parse(
      "behavior B { attributes { x: int[0..3]; f: bool; } init { x and f } }", "t");
  CHECK_FALSE(p.ok());
  ParseOutcome q = parse(
      "behavior B { attributes { x: int[0..3]; } init { x' = 1 } }", "t");
  CHECK_FALSE(q.ok());
}
