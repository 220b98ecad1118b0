#include "iostd/spec.hpp"

#include <algorithm>

namespace iostd {

bool same_kind(const Type& a, const Type& b) {
  if (a.index() != b.index()) return false;
  if (auto ea = std::get_if<EnumType>(&a)) return ea->name == std::get<EnumType>(b).name;
  return true;
}

std::string to_string(const Type& t) {
  struct Visitor {
    std::string operator()(const BoolType&) const { return "bool"; }
    std::string operator()(const IntType& i) const {
      return "int[" + std::to_string(i.lo) + ".." + std::to_string(i.hi) + "]";
    }
    std::string operator()(const IdType&) const { return "id"; }
    std::string operator()(const EnumType& e) const { return e.name; }
  };
  return std::visit(Visitor{}, t);
}

Universe Universe::defaults() { return Universe{{ObjectId{"o1"}, ObjectId{"o2"}, ObjectId{"o3"}}}; }

// ---------------------------------------------------------------------------
// Expr

std::string_view to_string(BinOp op) {
  switch (op) {
    case BinOp::Or: return "or";
    case BinOp::And: return "and";
    case BinOp::Eq: return "=";
    case BinOp::Ne: return "!=";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
  }
  return "?";
}

int precedence(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Eq:
    case BinOp::Ne:
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 4;
    case BinOp::Add:
    case BinOp::Sub: return 5;
    case BinOp::Mul: return 6;
  }
  return 0;
}

Expr::Expr() : node_(std::make_shared<const Node>(LiteralNode{Value(true)})) {}
Expr::Expr(Node node) : node_(std::make_shared<const Node>(std::move(node))) {}

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.index() != b.index()) return false;
  if (auto p = std::get_if<LiteralNode>(&a)) return p->value == std::get<LiteralNode>(b).value;
  if (auto p = std::get_if<VarNode>(&a)) {
    const auto& q = std::get<VarNode>(b);
    return p->name == q.name && p->primed == q.primed;
  }
  if (auto p = std::get_if<UnaryNode>(&a)) {
    const auto& q = std::get<UnaryNode>(b);
    return p->op == q.op && p->operand == q.operand;
  }
  if (auto p = std::get_if<BinaryNode>(&a)) {
    const auto& q = std::get<BinaryNode>(b);
    return p->op == q.op && p->lhs == q.lhs && p->rhs == q.rhs;
  }
  const auto& p = std::get<CallNode>(a);
  const auto& q = std::get<CallNode>(b);
  return p.fn == q.fn && p.args == q.args;
}

Expr lit(Value v) { return Expr(LiteralNode{std::move(v)}); }
Expr var(std::string name, bool primed) { return Expr(VarNode{std::move(name), primed}); }
Expr unary(UnOp op, Expr e) { return Expr(UnaryNode{op, std::move(e)}); }
Expr binary(BinOp op, Expr l, Expr r) { return Expr(BinaryNode{op, std::move(l), std::move(r)}); }
Expr call(std::string fn, std::vector<std::string> args) {
  return Expr(CallNode{std::move(fn), std::move(args)});
}

void collect_vars(const Expr& e, std::set<std::string>& plain, std::set<std::string>& primed) {
  const auto& n = e.node();
  if (auto v = std::get_if<VarNode>(&n)) {
    (v->primed ? primed : plain).insert(v->name);
  } else if (auto u = std::get_if<UnaryNode>(&n)) {
    collect_vars(u->operand, plain, primed);
  } else if (auto b = std::get_if<BinaryNode>(&n)) {
    collect_vars(b->lhs, plain, primed);
    collect_vars(b->rhs, plain, primed);
  }
}

namespace {

std::int64_t checked(BinOp op, std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  bool overflow = false;
  switch (op) {
    case BinOp::Add: overflow = __builtin_add_overflow(a, b, &r); break;
    case BinOp::Sub: overflow = __builtin_sub_overflow(a, b, &r); break;
    case BinOp::Mul: overflow = __builtin_mul_overflow(a, b, &r); break;
    default: break;
  }
  if (overflow)
    throw Error(ErrorCode::DomainOverflow, std::to_string(a) + " " + std::string(to_string(op)) +
                                               " " + std::to_string(b) + " overflows");
  return r;
}

void require_same_alternative(const Value& a, const Value& b) {
  if (a.data().index() != b.data().index())
    throw Error(ErrorCode::TypeMismatch, "cannot compare " + to_string(a) + " with " + to_string(b));
}

}  // namespace

Value eval_expr(const Expr& e, const VarAssignment& env, const CallResolver& calls) {
  const auto& n = e.node();
  if (auto l = std::get_if<LiteralNode>(&n)) return l->value;
  if (auto v = std::get_if<VarNode>(&n)) return env.at(v->primed ? primed_name(v->name) : v->name);
  if (auto u = std::get_if<UnaryNode>(&n)) {
    Value x = eval_expr(u->operand, env, calls);
    if (u->op == UnOp::Not) return Value(!x.as_bool());
    return Value(checked(BinOp::Sub, 0, x.as_int()));
  }
  if (auto c = std::get_if<CallNode>(&n)) {
    if (!calls) throw Error(ErrorCode::TypeMismatch, "builtin '" + c->fn + "' needs a configuration");
    return calls(c->fn, c->args);
  }
  const auto& b = std::get<BinaryNode>(n);
  switch (b.op) {
    case BinOp::Or:
      return Value(eval_expr(b.lhs, env, calls).as_bool() || eval_expr(b.rhs, env, calls).as_bool());
    case BinOp::And:
      return Value(eval_expr(b.lhs, env, calls).as_bool() && eval_expr(b.rhs, env, calls).as_bool());
    default: break;
  }
  Value x = eval_expr(b.lhs, env, calls);
  Value y = eval_expr(b.rhs, env, calls);
  switch (b.op) {
    case BinOp::Eq: require_same_alternative(x, y); return Value(x == y);
    case BinOp::Ne: require_same_alternative(x, y); return Value(x != y);
    case BinOp::Lt: return Value(x.as_int() < y.as_int());
    case BinOp::Le: return Value(x.as_int() <= y.as_int());
    case BinOp::Gt: return Value(x.as_int() > y.as_int());
    case BinOp::Ge: return Value(x.as_int() >= y.as_int());
    default: return Value(checked(b.op, x.as_int(), y.as_int()));
  }
}

bool eval_pred(const Predicate& p, const VarAssignment& env, const CallResolver& calls) {
  return eval_expr(p, env, calls).as_bool();
}

// ---------------------------------------------------------------------------
// Patterns and diagrams

std::optional<VarAssignment> match_pattern(const Pattern& p, const Message& m) {
  if (p.name != m.mn) return std::nullopt;
  std::set<std::string> want(p.binders.begin(), p.binders.end());
  if (want != m.ar.names())
    throw Error(ErrorCode::ArityMismatch, "pattern " + p.name + " binds " +
                                              std::to_string(p.binders.size()) +
                                              " argument(s), message carries " + to_string(m.ar));
  VarAssignment r;
  for (const auto& b : p.binders) r.set(b, m.ar.at(b));
  if (p.sender) r.set(*p.sender, Value(m.snd));
  return r;
}

bool DiagramState::excludes(const std::string& service) const {
  return std::find(exclusions.begin(), exclusions.end(), service) != exclusions.end();
}

std::string_view to_string(Callable c) {
  switch (c) {
    case Callable::Seq: return "seq";
    case Callable::Conc: return "conc";
    case Callable::Both: return "both";
  }
  return "?";
}

bool accepts(Callable c, MessageKind k) {
  switch (k) {
    case MessageKind::SequCall: return c != Callable::Conc;
    case MessageKind::ConcCall: return c != Callable::Seq;
    case MessageKind::Ret: return false;
  }
  return false;
}

const DiagramState* ServiceSTD::find_state(const std::string& id) const {
  for (const auto& s : states)
    if (s.id == id) return &s;
  return nullptr;
}

bool ServiceSTD::is_initial(const std::string& id) const {
  return std::find(initial.begin(), initial.end(), id) != initial.end();
}

const VarDecl* ServiceSTD::find_local(const std::string& n) const {
  for (const auto& d : locals)
    if (d.name == n) return &d;
  return nullptr;
}

const ServiceSTD* BehaviorDescription::find_service(const std::string& n) const {
  for (const auto& s : services)
    if (s.name == n) return &s;
  return nullptr;
}

const VarDecl* BehaviorDescription::find_attribute(const std::string& n) const {
  for (const auto& a : attributes)
    if (a.name == n) return &a;
  return nullptr;
}

std::optional<EnumType> BehaviorDescription::enum_of_constant(const std::string& n) const {
  for (const auto& e : enums)
    if (std::find(e.constants.begin(), e.constants.end(), n) != e.constants.end())
      return EnumType{e.name};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Domains

std::vector<Value> domain_values(const Type& t, const BehaviorDescription& beh,
                                 const Universe& universe) {
  std::vector<Value> r;
  if (std::holds_alternative<BoolType>(t)) {
    r = {Value(false), Value(true)};
  } else if (auto i = std::get_if<IntType>(&t)) {
    for (std::int64_t v = i->lo; v <= i->hi; ++v) r.emplace_back(v);
  } else if (std::holds_alternative<IdType>(t)) {
    for (const auto& id : universe.ids) r.emplace_back(id);
  } else {
    const auto& name = std::get<EnumType>(t).name;
    for (const auto& e : beh.enums)
      if (e.name == name)
        for (const auto& c : e.constants) r.emplace_back(EnumConst{c});
  }
  return r;
}

bool in_domain(const Value& v, const Type& t, const BehaviorDescription& beh,
               const Universe& universe) {
  if (std::holds_alternative<BoolType>(t)) return v.is_bool();
  if (auto i = std::get_if<IntType>(&t)) return v.is_int() && v.as_int() >= i->lo && v.as_int() <= i->hi;
  if (std::holds_alternative<IdType>(t)) {
    if (!v.is_id()) return false;
    return std::find(universe.ids.begin(), universe.ids.end(), v.as_id()) != universe.ids.end();
  }
  if (!v.is_enum()) return false;
  auto vals = domain_values(t, beh, universe);
  return std::find(vals.begin(), vals.end(), v) != vals.end();
}

std::vector<Dimension> dimensions(const std::vector<VarDecl>& decls, const BehaviorDescription& beh,
                                  const Universe& universe, const std::string& suffix) {
  std::vector<Dimension> r;
  r.reserve(decls.size());
  for (const auto& d : decls) r.push_back({d.name + suffix, domain_values(d.type, beh, universe)});
  return r;
}

void for_each_assignment(const std::vector<Dimension>& dims,
                         const std::function<bool(const VarAssignment&)>& fn) {
  for (const auto& d : dims)
    if (d.values.empty()) return;
  std::vector<std::size_t> idx(dims.size(), 0);
  VarAssignment a;
  for (std::size_t i = 0; i < dims.size(); ++i) a.set(dims[i].name, dims[i].values[0]);
  while (true) {
    if (!fn(a)) return;
    std::size_t k = dims.size();
    while (k > 0) {
      --k;
      if (++idx[k] < dims[k].values.size()) {
        a.set(dims[k].name, dims[k].values[idx[k]]);
        break;
      }
      idx[k] = 0;
      a.set(dims[k].name, dims[k].values[0]);
      if (k == 0) return;
    }
    if (dims.empty()) return;
  }
}

Value default_value(const Type& t, const BehaviorDescription& beh, const Universe& universe) {
  auto vals = domain_values(t, beh, universe);
  if (vals.empty()) throw Error(ErrorCode::DomainOverflow, "empty domain " + to_string(t));
  return vals.front();
}


std::vector<Dimension> successor_dimensions(const BehaviorDescription& beh, const ServiceSTD& svc,
                                            const DiagramTransition& tr, const Universe& universe) {
  std::set<std::string> plain, primed;
  collect_vars(tr.post, plain, primed);
  primed.insert(tr.havoc.begin(), tr.havoc.end());
  std::vector<Dimension> dims;
  for (const auto& a : beh.attributes)
    if (primed.count(a.name))
      dims.push_back({primed_name(a.name), domain_values(a.type, beh, universe)});
  for (const auto& l : svc.locals)
    if (primed.count(l.name))
      dims.push_back({primed_name(l.name), domain_values(l.type, beh, universe)});
  return dims;
}

VarAssignment frame_env(const BehaviorDescription& beh, const ServiceSTD& svc,
                        const VarAssignment& env, const VarAssignment& primed) {
  VarAssignment r = env;
  auto frame = [&](const std::string& n) {
    const std::string p = primed_name(n);
    if (const Value* v = primed.find(p))
      r.set(p, *v);
    else if (const Value* cur = env.find(n))
      r.set(p, *cur);
  };
  for (const auto& a : beh.attributes) frame(a.name);
  for (const auto& l : svc.locals) frame(l.name);
  return r;
}

VarAssignment attributes_after(const BehaviorDescription& beh, const VarAssignment& full_env) {
  VarAssignment r;
  for (const auto& a : beh.attributes) r.set(a.name, full_env.at(primed_name(a.name)));
  return r;
}

VarAssignment locals_after(const ServiceSTD& svc, const VarAssignment& full_env) {
  VarAssignment r;
  for (const auto& l : svc.locals) r.set(l.name, full_env.at(primed_name(l.name)));
  return r;
}

VarAssignment label_env(const VarAssignment& attributes, const ObjectId& self) {
  VarAssignment r = attributes;
  r.set("self", Value(self));
  return r;
}

}  // namespace iostd
