#include "iostd/dsl.hpp"

namespace iostd {

namespace {

constexpr int kNotPrec = 3;
constexpr int kAtomPrec = 8;

int expr_prec(const Expr& e) {
  const auto& n = e.node();
  if (auto b = std::get_if<BinaryNode>(&n)) return precedence(b->op);
  if (auto u = std::get_if<UnaryNode>(&n)) return u->op == UnOp::Not ? kNotPrec : 7;
  return kAtomPrec;
}

bool is_comparison(BinOp op) { return precedence(op) == 4; }

std::string wrap(const Expr& e, bool parens) {
  return parens ? "(" + print(e) + ")" : print(e);
}

}  // namespace

std::string print(const Type& t) { return to_string(t); }

std::string print(const Expr& e) {
  const auto& n = e.node();
  if (auto l = std::get_if<LiteralNode>(&n)) return to_string(l->value);
  if (auto v = std::get_if<VarNode>(&n)) return v->primed ? v->name + "'" : v->name;
  if (auto c = std::get_if<CallNode>(&n)) {
    std::string r = c->fn + "(";
    for (std::size_t i = 0; i < c->args.size(); ++i) r += (i ? ", " : "") + c->args[i];
    return r + ")";
  }
  if (auto u = std::get_if<UnaryNode>(&n)) {
    if (u->op == UnOp::Not) return "not " + wrap(u->operand, expr_prec(u->operand) < kNotPrec);
    const auto& on = u->operand.node();
    bool bare = std::holds_alternative<VarNode>(on) || std::holds_alternative<CallNode>(on);
    return "-" + wrap(u->operand, !bare);
  }
  const auto& b = std::get<BinaryNode>(n);
  const int p = precedence(b.op);
  const bool cmp = is_comparison(b.op);
  const int lp = expr_prec(b.lhs);
  const int rp = expr_prec(b.rhs);
  return wrap(b.lhs, lp < p || (cmp && lp == p)) + " " + std::string(to_string(b.op)) + " " +
         wrap(b.rhs, rp <= p);
}

namespace {

void print_decls(std::string& out, const std::vector<VarDecl>& decls, const std::string& indent) {
  for (const auto& d : decls) out += indent + d.name + ": " + print(d.type) + ";\n";
}

std::string print_output(const OutputTemplate& o) {
  std::string r;
  if (o.kind == MessageKind::Ret) {
    r = "ret(";
  } else {
    r = print(*o.target) + "." + o.service + "(";
  }
  for (std::size_t i = 0; i < o.args.size(); ++i)
    r += (i ? ", " : "") + o.args[i].first + " = " + print(o.args[i].second);
  r += ")";
  if (o.kind != MessageKind::Ret) r += o.kind == MessageKind::SequCall ? " seq" : " conc";
  return r;
}

void print_service(std::string& out, const ServiceSTD& svc) {
  out += "  service " + svc.name + "(";
  for (std::size_t i = 0; i < svc.params.size(); ++i)
    out += (i ? ", " : "") + svc.params[i].name + ": " + print(svc.params[i].type);
  out += ") callable " + std::string(to_string(svc.callable)) + " {\n";
  if (!svc.locals.empty()) {
    out += "    locals {\n";
    print_decls(out, svc.locals, "      ");
    out += "    }\n";
  }
  out += "    states {\n";
  for (const auto& s : svc.states) out += "      " + s.id + ": " + print(s.label) + ";\n";
  out += "    }\n";
  if (!svc.initial.empty()) {
    out += "    initial ";
    for (std::size_t i = 0; i < svc.initial.size(); ++i) out += (i ? ", " : "") + svc.initial[i];
    out += ";\n";
  }
  bool any_ex = false;
  for (const auto& s : svc.states) any_ex = any_ex || !s.exclusions.empty();
  if (any_ex) {
    out += "    exclusions {\n";
    for (const auto& s : svc.states) {
      if (s.exclusions.empty()) continue;
      out += "      " + s.id + ": [";
      for (std::size_t i = 0; i < s.exclusions.size(); ++i) out += (i ? ", " : "") + s.exclusions[i];
      out += "];\n";
    }
    out += "    }\n";
  }
  for (const auto& t : svc.transitions) {
    out += "    trans " + t.from + " -> " + t.to + " {\n";
    out += "      when " + t.pattern.name + "(";
    for (std::size_t i = 0; i < t.pattern.binders.size(); ++i)
      out += (i ? ", " : "") + t.pattern.binders[i];
    out += ")";
    if (t.pattern.sender) out += " from " + *t.pattern.sender;
    out += ";\n";
    out += "      pre " + print(t.pre) + ";\n";
    out += "      post " + print(t.post) + ";\n";
    if (!t.havoc.empty()) {
      out += "      havoc ";
      for (std::size_t i = 0; i < t.havoc.size(); ++i) out += (i ? ", " : "") + t.havoc[i];
      out += ";\n";
    }
    for (const auto& o : t.outputs) out += "      out " + print_output(o) + ";\n";
    out += "    }\n";
  }
  out += "  }\n";
}

}  // namespace

std::string print(const BehaviorDescription& beh) {
  std::string out = "behavior " + beh.name + " {\n";
  for (const auto& e : beh.enums) {
    out += "  enum " + e.name + " { ";
    for (std::size_t i = 0; i < e.constants.size(); ++i) out += (i ? ", " : "") + e.constants[i];
    out += " }\n";
  }
  out += "  attributes {\n";
  print_decls(out, beh.attributes, "    ");
  out += "  }\n";
  out += "  init { " + print(beh.init) + " }\n";
  for (const auto& svc : beh.services) {
    out += "\n";
    print_service(out, svc);
  }
  out += "}\n";
  return out;
}

}  // namespace iostd
