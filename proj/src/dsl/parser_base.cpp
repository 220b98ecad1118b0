#include "parser_base.hpp"

#include <algorithm>
#include <charconv>

namespace iostd::dsl {

namespace {

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words = {
      "behavior", "enum",  "attributes", "init", "service", "callable", "seq",  "conc",
      "both",     "locals", "states",    "initial", "exclusions", "trans", "when", "from",
      "pre",      "post",  "havoc",      "out",  "ret",     "and",      "or",   "not",
      "true",     "false", "int",        "bool", "id",      "self",     "manifest"};
  return words;
}

}  // namespace

bool is_reserved(const std::string& word) { return reserved_words().count(word) != 0; }

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan r = a;
  r.end_line = b.end_line;
  r.end_column = b.end_column;
  return r;
}

const Token& ParserBase::peek(std::size_t k) const {
  return toks_[std::min(pos_ + k, toks_.size() - 1)];
}

const Token& ParserBase::advance() {
  const Token& t = toks_[pos_];
  if (pos_ + 1 < toks_.size()) ++pos_;
  return t;
}

bool ParserBase::accept(Tok kind) {
  if (!check(kind)) return false;
  advance();
  return true;
}

bool ParserBase::accept_kw(std::string_view kw) {
  if (!check_kw(kw)) return false;
  advance();
  return true;
}

const Token& ParserBase::expect(Tok kind, const std::string& what) {
  if (!check(kind)) fail(peek(), what);
  return advance();
}

void ParserBase::expect_kw(std::string_view kw) {
  if (!check_kw(kw)) fail(peek(), "'" + std::string(kw) + "'");
  advance();
}

const Token& ParserBase::expect_name(const std::string& what) {
  if (!check(Tok::Ident) || is_reserved(peek().text)) fail(peek(), what);
  return advance();
}

void ParserBase::record(const SourceSpan& span, const std::string& expected, const std::string& found) {
  errors_.push_back(ParseError{span, expected, found});
}

void ParserBase::fail(const Token& at, const std::string& expected) {
  record(at.span, expected, describe(at));
  throw Bail{};
}

void ParserBase::fail(const SourceSpan& span, const std::string& expected, const std::string& found) {
  record(span, expected, found);
  throw Bail{};
}

void ParserBase::sync(int open) {
  int depth = open;
  while (!at_end()) {
    Tok k = peek().kind;
    if (k == Tok::LBrace) {
      ++depth;
    } else if (k == Tok::RBrace) {
      if (depth == 0) return;
      --depth;
      if (depth == 0) {
        advance();
        return;
      }
    } else if (k == Tok::Semi && depth == 0) {
      advance();
      return;
    }
    advance();
  }
}

std::int64_t ParserBase::parse_signed_int() {
  bool neg = accept(Tok::Minus);
  const Token& t = expect(Tok::Int, "integer");
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (ec != std::errc()) fail(t, "integer within 64 bits");
  return neg ? -v : v;
}

Type ParserBase::parse_type(const BehaviorDescription* beh) {
  if (accept_kw("bool")) return BoolType{};
  if (accept_kw("id")) return IdType{};
  if (accept_kw("int")) {
    const Token& open = expect(Tok::LBracket, "'['");
    std::int64_t lo = parse_signed_int();
    expect(Tok::DotDot, "'..'");
    std::int64_t hi = parse_signed_int();
    const Token& close = expect(Tok::RBracket, "']'");
    if (lo > hi) fail(join(open.span, close.span), "nonempty integer range", std::to_string(lo) + ".." + std::to_string(hi));
    return IntType{lo, hi};
  }
  if (check(Tok::Ident) && beh) {
    for (const auto& e : beh->enums)
      if (e.name == peek().text) {
        advance();
        return EnumType{e.name};
      }
  }
  fail(peek(), "type (bool, id, int[lo..hi], or a declared enum)");
}

void ParserBase::require_int(const Typed& t) {
  if (!std::holds_alternative<IntType>(t.type)) fail(t.span, "integer expression", print(t.expr));
}

void ParserBase::require_bool(const Typed& t) {
  if (!std::holds_alternative<BoolType>(t.type)) fail(t.span, "boolean expression", print(t.expr));
}

Typed ParserBase::parse_expr(const Scope& scope) { return parse_or(scope); }

Typed ParserBase::parse_bool_expr(const Scope& scope, const std::string& what) {
  Typed t = parse_expr(scope);
  if (!std::holds_alternative<BoolType>(t.type)) fail(t.span, what, print(t.expr));
  return t;
}

Typed ParserBase::parse_or(const Scope& s) {
  Typed l = parse_and(s);
  while (check_kw("or")) {
    advance();
    Typed r = parse_and(s);
    require_bool(l);
    require_bool(r);
    l = Typed{binary(BinOp::Or, l.expr, r.expr), BoolType{}, join(l.span, r.span)};
  }
  return l;
}

Typed ParserBase::parse_and(const Scope& s) {
  Typed l = parse_not(s);
  while (check_kw("and")) {
    advance();
    Typed r = parse_not(s);
    require_bool(l);
    require_bool(r);
    l = Typed{binary(BinOp::And, l.expr, r.expr), BoolType{}, join(l.span, r.span)};
  }
  return l;
}

Typed ParserBase::parse_not(const Scope& s) {
  if (check_kw("not")) {
    SourceSpan start = advance().span;
    Typed x = parse_not(s);
    require_bool(x);
    return Typed{unary(UnOp::Not, x.expr), BoolType{}, join(start, x.span)};
  }
  return parse_cmp(s);
}

Typed ParserBase::parse_cmp(const Scope& s) {
  Typed l = parse_add(s);
  BinOp op;
  switch (peek().kind) {
    case Tok::Eq: op = BinOp::Eq; break;
    case Tok::Ne: op = BinOp::Ne; break;
    case Tok::Lt: op = BinOp::Lt; break;
    case Tok::Le: op = BinOp::Le; break;
    case Tok::Gt: op = BinOp::Gt; break;
    case Tok::Ge: op = BinOp::Ge; break;
    default: return l;
  }
  advance();
  Typed r = parse_add(s);
  SourceSpan span = join(l.span, r.span);
  if (op == BinOp::Eq || op == BinOp::Ne) {
    if (!same_kind(l.type, r.type))
      fail(span, "operands of the same type", to_string(l.type) + " vs " + to_string(r.type));
  } else {
    require_int(l);
    require_int(r);
  }
  return Typed{binary(op, l.expr, r.expr), BoolType{}, span};
}

Typed ParserBase::parse_add(const Scope& s) {
  Typed l = parse_mul(s);
  while (check(Tok::Plus) || check(Tok::Minus)) {
    BinOp op = advance().kind == Tok::Plus ? BinOp::Add : BinOp::Sub;
    Typed r = parse_mul(s);
    require_int(l);
    require_int(r);
    l = Typed{binary(op, l.expr, r.expr), IntType{}, join(l.span, r.span)};
  }
  return l;
}

Typed ParserBase::parse_mul(const Scope& s) {
  Typed l = parse_unary(s);
  while (check(Tok::Star)) {
    advance();
    Typed r = parse_unary(s);
    require_int(l);
    require_int(r);
    l = Typed{binary(BinOp::Mul, l.expr, r.expr), IntType{}, join(l.span, r.span)};
  }
  return l;
}

Typed ParserBase::parse_unary(const Scope& s) {
  if (check(Tok::Minus)) {
    SourceSpan start = advance().span;
    if (check(Tok::Int)) {
      const Token& t = advance();
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc()) fail(t, "integer within 64 bits");
      return Typed{lit(Value(-v)), IntType{}, join(start, t.span)};
    }
    Typed x = parse_unary(s);
    require_int(x);
    return Typed{unary(UnOp::Neg, x.expr), IntType{}, join(start, x.span)};
  }
  return parse_primary(s);
}

Typed ParserBase::parse_builtin(const Scope& s, const Token& name) {
  expect(Tok::LParen, "'('");
  std::vector<std::string> args;
  Type result = IntType{};
  if (name.text == "sum") {
    const Token& a = expect(Tok::Ident, "attribute name");
    auto it = s.vars.find(a.text);
    if (it == s.vars.end() || !std::holds_alternative<IntType>(it->second.type))
      fail(a, "integer attribute");
    args.push_back(a.text);
  } else if (name.text == "stacked") {
    const Token& svc = expect(Tok::Ident, "service name");
    expect(Tok::Dot, "'.'");
    const Token& st = expect(Tok::Ident, "diagram state name");
    args.push_back(svc.text + "." + st.text);
  } else if (name.text != "errors") {
    fail(name, "builtin sum, stacked, or errors");
  }
  const Token& close = expect(Tok::RParen, "')'");
  return Typed{call(name.text, std::move(args)), result, join(name.span, close.span)};
}

Typed ParserBase::parse_primary(const Scope& s) {
  const Token& t = peek();
  switch (t.kind) {
    case Tok::Int: {
      advance();
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc()) fail(t, "integer within 64 bits");
      return Typed{lit(Value(v)), IntType{}, t.span};
    }
    case Tok::At: {
      SourceSpan start = advance().span;
      const Token& n = expect(Tok::Ident, "object name after '@'");
      return Typed{lit(Value(ObjectId{n.text})), IdType{}, join(start, n.span)};
    }
    case Tok::LParen: {
      advance();
      Typed inner = parse_expr(s);
      const Token& close = expect(Tok::RParen, "')'");
      inner.span = join(t.span, close.span);
      return inner;
    }
    case Tok::Ident: break;
    default: fail(t, "expression");
  }
  const Token& name = advance();
  if (name.text == "true" || name.text == "false")
    return Typed{lit(Value(name.text == "true")), BoolType{}, name.span};
  if (s.allow_builtins && check(Tok::LParen)) return parse_builtin(s, name);

  auto it = s.vars.find(name.text);
  if (it == s.vars.end()) {
    if (s.beh)
      if (auto e = s.beh->enum_of_constant(name.text))
        return Typed{lit(Value(EnumConst{name.text})), *e, name.span};
    fail(name, "declared variable");
  }
  if (check(Tok::Prime)) {
    const Token& prime = advance();
    if (!s.allow_primed) fail(prime, "no primed variable here");
    if (!it->second.primable) fail(name, "attribute or local (only those can be primed)");
    return Typed{var(name.text, true), it->second.type, join(name.span, prime.span)};
  }
  return Typed{var(name.text), it->second.type, name.span};
}

}  // namespace iostd::dsl
