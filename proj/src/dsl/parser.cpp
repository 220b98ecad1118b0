#include <algorithm>
#include <map>

#include "parser_base.hpp"

namespace iostd {

std::string ParseError::message() const {
  return span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column) +
         ": expected " + expected + ", found " + found;
}

std::string ParseOutcome::error_text() const {
  std::string r;
  for (const auto& e : errors) r += e.message() + "\n";
  return r;
}

namespace dsl {
namespace {

class BehaviorParser : public ParserBase {
 public:
  BehaviorParser(std::vector<Token> toks, std::vector<ParseError>& errors)
      : ParserBase(std::move(toks), errors) {}

  std::optional<BehaviorDescription> run() {
    try {
      expect_kw("behavior");
      beh_.name = expect_name("behavior name").text;
      expect(Tok::LBrace, "'{'");
    } catch (const Bail&) {
      return std::nullopt;
    }
    block_items([&] { item(); });
    try {
      expect(Tok::RBrace, "'}'");
      if (!at_end()) fail(peek(), "end of input (one behavior per file)");
    } catch (const Bail&) {
    }
    resolve_exclusions();
    return beh_;
  }

 private:
  void declare(std::set<std::string>& names, const Token& t, const std::string& what) {
    if (!names.insert(t.text).second) fail(t, "unique " + what + " name");
  }

  void item() {
    if (accept_kw("enum")) return enum_decl();
    if (accept_kw("attributes")) return attributes();
    if (accept_kw("init")) {
      expect(Tok::LBrace, "'{'");
      beh_.init = parse_bool_expr(label_scope(), "boolean init predicate").expr;
      expect(Tok::RBrace, "'}'");
      return;
    }
    if (accept_kw("service")) return service();
    fail(peek(), "'enum', 'attributes', 'init', or 'service'");
  }

  void enum_decl() {
    EnumDecl e;
    const Token& n = expect_name("enum name");
    declare(top_names_, n, "type");
    e.name = n.text;
    expect(Tok::LBrace, "'{'");
    do {
      const Token& c = expect_name("enum constant");
      declare(top_names_, c, "enum constant");
      e.constants.push_back(c.text);
    } while (accept(Tok::Comma));
    expect(Tok::RBrace, "'}'");
    beh_.enums.push_back(std::move(e));
  }

  void attributes() {
    expect(Tok::LBrace, "'{'");
    block_items([&] {
      const Token& n = expect_name("attribute name");
      declare(top_names_, n, "attribute");
      expect(Tok::Colon, "':'");
      Type t = parse_type(&beh_);
      expect(Tok::Semi, "';'");
      beh_.attributes.push_back({n.text, t});
    });
    expect(Tok::RBrace, "'}'");
  }

  Scope label_scope() const {
    Scope s;
    s.beh = &beh_;
    for (const auto& a : beh_.attributes) s.vars[a.name] = {a.type, true};
    s.vars["self"] = {IdType{}, false};
    return s;
  }

  void var_decls(std::vector<VarDecl>& out, std::set<std::string>& names, Tok terminator,
                 Tok separator) {
    if (check(terminator)) return;
    while (true) {
      const Token& n = expect_name("variable name");
      if (beh_.find_attribute(n.text)) fail(n, "name not shadowing an attribute");
      declare(names, n, "variable");
      expect(Tok::Colon, "':'");
      out.push_back({n.text, parse_type(&beh_)});
      if (separator == Tok::Semi) {
        expect(Tok::Semi, "';'");
        if (check(terminator)) return;
      } else if (!accept(separator)) {
        return;
      }
    }
  }

  void service() {
    ServiceSTD svc;
    const Token& n = expect_name("service name");
    if (std::any_of(beh_.services.begin(), beh_.services.end(),
                    [&](const ServiceSTD& s) { return s.name == n.text; }))
      fail(n, "unique service name");
    svc.name = n.text;
    std::set<std::string> names;
    expect(Tok::LParen, "'('");
    var_decls(svc.params, names, Tok::RParen, Tok::Comma);
    expect(Tok::RParen, "')'");
    if (accept_kw("callable")) {
      if (accept_kw("seq"))
        svc.callable = Callable::Seq;
      else if (accept_kw("conc"))
        svc.callable = Callable::Conc;
      else if (accept_kw("both"))
        svc.callable = Callable::Both;
      else
        fail(peek(), "'seq', 'conc', or 'both'");
    }
    expect(Tok::LBrace, "'{'");
    block_items([&] { service_item(svc, names); });
    expect(Tok::RBrace, "'}'");
    beh_.services.push_back(std::move(svc));
  }

  Scope service_scope(const ServiceSTD& svc) const {
    Scope s = label_scope();
    for (const auto& p : svc.params) s.vars[p.name] = {p.type, false};
    for (const auto& l : svc.locals) s.vars[l.name] = {l.type, true};
    return s;
  }

  const Token& state_ref(const ServiceSTD& svc) {
    const Token& t = expect_name("diagram state name");
    if (!svc.find_state(t.text)) fail(t, "declared diagram state of '" + svc.name + "'");
    return t;
  }

  void service_item(ServiceSTD& svc, std::set<std::string>& names) {
    if (accept_kw("locals")) {
      expect(Tok::LBrace, "'{'");
      var_decls(svc.locals, names, Tok::RBrace, Tok::Semi);
      expect(Tok::RBrace, "'}'");
      return;
    }
    if (accept_kw("states")) {
      expect(Tok::LBrace, "'{'");
      block_items([&] {
        const Token& id = expect_name("diagram state name");
        if (svc.find_state(id.text)) fail(id, "unique diagram state name");
        expect(Tok::Colon, "':'");
        Predicate label = parse_bool_expr(label_scope(), "boolean state label").expr;
        expect(Tok::Semi, "';'");
        svc.states.push_back({id.text, label, {}});
      });
      expect(Tok::RBrace, "'}'");
      return;
    }
    if (accept_kw("initial")) {
      do {
        const Token& t = state_ref(svc);
        if (svc.is_initial(t.text)) fail(t, "state not already initial");
        svc.initial.push_back(t.text);
      } while (accept(Tok::Comma));
      expect(Tok::Semi, "';'");
      return;
    }
    if (accept_kw("exclusions")) {
      expect(Tok::LBrace, "'{'");
      block_items([&] {
        const Token& st = state_ref(svc);
        expect(Tok::Colon, "':'");
        expect(Tok::LBracket, "'['");
        auto state = std::find_if(svc.states.begin(), svc.states.end(),
                                  [&](const DiagramState& d) { return d.id == st.text; });
        if (!check(Tok::RBracket)) {
          do {
            const Token& ex = expect_name("service name");
            pending_exclusions_.push_back({ex, svc.name});
            state->exclusions.push_back(ex.text);
          } while (accept(Tok::Comma));
        }
        expect(Tok::RBracket, "']'");
        expect(Tok::Semi, "';'");
      });
      expect(Tok::RBrace, "'}'");
      return;
    }
    if (accept_kw("trans")) return transition(svc);
    fail(peek(), "'locals', 'states', 'initial', 'exclusions', or 'trans'");
  }

  void transition(ServiceSTD& svc) {
    DiagramTransition tr;
    tr.from = state_ref(svc).text;
    expect(Tok::Arrow, "'->'");
    tr.to = state_ref(svc).text;
    expect(Tok::LBrace, "'{'");
    Scope scope = service_scope(svc);
    bool have_when = false;
    block_items([&] {
      const Token& kw = peek();
      if (accept_kw("when")) {
        if (have_when) fail(kw, "a single 'when' clause");
        have_when = true;
        when_clause(svc, tr, scope);
      } else if (accept_kw("pre")) {
        tr.pre = parse_bool_expr(scope, "boolean precondition").expr;
        expect(Tok::Semi, "';'");
      } else if (accept_kw("post")) {
        Scope post = scope;
        post.allow_primed = true;
        tr.post = parse_bool_expr(post, "boolean postcondition").expr;
        expect(Tok::Semi, "';'");
      } else if (accept_kw("havoc")) {
        do {
          const Token& v = expect_name("attribute or local");
          auto it = scope.vars.find(v.text);
          if (it == scope.vars.end() || !it->second.primable) fail(v, "attribute or local");
          tr.havoc.push_back(v.text);
        } while (accept(Tok::Comma));
        expect(Tok::Semi, "';'");
      } else if (accept_kw("out")) {
        Scope out = scope;
        out.allow_primed = true;
        tr.outputs.push_back(output(out));
        expect(Tok::Semi, "';'");
      } else {
        fail(peek(), "'when', 'pre', 'post', 'havoc', or 'out'");
      }
    });
    const Token& close = expect(Tok::RBrace, "'}'");
    if (!have_when) record(close.span, "'when' clause", "'}'");
    svc.transitions.push_back(std::move(tr));
  }

  void when_clause(const ServiceSTD& svc, DiagramTransition& tr, Scope& scope) {
    const Token& n = expect(Tok::Ident, "service name or 'ret'");
    if (n.text != kRetName && is_reserved(n.text)) fail(n, "service name or 'ret'");
    tr.pattern.name = n.text;
    expect(Tok::LParen, "'('");
    std::set<std::string> seen;
    if (!check(Tok::RParen)) {
      do {
        const Token& b = expect_name("binder");
        if (!seen.insert(b.text).second) fail(b, "distinct binder names");
        bool known = std::any_of(svc.params.begin(), svc.params.end(),
                                 [&](const VarDecl& d) { return d.name == b.text; }) ||
                     svc.find_local(b.text);
        if (!known) fail(b, "parameter or local of '" + svc.name + "'");
        tr.pattern.binders.push_back(b.text);
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
    if (accept_kw("from")) {
      const Token& s = expect_name("sender binder");
      if (scope.vars.count(s.text)) fail(s, "fresh sender binder name");
      tr.pattern.sender = s.text;
      scope.vars[s.text] = {IdType{}, false};
    }
    expect(Tok::Semi, "';'");
  }

  OutputTemplate output(const Scope& scope) {
    OutputTemplate o;
    if (accept_kw("ret")) {
      o.service = kRetName;
      o.kind = MessageKind::Ret;
      named_args(o, scope);
      return o;
    }
    const Token& start = peek();
    Typed target = [&]() -> Typed {
      if (check(Tok::At)) {
        advance();
        const Token& n = expect(Tok::Ident, "object name");
        return Typed{lit(Value(ObjectId{n.text})), IdType{}, n.span};
      }
      const Token& n = expect(Tok::Ident, "target variable, '@object', or 'ret'");
      auto it = scope.vars.find(n.text);
      if (it == scope.vars.end()) fail(n, "declared variable");
      if (check(Tok::Prime)) fail(peek(), "unprimed target");
      return Typed{var(n.text), it->second.type, n.span};
    }();
    if (!std::holds_alternative<IdType>(target.type))
      fail(start.span, "object-id target", print(target.expr));
    o.target = target.expr;
    expect(Tok::Dot, "'.'");
    const Token& svc = expect_name("service name");
    o.service = svc.text;
    named_args(o, scope);
    if (accept_kw("seq"))
      o.kind = MessageKind::SequCall;
    else if (accept_kw("conc"))
      o.kind = MessageKind::ConcCall;
    else
      fail(peek(), "'seq' or 'conc'");
    return o;
  }

  void named_args(OutputTemplate& o, const Scope& scope) {
    expect(Tok::LParen, "'('");
    std::set<std::string> seen;
    if (!check(Tok::RParen)) {
      do {
        const Token& n = expect_name("argument name");
        if (!seen.insert(n.text).second) fail(n, "distinct argument names");
        expect(Tok::Eq, "'='");
        o.args.emplace_back(n.text, parse_expr(scope).expr);
      } while (accept(Tok::Comma));
    }
    expect(Tok::RParen, "')'");
  }

  void resolve_exclusions() {
    for (const auto& [tok, owner] : pending_exclusions_)
      if (!beh_.find_service(tok.text)) record(tok.span, "declared service name", describe(tok));
  }

  BehaviorDescription beh_;
  std::set<std::string> top_names_;
  std::vector<std::pair<Token, std::string>> pending_exclusions_;
};

}  // namespace
}  // namespace dsl

ParseOutcome parse(std::string_view text, const std::string& file) {
  ParseOutcome out;
  dsl::BehaviorParser p(dsl::lex(text, file), out.errors);
  out.behavior = p.run();
  return out;
}

BehaviorDescription parse_or_throw(std::string_view text, const std::string& file) {
  ParseOutcome o = parse(text, file);
  if (!o.ok()) throw Error(ErrorCode::Parse, o.error_text());
  return std::move(*o.behavior);
}

}  // namespace iostd
