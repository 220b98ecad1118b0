#pragma once

// Token cursor, error recovery, and the typed expression parser shared by the
// behavior and manifest grammars.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lexer.hpp"

namespace iostd::dsl {

struct ScopeVar {
  Type type;
  bool primable = false;
};

struct Scope {
  const BehaviorDescription* beh = nullptr;
  std::map<std::string, ScopeVar> vars;
  bool allow_primed = false;
  /// sum(attr), stacked(service.State), errors(): configuration invariants only.
  bool allow_builtins = false;
};

struct Typed {
  Expr expr;
  Type type;
  SourceSpan span;
};

bool is_reserved(const std::string& word);

class ParserBase {
 protected:
  /// Thrown after an error was recorded; caught at statement level.
  struct Bail {};

  ParserBase(std::vector<Token> tokens, std::vector<ParseError>& errors)
      : toks_(std::move(tokens)), errors_(errors) {}

  const Token& peek(std::size_t k = 0) const;
  bool check(Tok kind) const { return peek().kind == kind; }
  bool check_kw(std::string_view kw) const { return check(Tok::Ident) && peek().text == kw; }
  bool at_end() const { return check(Tok::End); }
  const Token& advance();
  bool accept(Tok kind);
  bool accept_kw(std::string_view kw);
  const Token& expect(Tok kind, const std::string& what);
  void expect_kw(std::string_view kw);
  /// An identifier that is not a reserved word.
  const Token& expect_name(const std::string& what);

  [[noreturn]] void fail(const Token& at, const std::string& expected);
  [[noreturn]] void fail(const SourceSpan& span, const std::string& expected, const std::string& found);
  void record(const SourceSpan& span, const std::string& expected, const std::string& found);

  /// Skips to the end of the current statement: past the next `;` at depth
  /// zero, or up to (not past) the `}` closing the enclosing block. With
  /// `open` braces already consumed by the statement, skips past their close.
  void sync(int open = 0);

  /// Runs `item` until the closing brace, recovering from errors per item.
  template <typename Fn>
  void block_items(Fn&& item) {
    while (!check(Tok::RBrace) && !at_end()) {
      std::size_t before = pos_;
      try {
        item();
      } catch (const Bail&) {
        int open = 0;
        for (std::size_t i = before; i < pos_; ++i) {
          if (toks_[i].kind == Tok::LBrace) ++open;
          if (toks_[i].kind == Tok::RBrace) --open;
        }
        sync(open > 0 ? open : 0);
        if (pos_ == before) advance();
      }
    }
  }

  Type parse_type(const BehaviorDescription* beh);
  std::int64_t parse_signed_int();

  Typed parse_expr(const Scope& scope);
  Typed parse_bool_expr(const Scope& scope, const std::string& what);

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ParseError>& errors_;

 private:
  Typed parse_or(const Scope& s);
  Typed parse_and(const Scope& s);
  Typed parse_not(const Scope& s);
  Typed parse_cmp(const Scope& s);
  Typed parse_add(const Scope& s);
  Typed parse_mul(const Scope& s);
  Typed parse_unary(const Scope& s);
  Typed parse_primary(const Scope& s);
  Typed parse_builtin(const Scope& s, const Token& name);

  void require_int(const Typed& t);
  void require_bool(const Typed& t);
};

SourceSpan join(const SourceSpan& a, const SourceSpan& b);

}  // namespace iostd::dsl
