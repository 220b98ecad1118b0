#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "iostd/dsl.hpp"

namespace iostd::dsl {

enum class Tok {
  Ident,
  Int,
  String,
  LBrace,
  RBrace,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Semi,
  Colon,
  Comma,
  Dot,
  DotDot,
  Arrow,
  Prime,
  At,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Invalid,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

std::vector<Token> lex(std::string_view text, const std::string& file);
std::string describe(const Token& t);

}  // namespace iostd::dsl
