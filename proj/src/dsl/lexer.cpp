#include "lexer.hpp"

#include <cctype>

namespace iostd::dsl {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& file) : text_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.span.file = file_;
      t.span.line = line_;
      t.span.column = col_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        finish(t);
        out.push_back(std::move(t));
        return out;
      }
      scan(t);
      finish(t);
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t k = 0) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = peek();
      if (c == '-' && peek(1) == '-') {
        while (pos_ < text_.size() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void finish(Token& t) {
    t.span.end_line = line_;
    t.span.end_column = col_;
  }

  void take(Token& t, Tok kind, std::size_t n) {
    t.kind = kind;
    for (std::size_t i = 0; i < n; ++i) {
      t.text += peek();
      advance();
    }
  }

  void scan(Token& t) {
    char c = peek();
    if (ident_start(c)) {
      t.kind = Tok::Ident;
      while (pos_ < text_.size() && ident_char(peek())) {
        t.text += peek();
        advance();
      }
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Int;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
        t.text += peek();
        advance();
      }
      return;
    }
    if (c == '"') {
      advance();
      t.kind = Tok::String;
      while (pos_ < text_.size() && peek() != '"' && peek() != '\n') {
        t.text += peek();
        advance();
      }
      if (peek() == '"')
        advance();
      else
        t.kind = Tok::Invalid;
      return;
    }
    switch (c) {
      case '{': return take(t, Tok::LBrace, 1);
      case '}': return take(t, Tok::RBrace, 1);
      case '(': return take(t, Tok::LParen, 1);
      case ')': return take(t, Tok::RParen, 1);
      case '[': return take(t, Tok::LBracket, 1);
      case ']': return take(t, Tok::RBracket, 1);
      case ';': return take(t, Tok::Semi, 1);
      case ':': return take(t, Tok::Colon, 1);
      case ',': return take(t, Tok::Comma, 1);
      case '\'': return take(t, Tok::Prime, 1);
      case '@': return take(t, Tok::At, 1);
      case '=': return take(t, Tok::Eq, 1);
      case '+': return take(t, Tok::Plus, 1);
      case '*': return take(t, Tok::Star, 1);
      case '.': return peek(1) == '.' ? take(t, Tok::DotDot, 2) : take(t, Tok::Dot, 1);
      case '-': return peek(1) == '>' ? take(t, Tok::Arrow, 2) : take(t, Tok::Minus, 1);
      case '<': return peek(1) == '=' ? take(t, Tok::Le, 2) : take(t, Tok::Lt, 1);
      case '>': return peek(1) == '=' ? take(t, Tok::Ge, 2) : take(t, Tok::Gt, 1);
      case '!':
        if (peek(1) == '=') return take(t, Tok::Ne, 2);
        break;
      default: break;
    }
    // One whole UTF-8 sequence becomes a single invalid token.
    t.kind = Tok::Invalid;
    t.text += peek();
    advance();
    while (pos_ < text_.size() && (static_cast<unsigned char>(peek()) & 0xC0) == 0x80) {
      t.text += peek();
      ++pos_;
    }
  }

  std::string_view text_;
  const std::string& file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> lex(std::string_view text, const std::string& file) { return Lexer(text, file).run(); }

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "\"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

}  // namespace iostd::dsl
