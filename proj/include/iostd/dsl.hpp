#pragma once

// Concrete text syntax for behavior descriptions (`.iostd` files).
//
//   behavior Bank {
//     attributes { bal: int[0..8]; open: bool; }
//     init { open or bal = 0 }
//     service deposit(a: int[1..3]) callable both {
//       states { Idle: open; }
//       initial Idle;
//       trans Idle -> Idle {
//         when deposit(a) from c;
//         pre bal + a <= 8;
//         post bal' = bal + a;
//         out ret();
//       }
//     }
//   }
//
// Comments run from `--` to the end of the line.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iostd/spec.hpp"

namespace iostd {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int end_line = 1;
  int end_column = 1;
};

struct ParseError {
  SourceSpan span;
  std::string expected;
  std::string found;

  std::string message() const;
};

struct ParseOutcome {
  std::optional<BehaviorDescription> behavior;
  std::vector<ParseError> errors;

  bool ok() const { return behavior.has_value() && errors.empty(); }
  std::string error_text() const;
};

ParseOutcome parse(std::string_view text, const std::string& file = "<input>");

/// Like parse, but throws Error(Parse) carrying every message.
BehaviorDescription parse_or_throw(std::string_view text, const std::string& file = "<input>");

/// Canonical formatting; parse(print(b)) reproduces b.
std::string print(const BehaviorDescription& beh);
std::string print(const Expr& e);
std::string print(const Type& t);

}  // namespace iostd
