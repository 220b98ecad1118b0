#pragma once

// Brute-force transition count of the deposit-only purse machine: balance in
// [0, cap], deposits of 1..kmax offered as sequential and concurrent calls on
// one free external tag. Written from the model, not from the semantics code.

#include <cstddef>
#include <set>
#include <utility>

namespace oracle {

struct MachineCount {
  std::size_t states = 0;
  std::size_t transitions = 0;
};

inline MachineCount purse_machine(int cap, int kmax, bool havoc) {
  // state: (bal, error)
  std::set<std::pair<int, bool>> seen;
  std::set<std::pair<int, bool>> frontier;
  for (int b = 0; b <= cap; ++b) frontier.insert({b, false});
  MachineCount r;
  while (!frontier.empty()) {
    auto it = frontier.begin();
    auto [bal, error] = *it;
    frontier.erase(it);
    if (!seen.insert({bal, error}).second) continue;
    for (int kind = 0; kind < 2; ++kind) {
      for (int amt = 1; amt <= kmax; ++amt) {
        if (error) {
          ++r.transitions;  // absorbing self-loop
        } else if (bal + amt <= cap) {
          ++r.transitions;
          frontier.insert({bal + amt, false});
        } else if (havoc) {
          r.transitions += cap + 1;  // any balance
          for (int b = 0; b <= cap; ++b) frontier.insert({b, false});
        } else {
          ++r.transitions;
          frontier.insert({bal, true});
        }
      }
    }
  }
  r.states = seen.size();
  return r;
}

}  // namespace oracle
