#pragma once

// Product-space model of the register/echo pair for serializability: every
// interleaving of two injected register services, FIFO channels env->r,
// r->e, e->r, and the Reject trap. Outcomes are printed in the projection
// format `e {}; r[ ERROR] {p=.., q=.., x=..}`.

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <string>
#include <vector>

namespace oracle {

enum class RegOp { Inc, Dbl, Rinc, Rset };

inline const char* reg_op_name(RegOp o) {
  switch (o) {
    case RegOp::Inc: return "inc";
    case RegOp::Dbl: return "dbl";
    case RegOp::Rinc: return "rinc";
    case RegOp::Rset: return "rset";
  }
  return "?";
}

struct RegState {
  int x = 0;
  bool p = false, q = false, error = false;
  std::array<int, 2> v{0, 0};
  std::deque<int> to_r, to_e, back;  // invocation indices in flight

  std::string projection() const {
    auto b = [](bool f) { return f ? "true" : "false"; };
    return std::string("e {}; r") + (error ? " ERROR" : "") + " {p=" + b(p) + ", q=" + b(q) +
           ", x=" + std::to_string(x) + "}";
  }
  bool quiescent() const { return to_r.empty() && to_e.empty() && back.empty(); }
};

struct RegModel {
  std::vector<RegOp> ops;

  void start(RegState& s, int i) const {
    if (s.error) return;
    switch (ops[i]) {
      case RegOp::Inc: s.x = std::min(s.x + 1, 3); break;
      case RegOp::Dbl: s.x = std::min(2 * s.x, 3); break;
      case RegOp::Rinc:
      case RegOp::Rset: {
        bool& flag = ops[i] == RegOp::Rinc ? s.p : s.q;
        if (flag) {
          s.error = true;
          return;
        }
        flag = true;
        s.v[i] = s.x;
        s.to_e.push_back(i);
        break;
      }
    }
  }

  void resume(RegState& s, int i) const {
    if (s.error) return;
    if (ops[i] == RegOp::Rinc) {
      s.x = std::min(s.v[i] + 1, 3);
      s.p = false;
    } else {
      s.x = 3 - s.v[i];
      s.q = false;
    }
  }

  void outcomes(RegState s, std::set<std::string>& out) const {
    if (s.quiescent()) {
      out.insert(s.projection());
      return;
    }
    if (!s.to_r.empty()) {
      RegState n = s;
      int i = n.to_r.front();
      n.to_r.pop_front();
      start(n, i);
      outcomes(n, out);
    }
    if (!s.to_e.empty()) {
      RegState n = s;
      n.back.push_back(n.to_e.front());
      n.to_e.pop_front();
      outcomes(n, out);
    }
    if (!s.back.empty()) {
      RegState n = s;
      int i = n.back.front();
      n.back.pop_front();
      resume(n, i);
      outcomes(n, out);
    }
  }
};

struct RegVerdict {
  std::set<std::string> serial, interleaved, non_serializable;
};

inline RegVerdict register_serializability(int x0, const std::vector<RegOp>& ops) {
  RegModel m{ops};
  RegState init;
  init.x = x0;
  RegVerdict r;

  std::vector<int> order(ops.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  do {
    std::set<std::string> dummy;
    RegState s = init;
    for (int i : order) {
      s.to_r.push_back(i);
      // Drain: with one invocation in flight every step is forced.
      while (!s.quiescent()) {
        if (!s.to_r.empty()) {
          int k = s.to_r.front();
          s.to_r.pop_front();
          m.start(s, k);
        } else if (!s.to_e.empty()) {
          s.back.push_back(s.to_e.front());
          s.to_e.pop_front();
        } else {
          int k = s.back.front();
          s.back.pop_front();
          m.resume(s, k);
        }
      }
    }
    r.serial.insert(s.projection());
  } while (std::next_permutation(order.begin(), order.end()));

  RegState all = init;
  for (std::size_t i = 0; i < ops.size(); ++i) all.to_r.push_back(static_cast<int>(i));
  m.outcomes(all, r.interleaved);
  for (const auto& o : r.interleaved)
    if (!r.serial.count(o)) r.non_serializable.insert(o);
  return r;
}

}  // namespace oracle
