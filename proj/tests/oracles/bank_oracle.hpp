#pragma once

// Hand-written model of two bank accounts exchanging transfers, independent of
// the semantics and simulator modules. Counts reachable configurations the
// way the explorer does: attributes, pending transfers, FIFO channels, and the
// multiset of answers delivered to the environment.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct BankMsg {
  enum Kind { Transfer, Deposit, Ret } kind;
  int tag;
  int amt = 0;
  int dst = 0;    // Transfer only
  int ok = -1;    // Ret to the environment: 0 or 1; -1 for account-to-account
  bool operator<(const BankMsg& o) const {
    return std::tie(kind, tag, amt, dst, ok) < std::tie(o.kind, o.tag, o.amt, o.dst, o.ok);
  }
};

struct Account {
  int bal = 0;
  bool open = true;
  bool busy = false;
  bool error = false;
  // Pending transfer: tag, amount, destination. At most one (busy).
  int wait_tag = -1, wait_amt = 0, wait_dst = 0;
};

constexpr int kEnv = 2;

struct BankConfig {
  Account acc[2];
  std::map<std::pair<int, int>, std::deque<BankMsg>> chan;  // (snd, rec) -> FIFO
  std::multiset<BankMsg> inbox;

  std::string key() const {
    std::string k;
    for (const auto& a : acc)
      k += std::to_string(a.bal) + (a.open ? "o" : "c") + (a.busy ? "b" : "f") + (a.error ? "E" : "") + "w" +
           std::to_string(a.wait_tag) + "," + std::to_string(a.wait_amt) + "," + std::to_string(a.wait_dst) + ";";
    for (const auto& [c, q] : chan) {
      if (q.empty()) continue;
      k += "|" + std::to_string(c.first) + ">" + std::to_string(c.second) + ":";
      for (const auto& m : q)
        k += std::to_string(m.kind) + "." + std::to_string(m.tag) + "." + std::to_string(m.amt) + "." +
             std::to_string(m.dst) + "." + std::to_string(m.ok) + " ";
    }
    k += "#";
    for (const auto& m : inbox) k += std::to_string(m.tag) + "." + std::to_string(m.ok) + " ";
    return k;
  }

  bool quiescent() const {
    return std::all_of(chan.begin(), chan.end(), [](const auto& kv) { return kv.second.empty(); });
  }
};

inline void send(BankConfig& c, int from, int to, BankMsg m) {
  if (to == kEnv)
    c.inbox.insert(m);
  else
    c.chan[{from, to}].push_back(m);
}

// Delivers the head of channel (from, to); Reject policy: unmatched inputs
// trap the account in an absorbing error state.
inline BankConfig deliver(const BankConfig& in, std::pair<int, int> ch) {
  BankConfig c = in;
  BankMsg m = c.chan[ch].front();
  c.chan[ch].pop_front();
  Account& a = c.acc[ch.second];
  const int self = ch.second;
  if (a.error) return c;
  switch (m.kind) {
    case BankMsg::Transfer:
      if (a.open && !a.busy && a.bal >= m.amt && m.dst != self) {
        a.bal -= m.amt;
        a.busy = true;
        a.wait_tag = m.tag;
        a.wait_amt = m.amt;
        a.wait_dst = m.dst;
        send(c, self, m.dst, {BankMsg::Deposit, m.tag, m.amt});
      } else if (a.open && !a.busy) {
        send(c, self, kEnv, {BankMsg::Ret, m.tag, 0, 0, 0});
      } else {
        a.error = true;
      }
      break;
    case BankMsg::Deposit:
      if (a.open && a.bal + m.amt <= 8) {
        a.bal += m.amt;
        send(c, self, ch.first, {BankMsg::Ret, m.tag});
      } else {
        a.error = true;
      }
      break;
    case BankMsg::Ret:
      if (a.busy && a.wait_tag == m.tag) {
        a.busy = false;
        a.wait_tag = -1;
        a.wait_amt = 0;
        a.wait_dst = 0;
        send(c, self, kEnv, {BankMsg::Ret, m.tag, 0, 0, 1});
      } else {
        a.error = true;
      }
      break;
  }
  return c;
}

struct BankExploration {
  std::size_t configurations = 0;
  std::vector<BankConfig> terminals;
};

/// Account 0 transfers amt0 to account 1 on tag 0, account 1 transfers amt1
/// to account 0 on tag 1; both injected before the first delivery.
inline BankExploration explore_two_transfers(int bal0, int bal1, int amt0, int amt1) {
  BankConfig init;
  init.acc[0].bal = bal0;
  init.acc[1].bal = bal1;
  send(init, kEnv, 0, {BankMsg::Transfer, 0, amt0, 1});
  send(init, kEnv, 1, {BankMsg::Transfer, 1, amt1, 0});
  BankExploration r;
  std::set<std::string> seen{init.key()};
  std::vector<BankConfig> todo{init};
  while (!todo.empty()) {
    BankConfig c = todo.back();
    todo.pop_back();
    if (c.quiescent()) r.terminals.push_back(c);
    for (const auto& [ch, q] : c.chan) {
      if (q.empty()) continue;
      BankConfig n = deliver(c, ch);
      if (seen.insert(n.key()).second) todo.push_back(std::move(n));
    }
  }
  r.configurations = seen.size();
  return r;
}

}  // namespace oracle
