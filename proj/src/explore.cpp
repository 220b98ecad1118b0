#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include "iostd/sim.hpp"

namespace iostd {

namespace {

std::vector<StepResult> channel_step(const Configuration& cfg, const ChannelKey& key, ChaosPolicy policy) {
  const Message& head = cfg.channels.at(key).front();
  const ObjectEntry& obj = cfg.objects.at(head.rec);
  auto results = step(*obj.beh, obj.state, head, policy, cfg.universe());
  for (const auto& r : results) {
    LegalityReport legal = check_step_legal(obj.state, head, r);
    if (!legal.legal())
      throw std::logic_error("illegal step (" + std::string(rule_letter(legal.violations[0].rule)) +
                             "): " + legal.violations[0].detail);
    for (const auto& m : r.out)
      if (m.rec != cfg.env && !cfg.objects.count(m.rec))
        throw Error(ErrorCode::IllegalInput, "output to unknown object " + m.rec.name);
  }
  return results;
}

Configuration channel_apply(const Configuration& cfg, const ChannelKey& key, const StepResult& r) {
  Configuration next = cfg;
  auto it = next.channels.find(key);
  const ObjectId rec = it->second.front().rec;
  it->second.pop_front();
  if (it->second.empty()) next.channels.erase(it);
  next.objects.at(rec).state = r.successor;
  for (const auto& m : r.out) next.enqueue(m);
  return next;
}

class ConfigResolver {
 public:
  ConfigResolver(const Configuration& cfg, const ObjectState* only) : cfg_(cfg), only_(only) {}

  Value operator()(const std::string& fn, const std::vector<std::string>& args) const {
    std::int64_t n = 0;
    auto each_state = [&](const std::function<void(const ObjectState&)>& f) {
      if (only_) {
        f(*only_);
        return;
      }
      for (const auto& [id, e] : cfg_.objects) f(e.state);
    };
    if (fn == "sum") {
      each_state([&](const ObjectState& s) {
        if (const Value* v = s.at.find(args.at(0))) n += v->as_int();
      });
    } else if (fn == "stacked") {
      const std::string& pc = args.at(0);
      each_state([&](const ObjectState& s) {
        for (const auto& [tag, st] : s.stacks)
          for (const auto& f : st.frames())
            if (to_string(f.pc) == pc) ++n;
      });
    } else if (fn == "errors") {
      each_state([&](const ObjectState& s) { n += s.error ? 1 : 0; });
    } else {
      throw Error(ErrorCode::UnboundVariable, "unknown builtin " + fn);
    }
    return Value(n);
  }

 private:
  const Configuration& cfg_;
  const ObjectState* only_;
};

}  // namespace

bool holds(const Invariant& inv, const Configuration& cfg) {
  if (!inv.each) return eval_pred(inv.pred, VarAssignment{}, ConfigResolver(cfg, nullptr));
  std::set<std::string> plain, primed;
  collect_vars(inv.pred, plain, primed);
  for (const auto& [id, e] : cfg.objects) {
    VarAssignment env = label_env(e.state.at, id);
    bool applies = std::all_of(plain.begin(), plain.end(), [&](const std::string& n) { return env.contains(n); });
    if (!applies) continue;
    if (!eval_pred(inv.pred, env, ConfigResolver(cfg, &e.state))) return false;
  }
  return true;
}

std::size_t ExplorationReport::error_configurations() const {
  std::size_t n = 0;
  for (const auto& node : nodes)
    n += std::any_of(node.config.objects.begin(), node.config.objects.end(),
                     [](const auto& kv) { return kv.second.state.error; });
  return n;
}

std::string ExplorationReport::text() const {
  std::ostringstream o;
  o << "# iostd-explore 1\n";
  o << "configurations " << configurations() << "\n";
  o << "transitions " << transitions << "\n";
  o << "terminal " << terminals.size() << "\n";
  o << "errors " << error_configurations() << "\n";
  o << "aborts " << aborts << "\n";
  o << "violations " << violations.size() << "\n";
  if (truncated) o << "truncated\n";
  for (const auto& v : violations)
    o << "violation " << v.invariant << " configurations " << v.count << " depth " << nodes[v.node].depth << "\n";
  for (const auto& v : violations) {
    o << "--- witness " << v.invariant << "\n";
    o << v.witness.text();
    o << "--- end\n";
  }
  return o.str();
}

Trace trace_to(const ExplorationReport& report, std::size_t node, ChaosPolicy policy, const TraceHeader& header) {
  std::vector<std::size_t> path;
  for (std::optional<std::size_t> n = node; n && *n != 0; n = report.nodes[*n].parent) path.push_back(*n);
  std::reverse(path.begin(), path.end());
  Simulator sim(report.start, policy, header);
  for (const auto& m : report.injected) sim.inject(m);
  for (std::size_t n : path) {
    const ExploreNode& x = report.nodes[n];
    sim.deliver(x.via, sim.candidates(x.via), x.choice);
  }
  return sim.finish(sim.config().quiescent() ? EndReason::Quiescent : EndReason::Stopped);
}

ExplorationReport explore(const Configuration& cfg, const Script& script, std::size_t bound, ChaosPolicy policy,
                          const std::vector<Invariant>& invariants, const TraceHeader& header) {
  ExplorationReport rep;
  rep.start = cfg;
  Configuration init = cfg;
  for (const auto& inj : script.injections) {
    if (!cfg.objects.count(inj.msg.rec))
      throw Error(ErrorCode::IllegalInput, "injection to unknown object " + inj.msg.rec.name);
    rep.injected.push_back(inj.msg);
    init.enqueue(inj.msg);
  }

  std::map<std::string, std::size_t> index;
  std::map<std::string, std::size_t> first_violation;
  std::map<std::string, std::size_t> violation_count;

  auto finish = [&]() {
    for (const auto& inv : invariants) {
      auto it = first_violation.find(inv.name);
      if (it == first_violation.end()) continue;
      rep.violations.push_back({inv.name, it->second, violation_count[inv.name],
                                trace_to(rep, it->second, policy, header)});
    }
  };

  if (bound == 0) {
    rep.truncated = true;
    throw ExploreBudgetExceeded(std::move(rep));
  }
  {
    ExploreNode root;
    root.digest = init.digest();
    root.config = std::move(init);
    index.emplace(root.digest, 0);
    rep.nodes.push_back(std::move(root));
  }

  for (std::size_t i = 0; i < rep.nodes.size(); ++i) {
    const Configuration here = rep.nodes[i].config;
    const bool terminal = here.quiescent();
    rep.nodes[i].terminal = terminal;
    if (terminal) rep.terminals.push_back(i);
    for (const auto& inv : invariants) {
      if (inv.terminal_only && !terminal) continue;
      if (holds(inv, here)) continue;
      first_violation.emplace(inv.name, i);
      ++violation_count[inv.name];
    }

    std::vector<ChannelKey> keys;
    for (const auto& [key, q] : here.channels) keys.push_back(key);
    for (const auto& key : keys) {
      std::vector<StepResult> results;
      try {
        results = channel_step(here, key, policy);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::IllegalInput && e.code() != ErrorCode::TagPoolExhausted) throw;
        ++rep.aborts;
        continue;
      }
      for (std::size_t c = 0; c < results.size(); ++c) {
        Configuration next = channel_apply(here, key, results[c]);
        ++rep.transitions;
        std::string d = next.digest();
        if (index.count(d)) continue;
        if (rep.nodes.size() >= bound) {
          rep.truncated = true;
          finish();
          throw ExploreBudgetExceeded(std::move(rep));
        }
        index.emplace(d, rep.nodes.size());
        ExploreNode n;
        n.config = std::move(next);
        n.digest = std::move(d);
        n.parent = i;
        n.via = key;
        n.choice = c;
        n.depth = rep.nodes[i].depth + 1;
        rep.nodes.push_back(std::move(n));
      }
    }
  }
  finish();
  return rep;
}

}  // namespace iostd
