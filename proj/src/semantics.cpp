#include "iostd/semantics.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace iostd {

std::string_view to_string(ChaosPolicy p) { return p == ChaosPolicy::Reject ? "reject" : "havoc"; }

std::optional<ChaosPolicy> parse_policy(std::string_view s) {
  if (s == "reject") return ChaosPolicy::Reject;
  if (s == "havoc") return ChaosPolicy::Havoc;
  return std::nullopt;
}

std::set<Tag> make_pool(const ObjectId& owner, std::int64_t size) {
  std::set<Tag> r;
  for (std::int64_t i = 0; i < size; ++i) r.insert(Tag{owner.name, i});
  return r;
}

std::vector<MachineState> initial_states(const BehaviorDescription& beh, const ObjectId& id,
                                         const std::set<Tag>& pool, const Universe& universe) {
  std::vector<MachineState> r;
  for_each_assignment(dimensions(beh.attributes, beh, universe), [&](const VarAssignment& a) {
    if (eval_pred(beh.init, label_env(a, id))) {
      MachineState s;
      s.self = id;
      s.at = a;
      s.pool = pool;
      r.push_back(std::move(s));
    }
    return true;
  });
  if (r.empty()) throw Error(ErrorCode::EmptyInitialSet, "init of " + beh.name + " is unsatisfiable");
  return r;
}

namespace {

struct Candidate {
  const DiagramTransition* tr;
  VarAssignment env;
};

class Stepper {
 public:
  Stepper(const BehaviorDescription& beh, const MachineState& s, const Message& m, ChaosPolicy policy,
          const Universe& universe)
      : beh_(beh), s_(s), m_(m), policy_(policy), universe_(universe) {}

  std::vector<StepResult> run() {
    if (m_.rec != s_.self)
      throw Error(ErrorCode::IllegalInput, "message for " + m_.rec.name + " delivered to " + s_.self.name);
    if (s_.error) return {StepResult{s_, {}, false}};
    const InvocationStack& stack = s_.stack(m_.tt);
    if (m_.kind == MessageKind::Ret) {
      if (stack.empty())
        throw Error(ErrorCode::IllegalInput, "ret on " + to_string(m_.tt) + " without a suspended invocation");
      resume(stack);
    } else {
      if (m_.kind == MessageKind::ConcCall && !stack.empty())
        throw Error(ErrorCode::IllegalInput, "concurrent call on busy tag " + to_string(m_.tt));
      start(stack);
    }
    if (results_.empty()) chaos();
    std::vector<std::pair<std::string, StepResult>> keyed;
    for (auto& r : results_) keyed.emplace_back(to_string(r.successor) + " " + to_string(r.out), std::move(r));
    std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    keyed.erase(std::unique(keyed.begin(), keyed.end(),
                            [](const auto& a, const auto& b) { return a.first == b.first; }),
                keyed.end());
    std::vector<StepResult> out;
    for (auto& [k, r] : keyed) out.push_back(std::move(r));
    return out;
  }

 private:
  std::optional<VarAssignment> match(const Pattern& p) const {
    try {
      return match_pattern(p, m_);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ArityMismatch) throw;
      throw Error(ErrorCode::IllegalInput, std::string(e.what()) + " in " + to_string(m_));
    }
  }

  bool excluded(const std::string& service) const {
    for (const auto& [tag, st] : s_.stacks)
      for (const auto& f : st.frames()) {
        const ServiceSTD* svc = beh_.find_service(f.pc.service);
        const DiagramState* ds = svc ? svc->find_state(f.pc.state) : nullptr;
        if (ds && ds->excludes(service)) return true;
      }
    return false;
  }

  void start(const InvocationStack& stack) {
    const ServiceSTD* svc = beh_.find_service(m_.mn);
    if (!svc || !accepts(svc->callable, m_.kind) || excluded(svc->name)) return;
    VarAssignment locals;
    for (const auto& l : svc->locals) locals.set(l.name, default_value(l.type, beh_, universe_));
    bool args_checked = false;
    for (const auto& t : svc->transitions) {
      if (!svc->is_initial(t.from)) continue;
      auto binding = match(t.pattern);
      if (!binding) continue;
      if (!args_checked) {
        std::set<std::string> params;
        for (const auto& p : svc->params) params.insert(p.name);
        if (params != m_.ar.names())
          throw Error(ErrorCode::IllegalInput, "arguments of " + to_string(m_) + " do not fit " + svc->name);
        for (const auto& p : svc->params)
          if (!in_domain(m_.ar.at(p.name), p.type, beh_, universe_)) return;
        args_checked = true;
      }
      VarAssignment env = label_env(s_.at, s_.self).merged(locals).merged(*binding);
      ServiceInvocation frame{{svc->name, t.to}, m_.ar, {}, m_.snd, m_.kind};
      fire(*svc, t, env, stack, frame, nullptr);
    }
  }

  void resume(const InvocationStack& stack) {
    const ServiceInvocation& top = stack.top();
    const ServiceSTD* svc = beh_.find_service(top.pc.service);
    if (!svc) return;
    for (const auto& t : svc->transitions) {
      if (t.from != top.pc.state || !t.pattern.is_return()) continue;
      auto binding = match(t.pattern);
      if (!binding) continue;
      VarAssignment env = label_env(s_.at, s_.self).merged(top.env()).merged(*binding);
      ServiceInvocation frame{{svc->name, t.to}, top.args, {}, top.caller, top.invoked_as};
      fire(*svc, t, env, stack, frame, &top);
    }
  }

  void fire(const ServiceSTD& svc, const DiagramTransition& t, const VarAssignment& env,
            const InvocationStack& stack, ServiceInvocation frame, const ServiceInvocation* top) {
    const DiagramState* from = svc.find_state(t.from);
    const DiagramState* to = svc.find_state(t.to);
    if (!from || !to) return;
    if (!eval_pred(from->label, env) || !eval_pred(t.pre, env)) return;
    const bool concurrent = frame.invoked_as == MessageKind::ConcCall;

    for_each_assignment(successor_dimensions(beh_, svc, t, universe_), [&](const VarAssignment& primed) {
      VarAssignment full = frame_env(beh_, svc, env, primed);
      if (!eval_pred(t.post, full)) return true;
      VarAssignment at = attributes_after(beh_, full);
      if (!eval_pred(to->label, label_env(at, s_.self))) return true;

      MachineState succ = s_;
      succ.at = at;
      std::vector<Message> out;
      for (const auto& o : t.outputs) {
        if (o.kind == MessageKind::Ret && concurrent) continue;
        VarAssignment ar;
        for (const auto& [name, e] : o.args) ar.set(name, eval_expr(e, full));
        if (o.kind == MessageKind::Ret) {
          out.push_back(make_return(s_.self, frame.caller, m_.tt, std::move(ar)));
          continue;
        }
        ObjectId target = eval_expr(*o.target, full).as_id();
        Tag tag = m_.tt;
        if (o.kind == MessageKind::ConcCall) std::tie(tag, succ) = alloc_tag(succ);
        out.push_back(make_call(s_.self, std::move(target), tag, o.service, std::move(ar), o.kind));
      }

      frame.locals = locals_after(svc, full);
      const bool suspends = !out.empty() && out.back().kind == MessageKind::SequCall;
      InvocationStack next = stack;
      if (!top) {
        if (suspends) next = stack.push(frame);
      } else if (suspends) {
        next = stack.pop().push(frame);
      } else if (!out.empty() && out.back().kind == MessageKind::Ret) {
        next = stack.pop();
      } else {
        next = stack.pop().push(frame);
      }
      succ.set_stack(m_.tt, std::move(next));
      results_.push_back(StepResult{std::move(succ), std::move(out), false});
      return true;
    });
  }

  void chaos() {
    if (policy_ == ChaosPolicy::Reject) {
      MachineState trap = s_;
      trap.error = true;
      results_.push_back(StepResult{std::move(trap), {}, false});
      return;
    }
    for_each_assignment(dimensions(beh_.attributes, beh_, universe_), [&](const VarAssignment& a) {
      MachineState succ = s_;
      succ.at = a;
      results_.push_back(StepResult{std::move(succ), {}, true});
      return true;
    });
  }

  const BehaviorDescription& beh_;
  const MachineState& s_;
  const Message& m_;
  ChaosPolicy policy_;
  const Universe& universe_;
  std::vector<StepResult> results_;
};

}  // namespace

std::vector<StepResult> step(const BehaviorDescription& beh, const MachineState& s, const Message& m,
                             ChaosPolicy policy, const Universe& universe) {
  return Stepper(beh, s, m, policy, universe).run();
}

// ---------------------------------------------------------------------------

std::vector<Message> inputs_at(const BehaviorDescription& beh, const MachineState& s,
                               const Alphabet& alphabet, const Universe& universe) {
  std::vector<Message> r;
  std::optional<Tag> free;
  for (std::int64_t i = 0; i < alphabet.external_tags && !free; ++i) {
    Tag t{alphabet.tag_owner, i};
    if (s.stack(t).empty()) free = t;
  }
  if (free) {
    for (const auto& svc : beh.services) {
      if (!alphabet.services.empty() &&
          std::find(alphabet.services.begin(), alphabet.services.end(), svc.name) == alphabet.services.end())
        continue;
      for (auto kind : alphabet.kinds)
        for (const auto& snd : alphabet.senders)
          for_each_assignment(dimensions(svc.params, beh, universe), [&](const VarAssignment& a) {
            r.push_back(make_call(snd, s.self, *free, svc.name, a, kind));
            return true;
          });
    }
  }
  for (const auto& [tag, stack] : s.stacks) {
    if (stack.empty()) continue;
    const ServiceInvocation& top = stack.top();
    const ServiceSTD* svc = beh.find_service(top.pc.service);
    if (!svc) continue;
    std::vector<VarDecl> binders;
    for (const auto& t : svc->transitions) {
      if (t.from != top.pc.state || !t.pattern.is_return()) continue;
      for (const auto& b : t.pattern.binders)
        if (const VarDecl* d = svc->find_local(b)) binders.push_back(*d);
      break;
    }
    for (const auto& snd : alphabet.senders)
      for_each_assignment(dimensions(binders, beh, universe), [&](const VarAssignment& a) {
        r.push_back(make_return(snd, s.self, tag, a));
        return true;
      });
  }
  return r;
}

std::string ExplicitMachine::text() const {
  std::string r = "# iostd-machine 1\n";
  for (std::size_t i = 0; i < initial; ++i) r += "init | " + to_string(states[i]) + "\n";
  for (const auto& t : transitions)
    r += to_string(states[t.from]) + " | " + to_string(t.input) + " | " + to_string(states[t.to]) + " | " +
         to_string(t.out) + "\n";
  if (truncated) r += "# truncated\n";
  return r;
}

ExplicitMachine enumerate_machine(const BehaviorDescription& beh, const ObjectId& id,
                                  const std::set<Tag>& pool, std::size_t bound, ChaosPolicy policy,
                                  const Alphabet& alphabet, const Universe& universe) {
  ExplicitMachine m;
  std::map<std::string, std::size_t> index;
  for (auto& s : initial_states(beh, id, pool, universe)) {
    index.emplace(to_string(s), m.states.size());
    m.states.push_back(std::move(s));
  }
  m.initial = m.states.size();
  for (std::size_t i = 0; i < m.states.size(); ++i) {
    const MachineState src = m.states[i];
    for (const auto& input : inputs_at(beh, src, alphabet, universe)) {
      for (auto& r : step(beh, src, input, policy, universe)) {
        std::string key = to_string(r.successor);
        auto it = index.find(key);
        if (it == index.end()) {
          if (m.states.size() >= bound) {
            m.truncated = true;
            throw MachineBudgetExceeded(std::move(m));
          }
          it = index.emplace(key, m.states.size()).first;
          m.states.push_back(std::move(r.successor));
        }
        m.transitions.push_back({i, input, it->second, std::move(r.out)});
      }
    }
  }
  return m;
}

}  // namespace iostd
