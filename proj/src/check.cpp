#include "iostd/check.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace iostd {

namespace {

bool label_satisfiable(const BehaviorDescription& beh, const DiagramState& s, const std::vector<Dimension>& attrs,
                       const ObjectId& self) {
  bool sat = false;
  for_each_assignment(attrs, [&](const VarAssignment& a) {
    sat = eval_pred(s.label, label_env(a, self));
    return !sat;
  });
  (void)beh;
  return sat;
}

class Gaps {
 public:
  Gaps(const BehaviorDescription& beh, const Universe& universe)
      : beh_(beh), universe_(universe), attrs_(dimensions(beh.attributes, beh, universe)) {}

  std::vector<Finding> run() {
    for (const auto& svc : beh_.services) {
      starts(svc);
      for (const auto& s : svc.states)
        if (!svc.is_initial(s.id)) waits(svc, s);
    }
    std::stable_sort(out_.begin(), out_.end(), [](const Finding& a, const Finding& b) {
      return std::tie(a.subject, a.code) < std::tie(b.subject, b.code);
    });
    return std::move(out_);
  }

 private:
  const ObjectId& self() const { return universe_.ids.front(); }

  std::optional<std::string> sender_of(const ServiceSTD& svc, bool start, const std::string& state) const {
    for (const auto& t : svc.transitions) {
      bool relevant = start ? svc.is_initial(t.from) : t.from == state;
      if (relevant && t.pattern.sender) return t.pattern.sender;
    }
    return std::nullopt;
  }

  void add_sender(std::vector<Dimension>& dims, const std::optional<std::string>& sender) const {
    if (!sender) return;
    Dimension d{*sender, {}};
    for (const auto& id : universe_.ids) d.values.emplace_back(id);
    dims.push_back(std::move(d));
  }

  // Evaluates pre under env, rebinding a transition's own sender binder name.
  bool pre_holds(const DiagramTransition& t, VarAssignment env, const std::optional<std::string>& sender) const {
    if (t.pattern.sender && sender && *t.pattern.sender != *sender) env.set(*t.pattern.sender, env.at(*sender));
    return eval_pred(t.pre, env);
  }

  void report(const std::string& code, const std::string& subject, std::size_t gaps, std::size_t total,
              const std::optional<VarAssignment>& witness, const std::string& what) {
    if (gaps == 0) return;
    Finding f;
    f.severity = Severity::Warning;
    f.code = code;
    f.subject = subject;
    f.message = what + " for " + std::to_string(gaps) + " of " + std::to_string(total) + " assignments";
    f.env = witness;
    if (witness) f.witness = to_string(*witness);
    out_.push_back(std::move(f));
  }

  void starts(const ServiceSTD& svc) {
    std::vector<Dimension> dims = attrs_;
    for (auto& d : dimensions(svc.params, beh_, universe_)) dims.push_back(std::move(d));
    auto sender = sender_of(svc, true, "");
    add_sender(dims, sender);

    std::vector<const DiagramState*> initial;
    for (const auto& id : svc.initial)
      if (const DiagramState* s = svc.find_state(id))
        if (label_satisfiable(beh_, *s, attrs_, self())) initial.push_back(s);
    if (initial.size() != svc.initial.size()) return;

    std::map<std::string, std::size_t> gaps, totals;
    std::map<std::string, VarAssignment> witness;
    std::size_t outside = 0, all = 0;
    std::optional<VarAssignment> outside_witness;
    VarAssignment locals;
    for (const auto& l : svc.locals) locals.set(l.name, default_value(l.type, beh_, universe_));

    for_each_assignment(dims, [&](const VarAssignment& a) {
      ++all;
      VarAssignment env = a.merged(locals);
      env.set("self", Value(self()));
      const DiagramState* at = nullptr;
      for (const DiagramState* s : initial)
        if (eval_pred(s->label, env)) at = s;
      if (!at) {
        ++outside;
        if (!outside_witness) outside_witness = a;
        return true;
      }
      ++totals[at->id];
      bool enabled = false;
      for (const auto& t : svc.transitions)
        if (t.from == at->id && t.pattern.name == svc.name && pre_holds(t, env, sender)) {
          enabled = true;
          break;
        }
      if (!enabled) {
        if (!gaps[at->id]++) witness[at->id] = a;
      }
      return true;
    });
    report("StartOutsideLabels", svc.name, outside, all, outside_witness,
           "call meets no initial state label");
    for (const DiagramState* s : initial)
      report("EnablednessGap", svc.name + "/" + s->id, gaps[s->id], totals[s->id],
             gaps[s->id] ? std::optional<VarAssignment>(witness[s->id]) : std::nullopt,
             "call enables no transition");
  }

  void waits(const ServiceSTD& svc, const DiagramState& s) {
    if (!label_satisfiable(beh_, s, attrs_, self())) return;
    std::vector<Dimension> dims = attrs_;
    for (auto& d : dimensions(svc.params, beh_, universe_)) dims.push_back(std::move(d));
    for (auto& d : dimensions(svc.locals, beh_, universe_)) dims.push_back(std::move(d));
    auto sender = sender_of(svc, false, s.id);
    add_sender(dims, sender);
    std::size_t gaps = 0, total = 0;
    std::optional<VarAssignment> witness;
    for_each_assignment(dims, [&](const VarAssignment& a) {
      VarAssignment env = a;
      env.set("self", Value(self()));
      if (!eval_pred(s.label, env)) return true;
      ++total;
      for (const auto& t : svc.transitions)
        if (t.from == s.id && t.pattern.is_return() && pre_holds(t, env, sender)) return true;
      if (!gaps++) witness = a;
      return true;
    });
    report("EnablednessGap", svc.name + "/" + s.id, gaps, total, witness, "ret enables no transition");
  }

  const BehaviorDescription& beh_;
  const Universe& universe_;
  std::vector<Dimension> attrs_;
  std::vector<Finding> out_;
};

}  // namespace

std::vector<Finding> enabledness_report(const BehaviorDescription& beh, const Universe& universe) {
  return Gaps(beh, universe).run();
}

// ---------------------------------------------------------------------------

std::vector<Finding> audit_trace(const Trace& trace) {
  std::vector<std::pair<std::int64_t, Finding>> out;
  auto add = [&](std::int64_t step, std::string code, std::string subject, std::string message,
                 std::string witness = "") {
    Finding f;
    f.code = std::move(code);
    f.subject = std::move(subject);
    f.message = std::move(message);
    f.witness = std::move(witness);
    out.emplace_back(step, std::move(f));
  };

  std::map<ObjectId, ObjectState> states;
  std::map<std::tuple<Tag, ObjectId, ObjectId>, int> open;
  auto sent = [&](std::int64_t step, const Message& m) {
    if (m.kind == MessageKind::SequCall) {
      ++open[{m.tt, m.snd, m.rec}];
    } else if (m.kind == MessageKind::Ret) {
      auto it = open.find({m.tt, m.rec, m.snd});
      if (it == open.end() || it->second == 0)
        add(step, "UnmatchedReturn", "step " + std::to_string(step), "ret answers no open sequential call",
            to_string(m));
      else
        --it->second;
    }
  };

  const auto& ev = trace.events;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const TraceEvent& e = ev[i];
    switch (e.kind) {
      case EventKind::Init:
        if (e.state) states[e.object] = *e.state;
        break;
      case EventKind::Inject:
        sent(e.step, e.msg);
        break;
      case EventKind::Deliver: {
        const std::string subject = "step " + std::to_string(e.step);
        StepResult r;
        r.chaotic = e.chaotic;
        bool have_state = false;
        std::size_t j = i + 1;
        for (; j < ev.size() && ev[j].step == e.step && !have_state; ++j) {
          if (ev[j].kind == EventKind::Emit) {
            r.out.push_back(ev[j].msg);
          } else if (ev[j].kind == EventKind::State && ev[j].object == e.msg.rec && ev[j].state) {
            r.successor = *ev[j].state;
            have_state = true;
          } else {
            break;
          }
        }
        auto src = states.find(e.msg.rec);
        if (!have_state || src == states.end()) {
          add(e.step, "MalformedTrace", subject, "delivery without source or successor state", to_string(e.msg));
          break;
        }
        for (const auto& v : check_step_legal(src->second, e.msg, r).violations)
          add(e.step, std::string(rule_name(v.rule)), subject,
              "rule (" + std::string(rule_letter(v.rule)) + "): " + v.detail, to_string(e.msg));
        if (!std::includes(src->second.pool.begin(), src->second.pool.end(), r.successor.pool.begin(),
                           r.successor.pool.end()))
          add(e.step, "PoolGrew", subject, "tag pool of " + e.msg.rec.name + " gained tags");
        states[e.msg.rec] = r.successor;
        for (const auto& m : r.out) sent(e.step, m);
        i = j - 1;
        break;
      }
      case EventKind::Emit:
        add(e.step, "MalformedTrace", "step " + std::to_string(e.step), "emit outside a delivery", to_string(e.msg));
        break;
      case EventKind::State:
        add(e.step, "MalformedTrace", "step " + std::to_string(e.step), "state outside a delivery");
        break;
      case EventKind::Abort:
        break;
    }
  }

  std::map<std::string, int> declared;
  for (const auto& w : trace.warnings) {
    for (std::string prefix : {"LeakedInvocation ", "PendingCall "})
      if (w.rfind(prefix, 0) == 0) ++declared[w.substr(prefix.size())];
  }
  const std::int64_t last = ev.empty() ? 0 : ev.back().step;
  for (const auto& [key, n] : open) {
    const auto& [tag, caller, callee] = key;
    const std::string what = to_string(tag) + " " + caller.name + "->" + callee.name;
    for (int k = 0; k < n; ++k) {
      if (declared[what] > 0) {
        --declared[what];
        continue;
      }
      add(last, "MissingReturn", what, "sequential call never answered and not declared leaked");
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.first, a.second.code) < std::tie(b.first, b.second.code);
  });
  std::vector<Finding> r;
  for (auto& [s, f] : out) r.push_back(std::move(f));
  return r;
}

// ---------------------------------------------------------------------------

std::string attribute_projection(const Configuration& cfg) {
  std::string r;
  for (const auto& [id, e] : cfg.objects) {
    if (!r.empty()) r += "; ";
    r += id.name + (e.state.error ? " ERROR " : " ") + to_string(e.state.at);
  }
  return r;
}

SerializabilityResult serializability_check(const Configuration& cfg, const std::vector<Message>& injections,
                                            std::size_t bound, ChaosPolicy policy, const TraceHeader& header) {
  SerializabilityResult res;

  std::vector<std::size_t> order(injections.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  do {
    std::map<std::string, Configuration> current{{cfg.digest(), cfg}};
    for (std::size_t idx : order) {
      std::map<std::string, Configuration> next;
      for (const auto& [d, c] : current) {
        Script one;
        one.injections.push_back({0, injections[idx]});
        ExplorationReport rep = explore(c, one, bound, policy);
        for (std::size_t t : rep.terminals) next.emplace(rep.nodes[t].digest, rep.nodes[t].config);
      }
      current = std::move(next);
    }
    for (const auto& [d, c] : current) res.serial_outcomes.insert(attribute_projection(c));
  } while (std::next_permutation(order.begin(), order.end()));

  Script all;
  for (const auto& m : injections) all.injections.push_back({0, m});
  ExplorationReport rep = explore(cfg, all, bound, policy);
  res.interleaved_terminals = rep.terminals.size();
  for (std::size_t t : rep.terminals) {
    const std::string p = attribute_projection(rep.nodes[t].config);
    res.interleaved_outcomes.insert(p);
    if (res.serial_outcomes.count(p)) continue;
    Finding f;
    f.code = "NonSerializable";
    f.subject = "terminal " + std::to_string(t);
    f.message = "terminal attribute state matches no serial order of the injections";
    f.witness = p;
    f.attachment = trace_to(rep, t, policy, header).text();
    res.findings.push_back(std::move(f));
  }
  return res;
}

}  // namespace iostd
