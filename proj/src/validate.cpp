#include "iostd/validate.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace iostd {

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(findings.begin(), findings.end(),
                     [&](const Finding& f) { return f.code == code; });
}

namespace {

struct Keyed {
  std::string service;
  int location_kind;  // 0 behavior/service, 1 state, 2 transition
  std::size_t index;
  Finding finding;
};

std::string transition_subject(const ServiceSTD& svc, std::size_t k) {
  const auto& t = svc.transitions[k];
  return svc.name + "/" + t.from + "->" + t.to + "#" + std::to_string(k);
}

class Validator {
 public:
  Validator(const BehaviorDescription& beh, const Universe& universe)
      : beh_(beh), universe_(universe), attr_dims_(dimensions(beh.attributes, beh, universe)) {}

  ValidationReport run() {
    check_init();
    for (const auto& svc : beh_.services) {
      check_structure(svc);
      check_labels(svc);
      for (std::size_t k = 0; k < svc.transitions.size(); ++k) check_post(svc, k);
    }
    std::stable_sort(out_.begin(), out_.end(), [](const Keyed& a, const Keyed& b) {
      return std::tie(a.service, a.location_kind, a.index, a.finding.code) <
             std::tie(b.service, b.location_kind, b.index, b.finding.code);
    });
    ValidationReport r;
    for (auto& k : out_) r.findings.push_back(std::move(k.finding));
    return r;
  }

 private:
  const ObjectId& self() const { return universe_.ids.front(); }

  void add(const std::string& service, int kind, std::size_t index, std::string code,
           std::string subject, std::string message, std::optional<VarAssignment> env = {},
           Severity sev = Severity::Error) {
    Finding f;
    f.severity = sev;
    f.code = std::move(code);
    f.subject = std::move(subject);
    f.message = std::move(message);
    if (env) f.witness = to_string(*env);
    f.env = std::move(env);
    out_.push_back({service, kind, index, std::move(f)});
  }

  // Evaluation errors (type or overflow) are findings rather than crashes.
  bool guarded(const std::function<bool()>& fn, const std::string& service, int kind,
               std::size_t index, const std::string& subject) {
    try {
      return fn();
    } catch (const Error& e) {
      add(service, kind, index, "EvaluationError", subject, e.what());
      return false;
    }
  }

  void check_init() {
    bool sat = false;
    guarded(
        [&] {
          for_each_assignment(attr_dims_, [&](const VarAssignment& a) {
            sat = eval_pred(beh_.init, label_env(a, self()));
            return !sat;
          });
          return true;
        },
        "", 0, 0, beh_.name);
    if (!sat)
      add("", 0, 0, "UnsatisfiableInit", beh_.name, "init predicate has no satisfying attribute assignment");
  }

  void check_structure(const ServiceSTD& svc) {
    const std::string& n = svc.name;
    if (svc.initial.empty()) add(n, 0, 0, "EmptyInitialStates", n, "service has no initial diagram state");

    std::map<std::string, std::vector<std::size_t>> leaving;
    std::set<std::string> targeted;
    for (std::size_t k = 0; k < svc.transitions.size(); ++k) {
      const auto& t = svc.transitions[k];
      leaving[t.from].push_back(k);
      targeted.insert(t.to);
      const std::string subj = transition_subject(svc, k);
      const bool from_initial = svc.is_initial(t.from);
      const bool to_initial = svc.is_initial(t.to);

      if (from_initial) {
        if (t.pattern.name != n)
          add(n, 2, k, "ForeignStartPattern", subj,
              "transition leaving an initial state must match '" + n + "', not '" + t.pattern.name + "'");
        std::set<std::string> params, binders(t.pattern.binders.begin(), t.pattern.binders.end());
        for (const auto& p : svc.params) params.insert(p.name);
        if (t.pattern.name == n && params != binders)
          add(n, 2, k, "PatternParamMismatch", subj, "start pattern must bind exactly the parameters");
      } else {
        if (!t.pattern.is_return())
          add(n, 2, k, "NonRetAtWaitState", subj,
              "wait state '" + t.from + "' may only be left on a ret input");
        for (const auto& b : t.pattern.binders)
          if (!svc.find_local(b))
            add(n, 2, k, "RetBinderNotLocal", subj, "ret binder '" + b + "' is not a declared local");
      }

      for (std::size_t i = 0; i + 1 < t.outputs.size(); ++i) {
        if (t.outputs[i].kind == MessageKind::SequCall)
          add(n, 2, k, "MisplacedSequentialOutput", subj,
              "sequential output " + std::to_string(i) + " is followed by further output");
        if (t.outputs[i].kind == MessageKind::Ret)
          add(n, 2, k, "MisplacedReturn", subj, "ret output " + std::to_string(i) + " is not last");
      }
      const MessageKind last_kind =
          t.outputs.empty() ? MessageKind::ConcCall : t.outputs.back().kind;
      if (!to_initial && last_kind != MessageKind::SequCall)
        add(n, 2, k, "SuspendWithoutCall", subj,
            "transition into wait state '" + t.to + "' must end with a sequential call");
      if (to_initial && last_kind == MessageKind::SequCall)
        add(n, 2, k, "CallWithoutSuspend", subj,
            "sequential call must suspend in a wait state, but '" + t.to + "' is initial");
      if (svc.callable != Callable::Conc && to_initial && last_kind != MessageKind::Ret)
        add(n, 2, k, "MissingReturn", subj, "sequentially callable service completes without ret");
      if (svc.callable == Callable::Conc)
        for (const auto& o : t.outputs)
          if (o.kind == MessageKind::Ret)
            add(n, 2, k, "RetInConcurrentService", subj, "concurrent-only service emits ret");
    }

    for (std::size_t i = 0; i < svc.states.size(); ++i) {
      const auto& s = svc.states[i];
      const std::string subj = n + "/" + s.id;
      for (const auto& ex : s.exclusions)
        if (!beh_.find_service(ex))
          add(n, 1, i, "UnknownExclusionService", subj, "exclusion names undeclared service '" + ex + "'");
      if (svc.is_initial(s.id)) continue;
      if (leaving[s.id].empty())
        add(n, 1, i, "NoResumeTransition", subj, "wait state has no ret transition");
      if (!targeted.count(s.id))
        add(n, 1, i, "UnreachableState", subj, "wait state is never entered", {}, Severity::Warning);
      std::optional<std::set<std::string>> shape;
      for (auto k : leaving[s.id]) {
        const auto& p = svc.transitions[k].pattern;
        std::set<std::string> b(p.binders.begin(), p.binders.end());
        if (!p.is_return()) continue;
        if (!shape)
          shape = b;
        else if (*shape != b)
          add(n, 1, i, "InconsistentReturnPattern", subj, "ret patterns bind different names");
      }
    }
  }

  void check_labels(const ServiceSTD& svc) {
    std::vector<bool> sat(svc.states.size(), false);
    for (std::size_t i = 0; i < svc.states.size(); ++i) {
      const auto& s = svc.states[i];
      const std::string subj = svc.name + "/" + s.id;
      guarded(
          [&] {
            for_each_assignment(attr_dims_, [&](const VarAssignment& a) {
              sat[i] = eval_pred(s.label, label_env(a, self()));
              return !sat[i];
            });
            return true;
          },
          svc.name, 1, i, subj);
      if (!sat[i])
        add(svc.name, 1, i, "UnsatisfiableStateLabel", subj, "state label is unsatisfiable over the declared domains");
    }
    for (std::size_t i = 0; i < svc.states.size(); ++i) {
      for (std::size_t j = i + 1; j < svc.states.size(); ++j) {
        if (!sat[i] || !sat[j]) continue;
        std::optional<VarAssignment> witness;
        const std::string subj = svc.name + "/" + svc.states[i].id + "," + svc.states[j].id;
        guarded(
            [&] {
              for_each_assignment(attr_dims_, [&](const VarAssignment& a) {
                VarAssignment env = label_env(a, self());
                if (eval_pred(svc.states[i].label, env) && eval_pred(svc.states[j].label, env)) witness = a;
                return !witness;
              });
              return true;
            },
            svc.name, 1, i, subj);
        if (witness)
          add(svc.name, 1, i, "OverlappingStateLabels", subj,
              "labels of '" + svc.states[i].id + "' and '" + svc.states[j].id + "' overlap", witness);
      }
    }
  }

  void check_post(const ServiceSTD& svc, std::size_t k) {
    const auto& t = svc.transitions[k];
    const DiagramState* from = svc.find_state(t.from);
    const DiagramState* to = svc.find_state(t.to);
    if (!from || !to) return;
    const bool start = svc.is_initial(t.from);
    const std::string subj = transition_subject(svc, k);

    std::vector<Dimension> dims = attr_dims_;
    for (auto& d : dimensions(svc.params, beh_, universe_)) dims.push_back(std::move(d));
    if (!start)
      for (auto& d : dimensions(svc.locals, beh_, universe_)) dims.push_back(std::move(d));
    if (t.pattern.sender) {
      Dimension d{*t.pattern.sender, {}};
      for (const auto& id : universe_.ids) d.values.emplace_back(id);
      dims.push_back(std::move(d));
    }
    const auto succ_dims = successor_dimensions(beh_, svc, t, universe_);

    std::optional<VarAssignment> no_post, no_label;
    guarded(
        [&] {
          for_each_assignment(dims, [&](const VarAssignment& a) {
            VarAssignment env = a;
            env.set("self", Value(self()));
            if (start)
              for (const auto& l : svc.locals) env.set(l.name, default_value(l.type, beh_, universe_));
            if (!eval_pred(from->label, env) || !eval_pred(t.pre, env)) return true;
            bool post_ok = false, label_ok = false;
            for_each_assignment(succ_dims, [&](const VarAssignment& primed) {
              VarAssignment full = frame_env(beh_, svc, env, primed);
              if (!eval_pred(t.post, full)) return true;
              post_ok = true;
              label_ok = eval_pred(to->label, label_env(attributes_after(beh_, full), self()));
              return !label_ok;
            });
            if (!post_ok && !no_post) no_post = env;
            if (post_ok && !label_ok && !no_label) no_label = env;
            return !(no_post && no_label);
          });
          return true;
        },
        svc.name, 2, k, subj);
    if (no_post)
      add(svc.name, 2, k, "UnsatisfiablePost", subj,
          "postcondition unsatisfiable although label and precondition hold", no_post);
    if (no_label)
      add(svc.name, 2, k, "TargetLabelViolated", subj,
          "no successor satisfying the postcondition satisfies the label of '" + t.to + "'", no_label);
  }

  const BehaviorDescription& beh_;
  const Universe& universe_;
  std::vector<Dimension> attr_dims_;
  std::vector<Keyed> out_;
};

}  // namespace

ValidationReport validate(const BehaviorDescription& beh, const Universe& universe) {
  return Validator(beh, universe).run();
}

}  // namespace iostd
