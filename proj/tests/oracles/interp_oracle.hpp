#pragma once

// Direct recursive interpreter for behaviors whose calls are all sequential:
// a call runs the callee's diagram to its ret, nested calls are plain C++
// recursion. Uses only the expression evaluator; no machine states, stacks,
// tags, or channels. Logs the attributes of the acting object after every
// transition.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "iostd/spec.hpp"

namespace oracle {

using iostd::BehaviorDescription;
using iostd::Value;
using iostd::VarAssignment;

struct InterpObject {
  const BehaviorDescription* beh = nullptr;
  VarAssignment at;
};

class Interpreter {
 public:
  Interpreter(std::map<std::string, InterpObject> objects, std::vector<std::string> universe)
      : objects_(std::move(objects)), universe_(std::move(universe)) {}

  std::vector<std::pair<std::string, VarAssignment>> log;

  VarAssignment call(const std::string& caller, const std::string& obj, const std::string& service,
                     const VarAssignment& args) {
    InterpObject& o = objects_.at(obj);
    const BehaviorDescription& beh = *o.beh;
    const iostd::ServiceSTD* svc = beh.find_service(service);
    if (!svc) throw std::runtime_error("no service " + service);

    VarAssignment locals;
    for (const auto& l : svc->locals) locals.set(l.name, values(l.type, beh).front());

    std::string state;
    for (const auto& id : svc->initial)
      if (iostd::eval_pred(svc->find_state(id)->label, with_self(o.at, obj))) {
        if (!state.empty()) throw std::runtime_error("two initial labels hold");
        state = id;
      }
    if (state.empty()) throw std::runtime_error("no initial label holds");

    bool starting = true;
    VarAssignment input = args;
    std::string sender = caller;
    while (true) {
      const iostd::DiagramTransition* fired = nullptr;
      VarAssignment env;
      for (const auto& t : svc->transitions) {
        if (t.from != state) continue;
        if (starting ? t.pattern.name != service : !t.pattern.is_return()) continue;
        VarAssignment e = with_self(o.at, obj).merged(args).merged(locals);
        for (const auto& b : t.pattern.binders) e.set(b, input.at(b));
        if (t.pattern.sender) e.set(*t.pattern.sender, Value(iostd::ObjectId{sender}));
        if (!iostd::eval_pred(svc->find_state(t.from)->label, e) || !iostd::eval_pred(t.pre, e)) continue;
        if (fired) throw std::runtime_error("nondeterministic choice in " + service);
        fired = &t;
        env = e;
      }
      if (!fired) throw std::runtime_error("no transition for " + service + " at " + state);

      // Successor: unique solution of post over the primed attributes/locals.
      std::set<std::string> plain, primed;
      iostd::collect_vars(fired->post, plain, primed);
      std::vector<std::pair<std::string, std::vector<Value>>> dims;
      auto type_of = [&](const std::string& n) -> const iostd::Type* {
        if (auto a = beh.find_attribute(n)) return &a->type;
        if (auto l = svc->find_local(n)) return &l->type;
        return nullptr;
      };
      for (const auto& n : primed) dims.emplace_back(n, values(*type_of(n), beh));
      VarAssignment base = env;
      for (const auto& a : beh.attributes) base.set(a.name + "'", env.at(a.name));
      for (const auto& l : svc->locals) base.set(l.name + "'", env.at(l.name));
      std::vector<VarAssignment> sols;
      std::function<void(std::size_t, VarAssignment&)> rec = [&](std::size_t i, VarAssignment& cur) {
        if (i == dims.size()) {
          if (iostd::eval_pred(fired->post, cur)) sols.push_back(cur);
          return;
        }
        for (const auto& v : dims[i].second) {
          cur.set(dims[i].first + "'", v);
          rec(i + 1, cur);
        }
      };
      rec(0, base);
      if (sols.size() != 1) throw std::runtime_error("post of " + service + " is not a function");
      const VarAssignment full = sols.front();

      for (const auto& a : beh.attributes) o.at.set(a.name, full.at(a.name + "'"));
      for (const auto& l : svc->locals) locals.set(l.name, full.at(l.name + "'"));
      if (!iostd::eval_pred(svc->find_state(fired->to)->label, with_self(o.at, obj)))
        throw std::runtime_error("target label fails");
      state = fired->to;
      log.emplace_back(obj, o.at);

      if (fired->outputs.empty()) throw std::runtime_error("step without output");
      const auto& out = fired->outputs.back();
      if (fired->outputs.size() != 1) throw std::runtime_error("only single outputs are interpreted");
      VarAssignment out_args;
      for (const auto& [n, e] : out.args) out_args.set(n, iostd::eval_expr(e, full));
      if (out.kind == iostd::MessageKind::Ret) return out_args;
      if (out.kind != iostd::MessageKind::SequCall) throw std::runtime_error("concurrent output");
      const std::string target = iostd::eval_expr(*out.target, full).as_id().name;
      input = call(obj, target, out.service, out_args);
      sender = target;
      starting = false;
    }
  }

  const VarAssignment& attributes(const std::string& obj) const { return objects_.at(obj).at; }

 private:
  VarAssignment with_self(const VarAssignment& at, const std::string& self) const {
    VarAssignment e = at;
    e.set("self", Value(iostd::ObjectId{self}));
    return e;
  }

  std::vector<Value> values(const iostd::Type& t, const BehaviorDescription& beh) const {
    std::vector<Value> r;
    if (std::holds_alternative<iostd::BoolType>(t)) {
      r = {Value(false), Value(true)};
    } else if (auto i = std::get_if<iostd::IntType>(&t)) {
      for (auto v = i->lo; v <= i->hi; ++v) r.emplace_back(v);
    } else if (std::holds_alternative<iostd::IdType>(t)) {
      for (const auto& u : universe_) r.emplace_back(iostd::ObjectId{u});
    } else {
      const auto& name = std::get<iostd::EnumType>(t).name;
      for (const auto& e : beh.enums)
        if (e.name == name)
          for (const auto& c : e.constants) r.emplace_back(iostd::EnumConst{c});
    }
    return r;
  }

  std::map<std::string, InterpObject> objects_;
  std::vector<std::string> universe_;
};

}  // namespace oracle
