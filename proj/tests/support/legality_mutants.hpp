#pragma once

// One corrupted step per legality rule (a)-(h). Each starts from a legal
// step of the bank behavior and breaks exactly the property its rule guards.

#include <functional>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "iostd/semantics.hpp"

namespace testing {

struct StepCase {
  iostd::ObjectState source;
  iostd::Message input;
  iostd::StepResult result;
};

struct LegalityMutant {
  iostd::StepRule rule;
  std::string what;
  StepCase legal;
  StepCase mutant;
};

inline std::vector<LegalityMutant> legality_mutants() {
  using namespace iostd;
  const BehaviorDescription bank = behavior("bank.iostd");
  const Universe u{{ObjectId{"a"}, ObjectId{"b"}}};
  const ObjectId a{"a"}, b{"b"}, env{"env"};
  ObjectState s0;
  for (auto& s : initial_states(bank, a, make_pool(a, 4), u))
    if (s.at.at("open").as_bool() && s.at.at("bal").as_int() == 5) s0 = s;

  auto single = [&](const ObjectState& s, const Message& m) {
    auto r = step(bank, s, m, ChaosPolicy::Reject, u);
    return StepCase{s, m, r.at(0)};
  };
  const Tag t0{"env", 0};
  // Sequential transfer: pushes Wait and calls b.deposit on the same tag.
  StepCase transfer = single(s0, make_call(env, a, t0, "transfer", {{"amt", 2}, {"dst", Value(b)}},
                                           MessageKind::SequCall));
  // Concurrent deposit: no output.
  StepCase conc_deposit = single(s0, make_call(env, a, t0, "deposit", {{"amt", 1}}, MessageKind::ConcCall));
  // Concurrent transfer resumed by the ret of its deposit: the top is replaced.
  StepCase conc_transfer = single(s0, make_call(env, a, t0, "transfer", {{"amt", 2}, {"dst", Value(b)}},
                                                MessageKind::ConcCall));
  StepCase conc_resume = single(conc_transfer.result.successor, make_return(b, a, t0, {}));

  std::vector<LegalityMutant> r;
  auto add = [&](StepRule rule, std::string what, const StepCase& legal,
                 const std::function<void(StepCase&)>& corrupt) {
    StepCase m = legal;
    corrupt(m);
    r.push_back({rule, std::move(what), legal, std::move(m)});
  };

  add(StepRule::OnlyInputStack, "step also pushes onto another tag's stack", transfer, [&](StepCase& c) {
    auto& succ = c.result.successor;
    succ.set_stack(Tag{"env", 7}, succ.stack(t0));
  });
  add(StepRule::StackEffect, "suspending step forgets to push", transfer,
      [&](StepCase& c) { c.result.successor.set_stack(t0, InvocationStack{}); });
  add(StepRule::ConcurrentPrefix, "sequential call followed by another output", transfer,
      [&](StepCase& c) { c.result.out.insert(c.result.out.begin(), c.result.out.back()); });
  add(StepRule::FreshConcurrentTag, "concurrent call on a tag outside the pool", conc_deposit, [&](StepCase& c) {
    c.result.out.push_back(make_call(a, b, Tag{"b", 0}, "deposit", {{"amt", 1}}, MessageKind::ConcCall));
  });
  add(StepRule::SequentialTag, "sequential call on a foreign tag", transfer,
      [&](StepCase& c) { c.result.out.back().tt = Tag{"env", 9}; });
  add(StepRule::NoReturnFromConc, "concurrently started service returns", conc_deposit,
      [&](StepCase& c) { c.result.out.push_back(make_return(a, env, t0, {})); });
  add(StepRule::AttributesAndSelf, "successor changes self", transfer,
      [&](StepCase& c) { c.result.successor.self = b; });
  add(StepRule::ArgumentsImmutable, "resumed invocation rewrites its arguments", conc_resume, [&](StepCase& c) {
    auto& succ = c.result.successor;
    ServiceInvocation top = succ.stack(t0).top();
    top.args.set("amt", 3);
    succ.set_stack(t0, succ.stack(t0).pop().push(top));
  });
  return r;
}

}  // namespace testing
