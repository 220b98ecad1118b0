#include <algorithm>

#include "iostd/core.hpp"

namespace iostd {

std::string_view rule_letter(StepRule r) {
  switch (r) {
    case StepRule::OnlyInputStack: return "a";
    case StepRule::StackEffect: return "b";
    case StepRule::ConcurrentPrefix: return "c";
    case StepRule::FreshConcurrentTag: return "d";
    case StepRule::SequentialTag: return "e";
    case StepRule::NoReturnFromConc: return "f";
    case StepRule::AttributesAndSelf: return "g";
    case StepRule::ArgumentsImmutable: return "h";
  }
  return "?";
}

std::string_view rule_name(StepRule r) {
  switch (r) {
    case StepRule::OnlyInputStack: return "OnlyInputStack";
    case StepRule::StackEffect: return "StackEffect";
    case StepRule::ConcurrentPrefix: return "ConcurrentPrefix";
    case StepRule::FreshConcurrentTag: return "FreshConcurrentTag";
    case StepRule::SequentialTag: return "SequentialTag";
    case StepRule::NoReturnFromConc: return "NoReturnFromConc";
    case StepRule::AttributesAndSelf: return "AttributesAndSelf";
    case StepRule::ArgumentsImmutable: return "ArgumentsImmutable";
  }
  return "?";
}

bool LegalityReport::has(StepRule r) const {
  return std::any_of(violations.begin(), violations.end(),
                     [r](const Violation& v) { return v.rule == r; });
}

namespace {

enum class LastKind { Ret, Sequ, ConcOnly };

LastKind last_kind(const std::vector<Message>& out) {
  if (out.empty()) return LastKind::ConcOnly;
  switch (out.back().kind) {
    case MessageKind::Ret: return LastKind::Ret;
    case MessageKind::SequCall: return LastKind::Sequ;
    case MessageKind::ConcCall: return LastKind::ConcOnly;
  }
  return LastKind::ConcOnly;
}

class Checker {
 public:
  Checker(const ObjectState& source, const Message& input, const StepResult& result)
      : src_(source), in_(input), res_(result), succ_(result.successor) {}

  LegalityReport run() {
    check_attributes_and_self();
    check_other_stacks();
    if (src_.error && !succ_.error) add(StepRule::StackEffect, "the error state is absorbing");
    if (succ_.error || res_.chaotic)
      check_trap_step();
    else
      check_regular_step();
    return std::move(report_);
  }

 private:
  void add(StepRule r, std::string detail) { report_.violations.push_back({r, std::move(detail)}); }

  void check_attributes_and_self() {
    if (src_.self != succ_.self) add(StepRule::AttributesAndSelf, "self changed");
    if (src_.at.names() != succ_.at.names())
      add(StepRule::AttributesAndSelf, "attribute name set changed");
    for (const auto& m : res_.out)
      if (m.snd != src_.self) add(StepRule::AttributesAndSelf, "output sent on behalf of " + m.snd.name);
  }

  void check_other_stacks() {
    std::set<Tag> tags;
    for (const auto& kv : src_.stacks) tags.insert(kv.first);
    for (const auto& kv : succ_.stacks) tags.insert(kv.first);
    for (const auto& t : tags) {
      if (t == in_.tt) continue;
      if (src_.stack(t) != succ_.stack(t))
        add(StepRule::OnlyInputStack, "stack of " + to_string(t) + " changed");
    }
  }

  // Steps into the error trap and havoc steps: no output, no stack or pool effect.
  void check_trap_step() {
    if (!res_.out.empty()) add(StepRule::StackEffect, "chaos step emitted output");
    if (src_.stack(in_.tt) != succ_.stack(in_.tt))
      add(StepRule::StackEffect, "chaos step changed the input stack");
    if (src_.pool != succ_.pool) add(StepRule::FreshConcurrentTag, "chaos step changed the tag pool");
    if (succ_.error && src_.at != succ_.at)
      add(StepRule::AttributesAndSelf, "error trap changed attributes");
  }

  void check_regular_step() {
    const auto& out = res_.out;
    for (std::size_t i = 0; i + 1 < out.size(); ++i)
      if (out[i].kind != MessageKind::ConcCall)
        add(StepRule::ConcurrentPrefix, "output " + std::to_string(i) + " is " +
                                            std::string(to_string(out[i].kind)) + " but not last");
    check_tags();

    const InvocationStack& before = src_.stack(in_.tt);
    const InvocationStack& after = succ_.stack(in_.tt);
    const LastKind last = last_kind(out);

    bool invoked_concurrently = in_.kind == MessageKind::ConcCall;
    if (in_.kind == MessageKind::Ret && !before.empty())
      invoked_concurrently = before.top().invoked_as == MessageKind::ConcCall;
    if (invoked_concurrently && last == LastKind::Ret)
      add(StepRule::NoReturnFromConc, "concurrently invoked service emitted ret");

    switch (in_.kind) {
      case MessageKind::SequCall:
      case MessageKind::ConcCall: check_call_row(before, after, last); break;
      case MessageKind::Ret: check_return_row(before, after, last); break;
    }
  }

  void check_tags() {
    std::set<Tag> fresh;
    for (const auto& m : res_.out) {
      if (m.kind == MessageKind::ConcCall) {
        if (!fresh.insert(m.tt).second)
          add(StepRule::FreshConcurrentTag, "tag " + to_string(m.tt) + " used twice");
        if (!src_.pool.count(m.tt))
          add(StepRule::FreshConcurrentTag, "tag " + to_string(m.tt) + " not taken from the pool");
      } else if (m.tt != in_.tt) {
        add(StepRule::SequentialTag, std::string(to_string(m.kind)) + " output carries tag " +
                                         to_string(m.tt) + " instead of " + to_string(in_.tt));
      }
    }
    std::set<Tag> expected;
    std::set_difference(src_.pool.begin(), src_.pool.end(), fresh.begin(), fresh.end(),
                        std::inserter(expected, expected.end()));
    if (succ_.pool != expected)
      add(StepRule::FreshConcurrentTag, "pool is not the old pool minus the fresh tags");
  }

  void check_ret_receiver(const ObjectId& expected) {
    if (!res_.out.empty() && res_.out.back().kind == MessageKind::Ret &&
        res_.out.back().rec != expected)
      add(StepRule::SequentialTag, "ret addressed to " + res_.out.back().rec.name + " instead of " +
                                       expected.name);
  }

  void check_pushed(const InvocationStack& before, const InvocationStack& after) {
    if (after.depth() != before.depth() + 1 || after.pop() != before) {
      add(StepRule::StackEffect, "suspension must push exactly one invocation");
      return;
    }
    if (after.top().caller != in_.snd) add(StepRule::StackEffect, "pushed invocation has wrong caller");
    if (after.top().invoked_as != in_.kind)
      add(StepRule::StackEffect, "pushed invocation records wrong call kind");
  }

  void check_call_row(const InvocationStack& before, const InvocationStack& after, LastKind last) {
    switch (last) {
      case LastKind::Ret:
        if (in_.kind == MessageKind::ConcCall) return;  // reported as (f)
        if (after != before) add(StepRule::StackEffect, "completed call must leave the stack unchanged");
        check_ret_receiver(in_.snd);
        break;
      case LastKind::Sequ: check_pushed(before, after); break;
      case LastKind::ConcOnly:
        if (in_.kind == MessageKind::SequCall)
          add(StepRule::StackEffect, "sequential call neither returned nor suspended");
        else if (after != before)
          add(StepRule::StackEffect, "concurrent call with concurrent-only output changed the stack");
        break;
    }
  }

  void check_return_row(const InvocationStack& before, const InvocationStack& after, LastKind last) {
    if (before.empty()) {
      add(StepRule::StackEffect, "ret input on the empty stack");
      return;
    }
    const ServiceInvocation& top = before.top();
    if (last == LastKind::Ret) {
      if (top.invoked_as == MessageKind::ConcCall) return;  // reported as (f)
      if (after != before.pop()) add(StepRule::StackEffect, "final ret must pop the resumed invocation");
      check_ret_receiver(top.caller);
      return;
    }
    // ret -> sequ replaces the top; ret -> conc-only keeps the depth and may move the pc.
    if (after.depth() != before.depth() || after.pop() != before.pop()) {
      add(StepRule::StackEffect, "resumed invocation must be replaced in place");
      return;
    }
    const ServiceInvocation& now = after.top();
    if (now.pc.service != top.pc.service || now.caller != top.caller ||
        now.invoked_as != top.invoked_as)
      add(StepRule::StackEffect, "resumed invocation changed service, caller, or call kind");
    if (now.args != top.args) add(StepRule::ArgumentsImmutable, "arguments of the top invocation changed");
  }

  const ObjectState& src_;
  const Message& in_;
  const StepResult& res_;
  const ObjectState& succ_;
  LegalityReport report_;
};

}  // namespace

LegalityReport check_step_legal(const ObjectState& source, const Message& input,
                                const StepResult& result) {
  return Checker(source, input, result).run();
}

}  // namespace iostd
