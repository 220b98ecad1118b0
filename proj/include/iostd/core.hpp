#pragma once

// Kernel value types of the I/O*-state machine model: identifiers, values,
// messages, invocation stacks, object states, and the legality rules every
// machine transition has to respect.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "iostd/error.hpp"

namespace iostd {

struct ObjectId {
  std::string name;

  auto operator<=>(const ObjectId&) const = default;
};

/// Thread identifier. Tags are owned by the object whose pool they come from,
/// which keeps the pools of different objects disjoint.
struct Tag {
  std::string owner;
  std::int64_t index = 0;

  auto operator<=>(const Tag&) const = default;
};

struct EnumConst {
  std::string name;

  auto operator<=>(const EnumConst&) const = default;
};

using ValueData = std::variant<std::int64_t, bool, ObjectId, EnumConst>;

class Value {
 public:
  Value() : data_(std::int64_t{0}) {}
  Value(std::int64_t v) : data_(v) {}
  Value(int v) : data_(std::int64_t{v}) {}
  Value(bool v) : data_(v) {}
  Value(ObjectId v) : data_(std::move(v)) {}
  Value(EnumConst v) : data_(std::move(v)) {}

  bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
  bool is_bool() const { return std::holds_alternative<bool>(data_); }
  bool is_id() const { return std::holds_alternative<ObjectId>(data_); }
  bool is_enum() const { return std::holds_alternative<EnumConst>(data_); }

  // These throw TypeMismatch when the value holds another alternative.
  std::int64_t as_int() const;
  bool as_bool() const;
  const ObjectId& as_id() const;
  const EnumConst& as_enum() const;

  const ValueData& data() const { return data_; }

  auto operator<=>(const Value&) const = default;

 private:
  ValueData data_;
};

/// Partial mapping from variable names to values. Looking up an unbound
/// name is an error, never a default.
class VarAssignment {
 public:
  using Map = std::map<std::string, Value>;

  VarAssignment() = default;
  VarAssignment(std::initializer_list<Map::value_type> init) : vars_(init) {}

  const Value& at(const std::string& name) const;
  const Value* find(const std::string& name) const;
  bool contains(const std::string& name) const { return vars_.count(name) != 0; }
  void set(const std::string& name, Value v) { vars_[name] = std::move(v); }
  void erase(const std::string& name) { vars_.erase(name); }
  std::size_t size() const { return vars_.size(); }
  bool empty() const { return vars_.empty(); }

  /// Bindings of `other` override bindings here.
  VarAssignment merged(const VarAssignment& other) const;
  std::set<std::string> names() const;

  Map::const_iterator begin() const { return vars_.begin(); }
  Map::const_iterator end() const { return vars_.end(); }

  auto operator<=>(const VarAssignment&) const = default;

 private:
  Map vars_;
};

enum class MessageKind { SequCall, ConcCall, Ret };

inline constexpr const char* kRetName = "ret";

struct Message {
  ObjectId snd;
  ObjectId rec;
  Tag tt;
  std::string mn;
  VarAssignment ar;
  MessageKind kind = MessageKind::SequCall;

  auto operator<=>(const Message&) const = default;
};

Message make_call(ObjectId snd, ObjectId rec, Tag tt, std::string service, VarAssignment ar,
                  MessageKind kind);
Message make_return(ObjectId snd, ObjectId rec, Tag tt, VarAssignment ar);

/// Program counter value: a diagram state of one service.
struct DiagramStateId {
  std::string service;
  std::string state;

  auto operator<=>(const DiagramStateId&) const = default;
};

/// A suspended (or, for concurrently started threads, finished) service
/// invocation. `invoked_as` records whether a caller awaits a return.
struct ServiceInvocation {
  DiagramStateId pc;
  VarAssignment args;
  VarAssignment locals;
  ObjectId caller;
  MessageKind invoked_as = MessageKind::SequCall;

  VarAssignment env() const { return args.merged(locals); }

  auto operator<=>(const ServiceInvocation&) const = default;
};

class InvocationStack {
 public:
  InvocationStack() = default;

  bool empty() const { return frames_.empty(); }
  std::size_t depth() const { return frames_.size(); }

  InvocationStack push(ServiceInvocation inv) const;
  /// Throws StackUnderflow on the empty stack.
  InvocationStack pop() const;
  const ServiceInvocation& top() const;

  /// Bottom to top.
  const std::vector<ServiceInvocation>& frames() const { return frames_; }

  auto operator<=>(const InvocationStack&) const = default;

 private:
  std::vector<ServiceInvocation> frames_;
};

/// State of one live object: attributes, per-tag stacks, and the tag pool.
/// Tags without an entry in `stacks` map to the empty stack. `error` marks
/// the distinguished trap state reached under the Reject chaos policy.
struct ObjectState {
  ObjectId self;
  VarAssignment at;
  std::map<Tag, InvocationStack> stacks;
  std::set<Tag> pool;
  bool error = false;

  const InvocationStack& stack(const Tag& t) const;
  /// Setting an empty stack removes the entry, keeping the representation canonical.
  void set_stack(const Tag& t, InvocationStack s);

  auto operator<=>(const ObjectState&) const = default;
};

struct StepResult {
  ObjectState successor;
  std::vector<Message> out;
  /// Produced by the Havoc chaos policy rather than by a diagram transition.
  bool chaotic = false;

  auto operator<=>(const StepResult&) const = default;
};

std::pair<Tag, ObjectState> alloc_tag(const ObjectState& state);

/// Legality rules for a single step, one enumerator per rule.
enum class StepRule {
  OnlyInputStack,      // (a)
  StackEffect,         // (b)
  ConcurrentPrefix,    // (c)
  FreshConcurrentTag,  // (d)
  SequentialTag,       // (e)
  NoReturnFromConc,    // (f)
  AttributesAndSelf,   // (g)
  ArgumentsImmutable,  // (h)
};

std::string_view rule_letter(StepRule r);
std::string_view rule_name(StepRule r);

struct Violation {
  StepRule rule;
  std::string detail;
};

struct LegalityReport {
  std::vector<Violation> violations;

  bool legal() const { return violations.empty(); }
  bool has(StepRule r) const;
};

LegalityReport check_step_legal(const ObjectState& source, const Message& input,
                                const StepResult& result);

// Canonical printing. Every printed form is free of " | " so that trace and
// export lines can use it as a field separator.
std::string to_string(const ObjectId& id);
std::string to_string(const Tag& t);
std::string to_string(const Value& v);
std::string to_string(const VarAssignment& a);
std::string_view to_string(MessageKind k);
std::string to_string(const Message& m);
std::string to_string(const DiagramStateId& pc);
std::string to_string(const ServiceInvocation& inv);
std::string to_string(const ObjectState& s);
std::string to_string(const std::vector<Message>& out);

// Inverses of the canonical prints; throw Parse on malformed text.
Value parse_value(std::string_view text);
Message parse_message(std::string_view text);
std::vector<Message> parse_messages(std::string_view text);
ObjectState parse_object_state(std::string_view text);

}  // namespace iostd
