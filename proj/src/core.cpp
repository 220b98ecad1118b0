#include "iostd/core.hpp"

#include <algorithm>
#include <sstream>

namespace iostd {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::StackUnderflow: return "StackUnderflow";
    case ErrorCode::TagPoolExhausted: return "TagPoolExhausted";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::TypeMismatch: return "TypeMismatch";
    case ErrorCode::DomainOverflow: return "DomainOverflow";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::IllegalInput: return "IllegalInput";
    case ErrorCode::EmptyInitialSet: return "EmptyInitialSet";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::DivergenceAt: return "DivergenceAt";
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::Usage: return "UsageError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Value

std::int64_t Value::as_int() const {
  if (auto p = std::get_if<std::int64_t>(&data_)) return *p;
  throw Error(ErrorCode::TypeMismatch, "expected integer, got " + to_string(*this));
}

bool Value::as_bool() const {
  if (auto p = std::get_if<bool>(&data_)) return *p;
  throw Error(ErrorCode::TypeMismatch, "expected boolean, got " + to_string(*this));
}

const ObjectId& Value::as_id() const {
  if (auto p = std::get_if<ObjectId>(&data_)) return *p;
  throw Error(ErrorCode::TypeMismatch, "expected object id, got " + to_string(*this));
}

const EnumConst& Value::as_enum() const {
  if (auto p = std::get_if<EnumConst>(&data_)) return *p;
  throw Error(ErrorCode::TypeMismatch, "expected enumeration constant, got " + to_string(*this));
}

// ---------------------------------------------------------------------------
// VarAssignment

const Value& VarAssignment::at(const std::string& name) const {
  auto it = vars_.find(name);
  if (it == vars_.end()) throw Error(ErrorCode::UnboundVariable, "'" + name + "' is not bound");
  return it->second;
}

const Value* VarAssignment::find(const std::string& name) const {
  auto it = vars_.find(name);
  return it == vars_.end() ? nullptr : &it->second;
}

VarAssignment VarAssignment::merged(const VarAssignment& other) const {
  VarAssignment r = *this;
  for (const auto& [k, v] : other.vars_) r.vars_[k] = v;
  return r;
}

std::set<std::string> VarAssignment::names() const {
  std::set<std::string> r;
  for (const auto& kv : vars_) r.insert(kv.first);
  return r;
}

// ---------------------------------------------------------------------------
// Messages

Message make_call(ObjectId snd, ObjectId rec, Tag tt, std::string service, VarAssignment ar,
                  MessageKind kind) {
  return Message{std::move(snd), std::move(rec), std::move(tt), std::move(service), std::move(ar),
                 kind};
}

Message make_return(ObjectId snd, ObjectId rec, Tag tt, VarAssignment ar) {
  return Message{std::move(snd), std::move(rec), std::move(tt), kRetName, std::move(ar),
                 MessageKind::Ret};
}

// ---------------------------------------------------------------------------
// Stacks and states

InvocationStack InvocationStack::push(ServiceInvocation inv) const {
  InvocationStack r = *this;
  r.frames_.push_back(std::move(inv));
  return r;
}

InvocationStack InvocationStack::pop() const {
  if (frames_.empty()) throw Error(ErrorCode::StackUnderflow, "pop of the empty stack");
  InvocationStack r = *this;
  r.frames_.pop_back();
  return r;
}

const ServiceInvocation& InvocationStack::top() const {
  if (frames_.empty()) throw Error(ErrorCode::StackUnderflow, "top of the empty stack");
  return frames_.back();
}

const InvocationStack& ObjectState::stack(const Tag& t) const {
  static const InvocationStack kEmpty;
  auto it = stacks.find(t);
  return it == stacks.end() ? kEmpty : it->second;
}

void ObjectState::set_stack(const Tag& t, InvocationStack s) {
  if (s.empty())
    stacks.erase(t);
  else
    stacks[t] = std::move(s);
}

std::pair<Tag, ObjectState> alloc_tag(const ObjectState& state) {
  if (state.pool.empty())
    throw Error(ErrorCode::TagPoolExhausted, "tag pool of " + state.self.name + " is empty");
  ObjectState next = state;
  Tag t = *next.pool.begin();
  next.pool.erase(next.pool.begin());
  return {t, std::move(next)};
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const ObjectId& id) { return id.name; }

std::string to_string(const Tag& t) { return t.owner + ":" + std::to_string(t.index); }

std::string to_string(const Value& v) {
  struct Visitor {
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const ObjectId& id) const { return "@" + id.name; }
    std::string operator()(const EnumConst& e) const { return e.name; }
  };
  return std::visit(Visitor{}, v.data());
}

std::string to_string(const VarAssignment& a) {
  std::string r = "{";
  bool first = true;
  for (const auto& [k, v] : a) {
    if (!first) r += ", ";
    first = false;
    r += k + "=" + to_string(v);
  }
  return r + "}";
}

std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::SequCall: return "seq";
    case MessageKind::ConcCall: return "conc";
    case MessageKind::Ret: return "ret";
  }
  return "?";
}

std::string to_string(const Message& m) {
  std::string r = m.snd.name + "->" + m.rec.name + " " + to_string(m.tt) + " " + m.mn + " ";
  r += to_string(m.kind);
  r += " " + to_string(m.ar);
  return r;
}

std::string to_string(const DiagramStateId& pc) { return pc.service + "." + pc.state; }

std::string to_string(const ServiceInvocation& inv) {
  std::string r = "(" + to_string(inv.pc) + " " + to_string(inv.args) + " " +
                  to_string(inv.locals) + " " + inv.caller.name + " ";
  r += to_string(inv.invoked_as);
  return r + ")";
}

std::string to_string(const ObjectState& s) {
  std::string r = s.self.name;
  if (s.error) r += " ERROR";
  r += " at" + to_string(s.at) + " st{";
  bool first = true;
  for (const auto& [tag, stack] : s.stacks) {
    if (!first) r += ", ";
    first = false;
    r += to_string(tag) + "=[";
    for (std::size_t i = 0; i < stack.frames().size(); ++i) {
      if (i) r += " ";
      r += to_string(stack.frames()[i]);
    }
    r += "]";
  }
  r += "} pt{";
  first = true;
  for (const auto& t : s.pool) {
    if (!first) r += ", ";
    first = false;
    r += to_string(t);
  }
  return r + "}";
}

std::string to_string(const std::vector<Message>& out) {
  std::string r = "[";
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) r += "; ";
    r += to_string(out[i]);
  }
  return r + "]";
}

}  // namespace iostd
