#pragma once

// Abstract syntax of I/O*-state transition diagrams and the evaluator for
// their expressions, predicates, and input patterns.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "iostd/core.hpp"

namespace iostd {

// ---------------------------------------------------------------------------
// Types and domains

struct BoolType {
  bool operator==(const BoolType&) const = default;
};
struct IntType {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  bool operator==(const IntType&) const = default;
};
struct IdType {
  bool operator==(const IdType&) const = default;
};
struct EnumType {
  std::string name;
  bool operator==(const EnumType&) const = default;
};

using Type = std::variant<BoolType, IntType, IdType, EnumType>;

/// True when values of both types can be compared (integer bounds ignored).
bool same_kind(const Type& a, const Type& b);
std::string to_string(const Type& t);

struct EnumDecl {
  std::string name;
  std::vector<std::string> constants;
  bool operator==(const EnumDecl&) const = default;
};

struct VarDecl {
  std::string name;
  Type type;
  bool operator==(const VarDecl&) const = default;
};

/// The closed set of object identifiers that id-typed variables range over.
struct Universe {
  std::vector<ObjectId> ids;

  static Universe defaults();
};

// ---------------------------------------------------------------------------
// Expressions

enum class UnOp { Not, Neg };
enum class BinOp { Or, And, Eq, Ne, Lt, Le, Gt, Ge, Add, Sub, Mul };

std::string_view to_string(BinOp op);
int precedence(BinOp op);

class Expr;
struct ExprNode;

struct LiteralNode {
  Value value;
};
struct VarNode {
  std::string name;
  bool primed = false;
};
struct UnaryNode;
struct BinaryNode;
/// Builtin calls are only meaningful inside configuration invariants
/// (`sum(bal)`, `stacked(transfer.Wait)`); they need a CallResolver.
struct CallNode {
  std::string fn;
  std::vector<std::string> args;
};

class Expr {
 public:
  using Node = ExprNode;

  Expr();  // literal `true`
  explicit Expr(Node node);

  const Node& node() const { return *node_; }

  bool operator==(const Expr& other) const;

 private:
  std::shared_ptr<const Node> node_;
};

struct UnaryNode {
  UnOp op;
  Expr operand;
};
struct BinaryNode {
  BinOp op;
  Expr lhs;
  Expr rhs;
};
struct ExprNode : std::variant<LiteralNode, VarNode, UnaryNode, BinaryNode, CallNode> {
  using variant::variant;
};

Expr lit(Value v);
Expr var(std::string name, bool primed = false);
Expr unary(UnOp op, Expr e);
Expr binary(BinOp op, Expr l, Expr r);
Expr call(std::string fn, std::vector<std::string> args);

/// Environment key of the successor copy of a variable.
inline std::string primed_name(const std::string& n) { return n + "'"; }

void collect_vars(const Expr& e, std::set<std::string>& plain, std::set<std::string>& primed);

using Predicate = Expr;

using CallResolver = std::function<Value(const std::string& fn, const std::vector<std::string>& args)>;

/// Integer arithmetic is exact; overflowing 64 bits raises DomainOverflow.
Value eval_expr(const Expr& e, const VarAssignment& env, const CallResolver& calls = {});
bool eval_pred(const Predicate& p, const VarAssignment& env, const CallResolver& calls = {});

// ---------------------------------------------------------------------------
// Diagrams

struct Pattern {
  std::string name;  // service name, or "ret"
  std::vector<std::string> binders;
  std::optional<std::string> sender;

  bool is_return() const { return name == kRetName; }
  bool operator==(const Pattern&) const = default;
};

/// Binds each binder to the argument of the same name and the sender binder
/// to the message sender. NoMatch (nullopt) when the names differ;
/// ArityMismatch when the name agrees but the argument names do not.
std::optional<VarAssignment> match_pattern(const Pattern& p, const Message& m);

struct OutputTemplate {
  std::optional<Expr> target;  // absent for ret: the stored caller receives it
  std::string service;         // "ret" for return templates
  std::vector<std::pair<std::string, Expr>> args;
  MessageKind kind = MessageKind::SequCall;

  bool operator==(const OutputTemplate&) const = default;
};

struct DiagramState {
  std::string id;
  Predicate label;
  std::vector<std::string> exclusions;

  bool excludes(const std::string& service) const;
  bool operator==(const DiagramState&) const = default;
};

struct DiagramTransition {
  std::string from;
  std::string to;
  Pattern pattern;
  Predicate pre;
  Predicate post;
  std::vector<std::string> havoc;
  std::vector<OutputTemplate> outputs;

  bool operator==(const DiagramTransition&) const = default;
};

enum class Callable { Seq, Conc, Both };

std::string_view to_string(Callable c);
bool accepts(Callable c, MessageKind k);

struct ServiceSTD {
  std::string name;
  Callable callable = Callable::Both;
  std::vector<VarDecl> params;
  std::vector<VarDecl> locals;
  std::vector<DiagramState> states;
  std::vector<std::string> initial;
  std::vector<DiagramTransition> transitions;

  const DiagramState* find_state(const std::string& id) const;
  bool is_initial(const std::string& id) const;
  const VarDecl* find_local(const std::string& n) const;
  bool operator==(const ServiceSTD&) const = default;
};

struct BehaviorDescription {
  std::string name;
  std::vector<EnumDecl> enums;
  std::vector<VarDecl> attributes;
  Predicate init;
  std::vector<ServiceSTD> services;

  const ServiceSTD* find_service(const std::string& n) const;
  const VarDecl* find_attribute(const std::string& n) const;
  /// Type of an enumeration constant, if `n` names one.
  std::optional<EnumType> enum_of_constant(const std::string& n) const;
  bool operator==(const BehaviorDescription&) const = default;
};

// ---------------------------------------------------------------------------
// Enumeration over declared domains

std::vector<Value> domain_values(const Type& t, const BehaviorDescription& beh,
                                 const Universe& universe);
bool in_domain(const Value& v, const Type& t, const BehaviorDescription& beh,
               const Universe& universe);

/// One named dimension of a product enumeration.
struct Dimension {
  std::string name;
  std::vector<Value> values;
};

std::vector<Dimension> dimensions(const std::vector<VarDecl>& decls, const BehaviorDescription& beh,
                                  const Universe& universe, const std::string& suffix = "");

/// Calls `fn` for every assignment of the product, in lexicographic order of
/// the dimensions (first dimension slowest). Stops early when `fn` returns false.
void for_each_assignment(const std::vector<Dimension>& dims,
                         const std::function<bool(const VarAssignment&)>& fn);

/// First value of the domain; locals start out with it.
Value default_value(const Type& t, const BehaviorDescription& beh, const Universe& universe);


// ---------------------------------------------------------------------------
// Transition evaluation shared by the validator and the step semantics

/// Variables a transition may assign: attributes and locals that occur primed
/// in its postcondition, plus its havoc list. Dimensions carry primed names.
std::vector<Dimension> successor_dimensions(const BehaviorDescription& beh, const ServiceSTD& svc,
                                            const DiagramTransition& tr, const Universe& universe);

/// Adds the primed copies to `env`: enumerated ones from `primed`, all other
/// attributes and locals framed to their current value.
VarAssignment frame_env(const BehaviorDescription& beh, const ServiceSTD& svc,
                        const VarAssignment& env, const VarAssignment& primed);

/// Attribute assignment of the successor, read from the primed copies.
VarAssignment attributes_after(const BehaviorDescription& beh, const VarAssignment& full_env);
VarAssignment locals_after(const ServiceSTD& svc, const VarAssignment& full_env);

/// Environment a diagram-state label is evaluated in.
VarAssignment label_env(const VarAssignment& attributes, const ObjectId& self);

}  // namespace iostd
