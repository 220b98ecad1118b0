#pragma once

// Machine semantics of a behavior description: initial states, the successor
// relation for one input message, and explicit enumeration of the reachable
// machine.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "iostd/core.hpp"
#include "iostd/spec.hpp"

namespace iostd {

using MachineState = ObjectState;

/// What happens when no diagram transition accepts an input.
enum class ChaosPolicy { Reject, Havoc };

std::string_view to_string(ChaosPolicy p);
std::optional<ChaosPolicy> parse_policy(std::string_view s);

/// Tags `owner:0 .. owner:size-1`.
std::set<Tag> make_pool(const ObjectId& owner, std::int64_t size);

/// All attribute assignments satisfying init, with empty stacks and the given
/// pool, in enumeration order. Throws EmptyInitialSet when there is none.
std::vector<MachineState> initial_states(const BehaviorDescription& beh, const ObjectId& id,
                                         const std::set<Tag>& pool,
                                         const Universe& universe = Universe::defaults());

/// Every (successor, output) pair the input can produce, sorted by printed
/// form and free of duplicates. Never empty: unmatched inputs go to the chaos
/// policy. Throws IllegalInput for inputs the harness must not send (a ret on
/// an empty stack, a concurrent call on a busy tag, arguments that do not fit
/// the service signature) and TagPoolExhausted.
std::vector<StepResult> step(const BehaviorDescription& beh, const MachineState& s, const Message& m,
                             ChaosPolicy policy, const Universe& universe = Universe::defaults());

// ---------------------------------------------------------------------------
// Explicit machines

/// The finite input alphabet used to enumerate a machine. Calls arrive on the
/// smallest external tag whose stack is empty; returns arrive on every tag with
/// a nonempty stack, with values over the domains of the ret binders.
struct Alphabet {
  std::vector<ObjectId> senders = {ObjectId{"env"}};
  std::string tag_owner = "env";
  std::int64_t external_tags = 2;
  /// Services whose calls are offered; empty means all.
  std::vector<std::string> services;
  std::vector<MessageKind> kinds = {MessageKind::SequCall, MessageKind::ConcCall};
};

std::vector<Message> inputs_at(const BehaviorDescription& beh, const MachineState& s,
                               const Alphabet& alphabet, const Universe& universe);

struct MachineTransition {
  std::size_t from = 0;
  Message input;
  std::size_t to = 0;
  std::vector<Message> out;
};

struct ExplicitMachine {
  std::vector<MachineState> states;  // discovery order; the first `initial` are S0
  std::size_t initial = 0;
  std::vector<MachineTransition> transitions;
  bool truncated = false;

  /// `# iostd-machine 1` header, `init | digest` lines, then one line per
  /// transition `digest | input | digest' | [outputs]`.
  std::string text() const;
};

class MachineBudgetExceeded : public Error {
 public:
  explicit MachineBudgetExceeded(ExplicitMachine partial)
      : Error(ErrorCode::BudgetExceeded,
              "machine state budget hit after " + std::to_string(partial.states.size()) + " states"),
        partial_(std::move(partial)) {}

  const ExplicitMachine& partial() const { return partial_; }

 private:
  ExplicitMachine partial_;
};

/// Breadth-first enumeration of the machine reachable from S0. `bound` caps
/// the number of states; the initial states are always admitted. Throws
/// MachineBudgetExceeded with the truncated machine.
ExplicitMachine enumerate_machine(const BehaviorDescription& beh, const ObjectId& id,
                                  const std::set<Tag>& pool, std::size_t bound, ChaosPolicy policy,
                                  const Alphabet& alphabet = {},
                                  const Universe& universe = Universe::defaults());

}  // namespace iostd
