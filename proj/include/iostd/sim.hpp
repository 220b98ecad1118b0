#pragma once

// Multi-object execution over order-preserving per-pair channels: runs driven
// by a scheduler, recorded traces, replay, and breadth-first exploration of
// all interleavings.

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iostd/semantics.hpp"

namespace iostd {

struct ObjectEntry {
  std::shared_ptr<const BehaviorDescription> beh;
  MachineState state;
};

using ChannelKey = std::pair<ObjectId, ObjectId>;  // (sender, receiver)

struct Configuration {
  ObjectId env{"env"};
  std::map<ObjectId, ObjectEntry> objects;
  /// FIFO per (sender, receiver); empty queues are erased.
  std::map<ChannelKey, std::deque<Message>> channels;
  /// Messages delivered to the environment, in arrival order.
  std::vector<Message> env_inbox;

  /// Object ids that id-typed variables range over.
  Universe universe() const;
  bool quiescent() const { return channels.empty(); }
  /// Messages to the environment land in the inbox, all others in a channel.
  void enqueue(Message m);
  /// Canonical print of objects, channels, and the (sorted) inbox.
  std::string digest() const;
};

struct Injection {
  std::int64_t at = 0;  // number of deliveries before the message is injected
  Message msg;
};

struct Script {
  std::vector<Injection> injections;
  std::optional<std::int64_t> max_steps;
};

enum class SchedulerKind { SeededRandom, RoundRobin, Exhaustive };

std::string_view to_string(SchedulerKind k);
std::optional<SchedulerKind> parse_scheduler(std::string_view s);

struct Scheduler {
  SchedulerKind kind = SchedulerKind::SeededRandom;
  std::uint64_t seed = 0;
  std::size_t bound = 0;  // Exhaustive only
};

/// Index in [0, n) as a pure function of seed and choice number.
std::size_t seeded_choice(std::uint64_t seed, std::uint64_t index, std::size_t n);

// ---------------------------------------------------------------------------
// Traces

enum class EventKind { Init, Inject, Deliver, Emit, State, Abort };

struct TraceEvent {
  EventKind kind = EventKind::Init;
  std::int64_t step = 0;
  ObjectId object;               // Init, State
  Message msg;                   // Inject, Deliver, Emit
  std::size_t choice = 0;        // Deliver
  std::size_t of = 0;            // Deliver
  bool chaotic = false;          // Deliver
  std::optional<ObjectState> state;  // Init, State
  ErrorCode code = ErrorCode::IllegalInput;  // Abort; msg is the undeliverable head
  std::string detail;            // Abort

  bool operator==(const TraceEvent&) const = default;
};

/// Stopped: cut at an arbitrary configuration (exploration witnesses).
enum class EndReason { Quiescent, StepBudget, Abort, Stopped };

std::string_view to_string(EndReason r);

using TraceHeader = std::vector<std::pair<std::string, std::string>>;

struct Trace {
  TraceHeader header;
  std::vector<TraceEvent> events;
  EndReason end = EndReason::Quiescent;
  std::vector<std::string> warnings;

  std::string text() const;
  bool operator==(const Trace&) const = default;
};

/// Inverse of Trace::text. Throws Parse with the offending line.
Trace parse_trace(std::string_view text);

class ReplayDivergence : public Error {
 public:
  ReplayDivergence(std::int64_t step, const std::string& what)
      : Error(ErrorCode::DivergenceAt, "step " + std::to_string(step) + ": " + what), step_(step) {}

  std::int64_t step() const { return step_; }

 private:
  std::int64_t step_;
};

// ---------------------------------------------------------------------------
// Stepping

class Simulator {
 public:
  Simulator(Configuration cfg, ChaosPolicy policy, TraceHeader header = {});

  const Configuration& config() const { return cfg_; }
  const Trace& trace() const { return trace_; }
  std::int64_t steps() const { return steps_; }

  /// Nonempty channels in key order.
  std::vector<ChannelKey> ready() const;
  /// Step results for delivering the head of `key`; throws like step(), and
  /// IllegalInput when a result sends to an unknown object.
  std::vector<StepResult> candidates(const ChannelKey& key) const;

  /// Throws IllegalInput for receivers that are not configured objects.
  void inject(const Message& m);
  /// Delivers the head of `key` with the chosen result among `results`.
  void deliver(const ChannelKey& key, const std::vector<StepResult>& results, std::size_t choice);
  void abort(const Message& head, const Error& e);
  /// Writes the end marker and warnings for unanswered sequential calls.
  Trace finish(EndReason reason);

 private:
  Configuration cfg_;
  ChaosPolicy policy_;
  Trace trace_;
  std::int64_t steps_ = 0;
  std::map<std::pair<Tag, ChannelKey>, int> open_calls_;

  void record_send(const Message& m);
};

/// Runs until quiescence, the script's step budget, or an abort. The scheduler
/// must be SeededRandom or RoundRobin.
Trace run(const Configuration& cfg, const Script& script, const Scheduler& sched, ChaosPolicy policy,
          const TraceHeader& header = {});

/// Re-executes the recorded injections and choices. Returns the regenerated
/// trace, equal to the input; throws DivergenceAt naming the first step whose
/// choice is unavailable or whose regenerated events differ.
Trace replay(const Trace& trace, const Configuration& cfg);

// ---------------------------------------------------------------------------
// Exploration

struct Invariant {
  std::string name;
  bool terminal_only = false;
  /// Evaluated once per object over its attributes and self; builtins count
  /// within that object. Otherwise evaluated once per configuration.
  bool each = false;
  Predicate pred;
};

/// Builtins of invariant predicates: sum(attr), stacked(service.State), errors().
bool holds(const Invariant& inv, const Configuration& cfg);

struct ExploreNode {
  Configuration config;
  std::string digest;
  std::optional<std::size_t> parent;
  ChannelKey via;
  std::size_t choice = 0;
  std::size_t depth = 0;
  bool terminal = false;
};

struct InvariantViolation {
  std::string invariant;
  std::size_t node = 0;  // shortest violating configuration
  std::size_t count = 0;
  Trace witness;
};

struct ExplorationReport {
  Configuration start;  // before the injections
  std::vector<Message> injected;
  std::vector<ExploreNode> nodes;  // BFS order; nodes[0] is the start
  std::size_t transitions = 0;
  std::size_t aborts = 0;
  std::vector<std::size_t> terminals;
  std::vector<InvariantViolation> violations;
  bool truncated = false;

  std::size_t configurations() const { return nodes.size(); }
  std::size_t error_configurations() const;
  std::string text() const;
};

class ExploreBudgetExceeded : public Error {
 public:
  explicit ExploreBudgetExceeded(ExplorationReport partial)
      : Error(ErrorCode::BudgetExceeded, "configuration budget hit after " +
                                             std::to_string(partial.nodes.size()) + " configurations"),
        partial_(std::move(partial)) {}

  const ExplorationReport& partial() const { return partial_; }

 private:
  ExplorationReport partial_;
};

/// Breadth-first over every channel pick and every step result, deduplicated
/// by digest. All script injections are enqueued up front (their `at` is
/// ignored). `bound` caps the number of configurations; bound 0 admits none.
ExplorationReport explore(const Configuration& cfg, const Script& script, std::size_t bound,
                          ChaosPolicy policy, const std::vector<Invariant>& invariants = {},
                          const TraceHeader& header = {});

/// Shortest trace from the start to `node`, replayable with replay().
Trace trace_to(const ExplorationReport& report, std::size_t node, ChaosPolicy policy,
               const TraceHeader& header = {});

}  // namespace iostd
