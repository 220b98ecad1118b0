#pragma once

// Analyses over behavior descriptions and traces: enabledness gaps, trace
// audits against the machine legality rules, and terminal-state
// serializability of interleaved service calls.

#include <vector>

#include "iostd/finding.hpp"
#include "iostd/sim.hpp"

namespace iostd {

/// Regions of attribute x argument space where an input reaching a diagram
/// state enables no transition, so the chaos policy decides. Per initial state
/// (call inputs), per wait state (ret inputs), and per service for calls that
/// meet no initial label at all. States with unsatisfiable labels are skipped.
std::vector<Finding> enabledness_report(const BehaviorDescription& beh,
                                        const Universe& universe = Universe::defaults());

/// Re-checks every delivery of the trace against check_step_legal using the
/// recorded states and emits, plus pool monotonicity and ret accounting:
/// every sequential call gets exactly one ret on its tag, or the footer
/// declares it leaked or pending.
std::vector<Finding> audit_trace(const Trace& trace);

/// Attributes and error flag of every object; what serial and interleaved
/// executions are compared on.
std::string attribute_projection(const Configuration& cfg);

struct SerializabilityResult {
  std::vector<Finding> findings;
  std::size_t interleaved_terminals = 0;
  std::set<std::string> serial_outcomes;
  std::set<std::string> interleaved_outcomes;
};

/// Explores all interleavings of `injections` from `cfg` and compares each
/// terminal configuration with the union, over all permutations, of the
/// terminals of one-at-a-time execution. Throws ExploreBudgetExceeded when
/// any exploration exceeds `bound` configurations.
SerializabilityResult serializability_check(const Configuration& cfg, const std::vector<Message>& injections,
                                            std::size_t bound, ChaosPolicy policy = ChaosPolicy::Reject,
                                            const TraceHeader& header = {});

}  // namespace iostd
