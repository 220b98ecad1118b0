#pragma once

// Run manifests: which behaviors, which objects in which initial states, what
// the environment injects, and how to schedule. Everything a run depends on.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "iostd/sim.hpp"

namespace iostd {

struct SpecRef {
  std::string path;    // as written in the manifest
  std::string digest;  // fnv1a:<16 hex digits> of the file content
};

struct ObjectDecl {
  std::string id;
  std::string behavior;
  std::int64_t pool = 4;
  /// Attribute values that must single out one initial state.
  VarAssignment select;
};

struct RunManifest {
  std::string name;
  std::vector<SpecRef> specs;
  std::vector<std::shared_ptr<const BehaviorDescription>> behaviors;
  std::vector<ObjectDecl> objects;
  Script script;
  SchedulerKind scheduler = SchedulerKind::SeededRandom;
  std::uint64_t seed = 0;
  ChaosPolicy policy = ChaosPolicy::Reject;
  std::size_t bound = 100000;
  std::vector<Invariant> invariants;
  Alphabet alphabet;

  const BehaviorDescription* behavior(const std::string& name) const;
  /// Universe of the configured object ids.
  Universe universe() const;
  /// Objects in their selected initial states, channels empty. Throws Usage
  /// when a selector does not match exactly one initial state.
  Configuration configuration() const;
  std::vector<Message> injections() const;
  TraceHeader header() const;
};

std::string fnv1a_hex(std::string_view data);
/// Throws Io when the file cannot be read.
std::string read_file(const std::string& path);

using FileReader = std::function<std::string(const std::string& path)>;

/// Spec paths are resolved by `reader`. Throws Parse listing every error.
RunManifest parse_manifest(std::string_view text, const std::string& file, const FileReader& reader);
/// Reads the manifest and resolves spec paths relative to its directory.
RunManifest load_manifest(const std::string& path);

}  // namespace iostd
