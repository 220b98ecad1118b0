#pragma once

#include <filesystem>
#include <string>

#include "iostd/dsl.hpp"
#include "iostd/manifest.hpp"

namespace testing {

inline std::string corpus(const std::string& rel) { return std::string(IOSTD_CORPUS_DIR) + "/" + rel; }

inline iostd::BehaviorDescription behavior(const std::string& rel) {
  return iostd::parse_or_throw(iostd::read_file(corpus(rel)), rel);
}

inline iostd::RunManifest manifest(const std::string& rel) { return iostd::load_manifest(corpus(rel)); }

/// Manifest text resolved against the corpus directory.
inline iostd::RunManifest manifest_text(const std::string& text) {
  return iostd::parse_manifest(text, "<test>", [](const std::string& p) { return iostd::read_file(corpus(p)); });
}

}  // namespace testing
