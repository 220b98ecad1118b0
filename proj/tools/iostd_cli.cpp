// iostd: validate behaviors, run and explore manifests, audit traces, export
// explicit machines. Exit status 0 ok, 1 findings, 2 usage or I/O, 3 budget.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "iostd/check.hpp"
#include "iostd/dsl.hpp"
#include "iostd/manifest.hpp"
#include "iostd/validate.hpp"

namespace {

using namespace iostd;

enum Exit { Ok = 0, Findings = 1, Usage = 2, Budget = 3 };

struct Options {
  std::optional<std::uint64_t> seed;
  std::string policy;
  std::string scheduler;
  std::optional<std::size_t> bound;
  std::string format = "lines";
  std::string out;
  std::string object;
  std::string manifest;
  std::vector<std::string> paths;
};

ReportFormat report_format(const Options& o) {
  return o.format == "json-lines" ? ReportFormat::JsonLines : ReportFormat::Lines;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f || !(f << text)) throw Error(ErrorCode::Io, "cannot write " + o.out);
}

std::vector<Finding> parse_findings(const ParseOutcome& p) {
  std::vector<Finding> r;
  for (const auto& e : p.errors) {
    Finding f;
    f.code = "ParseError";
    f.subject = e.span.file + ":" + std::to_string(e.span.line) + ":" + std::to_string(e.span.column);
    f.message = "expected " + e.expected + ", found " + e.found;
    r.push_back(std::move(f));
  }
  return r;
}

RunManifest manifest_with_overrides(const Options& o, const std::string& path) {
  RunManifest m = load_manifest(path);
  if (o.seed) m.seed = *o.seed;
  if (!o.policy.empty()) m.policy = *parse_policy(o.policy);
  if (!o.scheduler.empty()) m.scheduler = *parse_scheduler(o.scheduler);
  if (o.bound) m.bound = *o.bound;
  return m;
}

// Findings of every behavior of the manifest over its universe; nonempty
// error findings mean the manifest does not validate.
std::vector<Finding> validate_manifest(const RunManifest& m) {
  std::vector<Finding> r;
  for (const auto& b : m.behaviors)
    for (auto& f : validate(*b, m.universe()).findings) r.push_back(std::move(f));
  return r;
}

int cmd_validate(const Options& o) {
  int rc = Ok;
  for (const auto& path : o.paths) {
    ParseOutcome p = parse(read_file(path), path);
    std::vector<Finding> fs = p.ok() ? validate(*p.behavior).findings : parse_findings(p);
    std::cout << render(fs, report_format(o));
    if (has_errors(fs)) rc = Findings;
  }
  return rc;
}

int cmd_run(const Options& o) {
  RunManifest m = manifest_with_overrides(o, o.paths.at(0));
  if (m.scheduler == SchedulerKind::Exhaustive)
    throw Error(ErrorCode::Usage, "run needs scheduler random or roundrobin; use explore for exhaustive");
  auto fs = validate_manifest(m);
  if (has_errors(fs)) {
    std::cerr << render(fs, report_format(o));
    return Findings;
  }
  Trace t = run(m.configuration(), m.script, Scheduler{m.scheduler, m.seed, m.bound}, m.policy, m.header());
  emit(o, t.text());
  switch (t.end) {
    case EndReason::Abort: return Findings;
    case EndReason::StepBudget: return Budget;
    default: return Ok;
  }
}

int cmd_explore(const Options& o) {
  RunManifest m = manifest_with_overrides(o, o.paths.at(0));
  auto fs = validate_manifest(m);
  if (has_errors(fs)) {
    std::cerr << render(fs, report_format(o));
    return Findings;
  }
  try {
    ExplorationReport r = explore(m.configuration(), m.script, m.bound, m.policy, m.invariants, m.header());
    emit(o, r.text());
    return r.violations.empty() ? Ok : Findings;
  } catch (const ExploreBudgetExceeded& e) {
    emit(o, e.partial().text());
    std::cerr << e.what() << "\n";
    return Budget;
  }
}

enum class InputKind { Trace, Manifest, Behavior };

InputKind sniff(const std::string& text) {
  if (text.rfind("# iostd-trace", 0) == 0) return InputKind::Trace;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text.compare(i, 2, "--") == 0) {
      i = text.find('\n', i);
      if (i == std::string::npos) break;
    } else {
      break;
    }
  }
  return text.compare(i, 8, "manifest") == 0 ? InputKind::Manifest : InputKind::Behavior;
}

int cmd_check(const Options& o) {
  const std::string& path = o.paths.at(0);
  const std::string text = read_file(path);
  std::vector<Finding> fs;
  switch (sniff(text)) {
    case InputKind::Trace: {
      Trace t = parse_trace(text);
      fs = audit_trace(t);
      if (!o.manifest.empty()) {
        RunManifest m = load_manifest(o.manifest);
        try {
          replay(t, m.configuration());
        } catch (const ReplayDivergence& d) {
          Finding f;
          f.code = "DivergenceAt";
          f.subject = "step " + std::to_string(d.step());
          f.message = d.what();
          fs.push_back(std::move(f));
        }
      }
      break;
    }
    case InputKind::Manifest: {
      RunManifest m = manifest_with_overrides(o, path);
      fs = validate_manifest(m);
      if (has_errors(fs)) break;
      try {
        fs = serializability_check(m.configuration(), m.injections(), m.bound, m.policy, m.header()).findings;
      } catch (const ExploreBudgetExceeded& e) {
        std::cerr << e.what() << "\n";
        return Budget;
      }
      break;
    }
    case InputKind::Behavior: {
      ParseOutcome p = parse(text, path);
      if (!p.ok()) {
        fs = parse_findings(p);
        break;
      }
      fs = validate(*p.behavior).findings;
      if (!has_errors(fs)) fs = enabledness_report(*p.behavior);
      break;
    }
  }
  emit(o, render(fs, report_format(o)));
  return has_errors(fs) ? Findings : Ok;
}

int cmd_export(const Options& o) {
  RunManifest m = manifest_with_overrides(o, o.paths.at(0));
  const ObjectDecl* decl = nullptr;
  for (const auto& d : m.objects)
    if (d.id == o.object || (o.object.empty() && m.objects.size() == 1)) decl = &d;
  if (!decl) throw Error(ErrorCode::Usage, "--object must name one object of the manifest");
  const BehaviorDescription& beh = *m.behavior(decl->behavior);
  ObjectId id{decl->id};
  try {
    emit(o, enumerate_machine(beh, id, make_pool(id, decl->pool), m.bound, m.policy, m.alphabet, m.universe())
                .text());
    return Ok;
  } catch (const MachineBudgetExceeded& e) {
    emit(o, e.partial().text());
    std::cerr << e.what() << "\n";
    return Budget;
  }
}

int exit_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::BudgetExceeded: return Budget;
    case ErrorCode::Usage:
    case ErrorCode::Io: return Usage;
    default: return Findings;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interleaved service behaviors: validation, simulation, exploration, audit"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c, bool run_flags) {
    c->add_option("--format", o.format, "lines or json-lines")->check(CLI::IsMember({"lines", "json-lines"}));
    c->add_option("--out", o.out, "write the result to this file");
    if (!run_flags) return;
    c->add_option("--seed", o.seed, "scheduler seed");
    c->add_option("--policy", o.policy, "chaos policy")->check(CLI::IsMember({"reject", "havoc"}));
    c->add_option("--scheduler", o.scheduler)->check(CLI::IsMember({"random", "roundrobin", "exhaustive"}));
    c->add_option("--bound", o.bound, "state or configuration budget");
  };

  auto* v = app.add_subcommand("validate", "static checks of behavior files");
  v->add_option("paths", o.paths)->required();
  common(v, false);
  auto* r = app.add_subcommand("run", "simulate a manifest and write its trace");
  r->add_option("manifest", o.paths)->required()->expected(1);
  common(r, true);
  auto* e = app.add_subcommand("explore", "exhaustive exploration with invariants");
  e->add_option("manifest", o.paths)->required()->expected(1);
  common(e, true);
  auto* c = app.add_subcommand("check", "audit a trace, serializability of a manifest, enabledness of a behavior");
  c->add_option("file", o.paths)->required()->expected(1);
  c->add_option("--manifest", o.manifest, "also replay a trace against this manifest");
  common(c, true);
  auto* x = app.add_subcommand("export", "explicit machine of one object");
  x->add_option("manifest", o.paths)->required()->expected(1);
  x->add_option("--object", o.object, "object id");
  common(x, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? Ok : Usage;
  }

  try {
    if (*v) return cmd_validate(o);
    if (*r) return cmd_run(o);
    if (*e) return cmd_explore(o);
    if (*c) return cmd_check(o);
    return cmd_export(o);
  } catch (const Error& err) {
    std::cerr << err.what() << "\n";
    return exit_for(err);
  }
}
